"""Semigroup text formats: Cayley tables, generator lists and JSON.

Cayley text::

    # comment
    3
    0 0 0
    0 1 2
    0 2 1

Generator text, images 1-based, ``-`` for undefined points::

    t 3: 2 1 3
    p 3: 2 - 1

``t`` lines generate a transformation semigroup, ``p`` lines a semigroup of
partial injections; the two kinds do not mix.
"""

import json
import logging
import re
from typing import List, Optional, Tuple

from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import IndexOutOfRange, ParseError
from app.domain.entities.semigroup import FiniteSemigroup

logger = logging.getLogger(__name__)

_GENERATOR_LINE = re.compile(r"^([tp])\s+(\d+)\s*:\s*(.*)$")
_MAP_LABEL = re.compile(r"^\[([0-9\- ]*)\]$")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """Non-blank lines with comments stripped, numbered from 1."""
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            result.append((number, line))
    return result


def parse_cayley(text: str, name: str = "") -> FiniteSemigroup:
    """Parse Cayley text into a verified semigroup.

    Raises:
        ParseError: malformed size line or row
        IndexOutOfRange: an entry outside [0, n)
        NonAssociative: the table is not associative
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty input")
    first_line, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(first_line, f"expected the element count, got {first!r}")
    if n <= 0:
        raise ParseError(first_line, "element count must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(rows[-1][0] if rows else first_line, f"expected {n} rows, found {len(rows)}")
    table = []
    for number, line in rows:
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(number, f"expected {n} entries, found {len(tokens)}")
        try:
            row = [int(token) for token in tokens]
        except ValueError:
            raise ParseError(number, "entries must be integers")
        for value in row:
            if value < 0 or value >= n:
                raise IndexOutOfRange(value, n, where=f"line {number}")
        table.append(row)
    return SemigroupService.from_cayley_table(table, name=name)


def _parse_images(tokens: List[str], degree: int, partial: bool, number: int) -> Tuple[int, ...]:
    if len(tokens) != degree:
        raise ParseError(number, f"expected {degree} images, found {len(tokens)}")
    images = []
    for token in tokens:
        if token == "-":
            if not partial:
                raise ParseError(number, "'-' is only allowed in partial maps")
            images.append(-1)
            continue
        try:
            value = int(token)
        except ValueError:
            raise ParseError(number, f"bad image {token!r}")
        if value < 1 or value > degree:
            raise IndexOutOfRange(value, degree + 1, where=f"line {number}")
        images.append(value - 1)
    if partial:
        defined = [v for v in images if v >= 0]
        if len(defined) != len(set(defined)):
            raise ParseError(number, "partial map is not injective")
    return tuple(images)


def map_label(images: Tuple[int, ...]) -> str:
    return "[" + " ".join("-" if y < 0 else str(y + 1) for y in images) + "]"


def parse_generators(text: str, name: str = "", cap: Optional[int] = None) -> FiniteSemigroup:
    """Parse generator text and close the generators under composition.

    Maps compose left to right; elements are labelled like ``[2 1 3]``.

    Raises:
        ParseError: malformed line, mixed kinds or degrees
        CapExceeded: the closure is larger than the size cap
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty input")
    generators: List[Tuple[int, ...]] = []
    kind: Optional[str] = None
    degree: Optional[int] = None
    for number, line in lines:
        match = _GENERATOR_LINE.match(line)
        if match is None:
            raise ParseError(number, f"expected 't n: ...' or 'p n: ...', got {line!r}")
        line_kind, line_degree = match.group(1), int(match.group(2))
        if kind is None:
            kind, degree = line_kind, line_degree
        elif line_kind != kind or line_degree != degree:
            raise ParseError(number, "all generators must share kind and degree")
        if degree < 1:
            raise ParseError(number, "degree must be positive")
        generators.append(_parse_images(match.group(3).split(), degree, kind == "p", number))

    def multiply(x, y):
        return tuple(-1 if v < 0 else y[v] for v in x)

    elements = SemigroupService.closure(generators, multiply, cap=cap)
    logger.debug(f"Closed {len(generators)} generators to {len(elements)} elements", extra={"stage": "parse"})
    return SemigroupService.from_elements(
        elements, multiply, labels=[map_label(x) for x in elements], name=name, cap=cap
    )


def label_maps(S: FiniteSemigroup) -> Optional[List[Tuple[int, ...]]]:
    """Maps encoded in element labels like ``[2 - 1]``, or None when labels are not maps."""
    maps = []
    for label in S.labels:
        match = _MAP_LABEL.match(label)
        if match is None:
            return None
        tokens = match.group(1).split()
        try:
            maps.append(tuple(-1 if t == "-" else int(t) - 1 for t in tokens))
        except ValueError:
            return None
    degrees = {len(m) for m in maps}
    if len(degrees) != 1:
        return None
    return maps


def dump_cayley(S: FiniteSemigroup) -> str:
    lines = []
    if S.name:
        lines.append(f"# {S.name}")
    lines.append("# labels: " + " ".join(S.labels))
    lines.append(str(S.size))
    width = len(str(S.size - 1))
    for row in S.table:
        lines.append(" ".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def dump_generators(S: FiniteSemigroup) -> str:
    """Generator text for a semigroup whose labels are maps.

    Raises:
        ParseError: the element labels are not transformations or partial maps
    """
    maps = label_maps(S)
    if maps is None:
        raise ParseError(1, "element labels are not maps; only Cayley output is available")
    partial = any(v < 0 for m in maps for v in m)
    kind = "p" if partial else "t"
    lines = [f"# {S.name}"] if S.name else []
    for g in IsomorphismService.generating_set(S):
        images = " ".join("-" if v < 0 else str(v + 1) for v in maps[g])
        lines.append(f"{kind} {len(maps[g])}: {images}")
    return "\n".join(lines) + "\n"


def semigroup_to_json(S: FiniteSemigroup) -> str:
    payload = {"size": S.size, "table": S.table.tolist(), "labels": list(S.labels)}
    return json.dumps(payload, indent=2)


def parse_semigroup(text: str, name: str = "", cap: Optional[int] = None) -> FiniteSemigroup:
    """Parse either format, chosen by the first content line."""
    lines = _content_lines(text)
    if lines and _GENERATOR_LINE.match(lines[0][1]):
        return parse_generators(text, name=name, cap=cap)
    return parse_cayley(text, name=name)
