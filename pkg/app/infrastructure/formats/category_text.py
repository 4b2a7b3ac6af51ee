"""Category text format.

Objects are ``0..N-1``; a morphism is named ``(p,q,i)``, the i-th member of
the hom-set from p to q::

    objects 2
    labels A B
    order
    1 1
    0 1
    hom 0 0: 1
    hom 0 1: 1
    hom 1 0: 1
    hom 1 1: 2
    id 1 (1,1,0)
    incl 0 1 (0,1,0)
    c (0,1,0)(1,0,0)=(0,0,0)
    c (1,0,0)(0,1,0)=(1,1,1)
    c (1,1,1)(1,1,1)=(1,1,1)
    c (0,1,0)(1,1,1)=(0,1,0)
    c (1,1,1)(1,0,0)=(1,0,0)

``order`` lists the subobject relation row by row; every off-diagonal ``1`` in
it needs an ``incl`` line. Composites with an identity are
filled in; every other composable pair needs a ``c`` line.
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from app.application.services.category_service import CategoryService
from app.core.exceptions import IndexOutOfRange, ParseError
from app.domain.entities.category import FiniteCategory

logger = logging.getLogger(__name__)

Local = Tuple[int, int, int]

_MORPHISM = r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)"
_HOM = re.compile(r"^hom\s+(\d+)\s+(\d+)\s*:\s*(\d+)$")
_ID = re.compile(r"^id\s+(\d+)\s+" + _MORPHISM + r"$")
_INCL = re.compile(r"^incl\s+(\d+)\s+(\d+)\s+" + _MORPHISM + r"$")
_COMPOSE = re.compile(r"^c\s+" + _MORPHISM + r"\s*" + _MORPHISM + r"\s*=\s*" + _MORPHISM + r"$")


def _triple(groups, start: int) -> Local:
    return int(groups[start]), int(groups[start + 1]), int(groups[start + 2])


def parse_category(text: str, name: str = "") -> FiniteCategory:
    """Parse category text into a FiniteCategory and check the category laws.

    Raises:
        ParseError: malformed line, missing designation or composite, or a failed category law
        IndexOutOfRange: an object or hom-local index out of range
    """
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    if not lines or not lines[0][1].startswith("objects"):
        raise ParseError(lines[0][0] if lines else 1, "expected 'objects N'")
    try:
        n = int(lines[0][1].split()[1])
    except (IndexError, ValueError):
        raise ParseError(lines[0][0], "expected 'objects N'")
    if n <= 0:
        raise ParseError(lines[0][0], "object count must be positive")

    labels: Optional[List[str]] = None
    order: List[List[int]] = []
    sizes: Dict[Tuple[int, int], int] = {}
    identities: Dict[int, Local] = {}
    inclusions: Dict[Tuple[int, int], Local] = {}
    table: Dict[Tuple[Local, Local], Local] = {}
    reading_order = False
    last_line = lines[-1][0]

    def check_object(value: int, number: int) -> int:
        if value < 0 or value >= n:
            raise IndexOutOfRange(value, n, where=f"line {number}")
        return value

    def check_morphism(m: Local, number: int) -> Local:
        p, q, i = m
        check_object(p, number)
        check_object(q, number)
        size = sizes.get((p, q), 0)
        if i >= size:
            raise IndexOutOfRange(i, size, where=f"line {number}, hom({p},{q})")
        return m

    for number, line in lines[1:]:
        if reading_order and len(order) < n:
            tokens = line.split()
            if len(tokens) != n or any(t not in ("0", "1") for t in tokens):
                raise ParseError(number, f"order rows need {n} entries of 0/1")
            order.append([int(t) for t in tokens])
            continue
        reading_order = False
        if line.startswith("labels"):
            labels = line.split()[1:]
            if len(labels) != n:
                raise ParseError(number, f"expected {n} labels")
        elif line == "order":
            reading_order = True
        elif (match := _HOM.match(line)) is not None:
            p, q = check_object(int(match.group(1)), number), check_object(int(match.group(2)), number)
            sizes[(p, q)] = int(match.group(3))
        elif (match := _ID.match(line)) is not None:
            p = check_object(int(match.group(1)), number)
            m = check_morphism(_triple(match.groups(), 1), number)
            if m[0] != p or m[1] != p:
                raise ParseError(number, "identity must be an endomorphism of its object")
            identities[p] = m
        elif (match := _INCL.match(line)) is not None:
            p, q = check_object(int(match.group(1)), number), check_object(int(match.group(2)), number)
            m = check_morphism(_triple(match.groups(), 2), number)
            if m[0] != p or m[1] != q:
                raise ParseError(number, f"inclusion must be a morphism {p} -> {q}")
            inclusions[(p, q)] = m
        elif (match := _COMPOSE.match(line)) is not None:
            f = check_morphism(_triple(match.groups(), 0), number)
            g = check_morphism(_triple(match.groups(), 3), number)
            h = check_morphism(_triple(match.groups(), 6), number)
            if f[1] != g[0] or h[0] != f[0] or h[1] != g[1]:
                raise ParseError(number, "composite has the wrong type")
            table[(f, g)] = h
        else:
            raise ParseError(number, f"unrecognised line {line!r}")

    if len(order) != n:
        raise ParseError(last_line, "missing or incomplete 'order' block")
    for p in range(n):
        if p not in identities:
            if sizes.get((p, p), 0) == 1:
                identities[p] = (p, p, 0)
            else:
                raise ParseError(last_line, f"object {p} has no identity")
        if not order[p][p]:
            raise ParseError(last_line, f"order must be reflexive at {p}")
        for q in range(n):
            if p != q and order[p][q] and (p, q) not in inclusions:
                raise ParseError(last_line, f"missing inclusion {p} -> {q}")
            if (p, q) in inclusions and not order[p][q]:
                raise ParseError(last_line, f"inclusion {p} -> {q} outside the order")
        inclusions[(p, p)] = identities[p]

    identity_set = set(identities.values())

    def compose(f: Local, g: Local) -> Local:
        if f in identity_set:
            return g
        if g in identity_set:
            return f
        if (f, g) not in table:
            raise ParseError(last_line, f"missing composite {f}{g}")
        return table[(f, g)]

    C = CategoryService.build_concrete(
        objects=list(range(n)),
        hom=lambda p, q: [(p, q, i) for i in range(sizes.get((p, q), 0))],
        compose=compose,
        identity=lambda p: identities[p],
        inclusion=lambda p, q: inclusions.get((p, q)),
        object_label=lambda p: labels[p] if labels else str(p),
        morphism_label=lambda m: f"({m[0]},{m[1]},{m[2]})",
        name=name,
    )
    problems = CategoryService.category_law_failures(C)
    if problems:
        raise ParseError(last_line, problems[0])
    logger.debug(f"Parsed {C!r}", extra={"object_count": C.num_objects, "stage": "parse"})
    return C


def dump_category(C: FiniteCategory) -> str:
    """Category text for C, hom-local indices in ascending global order."""
    local: Dict[int, Local] = {}
    lines = [f"# {C.name}"] if C.name else []
    lines.append(f"objects {C.num_objects}")
    if any(" " in label for label in C.object_labels):
        lines.append("labels " + " ".join(label.replace(" ", "_") for label in C.object_labels))
    else:
        lines.append("labels " + " ".join(C.object_labels))
    lines.append("order")
    for a in range(C.num_objects):
        lines.append(" ".join("1" if C.leq[a, b] else "0" for b in range(C.num_objects)))
    for a in range(C.num_objects):
        for b in range(C.num_objects):
            members = C.hom(a, b)
            if members.size:
                lines.append(f"hom {a} {b}: {members.size}")
            for i, f in enumerate(members):
                local[int(f)] = (a, b, i)

    def name_of(f: int) -> str:
        p, q, i = local[f]
        return f"({p},{q},{i})"

    for a in range(C.num_objects):
        lines.append(f"id {a} {name_of(C.identity(a))}")
    for a in range(C.num_objects):
        for b in range(C.num_objects):
            if a != b and C.leq[a, b]:
                lines.append(f"incl {a} {b} {name_of(int(C.inclusion[a, b]))}")
    identity_set = {C.identity(a) for a in range(C.num_objects)}
    for f in range(C.num_morphisms):
        if f in identity_set:
            continue
        for g in C.out_of(int(C.cod[f])):
            g = int(g)
            if g not in identity_set:
                lines.append(f"c {name_of(f)}{name_of(g)}={name_of(int(C.compose[f, g]))}")
    return "\n".join(lines) + "\n"
