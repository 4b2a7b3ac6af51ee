"""Analysis scripts.

::

    input: catalog:T2
    downset: 0 1
    target: catalog:SL2
    hom: 0->1
    hom: 1->1
    check: supported
    check: bounded-above

``input`` and ``target`` take ``catalog:NAME`` or a file path (relative
paths resolve against the script's directory). ``hom`` lines give a map
from the input semigroup to the target, one element per line.
"""

import re
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.core.exceptions import ParseError

CHECKS = ("supported", "self-supported", "bounded-above", "normal")

_KEY = re.compile(r"^([a-z]+)\s*:\s*(.*)$")
_HOM = re.compile(r"^(\d+)\s*->\s*(\d+)$")


class AnalysisScript(BaseModel):
    """Parsed analysis script."""

    input: str = Field(..., description="catalog:NAME or a path")
    downset: Optional[List[int]] = Field(None, description="R-classes of Ĉ connecting a category input")
    target: Optional[str] = Field(None, description="Target semigroup for a homomorphism")
    hom: Dict[int, int] = Field(default_factory=dict, description="Homomorphism into the target")
    checks: List[str] = Field(default_factory=list, description="Extra checks to run")
    base_dir: Optional[str] = Field(None, description="Directory relative paths resolve against")

    def resolve(self, reference: str) -> str:
        if reference.startswith("catalog:") or self.base_dir is None or Path(reference).is_absolute():
            return reference
        return str(Path(self.base_dir) / reference)


def looks_like_script(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.startswith("input:")
    return False


def parse_script(text: str, base_dir: Optional[str] = None) -> AnalysisScript:
    """Parse an analysis script.

    Raises:
        ParseError: unknown key, repeated input, malformed hom or downset, unknown check
    """
    values: Dict[str, object] = {"hom": {}, "checks": [], "base_dir": base_dir}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _KEY.match(line)
        if match is None:
            raise ParseError(number, f"expected 'key: value', got {line!r}")
        key, value = match.group(1), match.group(2).strip()
        if key in ("input", "target"):
            if key in values:
                raise ParseError(number, f"'{key}' given twice")
            values[key] = value
        elif key == "downset":
            try:
                values["downset"] = [int(token) for token in value.replace(",", " ").split()]
            except ValueError:
                raise ParseError(number, "downset entries must be integers")
        elif key == "hom":
            pair = _HOM.match(value)
            if pair is None:
                raise ParseError(number, "expected 'hom: i->j'")
            values["hom"][int(pair.group(1))] = int(pair.group(2))
        elif key == "check":
            if value not in CHECKS:
                raise ParseError(number, f"unknown check {value!r}; expected one of {', '.join(CHECKS)}")
            values["checks"].append(value)
        else:
            raise ParseError(number, f"unknown key {key!r}")
    if "input" not in values:
        raise ParseError(1, "script has no 'input' line")
    if values["hom"] and "target" not in values:
        raise ParseError(1, "'hom' lines need a 'target'")
    return AnalysisScript(**values)
