"""Graphviz DOT text for posets and egg-box diagrams."""

from typing import List, Optional

from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import FiniteSemigroup
from app.infrastructure.formats.eggbox import d_class_poset, eggbox_layout


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _record_field(text: str) -> str:
    for ch in "{}|<>":
        text = text.replace(ch, "\\" + ch)
    return text.replace('"', '\\"')


def poset_to_dot(P: FinitePoset, name: str = "P", node_prefix: str = "n") -> str:
    """Hasse diagram, smaller elements at the bottom."""
    lines = [f"digraph {_quote(name)} {{", "    rankdir=BT;", "    node [shape=box];"]
    for a in range(P.size):
        lines.append(f"    {node_prefix}{a} [label={_quote(P.labels[a])}];")
    for a, b in P.hasse_edges():
        lines.append(f"    {node_prefix}{a} -> {node_prefix}{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def eggbox_to_dot(S: FiniteSemigroup, name: Optional[str] = None) -> str:
    """One cluster per D-class holding a record node per R-class row.

    Covering edges of the D-class order join the first rows of the clusters.
    """
    layout = eggbox_layout(S)
    lines: List[str] = [
        f"digraph {_quote(name or S.name or 'S')} {{",
        "    rankdir=BT;",
        "    compound=true;",
        "    node [shape=record];",
    ]
    for grid in layout:
        lines.append(f"    subgraph cluster_{grid.d_class} {{")
        lines.append(f"        label={_quote(f'D{grid.d_class}')};")
        for i, row in enumerate(grid.cells):
            fields = "|".join(
                _record_field(("*" if cell.idempotent else "") + ",".join(S.labels[x] for x in cell.elements))
                for cell in row
            )
            lines.append(f'        d{grid.d_class}r{i} [label="{fields}"];')
        for i in range(1, len(grid.cells)):
            lines.append(f"        d{grid.d_class}r{i - 1} -> d{grid.d_class}r{i} [style=invis];")
        lines.append("    }")
    for a, b in d_class_poset(S).hasse_edges():
        lines.append(f"    d{a}r0 -> d{b}r0 [ltail=cluster_{a}, lhead=cluster_{b}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
