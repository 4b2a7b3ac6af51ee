"""Egg-box diagrams: each D-class as a grid of H-classes, R-classes as rows and L-classes as columns."""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from app.application.services.semigroup_service import SemigroupService
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import FiniteSemigroup


@dataclass(frozen=True)
class EggboxCell:
    elements: Tuple[int, ...]
    idempotent: bool


@dataclass(frozen=True)
class EggboxGrid:
    """One D-class; ``cells[i][k]`` is the H-class of row ``rows[i]`` and column ``columns[k]``."""

    d_class: int
    rows: Tuple[int, ...]
    columns: Tuple[int, ...]
    cells: Tuple[Tuple[EggboxCell, ...], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.columns)


def eggbox_layout(S: FiniteSemigroup) -> List[EggboxGrid]:
    """Grids for every D-class, in class-index order."""
    g = SemigroupService.greens(S)
    grids = []
    for d in range(g.num_d):
        members = g.d_members(d)
        rows = tuple(sorted({int(g.r_class[x]) for x in members}))
        columns = tuple(sorted({int(g.l_class[x]) for x in members}))
        cells = []
        for r in rows:
            row = []
            for l in columns:
                elements = tuple(x for x in members if g.r_class[x] == r and g.l_class[x] == l)
                row.append(EggboxCell(elements, any(g.is_idempotent(x) for x in elements)))
            cells.append(tuple(row))
        grids.append(EggboxGrid(d, rows, columns, tuple(cells)))
    return grids


def d_class_poset(S: FiniteSemigroup) -> FinitePoset:
    """D-classes ordered by principal two-sided ideals (J = D in a finite semigroup)."""
    g = SemigroupService.greens(S)
    reach = (g.leq_l.astype(np.int64) @ g.leq_r.astype(np.int64)) > 0
    reps = [g.d_members(d)[0] for d in range(g.num_d)]
    leq = reach[np.ix_(reps, reps)]
    return FinitePoset(leq, tuple(f"D{d}" for d in range(g.num_d)))


def _cell_text(S: FiniteSemigroup, cell: EggboxCell) -> str:
    return ("*" if cell.idempotent else " ") + ",".join(S.labels[x] for x in cell.elements)


def render_eggbox_text(S: FiniteSemigroup) -> str:
    """Fixed-width text grids; idempotent cells are marked with ``*``."""
    layout = eggbox_layout(S)
    width = max(len(_cell_text(S, cell)) for grid in layout for row in grid.cells for cell in row)
    out = [f"{S.name or 'S'}: {S.size} elements, {len(layout)} D-classes"]
    for grid in layout:
        rows, cols = grid.shape
        size = sum(len(cell.elements) for row in grid.cells for cell in row)
        out.append("")
        out.append(f"D{grid.d_class} ({size} elements, {rows} x {cols})")
        rule = "+" + "+".join("-" * (width + 2) for _ in range(cols)) + "+"
        out.append(rule)
        for row in grid.cells:
            out.append("| " + " | ".join(_cell_text(S, cell).ljust(width) for cell in row) + " |")
            out.append(rule)
    return "\n".join(out) + "\n"
