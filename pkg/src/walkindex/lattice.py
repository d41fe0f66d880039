"""Cell-structured operators on finite one-dimensional lattices.

A lattice is a line segment or a circle of cells with (possibly varying)
internal dimensions.  Operators carry their cell structure, a declared
bandwidth (largest cell-to-cell hopping range), and optionally a cell-local
symmetry representation.

Finite segments serve as desk-scale proxies for half-infinite systems: their
artificial outer boundaries are marked as ``proxy_ends`` so that index
computations can exclude modes created by the truncation rather than by the
cut under study.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CutOutOfRange, IncompatibleCells, TooShort
from .symmetry import SymmetryClass, SymmetryRep
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "CellStructure",
    "LocalSymmetryRep",
    "LatticeOperator",
    "CellProjection",
    "half_space_projection",
    "arc_projection",
    "compress",
    "locality_profile",
    "measured_band",
    "cells_near_bond",
    "split_by_weight",
    "mass_profile",
    "localization_radius",
]


@dataclass(frozen=True)
class CellStructure:
    """Cells of a finite segment ('line') or ring ('circle').

    ``proxy_ends`` marks segment ends that stand in for infinity (truncation
    artifacts); a circle has none.  ``x_min`` is the position label of cell 0.
    """

    cell_dims: tuple[int, ...]
    topology: str = "line"
    x_min: int = 0
    proxy_ends: frozenset[str] = field(default=frozenset())

    def __post_init__(self) -> None:
        if self.topology not in ("line", "circle"):
            raise ValueError(f"topology must be 'line' or 'circle', got {self.topology!r}")
        if self.topology == "circle" and self.proxy_ends:
            raise ValueError("a circle has no proxy ends")
        bad = set(self.proxy_ends) - {"left", "right"}
        if bad:
            raise ValueError(f"unknown proxy ends {sorted(bad)}")

    @classmethod
    def uniform(
        cls,
        n_cells: int,
        cell_dim: int,
        topology: str = "line",
        x_min: int = 0,
        proxy_ends: Iterable[str] | None = None,
    ) -> "CellStructure":
        if proxy_ends is None:
            proxy_ends = ("left", "right") if topology == "line" else ()
        return cls((cell_dim,) * n_cells, topology, x_min, frozenset(proxy_ends))

    @property
    def n_cells(self) -> int:
        return len(self.cell_dims)

    @property
    def total_dim(self) -> int:
        return sum(self.cell_dims)

    @property
    def x_max(self) -> int:
        return self.x_min + self.n_cells - 1

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.cell_dims:
            out.append(out[-1] + d)
        return tuple(out)

    def cell_slice(self, i: int) -> slice:
        off = self.offsets
        return slice(off[i], off[i + 1])

    def cell_of_index(self, idx: int) -> int:
        off = self.offsets
        return int(np.searchsorted(off, idx, side="right") - 1)

    def index_mask(self, members: Iterable[int]) -> np.ndarray:
        """Boolean mask over the total dimension selecting the given cells."""
        mask = np.zeros(self.total_dim, dtype=bool)
        for i in members:
            mask[self.cell_slice(i)] = True
        return mask

    def bond_distance(self, cell: int, bond: int) -> int:
        """Distance in cells from a cell to the bond between cells b-1 and b."""
        n = self.n_cells
        if self.topology == "circle":
            right = (cell - bond) % n
            left = (bond - 1 - cell) % n
            return int(min(right, left))
        return cell - bond if cell >= bond else bond - 1 - cell


@dataclass(frozen=True)
class LocalSymmetryRep:
    """Cell-local symmetry operators, one block per cell."""

    cls: SymmetryClass
    per_cell: tuple[SymmetryRep, ...]

    @classmethod
    def uniform(cls, cell_rep: SymmetryRep, n_cells: int) -> "LocalSymmetryRep":
        return cls(cell_rep.cls, (cell_rep,) * n_cells)

    @property
    def total_dim(self) -> int:
        return sum(r.dim for r in self.per_cell)

    def assembled(self) -> SymmetryRep:
        rep = self.per_cell[0]
        for r in self.per_cell[1:]:
            rep = rep.direct_sum(r)
        return rep

    def restrict_cells(self, members: Sequence[int]) -> "LocalSymmetryRep":
        return LocalSymmetryRep(self.cls, tuple(self.per_cell[i] for i in members))

    def replace_cell(self, i: int, rep: SymmetryRep) -> "LocalSymmetryRep":
        per_cell = list(self.per_cell)
        per_cell[i] = rep
        return LocalSymmetryRep(self.cls, tuple(per_cell))


@dataclass(eq=False)
class LatticeOperator:
    """A matrix together with its cell structure and declared bandwidth."""

    matrix: np.ndarray
    cells: CellStructure
    band: int
    local_rep: LocalSymmetryRep | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        d = self.cells.total_dim
        if self.matrix.shape != (d, d):
            raise IncompatibleCells(f"matrix shape {self.matrix.shape} != cell total {(d, d)}")
        if self.local_rep is not None and self.local_rep.total_dim != d:
            raise IncompatibleCells("local representation does not match cell dimensions")

    @property
    def dim(self) -> int:
        return self.cells.total_dim

    def block(self, i: int, j: int) -> np.ndarray:
        """The (cell i <- cell j) block."""
        return self.matrix[self.cells.cell_slice(i), self.cells.cell_slice(j)]

    def rep(self) -> SymmetryRep | None:
        return None if self.local_rep is None else self.local_rep.assembled()


@dataclass(frozen=True)
class CellProjection:
    """Projection onto a set of whole cells."""

    cells: CellStructure
    members: tuple[int, ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.mask().astype(float))

    def mask(self) -> np.ndarray:
        return self.cells.index_mask(self.members)

    def complement(self) -> "CellProjection":
        other = tuple(i for i in range(self.cells.n_cells) if i not in set(self.members))
        return CellProjection(self.cells, other)

    def cut_bonds(self) -> tuple[int, ...]:
        """Bonds (positions b between cells b-1 and b) where membership flips.

        For a line the outer system edges do not count as bonds.
        """
        n = self.cells.n_cells
        inside = np.zeros(n, dtype=bool)
        inside[list(self.members)] = True
        bonds = []
        rng = range(n) if self.cells.topology == "circle" else range(1, n)
        for b in rng:
            if inside[b] != inside[(b - 1) % n]:
                bonds.append(b)
        return tuple(bonds)


def half_space_projection(cells: CellStructure, cut: int, side: str = "geq") -> CellProjection:
    """Projection onto cells with index >= cut ('geq') or < cut ('lt')."""
    n = cells.n_cells
    if not 0 < cut < n:
        raise CutOutOfRange(f"cut {cut} outside open range (0, {n})")
    if side == "geq":
        members = tuple(range(cut, n))
    elif side == "lt":
        members = tuple(range(cut))
    else:
        raise ValueError(f"side must be 'geq' or 'lt', got {side!r}")
    return CellProjection(cells, members)


def arc_projection(cells: CellStructure, start: int, stop: int) -> CellProjection:
    """Projection onto the arc of cells [start, stop), wrapping on circles."""
    n = cells.n_cells
    if cells.topology == "circle":
        start %= n
        stop %= n
        if start == stop:
            raise CutOutOfRange("arc must be a proper subset of the circle")
        if start < stop:
            members = tuple(range(start, stop))
        else:
            members = tuple(range(start, n)) + tuple(range(stop))
    else:
        if not 0 <= start < stop <= n:
            raise CutOutOfRange(f"segment [{start}, {stop}) outside [0, {n}]")
        members = tuple(range(start, stop))
    return CellProjection(cells, members)


def compress(op: LatticeOperator, proj: CellProjection) -> LatticeOperator:
    """Restrict an operator to the cells of a contiguous projection.

    The result is a segment whose ends are labelled: an end created by a cut
    keeps its bond position in ``meta['end_bonds']``; an end inherited from a
    proxy end of the parent stays a proxy end.
    """
    members = list(proj.members)
    if not members:
        raise IncompatibleCells("cannot compress onto zero cells")
    n = op.cells.n_cells
    member_set = set(members)
    if len(member_set) == n:
        raise IncompatibleCells("projection covers every cell; nothing is cut")
    # Normalize to a contiguous run (wrapping allowed on circles).
    if op.cells.topology == "line":
        start = min(member_set)
        run = list(range(start, start + len(member_set)))
    else:
        starts = [i for i in member_set if (i - 1) % n not in member_set]
        if len(starts) != 1:
            raise IncompatibleCells("projection is not a contiguous arc")
        start = starts[0]
        run = [(start + k) % n for k in range(len(member_set))]
    if set(run) != member_set:
        raise IncompatibleCells("projection is not a contiguous run of cells")

    order = np.concatenate([np.arange(op.dim)[op.cells.cell_slice(i)] for i in run])
    sub = op.matrix[np.ix_(order, order)]
    left_bond = run[0] if not (op.cells.topology == "line" and run[0] == 0) else None
    stop = (run[-1] + 1) % n if op.cells.topology == "circle" else run[-1] + 1
    right_bond = stop if not (op.cells.topology == "line" and stop == n) else None

    proxy = set()
    if left_bond is None and "left" in op.cells.proxy_ends:
        proxy.add("left")
    if right_bond is None and "right" in op.cells.proxy_ends:
        proxy.add("right")
    cells = CellStructure(
        tuple(op.cells.cell_dims[i] for i in run),
        "line",
        op.cells.x_min + run[0] if op.cells.topology == "line" else run[0],
        frozenset(proxy),
    )
    local_rep = op.local_rep.restrict_cells(run) if op.local_rep is not None else None
    meta = {
        "end_bonds": {"left": left_bond, "right": right_bond},
        "parent_cells": tuple(run),
    }
    return LatticeOperator(sub, cells, op.band, local_rep, meta)


def locality_profile(op: LatticeOperator, tol: Tolerances = DEFAULT_TOL) -> dict[int, float]:
    """Largest block norm at each hopping distance.

    Distances are signed cell offsets; on a circle they wrap to the shorter
    direction, ties going to the positive side.
    """
    n = op.cells.n_cells
    out: dict[int, float] = {}
    for i in range(n):
        for j in range(n):
            if op.cells.topology == "circle":
                d = (i - j) % n
                if d > n // 2:
                    d -= n
            else:
                d = i - j
            norm = float(np.linalg.norm(op.block(i, j), 2)) if op.block(i, j).size else 0.0
            out[d] = max(out.get(d, 0.0), norm)
    return dict(sorted(out.items()))


def measured_band(op: LatticeOperator, tol: Tolerances = DEFAULT_TOL) -> int:
    """Largest |offset| whose blocks exceed the bandwidth tolerance."""
    profile = locality_profile(op, tol)
    live = [abs(d) for d, v in profile.items() if v > tol.band]
    return max(live) if live else 0


def cells_near_bond(cells: CellStructure, bond: int, radius: int) -> tuple[int, ...]:
    """Cells within ``radius`` cells of the bond (radius cells on each side)."""
    return tuple(i for i in range(cells.n_cells) if cells.bond_distance(i, bond) < radius)


def split_by_weight(
    basis: np.ndarray,
    cells: CellStructure,
    members: Iterable[int],
    threshold: float = 0.5,
    ambiguous_range: tuple[float, float] = (0.1, 0.9),
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Split a subspace by weight inside a cell region.

    Diagonalizes the compression of the region projection onto the span and
    splits at ``threshold``.  Returns (inside, outside, weights, n_ambiguous);
    the rotated basis columns are eigenvectors of the weight operator, so for
    cell-local symmetries the two parts remain symmetry invariant whenever the
    weights are exactly 0/1.
    """
    if basis.shape[1] == 0:
        return basis, basis, np.zeros(0), 0
    mask = cells.index_mask(members).astype(float)
    w_op = basis.conj().T @ (mask[:, None] * basis)
    w_op = (w_op + w_op.conj().T) / 2
    vals, u = np.linalg.eigh(w_op)
    rotated = basis @ u
    inside = rotated[:, vals >= threshold]
    outside = rotated[:, vals < threshold]
    lo, hi = ambiguous_range
    n_amb = int(np.sum((vals > lo) & (vals < hi)))
    return inside, outside, vals, n_amb


def mass_profile(vec: np.ndarray, cells: CellStructure) -> np.ndarray:
    """Per-cell probability weights of a normalized vector."""
    out = np.empty(cells.n_cells)
    for i in range(cells.n_cells):
        out[i] = float(np.sum(np.abs(vec[cells.cell_slice(i)]) ** 2))
    return out


def localization_radius(
    vec: np.ndarray,
    cells: CellStructure,
    bond: int,
    mass: float = 0.9,
) -> int:
    """Smallest window radius around a bond capturing the given mass."""
    profile = mass_profile(vec, cells)
    total = float(profile.sum())
    for r in range(1, cells.n_cells + 1):
        window = cells_near_bond(cells, bond, r)
        if profile[list(window)].sum() >= mass * total:
            return r
    return cells.n_cells


def require_length(piece: CellStructure, needed: int, what: str) -> None:
    if piece.n_cells < needed:
        raise TooShort(f"{what} needs at least {needed} cells, got {piece.n_cells}")
