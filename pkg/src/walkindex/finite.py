"""Finite-size certificates and crossover experiments.

On a finite lattice protected boundary eigenvalues no longer sit exactly at
+-1; they approach these anchors exponentially as the bulk segments grow.
Two tools quantify this.  A crossover join realizes two bulk walks on one
finite lattice, exactly unitary and admissible, with the interface blocks
fixed by a reproducible rule.  A Temple-Kato certificate turns a set of
approximately orthonormal approximate eigenvectors into a rigorous lower
bound on the eigenvalue count of a normal operator inside a disk: with
``K`` vectors of Gram deviation at most ``eps1 < 1/K`` and defect norms
``||(U - theta) phi|| <= eps2``, every disk around ``theta`` of radius
exceeding ``K eps2 / sqrt(1 - K eps1)`` contains at least ``K`` eigenvalues.
Truncating the eigenvectors of a larger system to a window and certifying
them against the system containing that window makes the bound a finite-size
proxy for the infinite-volume index statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .decoupling import decouple_segment
from .errors import (
    DimensionMismatch,
    Gapless,
    IncompatibleCells,
    NotAdmissible,
    NotEnoughModes,
    NotNormal,
    TooShort,
)
from .lattice import (
    CellStructure,
    LatticeOperator,
    LocalSymmetryRep,
    mass_profile,
    measured_band,
)
from .operators import check_admissible, check_unitary, eig_unitary
from .tolerances import DEFAULT_TOL, Tolerances
from .walks import ShiftFactor, TIWalk, factor_matrices, skeletons_match, ti_gap_margin, truncate_ti

__all__ = [
    "TempleKatoCertificate",
    "SweepRecord",
    "temple_kato",
    "certify_boundary_modes",
    "count_in_disk",
    "join_crossover",
    "crossover_sweep",
    "localization_profile",
]


# -- Temple-Kato certificates ------------------------------------------------------


@dataclass(frozen=True)
class TempleKatoCertificate:
    """Lower bound on the eigenvalue count of a normal operator in a disk.

    When ``valid``, every disk around ``theta`` with radius > ``r_min``
    contains at least ``k`` eigenvalues (with multiplicity).
    """

    k: int
    theta: complex
    eps1: float
    eps2: float
    r_min: float
    valid: bool

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "theta": self.theta,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "r_min": self.r_min,
            "valid": self.valid,
        }


def _column_matrix(vectors) -> np.ndarray:
    arr = np.asarray(vectors, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim == 2 and not isinstance(vectors, np.ndarray):
        # a list of vectors arrives row-wise; store them as columns
        arr = arr.T
    return arr


def temple_kato(
    u: np.ndarray,
    theta: complex,
    vectors,
    tol: Tolerances = DEFAULT_TOL,
) -> TempleKatoCertificate:
    """Certificate from approximate eigenvectors of a normal operator.

    The vectors are consumed raw: near-orthonormality enters through the
    measured Gram deviation ``eps1``, which is the entire point of the
    bound.  ``valid`` is false when ``eps1 >= 1/k``, in which case no
    radius is certified and ``r_min`` is infinite.
    """
    u = np.asarray(u, dtype=complex)
    defect = float(np.linalg.norm(u @ u.conj().T - u.conj().T @ u, 2))
    if defect > 10 * tol.unit:
        raise NotNormal(f"operator is not normal: ||[U, U*]|| = {defect:.3e}")
    phi = _column_matrix(vectors)
    if phi.shape[0] != u.shape[0]:
        raise DimensionMismatch(
            f"vectors of dimension {phi.shape[0]} against operator of dimension {u.shape[0]}"
        )
    k = phi.shape[1]
    if k == 0:
        raise NotEnoughModes("a certificate needs at least one vector")
    gram = phi.conj().T @ phi
    eps1 = float(np.max(np.abs(gram - np.eye(k))))
    eps2 = float(np.max(np.linalg.norm(u @ phi - theta * phi, axis=0)))
    valid = eps1 < 1.0 / k
    r_min = k * eps2 / np.sqrt(1.0 - k * eps1) if valid else np.inf
    return TempleKatoCertificate(k, complex(theta), eps1, eps2, float(r_min), valid)


def count_in_disk(u: np.ndarray, theta: complex, radius: float, tol: Tolerances = DEFAULT_TOL) -> int:
    """Directly counted eigenvalues of a normal operator in a closed disk."""
    vals = np.linalg.eigvals(np.asarray(u, dtype=complex))
    return int(np.sum(np.abs(vals - theta) <= radius))


def certify_boundary_modes(
    big: LatticeOperator,
    window: Sequence[int],
    theta: complex,
    k_expected: int,
    select_radius: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> TempleKatoCertificate:
    """Certificate for boundary modes from window-truncated eigenvectors.

    Takes the ``k_expected`` eigenvectors of ``big`` closest to ``theta``,
    truncates them to the window cells, renormalizes, and certifies against
    ``big`` itself.  The certificate is therefore driven entirely by the
    decay of the modes: a window containing their localization region gives
    small ``eps1``/``eps2`` and a tight radius, a distant window gives a
    vacuous one.  The same truncated vectors certify any larger system that
    contains the window unchanged.
    """
    eig = eig_unitary(big.matrix, tol)
    dist = np.abs(eig.values - theta)
    radius = tol.exact if select_radius is None else select_radius
    eligible = np.flatnonzero(dist <= radius)
    if eligible.size < k_expected:
        raise NotEnoughModes(
            f"{eligible.size} eigenvalues within {radius:.2e} of {theta}, need {k_expected}"
        )
    # The basis within a near-degenerate cluster is arbitrary, so rotate the
    # selected span to diagonalize the window weight and keep the k most
    # localized combinations; otherwise a hybridized pair straddling two
    # boundaries truncates to two parallel vectors.
    span = eig.vectors[:, eligible]
    mask = big.cells.index_mask(tuple(window)).astype(float)
    w_op = span.conj().T @ (mask[:, None] * span)
    vals, u = np.linalg.eigh((w_op + w_op.conj().T) / 2)
    chosen = (span @ u)[:, np.argsort(vals)[::-1][:k_expected]]
    phi = mask[:, None] * chosen
    norms = np.linalg.norm(phi, axis=0)
    if np.any(norms <= tol.ker):
        raise NotEnoughModes("a selected mode has no weight inside the window")
    return temple_kato(big.matrix, theta, phi / norms, tol)


# -- crossover systems -------------------------------------------------------------


def _join_factors(left: TIWalk, right: TIWalk, side: Sequence[int]) -> list:
    """Per-factor inputs with the coin of ``left`` or ``right`` chosen per cell."""
    seq: list = []
    for fl, fr in zip(left.factors, right.factors):
        if isinstance(fl, ShiftFactor):
            seq.append(fl)
        else:
            coins = [(fl if s == 0 else fr).matrix for s in side]
            seq.append(coins)
    return seq


def _assemble_join(
    left: TIWalk,
    right: TIWalk,
    side: Sequence[int],
    topology: str,
    tol: Tolerances,
) -> LatticeOperator:
    n = len(side)
    cells = CellStructure.uniform(n, left.cell_dim, topology)
    mats = factor_matrices(_join_factors(left, right, side), cells)
    w = reduce(lambda acc, m: m @ acc, mats, np.eye(cells.total_dim, dtype=complex))
    local = LocalSymmetryRep.uniform(left.cell_rep, n)
    probe = LatticeOperator(w, cells, max(left.band, right.band), local)
    return LatticeOperator(w, cells, measured_band(probe, tol), local)


def join_crossover(
    left: TIWalk,
    right: TIWalk,
    n_left: int,
    n_right: int,
    topology: str = "circle",
    tol: Tolerances = DEFAULT_TOL,
) -> LatticeOperator:
    """Finite walk equal to the left bulk on one segment and the right on the other.

    Walks sharing a factor skeleton are joined at the coin level: the shift
    structure is global so the result is exactly unitary, and the interface
    blocks are whatever the mixed coins produce.  On a circle the cells
    ``[0, n_left)`` carry the left coins and the interfaces sit at bonds
    ``0`` and ``n_left``.  On a line the coin join is built on a padded
    circle and the segment ``[0, n_left + n_right)`` is gently decoupled
    out, so both outer ends terminate in pinned defect eigenvalues while
    the single interface at bond ``n_left`` keeps its protected modes.

    Walks without a common skeleton, and skeleton pairs whose coin mix
    breaks a symmetry relation at the interface bonds, fall back to the
    block-diagonal join of two gently decoupled segments: each side is
    exactly unitary on its own and the interface carries no coupling.
    """
    if left.cell_dim != right.cell_dim:
        raise IncompatibleCells(
            f"cell dimensions {left.cell_dim} and {right.cell_dim} differ"
        )
    if left.cls is not right.cls:
        raise IncompatibleCells(
            f"symmetry classes {left.cls.value} and {right.cls.value} differ"
        )
    if topology not in ("circle", "line"):
        raise IncompatibleCells(f"topology must be 'circle' or 'line', got {topology!r}")
    if n_left < 1 or n_right < 1:
        raise TooShort("both segments need at least one cell")
    band = max(left.band, right.band)
    n = n_left + n_right
    info = {"left": left.name, "right": right.name, "n_left": n_left, "n_right": n_right}

    if skeletons_match(left, right):
        if topology == "circle":
            if n <= 2 * band:
                raise TooShort(f"circle of {n} cells aliases hopping range {band}")
            side = [0] * n_left + [1] * n_right
            op = _assemble_join(left, right, side, "circle", tol)
        else:
            pad = max(2 * band + 2, 4)
            side = [0] * n_left + [1] * (n_right + pad) + [0] * pad
            op = _assemble_join(left, right, side, "circle", tol)
        check_unitary(op.matrix, tol, "crossover join")
        admissible = True
        try:
            check_admissible(op.matrix, op.rep(), kind="walk", tol=tol)
        except NotAdmissible:
            admissible = False
        if admissible:
            if topology == "circle":
                op.meta.update({"join": info, "interfaces": (0, n_left)})
                return op
            seg = decouple_segment(op, n, tol)
            seg.meta.update({"join": info, "interfaces": (n_left,)})
            return seg

    left_seg = truncate_ti(left, n_left, "decoupled_unitary", tol)
    right_seg = truncate_ti(right, n_right, "decoupled_unitary", tol)
    w = np.zeros((left_seg.matrix.shape[0] + right_seg.matrix.shape[0],) * 2, dtype=complex)
    dl = left_seg.matrix.shape[0]
    w[:dl, :dl] = left_seg.matrix
    w[dl:, dl:] = right_seg.matrix
    cells = CellStructure(
        left_seg.cells.cell_dims + right_seg.cells.cell_dims,
        topology,
        0,
        frozenset() if topology == "circle" else frozenset({"left", "right"}),
    )
    local = LocalSymmetryRep(
        left.cls, left_seg.local_rep.per_cell + right_seg.local_rep.per_cell
    )
    meta = {
        "join": info,
        "interfaces": (n_left,) if topology == "line" else (0, n_left),
        "boundary": "decoupled_unitary",
        "interface_style": "decoupled",
    }
    probe = LatticeOperator(w, cells, band, local, meta)
    return LatticeOperator(w, cells, measured_band(probe, tol), local, meta)


# -- sweeps ------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    """Spectral summary of one crossover system in a size sweep.

    ``delta = log(1 - max |Re lambda|)`` measures how closely the most
    protected eigenvalue approaches +-1; ``eigenvalues`` lists the spectrum
    within half a bulk gap (over sqrt(2)) of the anchors, and
    ``max_localization_radius`` is the largest radius (in cells around the
    nearest interface) any of those modes needs to hold 90% of its weight.
    """

    n_a: int
    n_b: int
    delta: float
    eigenvalues: tuple[complex, ...]
    count_near_plus: int
    count_near_minus: int
    max_localization_radius: int
    profiles: tuple[tuple[float, ...], ...] = field(repr=False, default=())

    def as_row(self) -> dict:
        return {
            "n_A": self.n_a,
            "n_B": self.n_b,
            "delta": self.delta,
            "count_near_plus": self.count_near_plus,
            "count_near_minus": self.count_near_minus,
            "max_localization_radius": self.max_localization_radius,
        }


def localization_profile(vec: np.ndarray, cells: CellStructure) -> np.ndarray:
    """Per-cell squared-norm weights of a vector, normalized to sum 1."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.size != cells.total_dim:
        raise DimensionMismatch(
            f"vector of dimension {v.size} on cells of total dimension {cells.total_dim}"
        )
    total = float(np.vdot(v, v).real)
    if total <= 0.0:
        raise DimensionMismatch("cannot profile the zero vector")
    return mass_profile(v, cells) / total


def _radius_for_mass(
    profile: np.ndarray, cells: CellStructure, interfaces: Sequence[int], mass: float = 0.9
) -> int:
    # radius r covers cells with bond distance < r, matching cells_near_bond
    dist = np.array(
        [min(cells.bond_distance(c, b) for b in interfaces) for c in range(cells.n_cells)]
    )
    for r in range(1, int(dist.max()) + 2):
        if float(np.sum(profile[dist < r])) >= mass:
            return r
    return int(dist.max()) + 1


def crossover_sweep(
    left: TIWalk,
    right: TIWalk,
    sizes: Sequence[tuple[int, int]],
    topology: str = "circle",
    tol: Tolerances = DEFAULT_TOL,
) -> list[SweepRecord]:
    """Sweep crossover systems over segment sizes and record the spectra.

    Requires both bulks gapped; the near-anchor window is half the smaller
    bulk gap margin over sqrt(2), so bulk states can never enter it.
    """
    margin = min(ti_gap_margin(left, tol=tol), ti_gap_margin(right, tol=tol))
    if margin <= tol.gap:
        raise Gapless(f"bulk gap margin {margin:.3e} too small for a sweep")
    window = margin / np.sqrt(2.0)
    records = []
    for n_a, n_b in sizes:
        joined = join_crossover(left, right, n_a, n_b, topology, tol)
        eig = eig_unitary(joined.matrix, tol)
        max_re = float(np.max(np.abs(eig.values.real)))
        with np.errstate(divide="ignore"):
            delta = float(np.log1p(-min(max_re, 1.0)))
        near = (np.abs(eig.values - 1.0) < window) | (np.abs(eig.values + 1.0) < window)
        idx = np.flatnonzero(near)
        interfaces = joined.meta.get("interfaces", (0,))
        profiles = [localization_profile(eig.vectors[:, j], joined.cells) for j in idx]
        radius = max(
            (_radius_for_mass(p, joined.cells, interfaces) for p in profiles), default=0
        )
        records.append(
            SweepRecord(
                n_a=n_a,
                n_b=n_b,
                delta=delta,
                eigenvalues=tuple(complex(z) for z in eig.values[idx]),
                count_near_plus=int(np.sum(np.abs(eig.values - 1.0) < window)),
                count_near_minus=int(np.sum(np.abs(eig.values + 1.0) < window)),
                max_localization_radius=int(radius),
                profiles=tuple(tuple(map(float, p)) for p in profiles),
            )
        )
    return records
