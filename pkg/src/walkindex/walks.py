"""Translation-invariant walks and their momentum-space invariants.

A walk is stored as hopping blocks: ``blocks[j]`` maps cell ``x`` to cell
``x + j`` and the Bloch matrix is ``W(k) = sum_j blocks[j] exp(i j k)``.
With this convention the distinguished shift ``S|x> = |x - 1>`` has Bloch
symbol ``exp(-ik)`` and right half-space Fredholm index +1.

Walks built from shift/coin factor sequences remember them, which allows
position-dependent coins (crossovers between walks of the same family).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    Gapless,
    NonIntegerInvariant,
    NotChiral,
    RankJump,
    RelationViolation,
    SingularBlock,
    TooShort,
)
from .lattice import CellStructure, LatticeOperator, LocalSymmetryRep
from .operators import check_admissible, check_unitary, eig_unitary
from .symmetry import (
    IndexGroup,
    IndexValue,
    SymmetryClass,
    SymmetryOperator,
    SymmetryRep,
    chiral_sectors,
    forget_rep,
    kramers_pairs,
)
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "ShiftFactor",
    "CoinFactor",
    "TIWalk",
    "blocks_from_factors",
    "make_generating_example",
    "make_trivial",
    "make_split_step",
    "make_shift",
    "make_doubled",
    "builtin_walk",
    "validate_ti",
    "conjugate_ti",
    "direct_sum_ti",
    "forget_ti",
    "winding_number",
    "berry_phase",
    "InvariantReport",
    "ti_gap_margin",
    "build_lattice",
    "truncate_ti",
    "factor_matrices",
    "skeletons_match",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAX_MOMENTUM_SAMPLES = 8192


@dataclass(frozen=True)
class ShiftFactor:
    """Shift the listed internal components by one cell (step = +-1)."""

    components: tuple[int, ...]
    step: int


@dataclass(frozen=True)
class CoinFactor:
    """A cell-local unitary applied to every cell."""

    matrix: np.ndarray


Factor = ShiftFactor | CoinFactor


def _factor_blocks(factor: Factor, cell_dim: int) -> dict[int, np.ndarray]:
    if isinstance(factor, CoinFactor):
        return {0: np.asarray(factor.matrix, dtype=complex)}
    sel = np.zeros((cell_dim, cell_dim), dtype=complex)
    for c in factor.components:
        sel[c, c] = 1.0
    return {factor.step: sel, 0: np.eye(cell_dim, dtype=complex) - sel}


def blocks_from_factors(factors: Sequence[Factor], cell_dim: int) -> dict[int, np.ndarray]:
    """Hopping blocks of the product, first factor applied first."""
    cur: dict[int, np.ndarray] = {0: np.eye(cell_dim, dtype=complex)}
    for f in factors:
        fb = _factor_blocks(f, cell_dim)
        new: dict[int, np.ndarray] = {}
        for j2, b2 in fb.items():
            for j1, b1 in cur.items():
                j = j1 + j2
                new[j] = new.get(j, 0) + b2 @ b1
        cur = new
    return {j: b for j, b in cur.items() if np.linalg.norm(b) > 1e-14}


@dataclass(frozen=True)
class TIWalk:
    """A translation-invariant walk with one cell type."""

    name: str
    cls: SymmetryClass
    cell_dim: int
    blocks: Mapping[int, np.ndarray]
    cell_rep: SymmetryRep
    factors: tuple[Factor, ...] | None = None
    params: Mapping[str, float] = field(default_factory=dict)

    @property
    def band(self) -> int:
        return max((abs(j) for j in self.blocks), default=0)

    def bloch(self, k: float) -> np.ndarray:
        w = np.zeros((self.cell_dim, self.cell_dim), dtype=complex)
        for j, b in self.blocks.items():
            w += b * np.exp(1j * j * k)
        return w


def make_generating_example(inverse: bool = False) -> TIWalk:
    """The basic two-component walk exchanging components while hopping.

    ``W|x,up> = i|x-1,down>`` and ``W|x,down> = i|x+1,up>``; with
    ``inverse=True`` the inverse walk ``W^-1 = -W`` (same hopping skeleton,
    opposite coin sign).  Class BDI with ``gamma = sigma_z``, ``tau = K``,
    ``eta = sigma_z K``; right half-space index +1.  Negating a walk does not
    change its half-space indices (the kernel of the imaginary part is the
    same), so the inverse variant matters as a *different* decoupled side, not
    as an index flip.
    """
    coin = (-1 if inverse else 1) * 1j * PAULI_X
    factors = (
        CoinFactor(coin),
        ShiftFactor((1,), -1),
        ShiftFactor((0,), +1),
    )
    rep = SymmetryRep.from_matrices(
        SymmetryClass.BDI, 2, eta=PAULI_Z, tau=np.eye(2), gamma=PAULI_Z
    )
    return TIWalk(
        "generating",
        SymmetryClass.BDI,
        2,
        blocks_from_factors(factors, 2),
        rep,
        factors,
        {"inverse": float(inverse)},
    )


def make_trivial() -> TIWalk:
    """A purely cell-local gapped walk (coin ``i sigma_x``), all indices zero.

    Shares the cell representation of the generating example, so the two can
    be direct-summed cellwise.
    """
    factors = (CoinFactor(1j * PAULI_X),)
    rep = SymmetryRep.from_matrices(
        SymmetryClass.BDI, 2, eta=PAULI_Z, tau=np.eye(2), gamma=PAULI_Z
    )
    return TIWalk(
        "trivial", SymmetryClass.BDI, 2, blocks_from_factors(factors, 2), rep, factors, {}
    )


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def make_split_step(theta1: float, theta2: float) -> TIWalk:
    """Split-step walk in its chiral-symmetric timeframe.

    ``W = R(t1/2) S_up R(t2) S_down R(t1/2)`` with real rotations ``R``;
    class BDI with ``gamma = sigma_x``, ``tau = sigma_x K``, ``eta = K``.
    The right half-space index is ``sign(sin t1)`` when
    ``|tan t2| < |tan t1|`` and 0 otherwise.
    """
    half = CoinFactor(_rotation(theta1 / 2))
    factors = (
        half,
        ShiftFactor((1,), -1),
        CoinFactor(_rotation(theta2)),
        ShiftFactor((0,), +1),
        half,
    )
    rep = SymmetryRep.from_matrices(
        SymmetryClass.BDI, 2, eta=np.eye(2), tau=PAULI_X, gamma=PAULI_X
    )
    return TIWalk(
        "split_step",
        SymmetryClass.BDI,
        2,
        blocks_from_factors(factors, 2),
        rep,
        factors,
        {"theta1": theta1, "theta2": theta2},
    )


def make_shift() -> TIWalk:
    """The distinguished shift ``S|x> = |x-1>`` (class A, Fredholm index +1)."""
    blocks = {-1: np.eye(1, dtype=complex)}
    rep = SymmetryRep.from_matrices(SymmetryClass.A, 1)
    return TIWalk("shift", SymmetryClass.A, 1, blocks, rep, None, {})


def make_doubled(variant: str, inverse: bool = False) -> TIWalk:
    """Doubled generating example realizing the nontrivial CII / DIII indices.

    ``variant='CII'``: two copies of the walk with a symplectic particle-hole
    pairing the copies (winding 2).  ``variant='DIII'``: the walk plus its
    inverse with chiral/time-reversal operators swapping the copies
    (half-interval phase index 2 mod 4).
    """
    base = make_generating_example(inverse)
    e = PAULI_Z  # base eta matrix
    zero = np.zeros((2, 2))
    if variant == "CII":
        blocks = {j: _blkdiag(b, b) for j, b in base.blocks.items()}
        gamma = _blkdiag(PAULI_Z, PAULI_Z)
        eta = np.block([[zero, -e], [e, zero]])
        factors = tuple(_double_factor(f) for f in base.factors)
        cls = SymmetryClass.CII
    elif variant == "DIII":
        blocks_inv = {-j: b.conj().T for j, b in base.blocks.items()}
        blocks = {}
        for j in set(base.blocks) | set(blocks_inv):
            top = base.blocks.get(j, zero)
            bot = blocks_inv.get(j, zero)
            blocks[j] = _blkdiag(top, bot)
        gamma = np.block([[zero, -np.eye(2)], [np.eye(2), zero]])
        eta = _blkdiag(e, e)
        factors = None
        cls = SymmetryClass.DIII
    else:
        raise ValueError(f"variant must be 'CII' or 'DIII', got {variant!r}")
    eta_op = SymmetryOperator(np.asarray(eta, dtype=complex), True)
    gamma_op = SymmetryOperator(np.asarray(gamma, dtype=complex), False)
    tau_op = eta_op.inverse().compose(gamma_op)
    rep = SymmetryRep(
        cls, {"eta": eta_op, "tau": tau_op, "gamma": gamma_op}, 4
    )
    rep.validate()
    return TIWalk(f"doubled_{variant.lower()}", cls, 4, blocks, rep, factors, {"inverse": float(inverse)})


def _blkdiag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def _double_factor(f: Factor) -> Factor:
    if isinstance(f, CoinFactor):
        return CoinFactor(_blkdiag(f.matrix, f.matrix))
    return ShiftFactor(tuple(list(f.components) + [c + 2 for c in f.components]), f.step)


def builtin_walk(name: str, **params: float) -> TIWalk:
    """Look up a builtin family by name."""
    if name == "generating":
        return make_generating_example(bool(params.get("inverse", 0)))
    if name == "trivial":
        return make_trivial()
    if name == "split_step":
        return make_split_step(params["theta1"], params["theta2"])
    if name == "shift":
        return make_shift()
    if name == "doubled_cii":
        return make_doubled("CII", bool(params.get("inverse", 0)))
    if name == "doubled_diii":
        return make_doubled("DIII", bool(params.get("inverse", 0)))
    raise ValueError(f"unknown builtin walk {name!r}")


def validate_ti(ti: TIWalk, n_k: int = 17, tol: Tolerances = DEFAULT_TOL) -> float:
    """Check unitarity and the momentum-space symmetry conditions.

    Antiunitary symmetries relate ``W(k)`` and ``W(-k)``:
    ``E conj(W(-k)) E* = W(k)``, ``T conj(W(-k)) T* = W(k)*``,
    ``G W(k) G* = W(k)*``.  Returns the worst residual.
    """
    worst = 0.0
    for k in np.linspace(-np.pi, np.pi, n_k):
        wk = ti.bloch(k)
        worst = max(worst, check_unitary(wk, tol, what=f"W({k:.3f})"))
        wmk = ti.bloch(-k)
        for name, op in ti.cell_rep.ops.items():
            m = op.matrix
            if name == "eta":
                res = m @ np.conj(wmk) @ m.conj().T - wk
            elif name == "tau":
                res = m @ np.conj(wmk) @ m.conj().T - wk.conj().T
            else:
                res = m @ wk @ m.conj().T - wk.conj().T
            worst = max(worst, float(np.linalg.norm(res, 2)))
    if worst > tol.adm:
        raise RelationViolation(f"momentum-space symmetry residual {worst:.3e}")
    return worst


def conjugate_ti(ti: TIWalk, u: np.ndarray, name: str | None = None) -> TIWalk:
    """Conjugate every cell by the same unitary (preserves all invariants)."""
    blocks = {j: u @ b @ u.conj().T for j, b in ti.blocks.items()}
    return TIWalk(
        name or f"{ti.name}~", ti.cls, ti.cell_dim, blocks, ti.cell_rep.conjugated(u), None, dict(ti.params)
    )


def direct_sum_ti(a: TIWalk, b: TIWalk, name: str | None = None) -> TIWalk:
    """Cellwise direct sum of two walks of the same class."""
    if a.cls is not b.cls:
        raise RelationViolation(f"cannot sum classes {a.cls.value} and {b.cls.value}")
    za = np.zeros((a.cell_dim, a.cell_dim))
    zb = np.zeros((b.cell_dim, b.cell_dim))
    blocks = {}
    for j in set(a.blocks) | set(b.blocks):
        blocks[j] = _blkdiag(a.blocks.get(j, za), b.blocks.get(j, zb))
    return TIWalk(
        name or f"{a.name}+{b.name}",
        a.cls,
        a.cell_dim + b.cell_dim,
        blocks,
        a.cell_rep.direct_sum(b.cell_rep),
        None,
        {},
    )


def forget_ti(ti: TIWalk, target: SymmetryClass, tol: Tolerances = DEFAULT_TOL) -> TIWalk:
    """Reinterpret the walk in a weaker symmetry class."""
    rep = forget_rep(ti.cell_rep, target, tol)
    return TIWalk(f"{ti.name}->{target.value}", target, ti.cell_dim, ti.blocks, rep, ti.factors, dict(ti.params))


@dataclass(frozen=True)
class InvariantReport:
    """An integer invariant from a momentum-space integral."""

    value: IndexValue
    raw: float
    residual: float
    n_k: int


def winding_number(ti: TIWalk, n_k: int = 256, tol: Tolerances = DEFAULT_TOL) -> InvariantReport:
    """Winding of the chiral off-diagonal Bloch block determinant.

    Equals the right half-space index for the classes with ``gamma^2 = +1``
    (AIII, BDI, CII).  The grid is doubled until phase increments are small
    and the sum is within ``tol.integer_residual`` of an integer.
    """
    if ti.cls not in (SymmetryClass.AIII, SymmetryClass.BDI, SymmetryClass.CII):
        raise NotChiral(f"winding number needs gamma^2 = +1, class {ti.cls.value} does not provide it")
    validate_ti(ti, tol=tol)
    plus, minus = chiral_sectors(ti.cell_rep, tol)
    if plus.shape[1] != minus.shape[1]:
        raise SingularBlock("chiral sectors of unequal dimension have no unitary off-diagonal block")
    n = n_k
    while True:
        ks = -np.pi + 2 * np.pi * np.arange(n) / n
        dets = np.empty(n, dtype=complex)
        for i, k in enumerate(ks):
            a = plus.conj().T @ ti.bloch(k) @ minus
            dets[i] = np.linalg.det(a)
        if np.min(np.abs(dets)) < tol.det:
            raise SingularBlock(
                f"off-diagonal block determinant {np.min(np.abs(dets)):.3e} at some momentum; gap closed"
            )
        incr = np.angle(np.roll(dets, -1) / dets)
        total = float(np.sum(incr) / (2 * np.pi))
        nearest = round(total)
        ok_step = np.max(np.abs(incr)) < np.pi / 2
        if ok_step and abs(total - nearest) <= tol.integer_residual:
            group = ti.cls.index_group
            try:
                value = IndexValue(group, nearest)
            except ValueError as exc:
                raise NonIntegerInvariant(str(exc)) from exc
            return InvariantReport(value, total, abs(total - nearest), n)
        if n >= MAX_MOMENTUM_SAMPLES:
            raise NonIntegerInvariant(
                f"winding {total:.6f} not within {tol.integer_residual} of an integer at {n} samples"
            )
        n *= 2


def _band_basis(ti: TIWalk, k: float, rank: int | None, tol: Tolerances) -> np.ndarray:
    eig = eig_unitary(ti.bloch(k), tol)
    if np.min(np.abs(eig.values.imag)) < tol.gap:
        raise Gapless(f"eigenvalue {eig.values[np.argmin(np.abs(eig.values.imag))]:.6g} at k={k:.4f} is near the real axis")
    upper = eig.vectors[:, eig.values.imag > 0]
    if rank is not None and upper.shape[1] != rank:
        raise RankJump(f"upper band rank {upper.shape[1]} != {rank} at k={k:.4f}")
    return upper


def berry_phase(ti: TIWalk, n_k: int = 256, tol: Tolerances = DEFAULT_TOL) -> InvariantReport:
    """Phase of the upper-band frame holonomy.

    Class D: closed loop over the momentum circle, value in Z2 (the right
    half-space index).  Class DIII: half interval [0, pi] with time-reversal
    Kramers-pinned frames at both endpoints, value in {0, 2} mod 4.  Pinned
    endpoint frames are unique up to determinant-one (quaternionic) gauges,
    so the product of frame overlaps is gauge invariant.
    """
    if ti.cls not in (SymmetryClass.D, SymmetryClass.DIII):
        raise NotChiral(f"phase index is defined for classes D and DIII, not {ti.cls.value}")
    validate_ti(ti, tol=tol)
    n = n_k
    while True:
        try:
            value, raw, residual = _berry_once(ti, n, tol)
        except _Refine:
            if n >= MAX_MOMENTUM_SAMPLES:
                raise NonIntegerInvariant(f"phase index did not stabilize at {n} samples")
            n *= 2
            continue
        return InvariantReport(value, raw, residual, n)


class _Refine(Exception):
    pass


def _berry_once(ti: TIWalk, n: int, tol: Tolerances) -> tuple[IndexValue, float, float]:
    if ti.cls is SymmetryClass.D:
        ks = -np.pi + 2 * np.pi * np.arange(n) / n
        bases = [_band_basis(ti, k, None, tol) for k in ks]
        rank = bases[0].shape[1]
        for b in bases:
            if b.shape[1] != rank:
                raise RankJump("upper band rank changes across the momentum grid")
        bases.append(bases[0])  # closed loop; shared frame cancels its gauge
    else:
        ks = np.pi * np.arange(n + 1) / n
        bases = [_band_basis(ti, k, None, tol) for k in ks]
        rank = bases[0].shape[1]
        for b in bases:
            if b.shape[1] != rank:
                raise RankJump("upper band rank changes across the momentum grid")
        tau = ti.cell_rep.ops["tau"]
        bases[0] = _kramers_frame(tau, bases[0])
        bases[-1] = _kramers_frame(tau, bases[-1])
    prod = 1.0 + 0j
    for b0, b1 in zip(bases[:-1], bases[1:]):
        d = np.linalg.det(b0.conj().T @ b1)
        if abs(d) < 0.3:
            raise _Refine
        prod *= d / abs(d)
    phase = float(np.angle(prod))
    if ti.cls is SymmetryClass.D:
        raw = phase / np.pi
        nearest = round(raw)
        residual = abs(raw - nearest)
        if residual > tol.integer_residual:
            raise _Refine
        return IndexValue(IndexGroup.Z2, nearest % 2), raw, residual
    raw = 2 * phase / np.pi
    nearest = 2 * round(raw / 2)
    residual = abs(raw - nearest)
    if residual > tol.integer_residual:
        raise _Refine
    return IndexValue(IndexGroup.TWO_Z2, nearest % 4), raw, residual


def _kramers_frame(tau: SymmetryOperator, basis: np.ndarray) -> np.ndarray:
    """Reorder a band frame into Kramers pairs (v, tau v).

    The compressed time reversal squares to -1 on the band space, so such a
    frame exists and is unique up to a determinant-one change of frame.
    """
    sub = tau.restrict(basis)
    v, w = kramers_pairs(sub, np.eye(basis.shape[1], dtype=complex))
    cols = []
    for j in range(v.shape[1]):
        cols.extend([v[:, j], w[:, j]])
    return basis @ np.column_stack(cols)


def ti_gap_margin(
    ti: TIWalk,
    n_k: int = 256,
    tol: Tolerances = DEFAULT_TOL,
    strict: bool = True,
) -> float:
    """Distance of the Bloch spectrum from {+1, -1} over the momentum grid.

    The grid is doubled until the margin stabilizes to 1%; raises Gapless
    below ``tol.gap`` unless ``strict=False``.
    """
    n = max(n_k, 64)
    prev: float | None = None
    while True:
        margin = np.inf
        for k in -np.pi + 2 * np.pi * np.arange(n) / n:
            vals = np.linalg.eigvals(ti.bloch(k))
            margin = min(margin, float(np.min(np.abs(vals - 1))), float(np.min(np.abs(vals + 1))))
        if prev is not None and (abs(margin - prev) <= 0.01 * max(prev, 1e-12) or n >= MAX_MOMENTUM_SAMPLES):
            break
        prev = margin
        n *= 2
    if strict and margin < tol.gap:
        raise Gapless(f"essential gap margin {margin:.3e} below {tol.gap}")
    return margin


# -- finite realizations -----------------------------------------------------------

def factor_matrices(
    factors: Sequence[Factor | Sequence[np.ndarray]],
    cells: CellStructure,
) -> list[np.ndarray]:
    """Position-space matrices of factors on a circle of cells.

    A factor may be a ``ShiftFactor``, a ``CoinFactor`` (same coin in every
    cell), or a sequence of per-cell coin matrices.
    """
    n = cells.n_cells
    d = cells.total_dim
    out = []
    for f in factors:
        m = np.zeros((d, d), dtype=complex)
        if isinstance(f, ShiftFactor):
            if cells.topology != "circle":
                raise TooShort("shift factors need a circle; decouple afterwards for segments")
            for x in range(n):
                tgt = (x + f.step) % n
                src_sl = cells.cell_slice(x)
                tgt_sl = cells.cell_slice(tgt)
                for c in range(cells.cell_dims[x]):
                    if c in f.components:
                        m[tgt_sl.start + c, src_sl.start + c] = 1.0
                    else:
                        m[src_sl.start + c, src_sl.start + c] = 1.0
        else:
            coins = [f.matrix] * n if isinstance(f, CoinFactor) else list(f)
            for x in range(n):
                sl = cells.cell_slice(x)
                m[sl, sl] = coins[x]
        out.append(m)
    return out


def build_lattice(
    ti: TIWalk,
    n_cells: int,
    topology: str = "circle",
    tol: Tolerances = DEFAULT_TOL,
) -> LatticeOperator:
    """Realize a walk on a circle (exactly unitary) or a line segment.

    The segment is the compression of the infinite operator: hopping past the
    ends is dropped, so it is unitary only up to boundary defects and its ends
    are proxy ends.  For an exactly unitary segment decouple a circle instead.
    """
    band = ti.band
    if topology == "circle" and n_cells <= 2 * band:
        raise TooShort(f"circle of {n_cells} cells aliases hopping range {band}")
    if topology == "line" and n_cells < band + 1:
        raise TooShort(f"segment of {n_cells} cells is shorter than the hopping range {band}")
    cells = CellStructure.uniform(n_cells, ti.cell_dim, topology)
    d = cells.total_dim
    w = np.zeros((d, d), dtype=complex)
    for j, b in ti.blocks.items():
        for x in range(n_cells):
            y = x + j
            if topology == "circle":
                y %= n_cells
            elif not 0 <= y < n_cells:
                continue
            w[cells.cell_slice(y), cells.cell_slice(x)] += b
    local_rep = LocalSymmetryRep.uniform(ti.cell_rep, n_cells)
    meta = {"ti_name": ti.name, "params": dict(ti.params), "class": ti.cls.value}
    op = LatticeOperator(w, cells, band, local_rep, meta)
    if topology == "circle":
        check_unitary(w, tol, what="circle realization")
        check_admissible(w, local_rep.assembled(), kind="walk", tol=tol)
    return op


def truncate_ti(
    ti: TIWalk,
    n_cells: int,
    boundary: str = "compress",
    tol: Tolerances = DEFAULT_TOL,
) -> LatticeOperator:
    """Finite segment of a walk.

    ``compress``: plain restriction of the infinite banded matrix (essentially
    unitary; both ends are proxy ends).  ``decoupled_unitary``: realize the
    walk on a padded circle, gently decouple the segment boundary, and extract
    the exactly unitary block.
    """
    if n_cells < 2 * ti.band + 2:
        raise TooShort(f"{n_cells} cells < 2*band+2 = {2 * ti.band + 2}")
    if boundary == "compress":
        return build_lattice(ti, n_cells, "line", tol)
    if boundary != "decoupled_unitary":
        raise ValueError(f"boundary must be 'compress' or 'decoupled_unitary', got {boundary!r}")
    from .decoupling import decouple_segment  # deferred: decoupling sits above walks

    pad = max(2 * ti.band + 2, 4)
    ring = build_lattice(ti, n_cells + pad, "circle", tol)
    return decouple_segment(ring, n_cells, tol)


def skeletons_match(a: TIWalk, b: TIWalk) -> bool:
    """Whether two walks share factor structure and cell representation.

    Only then can they be joined at coin level into one admissible walk.
    """
    if a.factors is None or b.factors is None or a.cell_dim != b.cell_dim:
        return False
    if len(a.factors) != len(b.factors) or a.cls is not b.cls:
        return False
    for fa, fb in zip(a.factors, b.factors):
        if type(fa) is not type(fb):
            return False
        if isinstance(fa, ShiftFactor) and (fa.components != fb.components or fa.step != fb.step):
            return False
    if set(a.cell_rep.ops) != set(b.cell_rep.ops):
        return False
    for name in a.cell_rep.ops:
        oa, ob = a.cell_rep.ops[name], b.cell_rep.ops[name]
        if oa.antiunitary != ob.antiunitary or not np.allclose(oa.matrix, ob.matrix, atol=1e-12):
            return False
    return True
