"""Walk-level symmetry indices.

The central quantity is the symmetry index of the kernel of the imaginary
part ``(W - W*)/2i`` of an essentially unitary operator.  For an exactly
unitary walk that kernel is the direct sum of the eigenspaces at +1 and -1,
giving the pair ``si_pm``; compressing to a half space and excluding modes
attributed to proxy (truncation) ends gives the left/right half-space
indices.

Finite segments stand in for half-infinite systems.  Every function that
attributes modes to a cut does so by diagonalizing the weight of the mode
inside the proxy windows (the ``band + 1`` cells next to each proxy end) and
discarding modes that live there; a mode straddling a window boundary raises
``WindowAmbiguous`` instead of being silently assigned.

On a half-infinite lattice the kernel of the compressed imaginary part is
exact, but a finite segment clips the exponential tails of those modes, so
their eigenvalues sit slightly off zero while the rest of the spectrum keeps
an essential gap.  Kernel detection therefore accepts, besides hard zeros, a
magnitude cluster separated from the remaining spectrum by a large ratio and
lying under an absolute ceiling.  Symmetry makes this safe: every admissible
symmetry pairs the +e and -e eigenspaces of the imaginary part, a magnitude
sort can never split such a pair, and a fully included balanced pair
contributes zero to the index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CutOutOfRange,
    IncompatibleCells,
    NonIntegerInvariant,
    NonIntegerTrace,
    NotAdmissible,
    NotDecoupled,
    Obstructed,
    TooShort,
    WindowAmbiguous,
)
from .lattice import (
    CellStructure,
    LatticeOperator,
    arc_projection,
    cells_near_bond,
    compress,
    half_space_projection,
    split_by_weight,
)
from .operators import (
    check_admissible,
    check_unitary,
    eig_unitary,
    eigenspace_at,
    imaginary_part,
    kernel_basis,
)
from .symmetry import (
    IndexValue,
    SymmetryClass,
    SymmetryOperator,
    SymmetryRep,
    balanced_hamiltonian,
    rep_index,
)
from .tolerances import DEFAULT_TOL, Tolerances
from .walks import TIWalk, berry_phase, ti_gap_margin, winding_number

__all__ = [
    "si_pm",
    "si_total",
    "si_left_right",
    "fredholm_index",
    "FredholmReport",
    "twiddle_rep",
    "relative_index",
    "verify_locpert",
    "PerturbationReport",
    "contract_perturbation",
    "bulk_right_index",
    "verify_bulk_boundary",
    "BulkBoundaryReport",
    "index_matrix",
    "IndexMatrix",
]

CHIRAL_UNITARY = (SymmetryClass.AIII, SymmetryClass.BDI, SymmetryClass.CII)

# Essential-gap kernel detection: a magnitude cluster counts as the kernel of
# a compressed imaginary part when it lies under the ceiling and the next
# eigenvalue above it is at least the ratio times larger.
ESSENTIAL_KERNEL_CEILING = 0.1
ESSENTIAL_KERNEL_RATIO = 5.0


def _essential_kernel(h: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Eigenvectors of a Hermitian matrix converging to its half-space kernel.

    Hard zeros (below ``tol.ker`` relative to scale) always count.  On top of
    those, the largest magnitude cluster below ``ESSENTIAL_KERNEL_CEILING``
    that is separated from the rest of the spectrum by a factor of at least
    ``ESSENTIAL_KERNEL_RATIO`` is accepted as the finite-size image of an
    exact kernel whose tails leak through the truncation end.
    """
    vals, vecs = np.linalg.eigh(h)
    mag = np.abs(vals)
    order = np.argsort(mag)
    mag = mag[order]
    n = mag.size
    scale = max(1.0, float(mag[-1])) if n else 1.0
    count = int(np.sum(mag <= tol.ker * scale))
    for j in range(n - 1, count, -1):
        if mag[j - 1] > ESSENTIAL_KERNEL_CEILING:
            continue
        if mag[j] >= ESSENTIAL_KERNEL_RATIO * max(mag[j - 1], tol.ker * scale):
            count = j
            break
    return vecs[:, order[:count]]


def _matrix_rep(w, rep: SymmetryRep | None) -> tuple[np.ndarray, SymmetryRep]:
    if isinstance(w, LatticeOperator):
        m = w.matrix
        r = rep if rep is not None else w.rep()
    else:
        m = np.asarray(w, dtype=complex)
        r = rep
    if r is None:
        raise NotAdmissible("no symmetry representation supplied or attached")
    return m, r


def _proxy_members(cells: CellStructure, band: int, radius: int | None = None) -> tuple[int, ...]:
    """Cells inside the exclusion window of each proxy end."""
    r = band + 1 if radius is None else radius
    n = cells.n_cells
    members: set[int] = set()
    if "left" in cells.proxy_ends:
        members.update(range(min(r, n)))
    if "right" in cells.proxy_ends:
        members.update(range(max(0, n - r), n))
    return tuple(sorted(members))


def _split_once(
    basis: np.ndarray,
    cells: CellStructure,
    members: tuple[int, ...],
    what: str,
) -> np.ndarray:
    """Split a subspace by weight in the given cells and keep the outside part."""
    inside, outside, weights, n_amb = split_by_weight(basis, cells, members)
    if n_amb:
        raise WindowAmbiguous(
            f"{n_amb} {what} mode(s) straddle the proxy window "
            f"(weights {np.round(weights, 3).tolist()})"
        )
    return outside


def _drop_window(
    basis: np.ndarray,
    cells: CellStructure,
    band: int,
    what: str,
    radius: int | None = None,
) -> np.ndarray:
    """Drop the part of a subspace attributed to the proxy ends.

    Boundary modes of generic gapped walks decay on a localization length
    that can exceed the band, so no fixed window is safe: too narrow leaves
    part of an end mode outside, too wide can bisect a balanced pair created
    by a perturbation deeper in the segment.  With ``radius`` unset the
    window therefore scans from ``band + 1`` cells to half the segment and
    every radius with an unambiguous split must yield the same dropped
    subspace.  End modes resolve once the window contains their tail and
    the split then stays put, while a subspace straddling some window edge
    changes the split between radii and is refused rather than cut.
    """
    if basis.shape[1] == 0:
        return basis
    if radius is not None:
        members = _proxy_members(cells, band, radius)
        return _split_once(basis, cells, members, what) if members else basis
    if not _proxy_members(cells, band):
        return basis
    n = cells.n_cells
    r_lo = band + 1
    # with proxies at both ends the windows must never tile the whole piece,
    # or modes legitimately living in the middle would be absorbed
    r_hi = (n - 1) // 2 if len(cells.proxy_ends) == 2 else (n + 1) // 2
    if r_hi < r_lo:
        return _split_once(basis, cells, _proxy_members(cells, band), what)
    kept: np.ndarray | None = None
    dropped: np.ndarray | None = None
    for r in range(r_lo, r_hi + 1):
        members = _proxy_members(cells, band, r)
        inside, outside, weights, n_amb = split_by_weight(basis, cells, members)
        if n_amb:
            continue
        proj = inside @ inside.conj().T
        if dropped is None:
            kept, dropped = outside, proj
        elif np.linalg.norm(proj - dropped, 2) > 1e-8:
            raise WindowAmbiguous(
                f"attribution of {what} modes to the proxy ends depends on "
                f"the window radius (radii {r_lo}..{r_hi})"
            )
    if kept is None:
        raise WindowAmbiguous(
            f"{what} modes straddle every proxy window (radii {r_lo}..{r_hi})"
        )
    return kept


def _restricted_index(
    rep: SymmetryRep, basis: np.ndarray, tol: Tolerances
) -> IndexValue:
    if basis.shape[1] == 0:
        return IndexValue.zero(rep.cls.index_group)
    return rep_index(rep.restrict(basis, tol), tol)


# -- si of eigenspaces -------------------------------------------------------------


def si_pm(
    w,
    rep: SymmetryRep | None = None,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[IndexValue, IndexValue]:
    """Symmetry indices of the -1 and +1 eigenspaces of a unitary walk.

    Returns ``(si_minus, si_plus)``.  Cross-checked against the closed forms
    available per class: ``si_pm = tr(gamma (1 +- W))/2`` for the unitary
    chiral classes and the determinant parity ``det W = (-1)^{si_minus}`` in
    class D.
    """
    m, r = _matrix_rep(w, rep)
    check_unitary(m, tol)
    check_admissible(m, r, kind="walk", tol=tol)
    eig = eig_unitary(m, tol)
    minus = eigenspace_at(m, -1.0, window, tol, eig)
    plus = eigenspace_at(m, 1.0, window, tol, eig)
    si_minus = _restricted_index(r, minus, tol)
    si_plus = _restricted_index(r, plus, tol)
    if r.cls in CHIRAL_UNITARY:
        g = r.ops["gamma"].matrix
        eye = np.eye(m.shape[0])
        for sign, got in ((-1.0, si_minus), (+1.0, si_plus)):
            t = complex(np.trace(g @ (eye + sign * m))) / 2
            if abs(t - int(got)) > tol.idx:
                raise NonIntegerTrace(
                    f"eigenspace index {int(got)} disagrees with "
                    f"tr(gamma(1{sign:+.0f}W))/2 = {t:.6g}"
                )
    elif r.cls is SymmetryClass.D:
        det = complex(np.linalg.det(m))
        if abs(det - (-1.0) ** int(si_minus)) > 1e-6:
            raise NonIntegerTrace(
                f"det W = {det:.6g} disagrees with parity of si_minus = {int(si_minus)}"
            )
    return si_minus, si_plus


def si_total(
    w,
    rep: SymmetryRep | None = None,
    ker_tol: float | None = None,
    exclude_proxy: bool = True,
    window_radius: int | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> IndexValue:
    """Symmetry index of an essentially unitary operator.

    The index of the representation restricted to the kernel of the imaginary
    part.  For a ``LatticeOperator`` with proxy ends, kernel modes living in
    the proxy windows are truncation artifacts and are excluded (disable with
    ``exclude_proxy=False``).

    By default the kernel is detected by the essential-gap rule (see the
    module docstring), so boundary modes whose tails are clipped by a finite
    truncation are still counted.  Passing ``ker_tol`` replaces that rule
    with a plain singular-value threshold.
    """
    m, r = _matrix_rep(w, rep)
    check_admissible(m, r, kind="walk", tol=tol)
    if ker_tol is None:
        ker = _essential_kernel(imaginary_part(m), tol)
    else:
        ker = kernel_basis(imaginary_part(m), ker_tol)
    if (
        exclude_proxy
        and isinstance(w, LatticeOperator)
        and w.cells.proxy_ends
        and ker.shape[1]
    ):
        ker = _drop_window(ker, w.cells, w.band, "kernel", window_radius)
    return _restricted_index(r, ker, tol)


def si_left_right(
    w: LatticeOperator,
    a: int,
    rep: SymmetryRep | None = None,
    second_cut: int | None = None,
    ker_tol: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[IndexValue, IndexValue]:
    """Left and right half-space indices of a banded walk at the cut ``a``.

    Each half space is compressed and measured by :func:`si_total`, so modes
    at the far (proxy) end of each piece are excluded and only modes created
    at the cut count.  On a circle a second cut (default: antipodal) makes
    the pieces finite; its two ends are marked as proxies.
    """
    if not isinstance(w, LatticeOperator):
        raise IncompatibleCells("half-space indices need a cell-structured operator")
    cells = w.cells
    n = cells.n_cells
    if cells.topology == "line":
        left = compress(w, half_space_projection(cells, a, side="lt"))
        right = compress(w, half_space_projection(cells, a, side="geq"))
    else:
        b = (a + n // 2) % n if second_cut is None else second_cut % n
        if b == a % n:
            raise CutOutOfRange("second cut coincides with the first")
        right = _mark_proxy(compress(w, arc_projection(cells, a, b)), {"right"})
        left = _mark_proxy(compress(w, arc_projection(cells, b, a)), {"left"})
    for piece in (left, right):
        if piece.cells.n_cells < w.band + 2:
            raise TooShort(
                f"half-space piece of {piece.cells.n_cells} cells cannot separate "
                f"the cut from the proxy window (band {w.band})"
            )
    si_left = si_total(left, rep, ker_tol=ker_tol, tol=tol)
    si_right = si_total(right, rep, ker_tol=ker_tol, tol=tol)
    return si_left, si_right


def _mark_proxy(op: LatticeOperator, ends: set[str]) -> LatticeOperator:
    cells = op.cells
    marked = CellStructure(
        cells.cell_dims,
        cells.topology,
        cells.x_min,
        frozenset(set(cells.proxy_ends) | ends),
    )
    return LatticeOperator(op.matrix, marked, op.band, op.local_rep, dict(op.meta))


# -- Fredholm index ----------------------------------------------------------------


@dataclass(frozen=True)
class FredholmReport:
    """Kernel-count and windowed-trace routes to the half-space Fredholm index."""

    index: int
    kernel_dim: int
    cokernel_dim: int
    trace_route: float
    cut: int

    def __int__(self) -> int:
        return self.index


def fredholm_index(
    w: LatticeOperator,
    a: int,
    ker_tol: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> FredholmReport:
    """Index of the compression of a unitary walk to the half space ``>= a``.

    ``dim ker(PWP) - dim ker(PW*P)`` with far-end (proxy) kernel modes
    excluded, cross-checked against the trace of ``W P W* - P`` over the
    cells within ``2 * band`` of the cut (all its nonzero diagonal lives
    there for banded unitary ``W``).
    """
    if not isinstance(w, LatticeOperator) or w.cells.topology != "line":
        raise IncompatibleCells("the Fredholm index needs a line segment")
    piece = compress(w, half_space_projection(w.cells, a, side="geq"))
    kt = tol.ker if ker_tol is None else ker_tol
    dims = []
    for m in (piece.matrix, piece.matrix.conj().T):
        ker = _drop_window(kernel_basis(m, kt), piece.cells, w.band, "kernel")
        dims.append(ker.shape[1])
    kernel_dim, cokernel_dim = dims
    index = kernel_dim - cokernel_dim

    p = w.cells.index_mask(range(a, w.cells.n_cells)).astype(float)
    diff = (w.matrix * p[None, :]) @ w.matrix.conj().T - np.diag(p)
    window = w.cells.index_mask(cells_near_bond(w.cells, a, max(2 * w.band, 1)))
    trace = float(np.real(np.sum(np.diag(diff)[window])))
    if abs(trace - index) > tol.idx:
        raise NonIntegerInvariant(
            f"kernel route {index} and windowed trace {trace:.6g} disagree"
        )
    return FredholmReport(index, kernel_dim, cokernel_dim, trace, a)


# -- relative index of perturbations ------------------------------------------------


def twiddle_rep(w, rep: SymmetryRep | None = None, tol: Tolerances = DEFAULT_TOL) -> SymmetryRep:
    """The companion representation with the walk folded into the operators.

    Keeps ``eta`` and replaces ``tau -> W tau``, ``gamma -> W gamma``; the
    result is a representation of the same class, and a unitary ``V``
    commuting with ``W`` up to finite rank is admissible for it whenever
    ``VW`` is admissible for the original.
    """
    m, r = _matrix_rep(w, rep)
    check_unitary(m, tol)
    check_admissible(m, r, kind="walk", tol=tol)
    ops = {}
    for name, op in r.ops.items():
        if name == "eta":
            ops[name] = op
        else:
            ops[name] = SymmetryOperator(m @ op.matrix, op.antiunitary)
    out = SymmetryRep(r.cls, ops, r.dim)
    out.validate(tol, strict=True)
    return out


def relative_index(
    w,
    w_prime,
    rep: SymmetryRep | None = None,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> IndexValue:
    """Index of a gentle perturbation ``W -> W'``.

    The index of the companion (twiddle) representation on the -1-eigenspace
    of ``V = W' W*``; zero exactly when the perturbation can be contracted
    back to the identity through admissible unitaries.
    """
    m, r = _matrix_rep(w, rep)
    mp, _ = _matrix_rep(w_prime, rep if rep is not None else r)
    check_unitary(mp, tol)
    check_admissible(mp, r, kind="walk", tol=tol)
    trep = twiddle_rep(m, r, tol)
    v = mp @ m.conj().T
    minus = eigenspace_at(v, -1.0, window, tol)
    return _restricted_index(trep, minus, tol)


@dataclass(frozen=True)
class PerturbationReport:
    """Both sides of the relative-index identities for a perturbation."""

    relative: IndexValue
    si_minus_before: IndexValue
    si_minus_after: IndexValue
    si_plus_before: IndexValue
    si_plus_after: IndexValue

    @property
    def minus_identity_ok(self) -> bool:
        return self.relative == self.si_minus_after - self.si_minus_before

    @property
    def plus_identity_ok(self) -> bool:
        return self.relative == -(self.si_plus_after - self.si_plus_before)

    @property
    def ok(self) -> bool:
        return self.minus_identity_ok and self.plus_identity_ok


def verify_locpert(
    w,
    w_prime,
    rep: SymmetryRep | None = None,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> PerturbationReport:
    """Check that the relative index matches the change of si_pm.

    The relative index of ``W -> W'`` equals ``si_minus(W') - si_minus(W)``
    and ``-(si_plus(W') - si_plus(W))``, as exact group identities.
    """
    _, r = _matrix_rep(w, rep)
    rel = relative_index(w, w_prime, r, window, tol)
    m_before, p_before = si_pm(w, r, window, tol)
    m_after, p_after = si_pm(w_prime, r, window, tol)
    return PerturbationReport(rel, m_before, m_after, p_before, p_after)


def contract_perturbation(
    v,
    trep: SymmetryRep,
    steps: int = 16,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> list[np.ndarray]:
    """A path of admissible unitaries from ``V`` to the identity.

    Requires the index of ``trep`` on the -1-eigenspace of ``V`` to vanish
    (``Obstructed`` otherwise).  Conjugate eigenvalue pairs rotate along the
    shorter arc to +1; the balanced -1-eigenspace moves through ``exp(i pi
    (1-t) H)`` with ``H`` a gapped admissible generator, staying clear of -1.
    Returns ``steps + 1`` samples, each verified unitary and admissible.
    """
    m = np.asarray(v, dtype=complex)
    check_unitary(m, tol)
    check_admissible(m, trep, kind="walk", tol=tol)
    eig = eig_unitary(m, tol)
    phases = np.angle(eig.values)
    at_minus = np.abs(np.abs(phases) - np.pi) <= window
    minus_basis = eig.vectors[:, at_minus]
    rotating = eig.vectors[:, ~at_minus]
    rot_phases = phases[~at_minus]

    obstruction = _restricted_index(trep, minus_basis, tol)
    if int(obstruction) != 0:
        raise Obstructed(
            f"-1-eigenspace carries index {obstruction}; no admissible contraction exists"
        )
    if minus_basis.shape[1]:
        h_small = balanced_hamiltonian(trep.restrict(minus_basis, tol), tol)
    else:
        h_small = np.zeros((0, 0), dtype=complex)

    path = []
    for t in np.linspace(0.0, 1.0, steps + 1):
        sample = rotating @ (np.exp(1j * (1 - t) * rot_phases)[:, None] * rotating.conj().T)
        if minus_basis.shape[1]:
            d = minus_basis.shape[1]
            block_angle = np.pi * (1 - t)
            block = np.cos(block_angle) * np.eye(d) + 1j * np.sin(block_angle) * h_small
            sample = sample + minus_basis @ block @ minus_basis.conj().T
        check_unitary(sample, tol, what=f"path sample t={t:.3f}")
        check_admissible(sample, trep, kind="walk", tol=tol)
        path.append(sample)
    return path


# -- bulk-boundary correspondence ----------------------------------------------------


def bulk_right_index(ti: TIWalk, tol: Tolerances = DEFAULT_TOL) -> IndexValue:
    """Right half-space index of a gapped translation-invariant walk.

    Computed in momentum space: winding number for the unitarily chiral
    classes, band-frame phase for D and DIII, and the zero element for the
    classes with trivial index group.
    """
    if ti.cls in CHIRAL_UNITARY:
        return winding_number(ti, tol=tol).value
    if ti.cls in (SymmetryClass.D, SymmetryClass.DIII):
        return berry_phase(ti, tol=tol).value
    ti_gap_margin(ti, tol=tol, strict=True)
    return IndexValue.zero(ti.cls.index_group)


@dataclass(frozen=True)
class BulkBoundaryReport:
    """Interface index versus the difference of bulk indices."""

    si_right_left_bulk: IndexValue
    si_right_right_bulk: IndexValue
    expected: IndexValue
    measured: IndexValue
    protected_dim: int
    window: float

    @property
    def dimension_bound_ok(self) -> bool:
        return self.protected_dim >= abs(int(self.expected))

    @property
    def ok(self) -> bool:
        return self.measured == self.expected and self.dimension_bound_ok


def verify_bulk_boundary(
    left: TIWalk,
    right: TIWalk,
    joined: LatticeOperator,
    rep: SymmetryRep | None = None,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> BulkBoundaryReport:
    """Compare the interface index of a joined walk with its bulk prediction.

    The interface must host symmetry-protected eigenvalues carrying index
    ``si_right(right bulk) - si_right(left bulk)``; the joined operator is a
    segment whose outer ends are proxies, so near-(+-1) modes inside the
    proxy windows are excluded and the rest are attributed to the interface.
    ``window`` is the eigenphase radius counted as protected; widen it for
    finite systems whose boundary eigenvalues have not fully converged.
    """
    if left.cls is not right.cls:
        raise IncompatibleCells(
            f"bulk classes {left.cls.value} and {right.cls.value} differ"
        )
    if joined.cells.topology != "line":
        raise IncompatibleCells(
            "interface attribution needs a segment; on a circle every arc has two interfaces"
        )
    sir_left = bulk_right_index(left, tol)
    sir_right = bulk_right_index(right, tol)
    expected = sir_right - sir_left

    m, r = _matrix_rep(joined, rep)
    check_unitary(m, tol)
    check_admissible(m, r, kind="walk", tol=tol)
    eig = eig_unitary(m, tol)
    phases = np.angle(eig.values)
    near = (np.abs(phases) <= window) | (np.abs(np.abs(phases) - np.pi) <= window)
    basis = eig.vectors[:, near]
    basis = _drop_window(basis, joined.cells, joined.band, "protected")
    measured = _restricted_index(r, basis, tol)
    return BulkBoundaryReport(
        sir_left, sir_right, expected, measured, basis.shape[1], window
    )


# -- the 2x2 index table of a decoupled walk -----------------------------------------


@dataclass(frozen=True)
class IndexMatrix:
    """si of each eigenvalue/side pair for a walk decoupled at a cut.

    Rows are the -1 and +1 eigenspaces, columns the left and right blocks;
    marginals recover si_pm (rows), the half-space indices (columns), and
    the total.
    """

    si_minus_left: IndexValue
    si_minus_right: IndexValue
    si_plus_left: IndexValue
    si_plus_right: IndexValue

    @property
    def si_minus(self) -> IndexValue:
        return self.si_minus_left + self.si_minus_right

    @property
    def si_plus(self) -> IndexValue:
        return self.si_plus_left + self.si_plus_right

    @property
    def si_left(self) -> IndexValue:
        return self.si_minus_left + self.si_plus_left

    @property
    def si_right(self) -> IndexValue:
        return self.si_minus_right + self.si_plus_right

    @property
    def total(self) -> IndexValue:
        return self.si_left + self.si_right

    def as_table(self) -> dict[str, int]:
        return {
            "minus_left": int(self.si_minus_left),
            "minus_right": int(self.si_minus_right),
            "plus_left": int(self.si_plus_left),
            "plus_right": int(self.si_plus_right),
        }


def index_matrix(
    w: LatticeOperator,
    a: int,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
) -> IndexMatrix:
    """The 2x2 table of indices of a walk that is decoupled at cut ``a``.

    Requires ``W`` to commute with the half-space projection (each block is
    then unitary) and to carry a cell-local representation, which restricts
    to each block.  Within each block, +-1 eigenmodes in the far proxy
    window are excluded, so the entries are the cut's own contributions.
    """
    if not isinstance(w, LatticeOperator) or w.cells.topology != "line":
        raise IncompatibleCells("the index table needs a decoupled line segment")
    p = w.cells.index_mask(range(a, w.cells.n_cells)).astype(float)
    comm = float(np.linalg.norm(w.matrix * p[None, :] - p[:, None] * w.matrix, 2))
    if comm > max(tol.band, 1e-11):
        raise NotDecoupled(
            f"walk does not commute with the half-space projection at {a}: "
            f"residual {comm:.3e}"
        )
    pieces = {
        "left": compress(w, half_space_projection(w.cells, a, side="lt")),
        "right": compress(w, half_space_projection(w.cells, a, side="geq")),
    }
    local = w.local_rep
    entries: dict[str, IndexValue] = {}
    for side, piece in pieces.items():
        check_unitary(piece.matrix, tol, what=f"{side} block")
        prep = (
            local.restrict_cells(piece.meta["parent_cells"]).assembled()
            if local is not None
            else None
        )
        if prep is None:
            raise NotAdmissible("the index table needs a cell-local representation")
        eig = eig_unitary(piece.matrix, tol)
        for name, target in (("minus", -1.0), ("plus", 1.0)):
            basis = eigenspace_at(piece.matrix, target, window, tol, eig)
            basis = _drop_window(basis, piece.cells, w.band, f"{side} {name}")
            entries[f"{name}_{side}"] = _restricted_index(prep, basis, tol)
    return IndexMatrix(
        entries["minus_left"],
        entries["minus_right"],
        entries["plus_left"],
        entries["plus_right"],
    )
