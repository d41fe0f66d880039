"""Dense numerics for unitary operators.

Eigendecompositions of unitary matrices are computed through their commuting
Hermitian real and imaginary parts: eigenvectors of ``(W + W*)/2`` are
refined inside each degenerate cluster by diagonalizing the compression of
``(W - W*)/2i``.  This yields an orthonormal eigenbasis (guaranteed by
``eigh``) even for the conjugate-paired spectra of admissible walks, where a
general nonsymmetric solver can lose orthogonality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EigenFailure,
    GapViolation,
    NotAdmissible,
    NotNormal,
    NotUnitary,
    WindowAmbiguous,
)
from .symmetry import SymmetryRep
from .tolerances import DEFAULT_TOL, Tolerances


def _norm(x: np.ndarray) -> float:
    """Spectral norm; matrices here are small and O(1)."""
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))

__all__ = [
    "UnitaryEigen",
    "eig_unitary",
    "kernel_basis",
    "polar_isometry",
    "hermitian_part",
    "antihermitian_part",
    "imaginary_part",
    "check_unitary",
    "check_admissible",
    "AdmissibilityReport",
    "gap_margin",
    "GapReport",
    "spectral_flatten",
    "eigenspace_at",
    "check_normal",
    "admissible_hamiltonian_projection",
]


def check_unitary(w: np.ndarray, tol: Tolerances = DEFAULT_TOL, what: str = "operator") -> float:
    """Return the unitarity defect, raising ``NotUnitary`` above tolerance."""
    d = w.shape[0]
    defect = _norm(w.conj().T @ w - np.eye(d))
    if defect > tol.unit:
        raise NotUnitary(f"{what} has unitarity defect {defect:.3e} > {tol.unit}")
    return defect


@dataclass(frozen=True)
class UnitaryEigen:
    """Spectral data of a unitary matrix.

    ``vectors`` has orthonormal columns, ``values[j]`` belongs to column ``j``,
    sorted by phase in (-pi, pi].  ``residual = ||W V - V diag(values)||``.
    """

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    def phases(self) -> np.ndarray:
        return np.angle(self.values)


def eig_unitary(w: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> UnitaryEigen:
    """Orthonormal eigendecomposition of a unitary matrix."""
    w = np.asarray(w, dtype=complex)
    check_unitary(w, tol)
    d = w.shape[0]
    re = (w + w.conj().T) / 2
    im = (w - w.conj().T) / 2j
    a, v = np.linalg.eigh(re)
    # Refine within clusters of the real part; +-theta pairs share cos(theta).
    cluster_tol = 1e-8
    start = 0
    for stop in range(1, d + 1):
        if stop == d or a[stop] - a[stop - 1] > cluster_tol:
            if stop - start > 1:
                block = v[:, start:stop]
                sub = block.conj().T @ im @ block
                sub = (sub + sub.conj().T) / 2
                _, u = np.linalg.eigh(sub)
                v[:, start:stop] = block @ u
            start = stop
    values = np.einsum("ij,jk,ki->i", v.conj().T, w, v)
    order = np.argsort(np.angle(values), kind="stable")
    values = values[order]
    v = v[:, order]
    residual = _norm(w @ v - v * values[None, :])
    if residual > max(tol.eig, 1e-12 * d):
        raise EigenFailure(f"eigendecomposition residual {residual:.3e}")
    orth = _norm(v.conj().T @ v - np.eye(d))
    if orth > tol.orth:
        raise EigenFailure(f"eigenbasis orthonormality defect {orth:.3e}")
    return UnitaryEigen(values, v, residual)


def kernel_basis(m: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the (numerical) kernel via singular vectors.

    Singular values at or below ``tol * max(1, s_max)`` count as zero.
    """
    m = np.asarray(m, dtype=complex)
    if min(m.shape) == 0:
        return np.eye(m.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(m)
    cut = tol * max(1.0, float(s[0]) if s.size else 1.0)
    small = np.concatenate([s <= cut, np.ones(m.shape[1] - s.size, dtype=bool)])
    return vh.conj().T[:, small]


def polar_isometry(x: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Isometric factor of the polar decomposition, zero on the kernel.

    For ``x = u s v*`` (SVD) returns ``u_r v_r*`` over singular values above
    ``tol * max(1, s_max)``; the result is a partial isometry with initial
    space ``ker(x)^perp`` and final space ``ran(x)``.
    """
    u, s, vh = np.linalg.svd(np.asarray(x, dtype=complex))
    keep = s > tol * max(1.0, float(s[0]) if s.size else 1.0)
    return u[:, keep] @ vh[keep, :]


def hermitian_part(w: np.ndarray) -> np.ndarray:
    return (w + w.conj().T) / 2


def antihermitian_part(w: np.ndarray) -> np.ndarray:
    return (w - w.conj().T) / 2


def imaginary_part(w: np.ndarray) -> np.ndarray:
    """The Hermitian operator ``(W - W*)/2i``."""
    return (w - w.conj().T) / 2j


@dataclass(frozen=True)
class AdmissibilityReport:
    residuals: dict[str, float]
    max_residual: float
    ok: bool


def check_admissible(
    w: np.ndarray,
    rep: SymmetryRep,
    kind: str = "walk",
    tol: Tolerances = DEFAULT_TOL,
    strict: bool = True,
) -> AdmissibilityReport:
    """Residuals of the symmetry conditions for a walk or Hamiltonian.

    Walk: ``eta W eta^-1 = W``, ``tau W tau^-1 = W*``, ``gamma W gamma^-1 = W*``.
    Hamiltonian: right-hand sides ``-H, +H, -H``.
    """
    if kind not in ("walk", "hamiltonian"):
        raise ValueError(f"kind must be 'walk' or 'hamiltonian', got {kind!r}")
    w = np.asarray(w, dtype=complex)
    res: dict[str, float] = {}
    for name, op in rep.ops.items():
        moved = op.conjugate(w)
        if kind == "walk":
            target = w if name == "eta" else w.conj().T
        else:
            target = {"eta": -w, "tau": w, "gamma": -w}[name]
        res[name] = _norm(moved - target)
    worst = max(res.values(), default=0.0)
    ok = worst <= tol.adm
    if strict and not ok:
        key = max(res, key=res.get)
        raise NotAdmissible(f"symmetry condition for {key} violated: residual {res[key]:.3e}")
    return AdmissibilityReport(res, worst, ok)


@dataclass(frozen=True)
class GapReport:
    """Distance of the spectrum from a target phase.

    ``margin`` is the smallest ``|lambda - target|`` over eigenvalues that are
    not exactly at the target (within ``tol.exact``); ``exact_count`` is the
    number of those excluded eigenvalues.
    """

    target: complex
    margin: float
    exact_count: int


def gap_margin(
    w: np.ndarray,
    targets: tuple[complex, ...] = (1.0 + 0j, -1.0 + 0j),
    tol: Tolerances = DEFAULT_TOL,
) -> dict[complex, GapReport]:
    """Spectral distance of a unitary from each target phase."""
    check_unitary(np.asarray(w, dtype=complex), tol)
    vals = np.linalg.eigvals(np.asarray(w, dtype=complex))
    out: dict[complex, GapReport] = {}
    for t in targets:
        dist = np.abs(vals - t)
        exact = dist <= tol.exact
        rest = dist[~exact]
        margin = float(rest.min()) if rest.size else float(2.0)
        out[t] = GapReport(t, margin, int(exact.sum()))
    return out


def spectral_flatten(
    w: np.ndarray,
    eps: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[np.ndarray, dict[str, int]]:
    """Project all eigenvalues to ``{+1, -1, +i, -i}``.

    Eigenvalues within ``tol.exact`` of +-1 stay there; the rest must have
    ``|Im lambda| > eps`` (default ``tol.exact``) and move to ``sign(Im) i``.
    The map commutes with complex conjugation of eigenvalues, so walk
    admissibility is preserved.
    """
    if eps is None:
        eps = tol.exact
    eig = eig_unitary(w, tol)
    flat = np.empty_like(eig.values)
    counts = {"plus_one": 0, "minus_one": 0, "upper": 0, "lower": 0}
    for j, lam in enumerate(eig.values):
        if abs(lam - 1) <= tol.exact:
            flat[j] = 1.0
            counts["plus_one"] += 1
        elif abs(lam + 1) <= tol.exact:
            flat[j] = -1.0
            counts["minus_one"] += 1
        elif lam.imag > eps:
            flat[j] = 1j
            counts["upper"] += 1
        elif lam.imag < -eps:
            flat[j] = -1j
            counts["lower"] += 1
        else:
            raise GapViolation(
                f"eigenvalue {lam:.6g} sits in the gap region (|Im| <= {eps:.3g}, not at +-1)"
            )
    v = eig.vectors
    return v @ (flat[:, None] * v.conj().T), counts


def eigenspace_at(
    w: np.ndarray,
    target: complex,
    window: float = 1e-7,
    tol: Tolerances = DEFAULT_TOL,
    eig: UnitaryEigen | None = None,
) -> np.ndarray:
    """Orthonormal basis of the eigenspace within ``window`` radians of a phase.

    Raises ``WindowAmbiguous`` if some eigenvalue sits within ``10 * tol.eig``
    of the window edge, where membership is numerically undecidable.
    """
    if eig is None:
        eig = eig_unitary(w, tol)
    t = complex(target)
    if abs(abs(t) - 1) > 1e-9:
        raise ValueError(f"target {t} is not on the unit circle")
    delta = np.angle(eig.values * np.conj(t))
    inside = np.abs(delta) <= window
    edge = np.abs(np.abs(delta) - window)
    guard = 10 * tol.eig
    risky = (edge < guard) & (np.abs(delta) > guard)
    if np.any(risky):
        worst = float(np.min(edge[risky]))
        raise WindowAmbiguous(
            f"eigenvalue within {worst:.3e} rad of the selection window edge at {t:.3g}"
        )
    return eig.vectors[:, inside]


def admissible_hamiltonian_projection(k: np.ndarray, rep: SymmetryRep) -> np.ndarray:
    """Project a Hermitian matrix onto the admissible Hamiltonians of ``rep``.

    Averages ``K`` over the symmetry group with the Hamiltonian signs
    (eta: -, tau: +, gamma: -); the exponential ``exp(i H)`` of the result is
    an admissible walk.  Cell-local ``K`` stays cell-local because the
    operators are cell-local.
    """
    h = (np.asarray(k, dtype=complex) + np.asarray(k, dtype=complex).conj().T) / 2
    signs = {"eta": -1, "tau": +1, "gamma": -1}
    for name, op in rep.ops.items():
        h = (h + signs[name] * op.conjugate(h)) / 2
    return h


def check_normal(w: np.ndarray, tol: Tolerances = DEFAULT_TOL, strict: bool = True) -> float:
    """Commutator defect ``||W W* - W* W||`` of normality."""
    w = np.asarray(w, dtype=complex)
    defect = _norm(w @ w.conj().T - w.conj().T @ w)
    if strict and defect > tol.unit * 10:
        raise NotNormal(f"operator is not normal: defect {defect:.3e}")
    return defect
