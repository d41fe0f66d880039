"""Construction helpers shared across the test suite.

Random representations are produced by conjugating a hand-checked normal form
with a Haar unitary, which preserves the defining relations and the index
exactly.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from walkindex.operators import admissible_hamiltonian_projection
from walkindex.symmetry import SymmetryClass, SymmetryRep

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def haar_unitary(gen: np.random.Generator, d: int) -> np.ndarray:
    z = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def symplectic_j(d: int) -> np.ndarray:
    """Block matrix [[0, -1], [1, 0]] acting on consecutive pairs."""
    assert d % 2 == 0
    j = np.zeros((d, d))
    for k in range(0, d, 2):
        j[k, k + 1] = -1.0
        j[k + 1, k] = 1.0
    return j


def normal_form_rep(cls: SymmetryClass, p: int = 1, q: int = 1) -> SymmetryRep:
    """A hand-verified representation of each class.

    For the chiral classes ``p``/``q`` are the chiral sector dimensions
    (pairs for CII); for D/AI the dimension is ``p``; for C/AII/CI/DIII
    the dimension is ``2p``.
    """
    C = SymmetryClass
    if cls is C.A:
        return SymmetryRep.from_matrices(cls, p)
    if cls is C.D:
        return SymmetryRep.from_matrices(cls, p, eta=np.eye(p))
    if cls is C.AI:
        return SymmetryRep.from_matrices(cls, p, tau=np.eye(p))
    if cls is C.C:
        return SymmetryRep.from_matrices(cls, 2 * p, eta=symplectic_j(2 * p))
    if cls is C.AII:
        return SymmetryRep.from_matrices(cls, 2 * p, tau=symplectic_j(2 * p))
    if cls is C.AIII:
        g = np.diag([1.0] * p + [-1.0] * q)
        return SymmetryRep.from_matrices(cls, p + q, gamma=g)
    if cls is C.BDI:
        g = np.diag([1.0] * p + [-1.0] * q)
        return SymmetryRep.from_matrices(cls, p + q, eta=g, tau=np.eye(p + q), gamma=g)
    if cls is C.CI:
        j = symplectic_j(2 * p)
        return SymmetryRep.from_matrices(cls, 2 * p, eta=j, tau=np.eye(2 * p), gamma=j)
    if cls is C.CII:
        d = 2 * p + 2 * q
        g = np.diag([1.0] * (2 * p) + [-1.0] * (2 * q))
        t = np.zeros((d, d))
        t[: 2 * p, : 2 * p] = symplectic_j(2 * p)
        t[2 * p :, 2 * p :] = symplectic_j(2 * q)
        return SymmetryRep.from_matrices(cls, d, eta=-g @ t, tau=t, gamma=g)
    if cls is C.DIII:
        j = symplectic_j(2 * p)
        return SymmetryRep.from_matrices(cls, 2 * p, eta=np.eye(2 * p), tau=j, gamma=j)
    raise ValueError(cls)


def random_rep(cls: SymmetryClass, gen: np.random.Generator, p: int = 1, q: int = 1) -> SymmetryRep:
    base = normal_form_rep(cls, p, q)
    return base.conjugated(haar_unitary(gen, base.dim))


def random_admissible_hamiltonian(rep: SymmetryRep, gen: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    k = gen.normal(size=(rep.dim, rep.dim)) + 1j * gen.normal(size=(rep.dim, rep.dim))
    return scale * admissible_hamiltonian_projection(k, rep)


def random_admissible_walk(rep: SymmetryRep, gen: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """A random admissible unitary, gapless in general."""
    return expm(1j * random_admissible_hamiltonian(rep, gen, scale))


ALL_CLASSES = list(SymmetryClass)

CHIRAL_PLUS = [SymmetryClass.AIII, SymmetryClass.BDI, SymmetryClass.CII]
