"""Canonical gentle decoupling: projection pairs, transfer swaps, segments.

Expected values are frozen from the exactly solvable walks: the generating
example transfers one state per bond and its correction parks both defect
eigenvalues at +1, the coin-only walk needs no correction at all, and the
bare shift is obstructed at every bond.
"""

from __future__ import annotations

import numpy as np
import pytest

from walkindex.decoupling import (
    ProjectionPair,
    TransferModes,
    attribute_transfers,
    decouple_segment,
    direct_rotation,
    gentle_decoupling,
    split_transfer_modes,
)
from walkindex.errors import (
    CutOutOfRange,
    DecouplingFailed,
    IncompatibleCells,
    NotAdmissible,
    Obstructed,
)
from walkindex.indices import si_left_right
from walkindex.lattice import LatticeOperator, arc_projection, half_space_projection
from walkindex.operators import check_admissible, check_unitary
from walkindex.walks import (
    build_lattice,
    make_doubled,
    make_generating_example,
    make_shift,
    make_split_step,
    make_trivial,
    truncate_ti,
)


def ring(ti, n):
    return build_lattice(ti, n, "circle")


def gen_ring(n=12):
    return build_lattice(make_generating_example(), n, "circle")


# -- two-projection algebra --------------------------------------------------------


def test_projection_pair_identities_exact_for_generating():
    r = gen_ring(12)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 6))
    for name, value in pair.identity_defects().items():
        assert value <= 1e-12, name


@pytest.mark.parametrize(
    "ti,n",
    [
        (make_generating_example(), 10),
        (make_split_step(9 * np.pi / 32, 7 * np.pi / 32), 12),
        (make_split_step(-5 * np.pi / 16, 2 * np.pi / 16), 12),
        (make_trivial(), 8),
        (make_doubled("CII"), 10),
        (make_doubled("DIII"), 10),
    ],
    ids=["gen", "split_a", "split_b", "trivial", "cii", "diii"],
)
def test_projection_pair_identities_hold_on_every_pair(ti, n):
    # anticommutation, the pythagorean identity, alignment intertwining,
    # the reflection-product identity and the spectral circle must hold
    # for every region of every unitary walk
    r = ring(ti, n)
    for a, b in [(0, n // 2), (1, n // 2 + 2), (2, n - 2)]:
        pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, a, b))
        for name, value in pair.identity_defects().items():
            assert value <= 1e-8, f"{name} at cut ({a}, {b})"


def test_projection_pair_line_half_space():
    seg = truncate_ti(make_generating_example(), 12, "decoupled_unitary")
    pair = ProjectionPair.from_walk(seg.matrix, half_space_projection(seg.cells, 6))
    for name, value in pair.identity_defects().items():
        assert value <= 1e-10, name


# -- transfer modes ----------------------------------------------------------------


def test_split_transfer_modes_generating():
    r = gen_ring(12)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 6))
    modes = split_transfer_modes(pair)
    assert modes.dims == (2, 2)
    # incoming states lie inside the region, outgoing states outside
    p = pair.p
    assert np.linalg.norm(p @ modes.incoming - modes.incoming) <= 1e-9
    assert np.linalg.norm(p @ modes.outgoing) <= 1e-9


def test_split_transfer_modes_refuses_dead_band():
    # a region rotated by slightly less than a full transfer leaves
    # eigenvalues of P - Q near but not at +-1: no clean swap exists
    theta = np.arcsin(1.0 - 1e-4)
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    p = np.diag([1.0, 0.0]).astype(complex)
    pair = ProjectionPair(p, rot @ p @ rot.conj().T)
    with pytest.raises(DecouplingFailed):
        split_transfer_modes(pair)


def test_attribute_transfers_generating():
    r = gen_ring(12)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 6))
    modes = split_transfer_modes(pair)
    assert attribute_transfers(modes, r.cells, (0, 6), 2) == {0: (1, 1), 6: (1, 1)}


def test_attribute_transfers_needs_matching_windows():
    r = gen_ring(12)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 6))
    modes = split_transfer_modes(pair)
    with pytest.raises(DecouplingFailed):
        attribute_transfers(modes, r.cells, (3,), 1)


# -- direct rotation ---------------------------------------------------------------


def test_direct_rotation_identity_for_coin_walk():
    # a coin-only walk preserves every region, so the alignment map is the
    # identity and no rotation is needed
    r = ring(make_trivial(), 8)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 4))
    assert np.linalg.norm(direct_rotation(pair) - np.eye(pair.dim)) <= 1e-10


def test_direct_rotation_vanishes_on_transfers():
    r = gen_ring(12)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 6))
    modes = split_transfer_modes(pair)
    v = direct_rotation(pair, transfer_basis=modes.basis())
    assert np.linalg.norm(v @ modes.basis()) <= 1e-10
    assert np.linalg.norm(v.conj().T @ modes.basis()) <= 1e-10


def test_direct_rotation_spectrum_in_right_half_plane():
    r = ring(make_split_step(9 * np.pi / 32, 7 * np.pi / 32), 16)
    pair = ProjectionPair.from_walk(r.matrix, arc_projection(r.cells, 0, 8))
    v = direct_rotation(pair)
    check_unitary(v)
    assert float(np.min(np.linalg.eigvals(v).real)) >= -1e-9


# -- gentle decoupling -------------------------------------------------------------


def test_gentle_decoupling_generating_ring():
    r = gen_ring(12)
    res = gentle_decoupling(r, 0)
    assert res.ok
    assert res.commutator_norm <= 1e-12
    assert res.transfer_counts == {0: (1, 1), 6: (1, 1)}
    assert [int(x) for x in res.si_before] == [-1, 1]
    assert [int(x) for x in res.si_after] == [-1, 1]
    # gentle: no correction eigenvalue reaches -1; the swap sits at +-i
    assert float(np.min(np.linalg.eigvals(res.v).real)) >= -1e-9


def test_gentle_decoupling_path_is_admissible_homotopy():
    r = gen_ring(12)
    rep = r.rep()
    res = gentle_decoupling(r, 0, steps=8)
    assert len(res.path) == 9
    assert np.linalg.norm(res.path[0] - res.w_prime.matrix) <= 1e-12
    assert np.linalg.norm(res.path[-1] - r.matrix) <= 1e-12
    for sample in res.path:
        check_unitary(sample)
        assert check_admissible(sample, rep, kind="walk", strict=False).max_residual <= 1e-8


def test_gentle_decoupling_trivial_needs_no_correction():
    r = ring(make_trivial(), 8)
    res = gentle_decoupling(r, 0)
    assert res.ok
    assert np.linalg.norm(res.v - np.eye(r.dim)) <= 1e-10
    assert np.linalg.norm(res.w_prime.matrix - r.matrix) <= 1e-10


def test_gentle_decoupling_split_step_is_rotation_only():
    # partial coins never transfer a full state, so the correction is the
    # direct rotation alone and stays clear of the imaginary axis
    r = ring(make_split_step(9 * np.pi / 32, 7 * np.pi / 32), 16)
    res = gentle_decoupling(r, 0)
    assert res.ok
    assert res.transfer_counts == {0: (0, 0), 8: (0, 0)}
    assert [int(x) for x in res.si_before] == [-1, 1]
    assert [int(x) for x in res.si_after] == [-1, 1]
    assert float(np.min(np.linalg.eigvals(res.v).real)) >= 0.6


@pytest.mark.parametrize(
    "variant,si", [("CII", [-2, 2]), ("DIII", [2, 2])], ids=["cii", "diii"]
)
def test_gentle_decoupling_doubled_classes(variant, si):
    r = ring(make_doubled(variant), 10)
    res = gentle_decoupling(r, 0)
    assert res.ok
    assert res.transfer_counts == {0: (2, 2), 5: (2, 2)}
    assert [int(x) for x in res.si_before] == si
    assert [int(x) for x in res.si_after] == si


def test_gentle_decoupling_shift_is_obstructed():
    r = ring(make_shift(), 10)
    with pytest.raises(Obstructed):
        gentle_decoupling(r, 0)


def test_gentle_decoupling_recuts_decoupled_line():
    seg = truncate_ti(make_generating_example(), 12, "decoupled_unitary")
    res = gentle_decoupling(seg, 6)
    assert res.ok
    assert [int(x) for x in res.si_before] == [-1, 1]
    assert [int(x) for x in res.si_after] == [-1, 1]


def test_gentle_decoupling_argument_errors():
    seg = truncate_ti(make_generating_example(), 12, "decoupled_unitary")
    with pytest.raises(CutOutOfRange):
        gentle_decoupling(seg, 6, second_cut=9)
    r = gen_ring(12)
    with pytest.raises(CutOutOfRange):
        gentle_decoupling(r, 3, second_cut=3)
    bare = LatticeOperator(r.matrix, r.cells, r.band, None)
    with pytest.raises(NotAdmissible):
        gentle_decoupling(bare, 0)


# -- segment extraction ------------------------------------------------------------


def test_decouple_segment_generating():
    seg = decouple_segment(gen_ring(16), 12)
    dim = seg.matrix.shape[0]
    assert np.linalg.norm(seg.matrix @ seg.matrix.conj().T - np.eye(dim)) <= 1e-12
    assert seg.band == 1
    assert seg.cells.topology == "line"
    assert sorted(seg.cells.proxy_ends) == ["left", "right"]
    assert seg.meta["boundary"] == "decoupled_unitary"
    # the canonical swap parks one defect eigenvalue at +1 per cut bond
    evals = np.linalg.eigvals(seg.matrix)
    assert int(np.sum(np.abs(evals - 1.0) <= 1e-9)) == 2
    sl, sr = si_left_right(seg, 6)
    assert (int(sl), int(sr)) == (-1, 1)


def test_decouple_segment_argument_errors():
    with pytest.raises(IncompatibleCells):
        decouple_segment(truncate_ti(make_generating_example(), 12, "compress"), 6)
    with pytest.raises(CutOutOfRange):
        decouple_segment(gen_ring(12), 12)
    with pytest.raises(CutOutOfRange):
        decouple_segment(gen_ring(12), 0)


def test_truncate_ti_decoupled_matches_segment_extraction():
    seg = truncate_ti(make_generating_example(), 12, "decoupled_unitary")
    assert seg.cells.n_cells == 12
    assert seg.meta["boundary"] == "decoupled_unitary"
    dim = seg.matrix.shape[0]
    assert np.linalg.norm(seg.matrix @ seg.matrix.conj().T - np.eye(dim)) <= 1e-12
    sl, sr = si_left_right(seg, 6)
    assert (int(sl), int(sr)) == (-1, 1)


def test_decoupled_segment_admissible():
    seg = truncate_ti(make_split_step(9 * np.pi / 32, 7 * np.pi / 32), 14, "decoupled_unitary")
    rep = seg.rep()
    assert rep is not None
    assert check_admissible(seg.matrix, rep, kind="walk", strict=False).max_residual <= 1e-8
    dim = seg.matrix.shape[0]
    assert np.linalg.norm(seg.matrix @ seg.matrix.conj().T - np.eye(dim)) <= 1e-10
