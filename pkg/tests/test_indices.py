"""Half-space, Fredholm, and relative indices; bulk-boundary verification."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from helpers import (
    haar_unitary,
    normal_form_rep,
    random_admissible_walk,
    random_rep,
    rng,
)
from walkindex.errors import (
    IncompatibleCells,
    NotAdmissible,
    NotDecoupled,
    NotUnitary,
    Obstructed,
    TooShort,
    WindowAmbiguous,
)
from walkindex.indices import (
    BulkBoundaryReport,
    bulk_right_index,
    contract_perturbation,
    fredholm_index,
    index_matrix,
    relative_index,
    si_left_right,
    si_pm,
    si_total,
    twiddle_rep,
    verify_bulk_boundary,
    verify_locpert,
)
from walkindex.lattice import (
    CellStructure,
    LatticeOperator,
    LocalSymmetryRep,
    compress,
    half_space_projection,
)
from walkindex.operators import admissible_hamiltonian_projection, gap_margin
from walkindex.symmetry import IndexGroup, IndexValue, SymmetryClass, SymmetryRep
from walkindex.walks import (
    TIWalk,
    build_lattice,
    make_doubled,
    make_generating_example,
    make_shift,
    make_split_step,
    make_trivial,
    truncate_ti,
    winding_number,
)

C = SymmetryClass


def generating_ring(n: int = 12) -> LatticeOperator:
    return build_lattice(make_generating_example(), n, "circle")


def decoupled_generating_segment(n: int) -> LatticeOperator:
    """Exactly unitary segment of the generating walk, defects pinned at +1.

    The compression has a one-dimensional kernel at each end (an up mover at
    the left, a down mover at the right); since range and kernel coincide for
    this walk, adding the two rank-1 corrections restores unitarity.
    """
    seg = truncate_ti(make_generating_example(), n, "compress")
    m = seg.matrix.copy()
    m[0, 0] += 1.0
    m[2 * n - 1, 2 * n - 1] += 1.0
    return LatticeOperator(m, seg.cells, seg.band, seg.local_rep, dict(seg.meta))


def local_reflection(ring: LatticeOperator, cell: int) -> tuple[np.ndarray, np.ndarray]:
    """A rank-1 admissible reflection supported near one cell of the ring.

    The vector is a normalized column of the +1 spectral projection of the
    companion chiral operator, so the reflection has relative index +1.
    """
    trep = twiddle_rep(ring)
    gt = trep.ops["gamma"].matrix
    col = ((np.eye(ring.dim) + gt) / 2)[:, ring.cells.cell_slice(cell).start]
    v = (col / np.linalg.norm(col)).reshape(-1, 1)
    return np.eye(ring.dim) - 2 * v @ v.conj().T, v


# -- si of eigenspaces --------------------------------------------------------------


def test_si_pm_balanced_minus_one():
    rep = make_generating_example().cell_rep
    minus, plus = si_pm(-np.eye(2, dtype=complex), rep)
    assert int(minus) == 0 and int(plus) == 0


def test_si_pm_diagonal_chiral():
    rep = SymmetryRep.from_matrices(C.AIII, 2, gamma=np.diag([1.0, -1.0]))
    minus, plus = si_pm(np.diag([-1.0 + 0j, 1.0]), rep)
    assert int(minus) == 1 and int(plus) == -1


def test_si_pm_class_d_det_parity():
    theta = 0.7
    c, s = np.cos(theta), np.sin(theta)
    w = np.array([[c, -s, 0], [s, c, 0], [0, 0, -1]], dtype=complex)
    rep = SymmetryRep.from_matrices(C.D, 3, eta=np.eye(3))
    minus, plus = si_pm(w, rep)
    assert int(minus) == 1 and int(plus) == 0
    assert minus.group is IndexGroup.Z2


def test_si_pm_generating_ring_is_balanced():
    ring = generating_ring()
    minus, plus = si_pm(ring)
    assert int(minus) == 0 and int(plus) == 0


def test_si_pm_decoupled_segment_sums_to_zero():
    seg = decoupled_generating_segment(8)
    minus, plus = si_pm(seg)
    assert int(minus) + int(plus) == 0
    # two defect eigenvalues at +1 with opposite chiral weights
    vals = np.linalg.eigvals(seg.matrix)
    assert np.sum(np.abs(vals - 1) < 1e-9) == 2


def test_si_pm_requires_unitary():
    seg = truncate_ti(make_generating_example(), 8, "compress")
    with pytest.raises(NotUnitary):
        si_pm(seg)


def test_si_pm_window_guard():
    eps = 1.05e-7
    w = np.diag([np.exp(1j * eps), np.exp(-1j * eps)])
    rep = SymmetryRep.from_matrices(C.AIII, 2, gamma=np.array([[0, 1], [1, 0]], dtype=complex))
    with pytest.raises(WindowAmbiguous):
        si_pm(w, rep, window=1e-7)


def test_si_total_gapped_coin_is_zero():
    rep = SymmetryRep.from_matrices(C.A, 2)
    assert int(si_total(1j * np.eye(2), rep)) == 0


def test_si_total_equals_si_pm_sum_random():
    gen = rng(23)
    for cls in (C.AIII, C.BDI, C.D, C.CII, C.DIII):
        for _ in range(5):
            rep = random_rep(cls, gen, p=2, q=2)
            w = random_admissible_walk(rep, gen)
            try:
                minus, plus = si_pm(w, rep)
            except WindowAmbiguous:
                continue
            assert int(si_total(w, rep)) == int(minus + plus)


def test_si_total_one_sided_compression():
    seg = truncate_ti(make_generating_example(), 12, "compress")
    right = compress(seg, half_space_projection(seg.cells, 4, side="geq"))
    assert int(si_total(right)) == 1
    # without proxy exclusion the far-end mode cancels the cut mode
    assert int(si_total(right, exclude_proxy=False)) == 0


def test_si_left_right_generating_segment():
    seg = truncate_ti(make_generating_example(), 12, "compress")
    left, right = si_left_right(seg, 6)
    assert int(left) == -1 and int(right) == 1


def test_si_left_right_cut_independence_line():
    seg = truncate_ti(make_generating_example(), 14, "compress")
    values = {si_left_right(seg, a) for a in range(3, 12)}
    assert len({(int(l), int(r)) for l, r in values}) == 1


def test_si_left_right_cut_independence_circle():
    ring = generating_ring(14)
    results = {(int(l), int(r)) for l, r in (si_left_right(ring, a) for a in range(14))}
    assert results == {(-1, 1)}


def test_si_left_right_additivity():
    ring = generating_ring(12)
    left, right = si_left_right(ring, 3)
    assert int(si_total(ring)) == int(left + right)
    seg = truncate_ti(make_generating_example(), 12, "compress")
    left, right = si_left_right(seg, 6)
    assert int(si_total(seg)) == int(left + right)


def test_si_left_right_trivial_walk():
    ring = build_lattice(make_trivial(), 10, "circle")
    left, right = si_left_right(ring, 4)
    assert int(left) == 0 and int(right) == 0


def test_si_left_right_doubled_walks():
    dring = build_lattice(make_doubled("DIII"), 12, "circle")
    left, right = si_left_right(dring, 3)
    assert int(right) == 2 and right.group is IndexGroup.TWO_Z2
    assert int(left) == 2  # -2 and 2 coincide mod 4
    cring = build_lattice(make_doubled("CII"), 12, "circle")
    left, right = si_left_right(cring, 3)
    assert (int(left), int(right)) == (-2, 2)


def test_si_left_right_cut_too_close():
    seg = truncate_ti(make_generating_example(), 12, "compress")
    with pytest.raises(TooShort):
        si_left_right(seg, 1)


def test_si_left_right_stable_under_distant_perturbation():
    ring = generating_ring(20)
    refl, _ = local_reflection(ring, 8)
    perturbed = LatticeOperator(refl @ ring.matrix, ring.cells, 2, ring.local_rep)
    assert int(relative_index(ring, refl @ ring.matrix)) == 1
    before = tuple(int(x) for x in si_left_right(ring, 4, second_cut=14))
    after = tuple(int(x) for x in si_left_right(perturbed, 4, second_cut=14))
    assert before == after == (-1, 1)


def test_si_left_right_mid_piece_perturbation_is_ambiguous():
    # a perturbation dead in the middle of a 10-cell piece cannot be told
    # apart from a slowly decaying far-end mode, so attribution must refuse
    ring = generating_ring(20)
    refl, _ = local_reflection(ring, 9)
    perturbed = LatticeOperator(refl @ ring.matrix, ring.cells, 2, ring.local_rep)
    with pytest.raises(WindowAmbiguous):
        si_left_right(perturbed, 4, second_cut=14)


def test_si_pm_homotopy_stability():
    # perturb an anchored walk admissibly below the gap bound: the
    # unbalanced +-1 eigenvalues cannot move at all
    ring = generating_ring(10)
    rep = ring.rep()
    refl, _ = local_reflection(ring, 0)
    wp = refl @ ring.matrix
    assert [int(x) for x in si_pm(wp, rep)] == [1, -1]
    gen = rng(11)
    trep = twiddle_rep(wp, rep)
    z = gen.normal(size=(20, 20)) + 1j * gen.normal(size=(20, 20))
    k = admissible_hamiltonian_projection(z, trep)
    margins = gap_margin(wp)
    margin = min(m.margin for m in margins.values())
    d = 1  # anchored eigenspace dimension per phase
    eps = margin / (2 * (2 * d + 1)) / np.linalg.norm(k, 2) * 0.9
    w1 = expm(1j * eps * k) @ wp
    assert [int(x) for x in si_pm(w1, rep)] == [1, -1]
    vals = np.linalg.eigvals(w1)
    assert np.min(np.abs(vals + 1)) < 1e-12
    assert np.min(np.abs(vals - 1)) < 1e-12


# -- Fredholm index -----------------------------------------------------------------


def test_fredholm_shift_is_one():
    seg = truncate_ti(make_shift(), 12, "compress")
    report = fredholm_index(seg, 5)
    assert report.index == 1
    assert (report.kernel_dim, report.cokernel_dim) == (1, 0)
    assert report.trace_route == pytest.approx(1.0, abs=1e-12)
    assert int(report) == 1


def test_fredholm_gapped_walk_is_zero():
    seg = truncate_ti(make_generating_example(), 12, "compress")
    report = fredholm_index(seg, 5)
    assert report.index == 0
    assert report.trace_route == pytest.approx(0.0, abs=1e-12)


def test_fredholm_opposite_shifts_cancel():
    blocks = {
        -1: np.diag([1.0, 0.0]).astype(complex),
        1: np.diag([0.0, 1.0]).astype(complex),
    }
    both = TIWalk(
        "both_shifts", C.A, 2, blocks, SymmetryRep.from_matrices(C.A, 2)
    )
    seg = truncate_ti(both, 12, "compress")
    report = fredholm_index(seg, 5)
    assert report.index == 0
    assert (report.kernel_dim, report.cokernel_dim) == (1, 1)


def test_fredholm_cut_independent():
    seg = truncate_ti(make_shift(), 14, "compress")
    assert {fredholm_index(seg, a).index for a in range(3, 12)} == {1}


def test_fredholm_needs_line():
    ring = generating_ring(10)
    with pytest.raises(IncompatibleCells):
        fredholm_index(ring, 3)


# -- the companion representation and relative indices --------------------------------


def test_twiddle_rep_identity_walk():
    rep = normal_form_rep(C.BDI, 2, 2)
    trep = twiddle_rep(np.eye(4, dtype=complex), rep)
    for name in rep.ops:
        assert np.allclose(trep.ops[name].matrix, rep.ops[name].matrix)


def test_twiddle_rep_generating_ring():
    ring = generating_ring(10)
    trep = twiddle_rep(ring)
    assert trep.cls is C.BDI
    tau = ring.rep().ops["tau"].matrix
    assert np.allclose(trep.ops["tau"].matrix, ring.matrix @ tau)
    report = trep.validate(strict=False)
    assert report.max_residual < 1e-10


def test_twiddle_rep_split_step_ring():
    from walkindex.walks import make_split_step

    ring = build_lattice(make_split_step(9 * np.pi / 32, 7 * np.pi / 32), 10, "circle")
    trep = twiddle_rep(ring)
    assert trep.validate(strict=False).max_residual < 1e-10


def test_relative_index_identity_perturbation():
    ring = generating_ring(10)
    assert int(relative_index(ring, ring.matrix.copy())) == 0


def test_relative_index_rank_one_reflection():
    ring = generating_ring(12)
    refl, _ = local_reflection(ring, 4)
    assert int(relative_index(ring, refl @ ring.matrix)) == 1


def test_verify_locpert_reflection():
    ring = generating_ring(12)
    refl, _ = local_reflection(ring, 4)
    report = verify_locpert(ring, refl @ ring.matrix)
    assert report.ok
    assert int(report.relative) == 1
    assert (int(report.si_minus_before), int(report.si_minus_after)) == (0, 1)
    assert (int(report.si_plus_before), int(report.si_plus_after)) == (0, -1)


def test_relative_index_chain_rule():
    ring = generating_ring(14)
    rep = ring.rep()
    r1, _ = local_reflection(ring, 2)
    r2, _ = local_reflection(ring, 9)
    w1 = r1 @ ring.matrix
    w2 = r2 @ w1
    total = relative_index(ring, w2)
    assert int(total) == int(relative_index(ring, w1) + relative_index(w1, w2, rep))


def test_relative_index_distant_additivity():
    ring = generating_ring(14)
    r1, v1 = local_reflection(ring, 2)
    r2, v2 = local_reflection(ring, 9)
    assert abs(v1.conj().T @ v2)[0, 0] < 1e-12  # disjoint supports
    separate = int(relative_index(ring, r1 @ ring.matrix)) + int(
        relative_index(ring, r2 @ ring.matrix)
    )
    assert int(relative_index(ring, r1 @ r2 @ ring.matrix)) == separate == 2


def test_relative_index_fuzz_locpert():
    gen = rng(37)
    trials = 0
    while trials < 30:
        cls = [C.AIII, C.BDI, C.D, C.CII][trials % 4]
        rep = random_rep(cls, gen, p=2, q=2)
        w = random_admissible_walk(rep, gen)
        trep = twiddle_rep(w, rep)
        z = gen.normal(size=(rep.dim, rep.dim)) + 1j * gen.normal(size=(rep.dim, rep.dim))
        v = expm(1j * admissible_hamiltonian_projection(z, trep))
        try:
            report = verify_locpert(w, v @ w, rep)
        except WindowAmbiguous:
            continue
        assert report.ok
        trials += 1


def test_contract_identity_is_constant():
    rep = normal_form_rep(C.BDI, 1, 1)
    path = contract_perturbation(np.eye(2, dtype=complex), rep, steps=4)
    assert len(path) == 5
    for sample in path:
        assert np.allclose(sample, np.eye(2))


def test_contract_conjugate_pair():
    rep = SymmetryRep.from_matrices(
        C.AIII, 2, gamma=np.array([[0, 1], [1, 0]], dtype=complex)
    )
    v = np.diag([np.exp(0.9j), np.exp(-0.9j)])
    path = contract_perturbation(v, rep, steps=8)
    assert len(path) == 9
    assert np.allclose(path[0], v, atol=1e-10)
    assert np.allclose(path[-1], np.eye(2), atol=1e-12)
    # pair angles shrink monotonically
    angles = [float(np.max(np.abs(np.angle(np.linalg.eigvals(p))))) for p in path]
    assert all(a1 >= a2 - 1e-12 for a1, a2 in zip(angles, angles[1:]))


def test_contract_balanced_minus_block():
    rep = SymmetryRep.from_matrices(C.AIII, 2, gamma=np.diag([1.0, -1.0]))
    path = contract_perturbation(-np.eye(2, dtype=complex), rep, steps=6)
    assert np.allclose(path[-1], np.eye(2), atol=1e-12)
    # interior samples stay away from -1
    for sample in path[1:]:
        assert np.min(np.abs(np.linalg.eigvals(sample) + 1)) > 0.1


def test_contract_obstructed():
    rep = SymmetryRep.from_matrices(C.AIII, 1, gamma=np.eye(1))
    with pytest.raises(Obstructed):
        contract_perturbation(-np.eye(1, dtype=complex), rep)


# -- bulk-boundary correspondence ------------------------------------------------------


def test_bulk_right_index_per_class():
    assert int(bulk_right_index(make_generating_example())) == 1
    assert int(bulk_right_index(make_trivial())) == 0
    assert int(bulk_right_index(make_doubled("CII"))) == 2
    assert int(bulk_right_index(make_doubled("DIII"))) == 2
    flat = TIWalk(
        "flat", C.A, 1, {0: 1j * np.eye(1)}, SymmetryRep.from_matrices(C.A, 1)
    )
    assert int(bulk_right_index(flat)) == 0


def join_blockdiag(left_m: np.ndarray, right_m: np.ndarray, cell_rep) -> LatticeOperator:
    d = left_m.shape[0] + right_m.shape[0]
    n = d // 2
    m = np.zeros((d, d), dtype=complex)
    m[: left_m.shape[0], : left_m.shape[0]] = left_m
    m[left_m.shape[0] :, left_m.shape[0] :] = right_m
    cells = CellStructure.uniform(n, 2, "line")
    return LatticeOperator(m, cells, 1, LocalSymmetryRep.uniform(cell_rep, n))


def test_verify_bulk_boundary_trivial_vs_generating():
    gen_w = make_generating_example()
    triv = make_trivial()
    left_m = truncate_ti(triv, 8, "compress").matrix
    right_m = decoupled_generating_segment(8).matrix
    joined = join_blockdiag(left_m, right_m, gen_w.cell_rep)
    report = verify_bulk_boundary(triv, gen_w, joined)
    assert report.ok
    assert int(report.expected) == 1
    assert int(report.measured) == 1
    assert report.protected_dim == 1


def test_verify_bulk_boundary_identical_bulks():
    gen_w = make_generating_example()
    piece = decoupled_generating_segment(8).matrix
    joined = join_blockdiag(piece, piece, gen_w.cell_rep)
    report = verify_bulk_boundary(gen_w, gen_w, joined)
    assert report.ok
    assert int(report.expected) == 0
    assert int(report.measured) == 0
    # the interface hosts a balanced pair, allowed but not required
    assert report.protected_dim == 2


def test_verify_bulk_boundary_rejects_mixed_classes():
    gen_w = make_generating_example()
    piece = decoupled_generating_segment(8)
    with pytest.raises(IncompatibleCells):
        verify_bulk_boundary(gen_w, make_shift(), piece)


def test_verify_bulk_boundary_rejects_circle():
    gen_w = make_generating_example()
    ring = generating_ring(10)
    with pytest.raises(IncompatibleCells):
        verify_bulk_boundary(gen_w, gen_w, ring)


# -- the 2x2 index table ---------------------------------------------------------------


def test_index_matrix_decoupled_generating():
    left = decoupled_generating_segment(8).matrix
    right = decoupled_generating_segment(8).matrix
    joined = join_blockdiag(left, right, make_generating_example().cell_rep)
    table = index_matrix(joined, 8)
    assert table.as_table() == {
        "minus_left": 0,
        "minus_right": 0,
        "plus_left": -1,
        "plus_right": 1,
    }
    assert (int(table.si_left), int(table.si_right)) == (-1, 1)
    assert (int(table.si_minus), int(table.si_plus)) == (0, 0)
    assert int(table.total) == 0


def test_index_matrix_trivial_walk():
    m = truncate_ti(make_trivial(), 12, "compress").matrix
    joined = LatticeOperator(
        m,
        CellStructure.uniform(12, 2, "line"),
        0,
        LocalSymmetryRep.uniform(make_trivial().cell_rep, 12),
    )
    table = index_matrix(joined, 6)
    assert all(v == 0 for v in table.as_table().values())


def test_index_matrix_requires_decoupled():
    seg = decoupled_generating_segment(12)
    with pytest.raises(NotDecoupled):
        index_matrix(seg, 5)


def test_index_matrix_consistent_with_half_space():
    left = decoupled_generating_segment(8).matrix
    right = decoupled_generating_segment(8).matrix
    joined = join_blockdiag(left, right, make_generating_example().cell_rep)
    table = index_matrix(joined, 8)
    sl, sr = si_left_right(joined, 8)
    assert int(table.si_left) == int(sl)
    assert int(table.si_right) == int(sr)
    minus, plus = si_pm(joined)
    assert int(table.si_minus) == int(minus)
    assert int(table.si_plus) == int(plus)


# -- momentum formula vs half-space index ------------------------------------------


@pytest.mark.parametrize(
    "ti",
    [
        make_generating_example(),
        make_generating_example(inverse=True),
        make_split_step(9 * np.pi / 32, 7 * np.pi / 32),
        make_split_step(-5 * np.pi / 16, 2 * np.pi / 16),
        make_trivial(),
        make_doubled("CII"),
    ],
    ids=["gen", "gen_inv", "split_a", "split_b", "trivial", "cii"],
)
def test_winding_equals_right_half_space_index(ti):
    # the momentum-space winding of a gapped chiral walk counts exactly the
    # boundary modes its truncation creates at a cut, for every cut deep
    # enough that the mode tails at both piece ends are resolved
    w = int(winding_number(ti).value)
    n = max(24, 6 * ti.band)
    seg = truncate_ti(ti, n, "compress")
    for cut in (n // 2, n // 2 - 2, n // 2 + 2):
        sl, sr = si_left_right(seg, cut)
        assert int(sr) == w
        assert int(sl) == -w
