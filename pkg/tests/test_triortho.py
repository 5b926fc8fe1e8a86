import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trirm.field_linalg import FpMatrix, FpVector, nullspace_basis, rank
from trirm.reedmuller import PunctureSet, RmSpec, encode_point, points, rm_generator
from trirm.report import Certainty
from trirm.search import stored_codes
from trirm.triortho import (
    BudgetExceeded,
    NotTriorthogonalError,
    WeightEnumerator,
    build_code,
    check_triorthogonal,
    code_report,
    dual_weight_enumerator,
    enumerate_row_space,
    logical_z_count,
    macwilliams,
    min_weight_upper_bound,
    quantum_distance,
    weight_enumerator_exact,
)

CODES = stored_codes()


def pair_of(name):
    doc = CODES[name]
    return build_code(RmSpec.maximal(doc["p"], doc["m"]), PunctureSet.from_dict(doc))


@st.composite
def small_codes(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 9))
    k = draw(st.integers(0, min(n, 5)))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return FpMatrix(np.array(rows, dtype=np.int64).reshape(k, n), p)


def test_check_triorthogonal_examples():
    assert check_triorthogonal(rm_generator(RmSpec(3, 4, 2)))
    assert not check_triorthogonal(rm_generator(RmSpec(3, 4, 3)))
    for p in (2, 3, 5, 7):
        assert check_triorthogonal(FpMatrix(np.ones((1, p), dtype=np.int64), p))


def test_build_code_examples():
    pair = build_code(RmSpec(3, 4, 2), PunctureSet(3, 4, (1,)))
    assert (pair.n, pair.k) == (80, 1)
    assert pair.G0.shape == (14, 80)
    pair = build_code(RmSpec(3, 4, 2), PunctureSet(3, 4, ()))
    assert (pair.n, pair.k) == (81, 0)
    with pytest.raises(NotTriorthogonalError):
        build_code(RmSpec(3, 4, 3), PunctureSet(3, 4, (1,)))


def test_rank_deficient_flagged():
    # the origin and a line through it: 3 collinear points of F_3^2 with r_max = 1
    pair = build_code(RmSpec(3, 2, 1), PunctureSet(3, 2, (1, 2, 3)))
    assert pair.k == 2 and pair.rank_deficient
    assert code_report(pair).provenance["rank_deficient"] is True


def test_repetition_self_dual():
    C = FpMatrix(np.array([[1, 1]]), 2)
    W = weight_enumerator_exact(C)
    assert W.coefficients == (1, 0, 1)
    assert macwilliams(W) == W


def test_zero_code():
    Z = FpMatrix.empty(6, 3)
    W = enumerate_row_space(Z)
    assert W.coefficients == (1, 0, 0, 0, 0, 0, 0)
    assert W.min_weight() is None and W.dimension == 0
    assert macwilliams(W).coefficients[0] == 1 and macwilliams(W).size == 3**6


@given(small_codes())
def test_macwilliams_involution(C):
    W = enumerate_row_space(C)
    assert macwilliams(macwilliams(W)) == W


@given(small_codes())
def test_direct_and_dual_agree(C):
    H = nullspace_basis(C) if C.nrows else FpMatrix(np.eye(C.ncols, dtype=np.int64), C.p)
    direct = enumerate_row_space(C)
    assert dual_weight_enumerator(H) == direct
    assert weight_enumerator_exact(C, budget=C.p ** max(rank(C), C.ncols - rank(C))) == direct


@given(small_codes())
def test_isd_upper_bound_is_attained(C):
    if rank(C) == 0:
        return
    W = enumerate_row_space(C)
    w, word = min_weight_upper_bound(C, seed=3, effort=30)
    assert w >= W.min_weight()
    assert word is not None and word.weight() == w
    assert w == W.min_weight() or rank(C) > 2


def test_weight_one_row_found_immediately():
    C = FpMatrix(np.array([[1, 1, 1, 1, 0], [0, 0, 0, 0, 2]]), 3)
    w, word = min_weight_upper_bound(C, target_w=1, seed=0, effort=1)
    assert w == 1 and word.weight() == 1


def test_budget():
    pair = pair_of("p3_80")
    with pytest.raises(BudgetExceeded):
        weight_enumerator_exact(pair.G0, budget=10)
    d, cert = quantum_distance(pair, budget=10, seed=0, effort=50, target_w=5)
    assert cert is Certainty.UPPER_BOUND and d >= 5


def test_enumerator_threads_agree():
    pair = pair_of("p3_72")
    a = enumerate_row_space(pair.Gprime, threads=1)
    b = enumerate_row_space(pair.Gprime, threads=3)
    assert a == b


def test_enumerator_dict_round_trip():
    W = enumerate_row_space(rm_generator(RmSpec(2, 3, 1)))
    assert WeightEnumerator.from_dict(W.to_dict()) == W
    assert W.dimension == 4 and W[4] == 14 and W[9] == 0


def test_72_9_3():
    pair = pair_of("p3_72")
    assert rank(pair.G0) == 6
    assert quantum_distance(pair) == (3, Certainty.EXACT)
    assert logical_z_count(pair, 3) == 648


def test_24_1_3():
    pair = pair_of("p5_24")
    d, cert = quantum_distance(pair)
    assert (d, cert) == (3, Certainty.EXACT)
    assert logical_z_count(pair, d) == 96


def test_no_logicals_without_punctures():
    pair = build_code(RmSpec(3, 3, 1), PunctureSet(3, 3, ()))
    assert pair.prm_enumerator() == pair.srm_enumerator()
    d = pair.prm_enumerator().min_weight()
    assert logical_z_count(pair, d) == 0


@pytest.mark.parametrize("name", ["p3_72", "p3_79", "p5_20", "p5_24", "p5_112"])
def test_non_degenerate(name):
    rep = code_report(pair_of(name))
    assert rep.certainty is Certainty.EXACT and rep.A_d >= 1


def test_distance_affine_invariant():
    doc = CODES["p3_72"]
    p, m = doc["p"], doc["m"]
    pts = points(p, m)
    A = np.array([[1, 1, 0, 0], [0, 1, 0, 2], [0, 0, 1, 0], [2, 0, 1, 1]])
    assert rank(FpMatrix(A, p)) == 4
    b = np.array([1, 0, 2, 1])
    moved = tuple(encode_point((A @ pts[c - 1] + b) % p, p) for c in doc["columns"])
    base = code_report(pair_of("p3_72"))
    other = code_report(build_code(RmSpec.maximal(p, m), PunctureSet(p, m, moved)))
    assert (other.n, other.k, other.d, other.A_d) == (base.n, base.k, base.d, base.A_d)


def test_519_upper_bound():
    pair = pair_of("p5_519")
    assert (pair.n, pair.k) == (519, 106)
    d, cert = quantum_distance(pair, seed=0, target_w=5)
    assert cert is Certainty.UPPER_BOUND and d == 5
