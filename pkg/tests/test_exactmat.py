import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import det_fraction, minor_gcd
from smithcomb.errors import BudgetExceeded, KOutOfRange, NonDivisible, NonSquare
from smithcomb.exactmat import (
    RingMatrix,
    cokernel,
    det_exact,
    gcd_of_minors,
    is_divisibility_chain,
    matrix_from_json,
    matrix_from_text,
    refute_snf_by_specialization,
    snf,
    snf_via_minors,
)
from smithcomb.rings import ZZ, MultiPoly, UniPoly, multipoly_ring, poly_ring, ratfunc_poly_ring

int_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=m, max_size=m)))


def _det_int(M):
    return det_fraction(M.rows)


def test_identity_and_small_examples():
    assert snf(RingMatrix.identity(3)).diagonal == [1, 1, 1]
    assert snf(RingMatrix([[2, 4], [6, 8]])).diagonal == [2, 4]
    assert snf(RingMatrix([[0, 0], [0, 0]])).diagonal == [0, 0]
    assert snf(RingMatrix([[6, 0], [0, 4]])).diagonal == [2, 12]
    assert snf(RingMatrix([], ZZ, ncols=3)).diagonal == []


@settings(max_examples=300, deadline=None)
@given(int_matrices)
def test_snf_matches_minor_gcds(rows):
    A = RingMatrix(rows)
    d = snf(A).diagonal
    prev = 1
    for k in range(1, min(A.shape) + 1):
        g = minor_gcd(rows, k)
        if g == 0:
            assert all(x == 0 for x in d[k - 1:])
            break
        assert d[k - 1] * prev == g
        prev = g
    assert is_divisibility_chain(d, ZZ)
    assert all(x >= 0 for x in d)


@settings(max_examples=200, deadline=None)
@given(int_matrices)
def test_transforms_are_unimodular(rows):
    A = RingMatrix(rows)
    res = snf(A, want_transforms=True)
    assert res.P @ A @ res.Q == res.diagonal_matrix()
    assert abs(_det_int(res.P)) == 1
    assert abs(_det_int(res.Q)) == 1


def _random_unimodular(n, rng):
    U = RingMatrix.identity(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        E = RingMatrix.identity(n)
        E.rows[i][j] = c
        U = E @ U
    return U


@settings(max_examples=100, deadline=None)
@given(int_matrices, st.integers(0, 10**6))
def test_cokernel_invariant_under_unimodular_change(rows, seed):
    rng = random.Random(seed)
    A = RingMatrix(rows)
    U, V = _random_unimodular(A.nrows, rng), _random_unimodular(A.ncols, rng)
    g1, g2 = cokernel(A), cokernel(U @ A @ V)
    assert (g1.factors, g1.free_rank) == (g2.factors, g2.free_rank)


def test_cokernel_examples():
    g = cokernel(RingMatrix([[2, 0], [0, 3]]))
    assert g.factors == [6] and g.free_rank == 0 and g.order == 6 and g.is_cyclic()
    g = cokernel(RingMatrix([], ZZ, ncols=3))
    assert g.factors == [] and g.free_rank == 3 and g.order is None
    assert str(cokernel(RingMatrix([[2, 0], [0, 2]]))) == "Z/2 + Z/2"


def test_det_exact():
    assert det_exact(RingMatrix([[1, 2], [3, 4]])) == -2
    with pytest.raises(NonSquare):
        det_exact(RingMatrix([[1, 2]]))
    R = poly_ring("x")
    x = R.gen()
    assert det_exact(RingMatrix([[x, 1], [1, x]], R)) == x * x - 1
    S = multipoly_ring(("a", "b"))
    a, b = MultiPoly.gens(("a", "b"))
    assert det_exact(RingMatrix([[a, b], [b, a]], S)) == a * a - b * b


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_oracle(rows):
    assert det_exact(RingMatrix(rows)) == det_fraction(rows)


def test_gcd_of_minors_examples():
    A = RingMatrix([[2, 4], [6, 8]])
    assert gcd_of_minors(A, 1) == 2
    assert gcd_of_minors(A, 2) == 8
    assert gcd_of_minors(RingMatrix.zeros(2, 2), 1) == 0
    with pytest.raises(KOutOfRange):
        gcd_of_minors(A, 3)


def test_minors_over_multivariate_ring():
    S = multipoly_ring(("x",))
    x = MultiPoly.var("x", ("x",))
    A = RingMatrix([[2, 0], [0, x]], S)
    res = snf_via_minors(A)
    # the ideal (2, x) is not principal, so the candidate is not certified
    assert res.minor_gcds[0] == S.one
    assert not res.certified
    R = poly_ring("x")
    y = R.gen()
    res = snf_via_minors(RingMatrix([[y, 0], [0, y * y - y]], R))
    assert res.certified
    assert res.diagonal == [y, y * y - y]


def test_snf_via_minors_nondivisible():
    S = multipoly_ring(("x", "y"))
    x, y = MultiPoly.gens(("x", "y"))
    # g_1 = 1 and g_2 = xy; with a third row the chain breaks
    A = RingMatrix([[x, 0, 0], [0, y, 0], [0, 0, x * y]], S)
    try:
        res = snf_via_minors(A)
    except NonDivisible:
        return
    assert not res.certified


def test_refute_by_specialization():
    A = RingMatrix.diagonal([1, 6])
    assert not refute_snf_by_specialization(A, [1, 6], 0).refuted
    R = poly_ring("x")
    x = R.gen()
    A = RingMatrix.diagonal([x, x], ring=R)
    assert not refute_snf_by_specialization(A, [x, x], 3).refuted
    # a wrong candidate for diag(x, x+1), whose SNF is (1, x(x+1))
    A = RingMatrix.diagonal([x, x + 1], ring=R)
    v = refute_snf_by_specialization(A, [1, x * x], 2)
    assert v.refuted and v.specialized_snf == [1, 6] and v.candidate_snf == [1, 4]
    assert not refute_snf_by_specialization(A, [1, x * x + x], 2).refuted


def test_snf_over_qx_canonical():
    R = poly_ring("x")
    x = R.gen()
    A = RingMatrix([[2 * x, 0], [0, 3 * x * x - 3]], R)
    d = snf(A).diagonal
    assert d == [UniPoly.const(1, "x"), x ** 3 - x] or d[0] == R.one
    assert all(p.lc == 1 for p in d)
    res = snf(A, want_transforms=True)
    assert res.P @ A @ res.Q == res.diagonal_matrix()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.lists(st.integers(-2, 2), min_size=1, max_size=3), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_snf_over_qx_matches_minors(coeff_rows):
    R = poly_ring("x")
    A = RingMatrix([[UniPoly(c, "x") for c in r] for r in coeff_rows], R)
    d = snf(A).diagonal
    m = snf_via_minors(A)
    assert d == m.diagonal


def test_local_strategy_agrees_with_euclid():
    R = poly_ring("q")
    q = R.gen()
    rng = random.Random(3)
    for n in (3, 5):
        rows = []
        for i in range(n):
            rows.append([UniPoly([rng.randint(-1, 1) for _ in range(3)], "q") + (1 - q * q if i == j else 0)
                         for j in range(n)])
        A = RingMatrix(rows, R)
        assume_nonsingular = det_exact(A) != 0
        if not assume_nonsingular:
            continue
        assert snf(A, strategy="local").diagonal == snf(A, strategy="euclid").diagonal


def test_ratfunc_poly_ring_snf():
    R = ratfunc_poly_ring("q", "n")
    n = R.gen()
    A = RingMatrix([[n, 1], [0, n]], R)
    d = snf(A).diagonal
    assert d[0] == R.one and d[1] == n * n


def test_budget():
    A = RingMatrix([[10**200 + i + j for j in range(6)] for i in range(6)])
    with pytest.raises(BudgetExceeded):
        snf(A, budget_bits=100)
    assert snf(A, budget_bits=None).diagonal[0] == 1


def test_text_and_json_io():
    A = matrix_from_text("2 3\n1 2 3\n4 5 6\n")
    assert A.shape == (2, 3) and A.rows[1] == [4, 5, 6]
    assert matrix_from_json(A.to_json()) == A
    R = poly_ring("x")
    B = matrix_from_text("2 2\nx^2-1 0\n0 x\n", R)
    assert matrix_from_json(B.to_json()) == B
    with pytest.raises(ValueError):
        matrix_from_text("2 2\n1 2\n")


@given(st.lists(st.integers(1, 50), min_size=1, max_size=6))
def test_diagonal_input_gives_sorted_chain(entries):
    d = snf(RingMatrix.diagonal(entries)).diagonal
    assume(all(e > 0 for e in entries))
    prod = 1
    for e in entries:
        prod *= e
    out = 1
    for e in d:
        out *= e
    assert out == prod
    assert is_divisibility_chain(d, ZZ)
