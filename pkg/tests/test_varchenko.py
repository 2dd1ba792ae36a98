import itertools
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import sample_sign_vectors
from smithcomb.errors import NotSemigeneric, TooLarge
from smithcomb.exactmat import RingMatrix, det_exact, snf
from smithcomb.jucysmurphy import f_lambda, rep_of_permutation
from smithcomb.rings import MultiPoly, cyclotomic_factor, poly_ring
from smithcomb.varchenko import (
    F4,
    FIG3,
    N4_TABLE,
    Arrangement,
    arrangement_from_text,
    braid_arrangement,
    char_coefficients,
    char_poly,
    enumerate_regions,
    gz_diagonal,
    intersection_poset,
    inversions,
    isotypic_aggregate_check,
    nd_counts,
    semigeneric_check,
    varchenko_matrix,
    verify_gz_by_specialization,
    verify_zagier,
    zagier_cyclotomic,
)


@st.composite
def arrangements(draw, dim=2, max_h=5):
    k = draw(st.integers(1, max_h))
    hs = []
    for i in range(k):
        normal = draw(st.lists(st.integers(-2, 2), min_size=dim, max_size=dim).filter(any))
        hs.append((normal, draw(st.integers(-2, 2)), f"h{i}"))
    try:
        return Arrangement(dim, hs)
    except ValueError:
        assume(False)


def _hyperplane_rows(A):
    return [(h.normal, h.offset) for h in A.hyperplanes]


def test_fig3_diagonal_form():
    a, b, c = MultiPoly.gens(("a", "b", "c"))
    assert len(enumerate_regions(FIG3)) == 6
    expected = [MultiPoly.const(1, ("a", "b", "c")), 1 - a * a, 1 - b * b, 1 - c * c,
                (1 - a * a) * (1 - c * c), (1 - b * b) * (1 - c * c)]
    assert sorted(map(str, gz_diagonal(FIG3))) == sorted(map(str, expected))
    assert verify_gz_by_specialization(FIG3).ok


def test_diagonal_product_is_determinant():
    V = varchenko_matrix(FIG3, symbolic=True)
    prod = MultiPoly.const(1, FIG3.labels)
    for e in gz_diagonal(FIG3):
        prod = prod * e
    det = det_exact(V)
    assert det == prod or det == -prod


def test_concurrent_lines_rejected():
    A = Arrangement(2, [((1, 0), 0, "x"), ((0, 1), 0, "y"), ((1, 1), 0, "z")])
    assert not semigeneric_check(A)
    with pytest.raises(NotSemigeneric) as info:
        gz_diagonal(A)
    assert tuple(info.value.witness) == (0, 1, 2)


def test_three_coordinate_planes():
    A = Arrangement(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)])
    assert len(enumerate_regions(A)) == 8
    assert char_coefficients(A) == [1, 3, 3, 1]


def test_braid_three():
    B3 = braid_arrangement(3)
    assert len(enumerate_regions(B3)) == 6
    t = poly_ring("t").gen()
    assert char_poly(B3) == t ** 3 - 3 * t ** 2 + 2 * t


def test_fig3_nd_counts():
    assert char_coefficients(FIG3) == [1, 3, 2]
    N = nd_counts(FIG3)
    assert [N.get((1, i), 0) for i in range(3)] == [1, 3, 2]
    assert [N.get((2, i), 0) for i in range(3)] == [1, 3, 2]


@settings(max_examples=40, deadline=None)
@given(arrangements(), st.integers(0, 10**6))
def test_regions_match_point_sampling(A, seed):
    regions = set(enumerate_regions(A))
    seen = sample_sign_vectors(_hyperplane_rows(A), A.dim, random.Random(seed))
    assert seen <= regions
    # Zaslavsky: the number of regions is |chi(-1)|
    assert len(regions) == sum(char_coefficients(A))


@settings(max_examples=15, deadline=None)
@given(arrangements(dim=3, max_h=5))
def test_region_count_in_three_dimensions(A):
    assert len(enumerate_regions(A)) == sum(char_coefficients(A))


@settings(max_examples=30, deadline=None)
@given(arrangements(max_h=5))
def test_semigeneric_counts(A):
    assume(semigeneric_check(A))
    c = char_coefficients(A)
    N = nd_counts(A)
    for i in range(len(c)):
        assert N.get((1, i), 0) == c[i]
        assert N.get((2, i), 0) == c[i]
    assert verify_gz_by_specialization(A).ok


def test_intersection_poset_fig3():
    L = intersection_poset(FIG3)
    assert [x.dim for x in L].count(2) == 1
    assert [x.dim for x in L].count(1) == 3
    assert [x.dim for x in L].count(0) == 2


def test_text_roundtrip():
    B = arrangement_from_text(FIG3.to_text())
    assert B.labels == FIG3.labels
    assert enumerate_regions(B) == enumerate_regions(FIG3)


def test_too_large():
    A = Arrangement(2, [((1, 0), i) for i in range(13)])
    with pytest.raises(TooLarge):
        enumerate_regions(A)


def test_zagier_small():
    for n in (2, 3, 4):
        rep = verify_zagier(n)
        assert rep.ok, n
    assert zagier_cyclotomic(2) == {1: 1, 2: 1}


@pytest.mark.slow
def test_zagier_five():
    assert verify_zagier(5).ok


def _block(lam):
    R = poly_ring("q")
    q = R.gen()
    f = f_lambda(lam)
    acc = [[R.zero] * f for _ in range(f)]
    for w in itertools.permutations(range(1, 5)):
        M = rep_of_permutation(lam, w)
        c = q ** inversions(w)
        for i in range(f):
            for j in range(f):
                if M.rows[i][j]:
                    acc[i][j] = acc[i][j] + c * M.rows[i][j]
    return [cyclotomic_factor(x)[0] for x in snf(RingMatrix(acc, R)).diagonal]


@pytest.mark.parametrize("lam", [(4,), (3, 1), (2, 2), (2, 1, 1)])
def test_isotypic_rows_against_representation(lam):
    # SNF of rho_lambda(sum_w q^inv(w) w), computed in Young's natural representation
    assert _block(lam) == N4_TABLE[lam]


def test_sign_row_is_minus_q_factorial():
    # for the sign character the block is sum_w (-q)^inv(w) = [4]_{-q}! = Phi1^2 Phi4 Phi6
    assert _block((1, 1, 1, 1)) == [{1: 2, 4: 1, 6: 1}]
    assert N4_TABLE[(1, 1, 1, 1)] != [{1: 2, 4: 1, 6: 1}]


def test_aggregate_with_corrected_sign_row():
    table = dict(N4_TABLE)
    table[(1, 1, 1, 1)] = [{1: 2, 4: 1, 6: 1}]
    rep = isotypic_aggregate_check(table)
    assert rep.ok
    assert sum(F4[lam] ** 2 for lam in F4) == 24


def test_aggregate_with_table_as_printed():
    rep = isotypic_aggregate_check()
    assert not rep.ok
    assert rep.braid_totals[1] == rep.table_totals[1] + 1
    assert rep.braid_totals[2] == rep.table_totals[2] - 1
