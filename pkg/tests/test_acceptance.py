"""The twelve acceptance criteria, each at its stated size and tolerance.

Every test records one PASS/FAIL line (shown in the terminal summary).
Criteria 10 and 11 contain sub-checks that cannot hold for the published
data; they are marked strict xfail so the failure stays visible and an
unexpected pass would be reported.
"""

import random
import time

import pytest

from acceptance_log import record
from oracles import minor_gcd
from smithcomb import gridpoly, jacobitrudi, jucysmurphy, randomsnf, sandpile, symfunc, varchenko
from smithcomb.errors import NotSemigeneric
from smithcomb.exactmat import RingMatrix, refute_snf_by_specialization, snf, snf_via_minors
from smithcomb.rings import MultiPoly, UniPoly, multipoly_ring
from smithcomb.symfunc import partitions_of


def test_01_snf_equals_minor_gcd_quotients():
    rng = random.Random(20240601)
    t0 = time.time()
    bad = 0
    for _ in range(500):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rng.randint(-30, 30) for _ in range(n)] for _ in range(m)]
        d = snf(RingMatrix(rows)).diagonal
        prod = 1
        for k in range(1, min(m, n) + 1):
            prod *= d[k - 1]
            if prod != minor_gcd(rows, k):
                bad += 1
                break
    dt = time.time() - t0
    assert record(1, "product of invariant factors = gcd of k-minors (500 matrices)", [
        ("agreement", bad == 0, f"{bad} mismatches"),
        ("time < 60 s", dt < 60, f"{dt:.1f} s"),
    ])


def test_02_specialization_refutes_candidate():
    R = multipoly_ring(("x",))
    x = MultiPoly.var("x", ("x",))
    A = RingMatrix([[2, 0], [0, x]], R)
    v = refute_snf_by_specialization(A, [1, 2 * x], 2)
    minors = snf_via_minors(A)
    assert record(2, "diag(2,x) vs candidate (1,2x) at x=2", [
        ("refuted", v.refuted, str(v)),
        ("clash (2,2) vs (1,4)", v.specialized_snf == [2, 2] and v.candidate_snf == [1, 4], str(v)),
        ("minor quotients equal the candidate", minors.diagonal == [R.one, 2 * x], str(minors.diagonal)),
    ])


def test_03_complete_graphs():
    t0 = time.time()
    checks = []
    for n in range(3, 9):
        K = sandpile.MultiGraph.complete(n)
        g = sandpile.critical_group(K)
        checks.append((f"K{n} group", g.factors == [n] * (n - 2), str(g.factors)))
        checks.append((f"K{n} trees", sandpile.tree_count(K) == n ** (n - 2) == g.order, str(g.order)))
    dt = time.time() - t0
    checks.append(("time < 5 s", dt < 5, f"{dt:.2f} s"))
    assert record(3, "K(K_n) = (Z/n)^(n-2), kappa = n^(n-2), n = 3..8", checks)


def _random_connected(rng, n):
    edges = [(rng.randrange(v), v, rng.randint(1, 2)) for v in range(1, n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35:
                edges.append((i, j, rng.randint(1, 2)))
    return sandpile.MultiGraph(n, edges)


def test_04_abelian_property():
    rng = random.Random(4)
    bad = 0
    for _ in range(50):
        G = _random_connected(rng, rng.randint(2, 8))
        sink = rng.randrange(G.n)
        counts = [rng.randint(0, 3 * G.degree(v)) for v in range(G.n) if v != sink]
        sigma = sandpile.ChipConfig.from_nonsink(G, counts, sink)
        ref = sandpile.stabilize(sigma)
        for t in range(10):
            if sandpile.stabilize(sigma, rng=random.Random(rng.random())) != ref:
                bad += 1
    assert record(4, "10 random topple orders on 50 random graphs", [
        ("identical stabilizations and topple counts", bad == 0, f"{bad} differences"),
    ])


def test_05_dynamic_vs_algebraic():
    graphs = [G for n in range(2, 6) for G in sandpile.connected_graphs(n, 1)]
    graphs += [G for n in range(2, 5) for G in sandpile.connected_graphs(n, 2)]
    seen, bad, count = set(), [], 0
    for G in graphs:
        if G in seen or sandpile.tree_count(G) > 64:
            continue
        seen.add(G)
        for s in range(G.n):
            count += 1
            d = sandpile.critical_group_dynamic(G, s)
            a = sandpile.critical_group(G, s)
            if d.factors != a.factors:
                bad.append((G, s))
    assert record(5, f"dynamic = algebraic critical group ({count} graph/sink pairs, kappa <= 64)", [
        ("invariant factors agree", not bad, f"{len(bad)} disagreements"),
    ])


def test_06_binomial_matrices():
    t0 = time.time()
    checks = []
    for n in range(1, 13):
        d, _ = symfunc.binomial_snf_stats(2, n)
        checks.append((f"a=2 n={n}", d == [1] + [2] * (n - 1), str(d)))
    d, _ = symfunc.binomial_snf_stats(3, 8)
    displayed = [1, 3, 3, 3, 3, 6, 2 * 3 * 29 * 31, 2 * 3 ** 2 * 11 * 29 * 31 * 37 * 41]
    checks.append(("a=3 n=8", d == displayed, str(d)))
    dt = time.time() - t0
    checks.append(("time < 30 s", dt < 30, f"{dt:.1f} s"))
    assert record(6, "binomial matrices C(a(i+j), i+j)", checks)


def test_07_psi_operators():
    checks = []
    for n in range(1, 13):
        rep = symfunc.verify_thm_cai(n)
        checks.append((f"psi_{n}", rep.computed == rep.form_b and rep.det == rep.det_expected, str(rep)))
        if rep.form_a is not None:
            checks.append((f"psi_{n} multiplicity form", rep.form_a == rep.computed, str(rep.form_a)))
    for n in range(1, 10):
        for k in range(1, 5):
            rep = symfunc.verify_nie(n, k)
            checks.append((f"psi_{n},{k}", rep.ok, str(rep)))
    assert record(7, "SNF of psi_n (n <= 12) and psi_n,k (n <= 9, k <= 4) by peeling", checks)


def test_08_jacobi_trudi():
    t0 = time.time()
    checks = []
    for size in range(1, 11):
        for lam in partitions_of(size):
            for t in range(len(lam), len(lam) + 4):
                rep = jacobitrudi.verify_thm_jt(lam, t)
                if not rep.ok:
                    checks.append((f"{lam} t={t}", False, str(rep.computed)))
    n = UniPoly.gen("n")

    def run(a, b):
        out = UniPoly.const(1, "n")
        for c in range(a, b + 1):
            out = out * (n + c)
        return out

    rep = jacobitrudi.verify_thm_jt((7, 5, 5, 2), 4)
    checks.append(("(7,5,5,2)", rep.ok and rep.computed == [UniPoly.const(1, "n"), run(0, 2), run(-2, 3), run(-3, 6)],
                   str(rep.computed)))
    for size in range(1, 7):
        for lam in partitions_of(size):
            for t in range(len(lam), len(lam) + 4):
                if not jacobitrudi.verify_thm_jtq(lam, t).ok:
                    checks.append((f"q {lam} t={t}", False, "mismatch"))
    dt = time.time() - t0
    checks.append(("time < 120 s", dt < 120, f"{dt:.1f} s"))
    assert record(8, "Jacobi-Trudi SNF = diagonal-hook products (|lam| <= 10; q-version |lam| <= 6)", checks)


def test_09_grid_polynomials():
    checks = []
    for size in range(1, 10):
        for lam in partitions_of(size):
            rep = gridpoly.verify_thm_bessen(lam, minors=size <= 6)
            if not rep.ok:
                checks.append((str(lam), False, "det or chain mismatch"))
    E = gridpoly.ExtendedPartition((3, 2), gridpoly.FIG2_ALIASES)
    a, b, c, d, e = (MultiPoly.var(v, E.vars) for v in "abcde")
    one = MultiPoly.const(1, E.vars)
    checks.append(("P_21", gridpoly.p_rs(E, 2, 1) == d * e + e + one, str(gridpoly.p_rs(E, 2, 1))))
    p11 = a * b * c * d * e + b * c * d * e + b * c * e + c * d * e + c * e + d * e + c + e + one
    checks.append(("P_11", gridpoly.p_rs(E, 1, 1) == p11, str(gridpoly.p_rs(E, 1, 1))))
    checks.append(("A_rs", [gridpoly.a_rs(E, k, k) for k in (1, 2, 3)] == [a * b * c * d * e, e, one], ""))
    rep = gridpoly.verify_thm_bessen((3, 2), aliases=gridpoly.FIG2_ALIASES)
    checks.append(("det abcde^2", rep.det == a * b * c * d * e * e, str(rep.det)))
    for lam in [(1,), (2, 1), (3, 2), (3, 3, 2), (4, 2, 1)]:
        g = gridpoly.specialize_grid(lam, "ones")
        checks.append((f"all-ones {lam}", g.det == 1, str(g.det)))
    assert record(9, "det M(1,1) = prod A_kk (|lam| <= 9), minor chain (|lam| <= 6), shape (3,2)", checks)


ARRANGEMENTS = [
    varchenko.FIG3,
    varchenko.Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 1)]),
    varchenko.Arrangement(2, [((1, 0), 0), ((1, 0), 1), ((0, 1), 0), ((0, 1), 1)]),
    varchenko.Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 1), ((1, -1), 2)]),
    varchenko.Arrangement(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((1, 1, 1), 1)]),
    varchenko.Arrangement(2, [((1, 2), 0), ((2, -1), 1), ((1, 1), 3), ((1, 0), -2), ((0, 1), 5)]),
]


@pytest.mark.xfail(strict=True, reason="the published n=4 isotypic table lists Phi1 Phi2 Phi4 Phi6 for the "
                                       "sign block, which is Phi1^2 Phi4 Phi6; see the decision log")
def test_10_varchenko():
    checks = []
    t0 = time.time()
    a, b, c = MultiPoly.gens(("a", "b", "c"))
    fig3 = [MultiPoly.const(1, ("a", "b", "c")), 1 - a * a, 1 - b * b, 1 - c * c,
            (1 - a * a) * (1 - c * c), (1 - b * b) * (1 - c * c)]
    diag = varchenko.gz_diagonal(varchenko.FIG3)
    checks.append(("three-line diagonal", sorted(map(str, diag)) == sorted(map(str, fig3)), str(diag)))
    checks.append(("three-line SNF over Q[q]", varchenko.verify_gz_by_specialization(varchenko.FIG3).ok, ""))
    try:
        varchenko.gz_diagonal(varchenko.Arrangement(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0)]))
        checks.append(("concurrent lines refused", False, "accepted"))
    except NotSemigeneric:
        checks.append(("concurrent lines refused", True, ""))
    for i, A in enumerate(ARRANGEMENTS):
        cs = varchenko.char_coefficients(A)
        N = varchenko.nd_counts(A)
        n1 = [N.get((1, j), 0) for j in range(len(cs))]
        n2 = [N.get((2, j), 0) for j in range(len(cs))]
        checks.append((f"arrangement {i}: N1 = c = N2", n1 == cs == n2, f"c={cs} N1={n1} N2={n2}"))
    quick = time.time() - t0
    for n in range(2, 6):
        rep = varchenko.verify_zagier(n)
        checks.append((f"Zagier n={n}", rep.ok, str(rep.det_cyclotomic)))
    zag = time.time() - t0 - quick
    iso = varchenko.isotypic_aggregate_check()
    checks.append(("n=4 isotypic table aggregates", iso.ok,
                   f"braid totals {iso.braid_totals} vs table totals {iso.table_totals}"))
    checks.append(("time", quick < 60 and zag < 600, f"{quick:.1f} s / {zag:.1f} s"))
    assert record(10, "Varchenko matrices: diagonal form, semigeneric counts, Zagier n <= 5, n=4 table", checks)


@pytest.mark.xfail(strict=True, reason="the SNF conjecture fails at (3,1,1), k=3 for every integral form; "
                                       "see the decision log")
def test_11_jucys_murphy():
    t0 = time.time()
    checks = []
    r = jucysmurphy.check_conjecture((5, 1), 5)
    ev = jucysmurphy.integer_eigenvalues(jucysmurphy.jm_matrix((5, 1), 5))
    checks.append(("(5,1) k=5", r.computed == [1, 1, 3, 3, 12] and r.ok, str(r.computed)))
    checks.append(("(5,1) eigenvalues", sorted(ev) == [-1, 3, 3, 3, 4], str(ev)))
    bad = [(tuple(r.shape), r.k) for n in range(1, 7) for r in jucysmurphy.sweep(n) if not r.ok]
    checks.append(("all lam |- n <= 6, all k", not bad, f"{len(bad)} mismatches, first {bad[:3]}"))
    dt = time.time() - t0
    checks.append(("time < 10 min", dt < 600, f"{dt:.1f} s"))
    assert record(11, "Jucys-Murphy SNF conjecture checker", checks)


def test_12_random_matrices():
    t0 = time.time()
    checks = []
    stats = randomsnf.run_monte_carlo(randomsnf.SampleSpec(2, 3, 10**5, 10**6, seed=42),
                                      [f"a1={j}" for j in range(1, 6)])
    for s in stats:
        checks.append((s.event, abs(s.estimate - s.reference) < 0.002, f"{s.estimate:.5f} vs {s.reference:.5f}"))
    sig = randomsnf.sigma_limit()
    checks.append(("sigma limit", abs(sig - 0.84693590173) < 1e-9, repr(sig)))
    cyc, gens2 = randomsnf.run_monte_carlo(randomsnf.SampleSpec(8, 8, 10**5, 20_000, seed=7), ["cyclic", "gens2"])
    checks.append(("cyclic at n=8", abs(cyc.estimate - sig) < 0.005, f"{cyc.estimate:.4f}"))
    rho2 = randomsnf.rho_reference()[2]
    checks.append(("at most 2 generators", abs(gens2.estimate - rho2) < 0.005, f"{gens2.estimate:.4f} vs {rho2}"))
    c = randomsnf.c_constant()
    checks.append(("c", abs(c - 3.46275) < 1e-5, repr(c)))
    dt = time.time() - t0
    checks.append(("time < 15 min", dt < 900, f"{dt:.1f} s"))
    assert record(12, "random integer matrices: alpha_1 law, cyclicity, <= 2 generators, c", checks)
