import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from smithcomb.errors import MNTooSmall
from smithcomb.randomsnf import (
    RHO_REFERENCE,
    SampleSpec,
    alpha1_prob,
    c_constant,
    ekedahl_sigma,
    euler_tail_bound,
    primes_upto,
    reference_value,
    rho_reference,
    run_monte_carlo,
    sigma_limit,
    ws_example_prob,
    zeta,
)


def test_zeta_against_mpmath():
    for s in (2, 3, 4.5, 6, 12, 40):
        assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-14)
    with pytest.raises(ValueError):
        zeta(1)


def test_sigma_limit():
    assert abs(sigma_limit() - 0.84693590173) < 1e-9
    mpmath.mp.dps = 30
    ref = 1 / (mpmath.zeta(6) * mpmath.nprod(lambda j: mpmath.zeta(j), [4, mpmath.inf]))
    assert sigma_limit() == pytest.approx(float(ref), rel=1e-12)
    assert abs(sigma_limit() - RHO_REFERENCE[1]) < 1e-11


def test_ekedahl_small_cases():
    # sigma(2) = prod_p (1 + p^-2) / zeta(2) = 1 / zeta(4)
    assert ekedahl_sigma(2) == pytest.approx(1 / zeta(4), rel=1e-9)
    vals = [ekedahl_sigma(n) for n in range(2, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    # the gap to the limit shrinks like 2^-n
    for n in (11, 20, 30):
        assert abs(ekedahl_sigma(n) - sigma_limit()) < 2.0 ** -n


def test_c_constant():
    assert abs(c_constant() - 3.46275) < 1e-5
    mpmath.mp.dps = 30
    ref = 1 / mpmath.nprod(lambda i: 1 - mpmath.mpf(2) ** -i, [1, mpmath.inf])
    assert c_constant() == pytest.approx(float(ref), rel=1e-13)


def test_rho_reference_is_increasing():
    rho = rho_reference()
    assert [rho[j] for j in sorted(rho)] == sorted(rho.values())
    assert all(0 < v < 1 for v in rho.values())


@given(st.integers(1, 4), st.integers(1, 4))
def test_alpha1_law_sums_to_one(m, n):
    if m * n == 1:
        with pytest.raises(MNTooSmall):
            alpha1_prob(1, m, n)
        return
    s = math.fsum(alpha1_prob(j, m, n) for j in range(1, 20000))
    assert s == pytest.approx(1.0, abs=20000.0 ** (1 - m * n) + 1e-12)


def test_alpha1_coprimality():
    # P(alpha_1 odd and prime to 3) factors as the product of the two local probabilities
    s = 6
    p2 = 1 - 2.0 ** -s
    p3 = 1 - 3.0 ** -s
    both = math.fsum(alpha1_prob(j, 2, 3) for j in range(1, 50000) if j % 2 and j % 3)
    assert both == pytest.approx(p2 * p3, abs=1e-9)


def test_primes_and_tail_bound():
    assert list(primes_upto(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(100_000)) == 9592
    assert euler_tail_bound(3, 100_000) < 1e-9


def test_ws_formula_matches_simulation():
    assert ws_example_prob(2) == 0.0
    assert ws_example_prob(3) == pytest.approx(2.98e-5, rel=0.01)
    # a 3 x 3 run: 2e5 samples, the event is rare, so agreement within 3 standard errors
    st_ = run_monte_carlo(SampleSpec(3, 3, 10**5, 200_000, seed=5), ["ws"], workers=2)[0]
    assert abs(st_.estimate - ws_example_prob(3)) < 3 * max(st_.stderr, 1e-5)


def test_monte_carlo_reproducible_and_worker_independent():
    spec = SampleSpec(2, 2, 1000, 25_000, seed=11)
    a = run_monte_carlo(spec, ["a1=1", "odd", "coprime6"], workers=1)
    b = run_monte_carlo(spec, ["a1=1", "odd", "coprime6"], workers=3)
    assert [x.hits for x in a] == [x.hits for x in b]
    c = run_monte_carlo(SampleSpec(2, 2, 1000, 25_000, seed=12), ["a1=1"])
    assert c[0].hits != a[0].hits


def test_full_and_fast_paths_agree_on_alpha1():
    spec = SampleSpec(3, 3, 50, 3000, seed=2)
    fast = run_monte_carlo(spec, ["a1=1", "a1=2"])
    full = run_monte_carlo(spec, ["a1=1", "a1=2", "cyclic"])
    assert [s.hits for s in fast] == [s.hits for s in full[:2]]


def test_alpha1_monte_carlo_small():
    stats = run_monte_carlo(SampleSpec(2, 3, 10**5, 200_000, seed=1), [f"a1={j}" for j in range(1, 4)])
    for s in stats:
        assert abs(s.estimate - s.reference) < 4 * s.stderr + 1e-4


def test_event_parsing_and_references():
    with pytest.raises(ValueError):
        run_monte_carlo(SampleSpec(2, 2, 10, 10), ["bogus"])
    assert reference_value("cyclic", 4, 4) == ekedahl_sigma(4)
    assert reference_value("gens2", 4, 4) is None
    with pytest.raises(ValueError):
        SampleSpec(2, 2, 0, 10)


def test_event_stats_json():
    s = run_monte_carlo(SampleSpec(2, 2, 10, 100, seed=0), ["a1=1"])[0]
    d = s.to_json()
    assert d["N"] == 100 and 0 <= d["estimate"] <= 1
