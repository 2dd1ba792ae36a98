"""Invariant factors of a square nonsingular matrix over Q[x], prime by prime.

Over a PID the i-th invariant factor is prod_p p^{v_p,i}, where v_p,1 <= v_p,2
<= ... are the invariant-factor valuations of the matrix over the local ring
at p.  Those are computed by elimination in Q[x]/(p^N): as long as every
pivot has valuation < N the result is exact.  The primes come from a
factorization of det(A) that is certified rather than computed outright:

* a max-weight assignment on entry degrees bounds deg det(A) by W;
* cyclotomic primes Phi_d are screened by the rank of A(zeta) mod a prime
  l = 1 mod d (full rank there proves Phi_d does not divide det A);
* if the local valuations found account for degree W - gap, the leftover
  cofactor has degree <= gap and is recovered by interpolating det(A) at
  gap+1 integer points, then factored.

Arithmetic uses python-flint (FLINT's fmpq_poly and matrix types).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from flint import fmpq, fmpq_mat, fmpq_poly, fmpz, fmpz_poly, nmod_mat
from scipy.optimize import linear_sum_assignment

from .rings import UniPoly

CYCLOTOMIC_BOUND = 64
MAX_GAP = 64


def to_flint(p: UniPoly) -> fmpq_poly:
    return fmpq_poly([fmpq(c.numerator, c.denominator) for c in p.coeffs])


def from_flint(f: fmpq_poly, var: str) -> UniPoly:
    return UniPoly([Fraction(int(c.p), int(c.q)) for c in f.coeffs()], var)


def degree_bound(F):
    """Upper bound for deg det via a max-weight assignment; None if structurally singular."""
    neg = -(10 ** 9)
    w = np.array([[f.degree() if not f.is_zero() else neg for f in row] for row in F], dtype=np.int64)
    r, c = linear_sum_assignment(w, maximize=True)
    total = int(w[r, c].sum())
    if total < 0 or any(w[i, j] == neg for i, j in zip(r, c)):
        return None
    return total


def _totient(d):
    out, m, p = d, d, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _prime_1_mod(d, start=2 ** 30):
    k = start // d + 1
    while True:
        ell = k * d + 1
        if fmpz(ell).is_prime():
            return ell
        k += 1


def _root_of_unity(d, ell):
    """A primitive d-th root of unity mod ell (requires d | ell - 1)."""
    primes = [p for p in range(2, d + 1) if d % p == 0 and all(p % r for r in range(2, p))]
    for a in range(2, ell):
        z = pow(a, (ell - 1) // d, ell)
        if all(pow(z, d // p, ell) != 1 for p in primes):
            return z
    raise ValueError("no primitive root found")


def _rank_mod(F, x, ell):
    n = len(F)
    vals = []
    for row in F:
        for f in row:
            num = fmpz_poly(f.numer())
            den = int(f.denom())
            if den % ell == 0:
                return None
            vals.append(int(num(x)) * pow(den, -1, ell) % ell)
    return nmod_mat(n, n, vals, ell).rank()


def _valuation(a, p, N):
    if a.is_zero():
        return N
    v = 0
    while v < N:
        q, r = divmod(a, p)
        if not r.is_zero():
            return v
        a = q
        v += 1
    return v


def local_valuations(F, p, N):
    """Invariant-factor valuations at the irreducible p, working mod p^N.

    Returns the ascending list, or None if precision N ran out.
    """
    S = len(F)
    PN = p ** N
    M = [[f % PN for f in row] for row in F]
    vals = []
    for t in range(S):
        best = None
        for i in range(t, S):
            row = M[i]
            for j in range(t, S):
                e = row[j]
                if not e.is_zero() and not (e % p).is_zero():
                    best = (0, i, j)
                    break
            if best:
                break
        if best is None:
            for i in range(t, S):
                for j in range(t, S):
                    v = _valuation(M[i][j], p, N)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        v, i, j = best
        if v >= N:
            return None
        M[t], M[i] = M[i], M[t]
        if j != t:
            for r in M:
                r[t], r[j] = r[j], r[t]
        piv = M[t][t]
        pv = p ** v
        u = piv // pv
        g, s, _ = u.xgcd(PN)
        uinv = (s / g) % PN
        rowt = M[t]
        h = [None] * S
        for k in range(t + 1, S):
            h[k] = (uinv * (rowt[k] // pv)) % PN
        for i in range(t + 1, S):
            a = M[i][t]
            if a.is_zero():
                continue
            row = M[i]
            for k in range(t + 1, S):
                if not h[k].is_zero():
                    row[k] = (row[k] - a * h[k]) % PN
        vals.append(v)
    return sorted(vals)


def _valuations_adaptive(F, p, W):
    cap = W // p.degree() + 1
    N = min(8, cap)
    while True:
        vals = local_valuations(F, p, N)
        if vals is not None:
            return vals
        if N >= cap:
            raise AssertionError("local elimination failed at the guaranteed precision")
        N = min(2 * N, cap)


def _interpolate(xs, ys):
    """Newton interpolation over Q."""
    coef = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - k])
    poly = fmpq_poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * fmpq_poly([-xs[i], 1]) + coef[i]
    return poly


def local_snf(A):
    """Monic invariant factors of a square matrix over Q[x], or None when the
    method does not apply (singular input or a loose degree bound)."""
    var = A.ring.var
    n = A.nrows
    F = [[to_flint(x) for x in row] for row in A.rows]
    W = degree_bound(F)
    if W is None:
        return None
    # nonsingularity: full rank at some point modulo a large prime
    ell = _prime_1_mod(2)
    if not any(_rank_mod(F, x0, ell) == n for x0 in (12345, 67891, 424242)):
        return None
    primes = []
    for d in range(1, CYCLOTOMIC_BOUND + 1):
        if _totient(d) > W:
            continue
        ell = _prime_1_mod(d)
        z = _root_of_unity(d, ell)
        rk = _rank_mod(F, z, ell)
        if rk == n:
            continue
        primes.append(fmpq_poly(list(fmpz_poly.cyclotomic(d).coeffs())))
    local = []
    found = 0
    for p in primes:
        vals = _valuations_adaptive(F, p, W)
        if any(vals):
            local.append((p, vals))
            found += p.degree() * sum(vals)
    gap = W - found
    if gap < 0:
        raise AssertionError("local valuations exceed the determinant degree bound")
    if gap > MAX_GAP:
        return None
    xs = [fmpq(k) for k in range(2, gap + 3)]
    ys = []
    for x in xs:
        det = fmpq_mat(n, n, [f(x) for row in F for f in row]).det()
        known = fmpq(1)
        for p, vals in local:
            known *= p(x) ** sum(vals)
        ys.append(det / known)
    cof = _interpolate(xs, ys)
    if cof.is_zero():
        return None
    if cof.degree() > 0:
        _, facs = cof.factor()
        for f, _m in facs:
            p = fmpq_poly(f)
            p = p / p.leading_coefficient()
            local.append((p, _valuations_adaptive(F, p, W)))
    diag = [fmpq_poly([1]) for _ in range(n)]
    for p, vals in local:
        for i, v in enumerate(vals):
            if v:
                diag[i] *= p ** v
    out = []
    for f in diag:
        f = f / f.leading_coefficient()
        out.append(from_flint(f, var))
    return out
