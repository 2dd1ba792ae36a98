"""Jacobi-Trudi matrices specialized at x = 1^n (and the q-analogue 1, q, ..., q^(n-1)).

Entries become polynomials in n: h_k(1^n) = C(n+k-1, k).  Their Smith forms
over Q[n] (resp. Q(q)[n]) are products of linear factors n + c(u) over the
diagonal hooks of the shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import TTooSmall
from .exactmat import RingMatrix, det_exact, snf
from .rings import RatFunc, UniPoly, poly_ring, q_bracket, ratfunc_field, ratfunc_poly_ring
from .symfunc import Partition

NVAR = "n"
QVAR = "q"


def poly_binomial(c: int, e: int, var: str = NVAR) -> UniPoly:
    """C(n + c, e) as a polynomial in n: prod_{s<e} (n + c - s) / e!."""
    if e < 0:
        return UniPoly((), var)
    out = UniPoly.const(1, var)
    n = UniPoly.gen(var)
    for s in range(e):
        out = out * (n + (c - s))
    return out / math.factorial(e)


def phi_h(k: int, var: str = NVAR) -> UniPoly:
    """h_k(1^n) = C(n+k-1, k); 1 for k = 0 and 0 for k < 0."""
    if k < 0:
        return UniPoly((), var)
    return poly_binomial(k - 1, k, var)


def _check(lam, t):
    lam = Partition(lam)
    if t < len(lam):
        raise TTooSmall(f"t={t} is smaller than the length {len(lam)} of {lam}")
    return lam


def jt_specialized(lam, t: int) -> RingMatrix:
    """[h_{lam_i + j - i}(1^n)]_{i,j=1..t} over Q[n]."""
    lam = _check(lam, t)
    R = poly_ring(NVAR)
    return RingMatrix([[phi_h(lam.part(i) + j - i) for j in range(1, t + 1)] for i in range(1, t + 1)], R)


def diagonal_hook(lam, k: int):
    """Cells (k, j), j >= k, and (i, k), i >= k, of lam."""
    lam = Partition(lam)
    if lam.part(k) < k:
        return []
    row = [(k, j) for j in range(k, lam.part(k) + 1)]
    col = [(i, k) for i in range(k + 1, len(lam) + 1) if lam.part(i) >= k]
    return row + col


def hook_content_alphas(lam, t: int) -> List[UniPoly]:
    """alpha_i = prod over u in D_{t-i+1} of (n + c(u)), listed for i = 1..t."""
    lam = _check(lam, t)
    n = UniPoly.gen(NVAR)
    out = []
    for i in range(1, t + 1):
        p = UniPoly.const(1, NVAR)
        for (a, b) in diagonal_hook(lam, t - i + 1):
            p = p * (n + (b - a))
        out.append(p)
    return out


def hook_content_product(lam) -> UniPoly:
    n = UniPoly.gen(NVAR)
    p = UniPoly.const(1, NVAR)
    for c in Partition(lam).contents():
        p = p * (n + c)
    return p


@dataclass
class JTReport:
    shape: Partition
    t: int
    computed: list
    predicted: list
    det: object
    det_ratio: Optional[Fraction]  # prod (n + c(u)) / det, expected to be the positive integer H_lambda

    @property
    def ok(self) -> bool:
        r = self.det_ratio
        return (self.computed == self.predicted and r is not None
                and r.denominator == 1 and r > 0)


def verify_thm_jt(lam, t: int) -> JTReport:
    A = jt_specialized(lam, t)
    lam = Partition(lam)
    computed = snf(A).diagonal
    predicted = hook_content_alphas(lam, t)
    det = det_exact(A)
    hc = hook_content_product(lam)
    ratio = None
    if not det.is_zero():
        q, r = divmod(hc, det)
        if r.is_zero() and q.is_constant():
            ratio = q.lc
    return JTReport(lam, t, computed, predicted, det, ratio)


# ---------------------------------------------------------------------------
# q-analogue

def _nq_ring():
    return ratfunc_poly_ring(QVAR, NVAR)


def f_q(k: int) -> UniPoly:
    """n (n + (1)) ... (n + (k-1)) / ((1)(2)...(k)) in Q(q)[n]; f(0) = 1, f(k<0) = 0."""
    R = _nq_ring()
    if k < 0:
        return R.zero
    if k == 0:
        return R.one
    n = R.gen()
    num = R.one
    den = ratfunc_field(QVAR).one
    for j in range(k):
        num = num * (n + q_bracket(j, QVAR)) if j else num * n
    for j in range(1, k + 1):
        den = den * q_bracket(j, QVAR)
    return num * den.inverse()


def jt_q_specialized(lam, t: int) -> RingMatrix:
    lam = _check(lam, t)
    return RingMatrix([[f_q(lam.part(i) + j - i) for j in range(1, t + 1)] for i in range(1, t + 1)], _nq_ring())


def hook_content_gammas(lam, t: int) -> List[UniPoly]:
    """gamma_i = prod over u in D_{t-i+1} of (n + (c(u))), (j) the q-integer."""
    lam = _check(lam, t)
    R = _nq_ring()
    n = R.gen()
    out = []
    for i in range(1, t + 1):
        p = R.one
        for (a, b) in diagonal_hook(lam, t - i + 1):
            p = p * (n + q_bracket(b - a, QVAR))
        out.append(p)
    return out


def at_q_equals_one(A: RingMatrix) -> RingMatrix:
    """Substitute q = 1 in every coefficient (each must be regular at q = 1)."""
    R = poly_ring(NVAR)

    def sub(p):
        return UniPoly([c(Fraction(1)) if isinstance(c, RatFunc) else c for c in p.coeffs], NVAR)

    return RingMatrix([[sub(x) for x in row] for row in A.rows], R)


@dataclass
class JTQReport:
    shape: Partition
    t: int
    computed: list
    predicted: list

    @property
    def ok(self) -> bool:
        return self.computed == self.predicted


def verify_thm_jtq(lam, t: int) -> JTQReport:
    A = jt_q_specialized(lam, t)
    computed = snf(A).diagonal
    R = A.ring
    predicted = [R.normal(g)[0] for g in hook_content_gammas(lam, t)]
    return JTQReport(Partition(lam), t, computed, predicted)


def factored_linear(p: UniPoly) -> str:
    """Write a product of distinct monic linear factors in n as '(n-1)*n*(n+2)'."""
    if p.degree <= 0:
        return str(p)
    roots = []
    rest = p
    for r in range(-p.degree - 64, p.degree + 65):
        while rest.degree > 0 and rest(Fraction(r)) == 0:
            roots.append(r)
            rest = rest.exact_div(UniPoly((-r, 1), p.var))
    if rest.degree > 0:
        return str(p)
    parts = []
    for r in sorted(roots, reverse=True):
        c = -r
        parts.append(p.var if c == 0 else f"({p.var}{'+' if c > 0 else '-'}{abs(c)})")
    lead = "" if rest.lc == 1 else f"{rest.lc}*"
    return lead + "*".join(parts)
