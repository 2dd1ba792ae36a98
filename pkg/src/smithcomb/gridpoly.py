"""Generating polynomials of skew shapes inside a partition and the matrices M(i,j).

For a partition lam, every cell (r, s) of the extended shape lam* carries
P_rs, the sum over partitions mu inside lam(r, s) of the product of the
cell variables of lam(r, s) minus mu.  M(i, j) collects the P_rs over the
square block of lam* whose top-left cell is (i, j) and whose bottom-right
cell is the first one outside lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .errors import OutOfShape
from .exactmat import RingMatrix, det_exact, snf, snf_via_minors
from .rings import ZZ, MultiPoly, multipoly_ring, poly_ring, specialize
from .symfunc import Partition


def var_name(i: int, j: int) -> str:
    return f"x_{i}_{j}"


class ExtendedPartition:
    """lam together with lam*, cell variables and the sub-shapes lam(r, s)."""

    def __init__(self, lam, aliases: Optional[Dict[Tuple[int, int], str]] = None):
        self.base = Partition(lam)
        lam = self.base
        ell = len(lam)
        star = [lam.part(1) + 1] + [lam.part(i - 1) + 1 for i in range(2, ell + 2)]
        self.star = Partition(star)
        aliases = aliases or {}
        self.names = {c: aliases.get(c, var_name(*c)) for c in lam.cells()}
        self.vars = tuple(self.names[c] for c in lam.cells())
        self.ring = multipoly_ring(self.vars)

    def in_star(self, r: int, s: int) -> bool:
        return (r, s) in self.star

    def sub_shape(self, r: int, s: int) -> Partition:
        """lam(r, s): cells (u, v) of lam with u >= r and v >= s, as a partition."""
        lam = self.base
        return Partition(max(lam.part(u) - s + 1, 0) for u in range(r, len(lam) + 1))

    def rank_at(self, r: int, s: int) -> int:
        return self.sub_shape(r, s).rank

    def x(self, i: int, j: int) -> MultiPoly:
        return MultiPoly.var(self.names[(i, j)], self.vars)

    def _require(self, r, s):
        if not self.in_star(r, s):
            raise OutOfShape(f"cell ({r},{s}) is not in the extended shape {self.star}")


@lru_cache(maxsize=None)
def subpartitions(shape: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    """All partitions mu with mu_i <= shape_i for every i."""
    shape = tuple(shape)

    def rec(i, bound):
        if i == len(shape):
            yield ()
            return
        for v in range(min(bound, shape[i]), -1, -1):
            for rest in rec(i + 1, v):
                yield (v,) + rest

    return tuple(rec(0, shape[0] if shape else 0))


def p_rs(E: ExtendedPartition, r: int, s: int) -> MultiPoly:
    """P_rs = sum over mu inside lam(r,s) of prod of x over lam(r,s) minus mu."""
    E._require(r, s)
    sub = E.sub_shape(r, s)
    R = E.ring
    total: Dict[tuple, int] = {}
    index = {c: k for k, c in enumerate(E.base.cells())}
    nv = len(E.vars)
    for mu in subpartitions(tuple(sub)):
        e = [0] * nv
        for a, row_len in enumerate(sub, 1):
            m = mu[a - 1] if a - 1 < len(mu) else 0
            for b in range(m + 1, row_len + 1):
                e[index[(r + a - 1, s + b - 1)]] = 1
        key = tuple(e)
        total[key] = total.get(key, 0) + 1
    return MultiPoly(total, R.vars)


def a_rs(E: ExtendedPartition, r: int, s: int) -> MultiPoly:
    """A_rs = product of the variables of lam(r, s) (1 when empty)."""
    E._require(r, s)
    sub = E.sub_shape(r, s)
    out = MultiPoly.const(1, E.vars)
    for a, row_len in enumerate(sub, 1):
        for b in range(1, row_len + 1):
            out = out * E.x(r + a - 1, s + b - 1)
    return out


def build_M(E: ExtendedPartition, i: int = 1, j: int = 1) -> RingMatrix:
    """(rho_ij + 1)-square matrix of P_rs over the block of lam* at (i, j)."""
    E._require(i, j)
    m = E.rank_at(i, j) + 1
    return RingMatrix([[p_rs(E, i + a, j + b) for b in range(m)] for a in range(m)], E.ring)


def diagonal_monomials(E: ExtendedPartition) -> List[MultiPoly]:
    """(A_11, A_22, ..., A_{rho+1,rho+1})."""
    rho = E.base.rank
    return [a_rs(E, k, k) for k in range(1, rho + 2)]


def leading_term(p: MultiPoly):
    """Unique monomial of highest total degree, or None when there is a tie."""
    top = p.total_degree()
    terms = [(e, c) for e, c in p.terms.items() if sum(e) == top]
    if len(terms) != 1:
        return None
    e, c = terms[0]
    return MultiPoly({e: c}, p.vars)


@dataclass
class BessenReport:
    shape: Partition
    det: MultiPoly
    det_expected: MultiPoly
    chain_expected: List[MultiPoly]  # ascending: A_{rho+1,rho+1}, ..., A_11
    chain_computed: Optional[List[MultiPoly]]  # from minor gcds, None if skipped

    @property
    def det_ok(self) -> bool:
        return self.det == self.det_expected

    @property
    def ok(self) -> bool:
        return self.det_ok and (self.chain_computed is None or self.chain_computed == self.chain_expected)


def verify_thm_bessen(lam, minors: Optional[bool] = None, aliases=None) -> BessenReport:
    """Check det M(1,1) = prod A_kk and, for |lam| <= 6 by default, that the
    minor-gcd quotients over Z[x] give the ascending chain of A_kk."""
    E = ExtendedPartition(lam, aliases)
    M = build_M(E)
    diag = diagonal_monomials(E)
    expected = MultiPoly.const(1, E.vars)
    for a in diag:
        expected = expected * a
    det = det_exact(M)
    if minors is None:
        minors = E.base.size <= 6
    chain = None
    if minors:
        chain = snf_via_minors(M).diagonal
    return BessenReport(E.base, det, expected, list(reversed(diag)), chain)


@dataclass
class GridSpecialization:
    shape: Partition
    binding: str
    det: object
    snf: list


def specialize_grid(lam, binding: str = "ones") -> GridSpecialization:
    """Set every x_ij to 1 (SNF over Z) or to q (SNF over Q[q])."""
    E = ExtendedPartition(lam)
    M = build_M(E)
    if binding == "ones":
        vals = {v: 1 for v in E.vars}
        A = RingMatrix([[specialize(x, vals) for x in row] for row in M.rows], ZZ)
    elif binding == "q":
        R = poly_ring("q")
        q = R.gen()
        vals = {v: q for v in E.vars}
        A = RingMatrix([[R.coerce(specialize(x, vals)) for x in row] for row in M.rows], R)
    else:
        raise ValueError("binding must be 'ones' or 'q'")
    return GridSpecialization(E.base, binding, det_exact(A), snf(A).diagonal)


FIG2_ALIASES = {(1, 1): "a", (1, 2): "b", (1, 3): "c", (2, 1): "d", (2, 2): "e"}
