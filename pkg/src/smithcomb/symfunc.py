"""Partitions, the operators k d/dp_k p_k in the Schur basis, and binomial matrices.

The matrix of ``psi_{n,k} = k d/dp_k p_k`` on degree-n symmetric functions,
in the Schur basis, is assembled from border strips: p_k s_lam is the signed
sum of s_mu over k-border strips mu/lam (Murnaghan-Nakayama), and
k d/dp_k is its adjoint for the Hall inner product.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from .exactmat import RingMatrix, det_exact, snf
from .rings import ZZ


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; rows and columns are 1-based."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts if p)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("()[]")
        return cls(int(t) for t in text.replace(" ", ",").split(",") if t)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """lambda_i (1-based), zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def multiplicity(self, k: int) -> int:
        return sum(1 for p in self if p == k)

    def conjugate(self) -> "Partition":
        return Partition(sum(1 for p in self if p > j) for j in range(self[0] if self else 0))

    def cells(self):
        return [(i + 1, j + 1) for i, p in enumerate(self) for j in range(p)]

    def __contains__(self, cell):
        if isinstance(cell, tuple) and len(cell) == 2:
            i, j = cell
            return 1 <= i <= len(self) and 1 <= j <= self[i - 1]
        return super().__contains__(cell)

    def content(self, cell) -> int:
        i, j = cell
        return j - i

    def contents(self):
        return [j - i for i, j in self.cells()]

    def hook(self, cell) -> int:
        i, j = cell
        return self[i - 1] - j + self.conjugate().part(j) - i + 1

    def hooks(self):
        conj = self.conjugate()
        return [self[i - 1] - j + conj.part(j) - i + 1 for i, j in self.cells()]

    @property
    def rank(self) -> int:
        """Durfee square side: number of i with lambda_i >= i."""
        return sum(1 for i, p in enumerate(self, 1) if p >= i)

    def addable(self):
        """Cells whose addition gives a partition."""
        out = []
        for i in range(1, len(self) + 2):
            j = self.part(i) + 1
            if i == 1 or self.part(i - 1) >= j:
                out.append((i, j))
        return out

    def add_cell(self, cell) -> "Partition":
        i, j = cell
        parts = list(self) + [0]
        parts[i - 1] += 1
        return Partition(parts)

    def removable(self):
        return [(i, p) for i, p in enumerate(self, 1) if self.part(i + 1) < p]

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")"


def partitions_of(n: int) -> List[Partition]:
    """All partitions of n in reverse-lexicographic order: (n), (n-1,1), ..."""
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def _partitions(n, maxpart):
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


# ---------------------------------------------------------------------------
# border strips

@dataclass(frozen=True)
class BorderStripMove:
    source: Partition
    result: Partition
    size: int
    height: int  # rows spanned minus one


def add_border_strips(lam: Partition, k: int) -> List[BorderStripMove]:
    """All mu with mu/lam a k-border strip, found by scanning top and bottom rows.

    If the strip spans rows top..bot then each row i > top grows to
    lam_{i-1} + 1 (the strip hugs the old rim), and the top row takes the
    remaining cells without overtaking the row above it.
    """
    lam = Partition(lam)
    out = []
    L = len(lam)
    for top in range(1, L + 2):
        used = 0
        for bot in range(top, L + k + 1):
            if bot > top:
                used += lam.part(bot - 1) + 1 - lam.part(bot)
            rest = k - used
            if rest < 1:
                break
            new_top = lam.part(top) + rest
            if top > 1 and new_top > lam.part(top - 1):
                continue
            parts = [lam.part(i) for i in range(1, max(L, bot) + 1)]
            parts[top - 1] = new_top
            for i in range(top + 1, bot + 1):
                parts[i - 1] = lam.part(i - 1) + 1
            mu = Partition(parts)
            assert _is_border_strip(lam, mu), (lam, mu)
            out.append(BorderStripMove(lam, mu, k, bot - top))
    return out


def _is_border_strip(lam, mu) -> bool:
    if any(lam.part(i) > mu.part(i) for i in range(1, len(mu) + 1)):
        return False
    cells = {(i, j) for i in range(1, len(mu) + 1) for j in range(lam.part(i) + 1, mu.part(i) + 1)}
    if not cells:
        return False
    for (i, j) in cells:
        if {(i, j + 1), (i + 1, j), (i + 1, j + 1)} <= cells:
            return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for c in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if c in cells and c not in seen:
                seen.add(c)
                stack.append(c)
    return len(seen) == len(cells)


# ---------------------------------------------------------------------------
# psi matrices

def psi_matrix(n: int) -> RingMatrix:
    """[psi_n] in the Schur basis: entry (nu, lam) counts mu covering both."""
    parts = partitions_of(n)
    ups = {lam: {lam.add_cell(c) for c in lam.addable()} for lam in parts}
    return RingMatrix([[len(ups[nu] & ups[lam]) for lam in parts] for nu in parts], ZZ)


def psi_k_matrix(n: int, k: int) -> RingMatrix:
    """[k d/dp_k p_k] in the Schur basis of degree n."""
    parts = partitions_of(n)
    up = {lam: {m.result: (-1) ** m.height for m in add_border_strips(lam, k)} for lam in parts}
    rows = []
    for nu in parts:
        row = []
        for lam in parts:
            s = 0
            for mu, e in up[lam].items():
                f = up[nu].get(mu)
                if f is not None:
                    s += e * f
            row.append(s)
        rows.append(row)
    return RingMatrix(rows, ZZ)


def psi_eigenvalue_product(n: int, k: int = 1) -> int:
    """prod over lam |- n of k(m_k(lam) + 1), the determinant predicted by the p-basis eigenvectors."""
    out = 1
    for lam in partitions_of(n):
        out *= k * (lam.multiplicity(k) + 1)
    return out


def eigenvalue_multiset(n: int, k: int = 1) -> List[int]:
    """M_k(n): the numbers k(m_k(lam) + 1) over lam |- n."""
    return [k * (lam.multiplicity(k) + 1) for lam in partitions_of(n)]


def conjectured_snf_from_multiset(M: Sequence[int]) -> List[int]:
    """Peel distinct elements: the last entry is the product of the distinct
    values, the next one the product of the distinct values left, and so on.
    Returned ascending, padded with 1s to length |M|."""
    left = Counter(M)
    out = []
    while left:
        prod = 1
        for v in list(left):
            prod *= v
            left[v] -= 1
            if not left[v]:
                del left[v]
        out.append(prod)
    out += [1] * (len(M) - len(out))
    return sorted(out)


def cai_form_a(n: int) -> Optional[List[int]]:
    """Invariant factors of [psi_n] from the multiplicity description.

    Only meaningful for n >= 5, where the ranges of the description are
    well formed; returns None below that.
    """
    if n < 5:
        return None
    p = partition_count
    out = [(n + 1) * math.factorial(n - 1)]
    for k in range(3, n - 1):
        out += [math.factorial(n - k)] * (p(k + 1) - 2 * p(k) + p(k - 1))
    out += [1] * (p(n) - p(n - 1) + p(n - 2))
    return sorted(out)


@dataclass
class CaiReport:
    n: int
    computed: List[int]
    form_b: List[int]
    form_a: Optional[List[int]]
    det: int
    det_expected: int

    @property
    def ok(self) -> bool:
        return (self.computed == self.form_b
                and (self.form_a is None or self.form_a == self.computed)
                and self.det == self.det_expected)


def verify_thm_cai(n: int) -> CaiReport:
    A = psi_matrix(n)
    computed = snf(A).diagonal
    return CaiReport(n, computed, conjectured_snf_from_multiset(eigenvalue_multiset(n)),
                     cai_form_a(n), det_exact(A), psi_eigenvalue_product(n))


@dataclass
class NieReport:
    n: int
    k: int
    computed: List[int]
    predicted: List[int]
    det: int
    det_expected: int

    @property
    def ok(self) -> bool:
        return self.computed == self.predicted and self.det == self.det_expected


def verify_nie(n: int, k: int) -> NieReport:
    A = psi_k_matrix(n, k)
    return NieReport(n, k, snf(A).diagonal, conjectured_snf_from_multiset(eigenvalue_multiset(n, k)),
                     det_exact(A), psi_eigenvalue_product(n, k))


# ---------------------------------------------------------------------------
# binomial-coefficient matrices

def binomial_matrix(a: int, n: int) -> RingMatrix:
    """[C(a(i+j), i+j)] for 0 <= i, j <= n-1."""
    if a < 1 or n < 0:
        raise ValueError("need a >= 1 and n >= 0")
    return RingMatrix([[math.comb(a * (i + j), i + j) for j in range(n)] for i in range(n)], ZZ)


def binomial_snf_stats(a: int, n: int):
    """(SNF diagonal, number of diagonal entries equal to 3 when a == 3, else None)."""
    d = snf(binomial_matrix(a, n)).diagonal
    return d, (sum(1 for x in d if x == 3) if a == 3 else None)


# ---------------------------------------------------------------------------
# character-table oracle (Frobenius formula), independent of border strips

def _poly_mul(a: Dict[tuple, int], b: Dict[tuple, int]) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def _frobenius_table(n: int):
    """chi^lam(rho) for lam, rho |- n as coefficients of x^(lam+delta) in a_delta * p_rho."""
    ell = max(n, 1)
    delta = tuple(ell - 1 - i for i in range(ell))
    # Vandermonde a_delta = prod_{i<j} (x_i - x_j)
    vand = {tuple([0] * ell): 1}
    for i in range(ell):
        for j in range(i + 1, ell):
            ei = tuple(1 if t == i else 0 for t in range(ell))
            ej = tuple(1 if t == j else 0 for t in range(ell))
            vand = _poly_mul(vand, {ei: 1, ej: -1})
    parts = partitions_of(n)
    table = {}
    for rho in parts:
        poly = vand
        for r in rho:
            pr = {tuple(r if t == i else 0 for t in range(ell)): 1 for i in range(ell)}
            poly = _poly_mul(poly, pr)
        for lam in parts:
            key = tuple(lam.part(i + 1) + delta[i] for i in range(ell))
            table[lam, rho] = poly.get(key, 0)
    return table


def z_rho(rho: Partition) -> int:
    out = 1
    for k, m in Counter(rho).items():
        out *= k ** m * math.factorial(m)
    return out


def psi_k_matrix_from_characters(n: int, k: int) -> RingMatrix:
    """Sum over rho of chi^lam(rho) chi^nu(rho) k(m_k(rho)+1) / z_rho."""
    chi = _frobenius_table(n)
    parts = partitions_of(n)
    rows = []
    for nu in parts:
        row = []
        for lam in parts:
            s = Fraction(0)
            for rho in parts:
                s += Fraction(chi[lam, rho] * chi[nu, rho] * k * (rho.multiplicity(k) + 1), z_rho(rho))
            if s.denominator != 1:
                raise AssertionError("non-integral operator entry")
            row.append(int(s))
        rows.append(row)
    return RingMatrix(rows, ZZ)
