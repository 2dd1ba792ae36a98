"""Standard Young tableaux, Young's natural representation and Jucys-Murphy matrices.

Young's natural representation acts on polytabloids e_T (T standard), which
span the Specht module inside the tabloid permutation module.  We compute
pi e_T = e_{pi T} as a tabloid vector and re-express it in the e_T basis by
solving the unitriangular system read off on the standard tabloids.
All matrices are integral, so Smith forms over Z make sense.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .errors import TooLarge
from .exactmat import RingMatrix, det_exact, snf
from .rings import ZZ, UniPoly, poly_ring
from .symfunc import Partition, partitions_of

MAX_SYT = 9
MAX_REP = 7

Cell = Tuple[int, int]
# an SYT is stored as a tuple of rows, each a tuple of entries
SYT = Tuple[Tuple[int, ...], ...]


def _shape(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


@lru_cache(maxsize=None)
def _syt(lam: Partition) -> Tuple[SYT, ...]:
    n = lam.size
    if n == 0:
        return ((),)
    out = []
    for (i, j) in lam.removable():
        smaller = list(lam)
        smaller[i - 1] -= 1
        for T in _syt(Partition(smaller)):
            rows = [list(r) for r in T] + [[] for _ in range(len(lam) - len(T))]
            rows[i - 1].append(n)
            out.append(tuple(tuple(r) for r in rows))
    return tuple(sorted(out))


def syt_enumerate(lam) -> List[SYT]:
    """All standard Young tableaux of shape lam, sorted by their rows."""
    lam = _shape(lam)
    if lam.size > MAX_SYT:
        raise TooLarge(f"SYT enumeration limited to |lambda| <= {MAX_SYT}")
    return list(_syt(lam))


def f_lambda(lam) -> int:
    """Number of SYT, by the hook length formula."""
    lam = _shape(lam)
    return math.factorial(lam.size) // math.prod(lam.hooks())


def position_of(T: SYT, k: int) -> Cell:
    for i, row in enumerate(T, 1):
        for j, x in enumerate(row, 1):
            if x == k:
                return (i, j)
    raise ValueError(f"{k} does not occur in {T}")


def positions_of_k(lam, k: int) -> List[Cell]:
    """Cell holding k, one per SYT (in enumeration order)."""
    return [position_of(T, k) for T in syt_enumerate(lam)]


def S_r_sets(lam, k: int) -> List[frozenset]:
    """S_1 >= S_2 >= ... >= S_f: cells that hold k in at least r tableaux."""
    pos = positions_of_k(lam, k)
    counts: Dict[Cell, int] = {}
    for c in pos:
        counts[c] = counts.get(c, 0) + 1
    return [frozenset(c for c, m in counts.items() if m >= r) for r in range(1, len(pos) + 1)]


def conjectured_snf(lam, k: int) -> List[int]:
    """alpha_{f-r+1} = |prod over S_r of (j - i)|, listed as alpha_1, ..., alpha_f."""
    S = S_r_sets(lam, k)
    f = len(S)
    alpha = [0] * f
    for r, cells in enumerate(S, 1):
        alpha[f - r] = abs(math.prod(j - i for i, j in cells))
    return alpha


# ---------------------------------------------------------------------------
# Young's natural representation

def _tabloid(rows) -> tuple:
    return tuple(tuple(sorted(r)) for r in rows)


def _columns(lam: Partition):
    conj = lam.conjugate()
    return [[(i, j) for i in range(1, conj.part(j) + 1)] for j in range(1, len(conj) + 1)]


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@lru_cache(maxsize=None)
def _column_group(lam: Partition):
    """Signed permutations of cells that preserve every column."""
    cols = _columns(lam)
    per_col = [[(p, _perm_sign(p)) for p in itertools.permutations(range(len(c)))] for c in cols]
    out = []
    for choice in itertools.product(*per_col):
        mapping = {}
        sign = 1
        for col, (p, s) in zip(cols, choice):
            sign *= s
            for a, b in enumerate(p):
                mapping[col[a]] = col[b]
        out.append((mapping, sign))
    return out


def polytabloid(lam, rows) -> Dict[tuple, int]:
    """e_T = sum over column permutations sigma of sgn(sigma) {sigma T}, for any filling T."""
    lam = _shape(lam)
    cells = lam.cells()
    entry = {(i, j): rows[i - 1][j - 1] for i, j in cells}
    out: Dict[tuple, int] = {}
    for mapping, sign in _column_group(lam):
        new = [[] for _ in lam]
        for c in cells:
            i, _ = mapping[c]
            new[i - 1].append(entry[c])
        key = _tabloid(new)
        out[key] = out.get(key, 0) + sign
    return {k: v for k, v in out.items() if v}


class _Specht:
    """Polytabloid basis data for one shape."""

    def __init__(self, lam: Partition):
        self.lam = lam
        self.tableaux = syt_enumerate(lam)
        self.index = {_tabloid(T): a for a, T in enumerate(self.tableaux)}
        f = len(self.tableaux)
        # M[a][b] = coefficient of the standard tabloid {T_a} in e_{T_b}
        M = [[Fraction(0)] * f for _ in range(f)]
        for b, T in enumerate(self.tableaux):
            for key, c in polytabloid(lam, T).items():
                a = self.index.get(key)
                if a is not None:
                    M[a][b] = Fraction(c)
        self.Minv = _invert(M)

    def coordinates(self, vec: Dict[tuple, int]) -> List[int]:
        v = [0] * len(self.tableaux)
        for key, c in vec.items():
            a = self.index.get(key)
            if a is not None:
                v[a] = c
        out = []
        for row in self.Minv:
            s = sum(x * y for x, y in zip(row, v))
            if s.denominator != 1:
                raise ArithmeticError("non-integral polytabloid coordinates")
            out.append(int(s))
        return out

    def act(self, perm) -> List[List[int]]:
        """Matrix of the permutation perm (a dict or tuple on 1..n) on the e_T basis."""
        n = self.lam.size
        p = perm if isinstance(perm, dict) else {i + 1: perm[i] for i in range(n)}
        cols = []
        for T in self.tableaux:
            moved = [[p.get(x, x) for x in row] for row in T]
            cols.append(self.coordinates(polytabloid(self.lam, moved)))
        f = len(self.tableaux)
        return [[cols[b][a] for b in range(f)] for a in range(f)]


def _invert(M):
    f = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(f)] for i, row in enumerate(M)]
    for c in range(f):
        piv = next(r for r in range(c, f) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(f):
            if r != c and A[r][c] != 0:
                m = A[r][c]
                A[r] = [x - m * y for x, y in zip(A[r], A[c])]
    return [row[f:] for row in A]


@lru_cache(maxsize=None)
def _specht(lam: Partition) -> _Specht:
    return _Specht(lam)


def _check_rep(lam) -> Partition:
    lam = _shape(lam)
    if lam.size > MAX_REP:
        raise TooLarge(f"natural representation limited to |lambda| <= {MAX_REP}")
    return lam


def natural_rep(lam) -> List[RingMatrix]:
    """Matrices of s_1, ..., s_{n-1} in Young's natural representation."""
    lam = _check_rep(lam)
    sp = _specht(lam)
    out = []
    for i in range(1, lam.size):
        out.append(RingMatrix(sp.act({i: i + 1, i + 1: i}), ZZ))
    return out


def rep_of_permutation(lam, perm) -> RingMatrix:
    """Direct matrix of an arbitrary permutation (one-line tuple on 1..n)."""
    lam = _check_rep(lam)
    return RingMatrix(_specht(lam).act(tuple(perm)), ZZ)


def transposition_word(i: int, k: int) -> List[int]:
    """(i, k) = s_{k-1} ... s_{i+1} s_i s_{i+1} ... s_{k-1}, as generator indices."""
    up = list(range(k - 1, i, -1))
    return up + [i] + up[::-1]


def jm_matrix(lam, k: int) -> RingMatrix:
    """W_{lam,k} = sum over i < k of rep((i, k))."""
    lam = _check_rep(lam)
    gens = natural_rep(lam)
    f = f_lambda(lam)
    W = RingMatrix.zeros(f, f, ZZ)
    for i in range(1, k):
        M = RingMatrix.identity(f, ZZ)
        for g in transposition_word(i, k):
            M = M @ gens[g - 1]
        W = W + M
    return W


def char_poly(W: RingMatrix, var: str = "t") -> UniPoly:
    """det(t I - W) over Q[t]."""
    R = poly_ring(var)
    t = R.gen()
    n = W.nrows
    rows = [[(t if i == j else R.zero) - W.rows[i][j] for j in range(n)] for i in range(n)]
    return det_exact(RingMatrix(rows, R))


def integer_eigenvalues(W: RingMatrix) -> List[int]:
    """Eigenvalues with multiplicity, assuming the characteristic polynomial splits over Z."""
    p = char_poly(W)
    out = []
    bound = max((abs(x) for row in W.rows for x in row), default=0) * max(W.nrows, 1)
    for r in range(-bound, bound + 1):
        lin = UniPoly((-r, 1), p.var)
        while p.degree > 0 and p(Fraction(r)) == 0:
            out.append(r)
            p = p.exact_div(lin)
    if p.degree > 0:
        raise ArithmeticError("characteristic polynomial does not split over Z")
    return sorted(out, reverse=True)


@dataclass
class ConjectureReport:
    shape: Partition
    k: int
    computed: List[int]
    conjectured: List[int]

    @property
    def ok(self) -> bool:
        return self.computed == self.conjectured

    def to_json(self):
        return {"shape": list(self.shape), "k": self.k, "computed": self.computed,
                "conjectured": self.conjectured, "ok": self.ok}


def check_conjecture(lam, k: int) -> ConjectureReport:
    lam = _check_rep(lam)
    W = jm_matrix(lam, k)
    computed = [abs(x) for x in snf(W).diagonal]
    return ConjectureReport(lam, k, computed, conjectured_snf(lam, k))


def sweep(n: int) -> List[ConjectureReport]:
    """check_conjecture for every lam of n and every k = 1..n."""
    return [check_conjecture(lam, k) for lam in partitions_of(n) for k in range(1, n + 1)]
