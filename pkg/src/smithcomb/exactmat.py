"""Dense matrices over exact rings, Smith normal form, minors and cokernels."""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import BudgetExceeded, KOutOfRange, NonDivisible, NonSquare, TooLarge
from .rings import (
    QQ,
    ZZ,
    IntegerRing,
    MultiPoly,
    MultiPolyRing,
    PolynomialRing,
    RationalField,
    multipoly_ring,
    poly_ring,
    specialize,
)

DEFAULT_BUDGET_BITS = 1_000_000


class RingMatrix:
    """An m x n matrix over ``ring``, stored as a list of row lists."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, rows, ring=ZZ, ncols: Optional[int] = None):
        rows = [[ring.coerce(x) for x in r] for r in rows]
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else (ncols or 0)
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged rows")

    @classmethod
    def _raw(cls, rows, ring, ncols):
        m = object.__new__(cls)
        m.ring, m.rows, m.nrows, m.ncols = ring, rows, len(rows), ncols
        return m

    @classmethod
    def zeros(cls, m, n, ring=ZZ):
        return cls._raw([[ring.zero] * n for _ in range(m)], ring, n)

    @classmethod
    def identity(cls, n, ring=ZZ):
        M = cls.zeros(n, n, ring)
        for i in range(n):
            M.rows[i][i] = ring.one
        return M

    @classmethod
    def diagonal(cls, entries, m=None, n=None, ring=ZZ):
        entries = list(entries)
        m = len(entries) if m is None else m
        n = m if n is None else n
        M = cls.zeros(m, n, ring)
        for i, e in enumerate(entries):
            M.rows[i][i] = ring.coerce(e)
        return M

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy(self):
        return RingMatrix._raw([list(r) for r in self.rows], self.ring, self.ncols)

    def transpose(self):
        return RingMatrix._raw([list(c) for c in zip(*self.rows)] if self.rows else [],
                               self.ring, self.nrows)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        zero = self.ring.zero
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if a != 0 and b != 0:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix._raw(out, self.ring, other.ncols)

    __mul__ = __matmul__

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return RingMatrix._raw([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                               self.ring, self.ncols)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return RingMatrix._raw([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                               self.ring, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def map(self, f, ring):
        return RingMatrix([[f(x) for x in r] for r in self.rows], ring)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RingMatrix":
        return RingMatrix._raw([[self.rows[i][j] for j in cols] for i in rows], self.ring, len(cols))

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.nrows) for j in range(self.ncols) if i != j)

    def __repr__(self):
        return f"RingMatrix({self.nrows}x{self.ncols} over {self.ring!r})"

    def __str__(self):
        return "\n".join(" ".join(self.ring.fmt(x) for x in r) for r in self.rows)

    def to_text(self) -> str:
        body = "\n".join(" ".join(self.ring.fmt(x).replace(" ", "") for x in r) for r in self.rows)
        return f"{self.nrows} {self.ncols}\n{body}\n" if body else f"{self.nrows} {self.ncols}\n"

    def to_json(self):
        return {
            "ring": self.ring.name,
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[self.ring.to_json(x) for x in r] for r in self.rows],
        }


# ---------------------------------------------------------------------------
# text formats

def ring_from_name(name: str):
    """Parse ``z``, ``q``, ``q[x]`` or ``z[x,y,...]`` into a ring descriptor."""
    s = name.strip().lower().replace(" ", "")
    if s in ("z", "zz"):
        return ZZ
    if s in ("q", "qq"):
        return QQ
    if s.endswith("]") and "[" in s:
        base, rest = s.split("[", 1)
        vars = tuple(v for v in name.strip().replace(" ", "").split("[", 1)[1][:-1].split(",") if v)
        if base in ("q", "qq") and len(vars) == 1:
            return poly_ring(vars[0])
        if base in ("z", "zz") and vars:
            return multipoly_ring(vars)
    raise ValueError(f"unknown ring {name!r}")


def _generator(ring, name):
    if isinstance(ring, PolynomialRing):
        if name != ring.var:
            raise ValueError(f"unknown variable {name!r} for {ring.name}")
        return ring.gen()
    if isinstance(ring, MultiPolyRing):
        return MultiPoly.var(name, ring.vars)
    raise ValueError(f"ring {ring.name} has no variables")


def parse_element(text: str, ring):
    """Parse a polynomial literal such as ``3``, ``-1/2``, ``x^2-1`` or ``a*b+2``."""
    tree = ast.parse(text.replace("^", "**"), mode="eval").body

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return ring.coerce(node.value)
        if isinstance(node, ast.Name):
            return _generator(ring, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponent must be a nonnegative integer literal")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(ring, IntegerRing):
                    return ZZ.exact_div(a, b)
                if isinstance(ring, MultiPolyRing):
                    return a.exact_div(b)
                if isinstance(ring, PolynomialRing):
                    return a / b if b.is_constant() else a.exact_div(b)
                return a / b
        raise ValueError(f"unsupported syntax in {text!r}")

    return ring.coerce(ev(tree))


def matrix_from_text(text: str, ring=ZZ) -> RingMatrix:
    """Read the ``m n`` header followed by m whitespace-separated rows."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix text")
    m, n = (int(t) for t in lines[0].split())
    rows = []
    for ln in lines[1:1 + m]:
        toks = ln.split()
        if len(toks) != n:
            raise ValueError(f"expected {n} entries, got {len(toks)}: {ln!r}")
        rows.append([parse_element(t, ring) for t in toks])
    if len(rows) != m:
        raise ValueError(f"expected {m} rows, got {len(rows)}")
    return RingMatrix._raw(rows, ring, n)


def matrix_from_json(data) -> RingMatrix:
    ring = _ring_from_json_name(data["ring"])
    rows = [[ring.from_json(x) for x in r] for r in data["entries"]]
    return RingMatrix._raw(rows, ring, int(data["cols"]))


def _ring_from_json_name(name):
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("QQ[") and name.endswith("]"):
        return poly_ring(name[3:-1])
    if name.startswith("ZZ[") and name.endswith("]"):
        return multipoly_ring(name[3:-1].split(","))
    raise ValueError(f"unknown ring name {name!r}")


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass
class SnfResult:
    """Invariant factors, optionally with unimodular P, Q such that P*A*Q = diag."""

    diagonal: List
    ring: object
    shape: tuple
    P: Optional[RingMatrix] = None
    Q: Optional[RingMatrix] = None
    normalized: bool = True
    strategy: str = "euclid"

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def diagonal_matrix(self) -> RingMatrix:
        m, n = self.shape
        return RingMatrix.diagonal(self.diagonal, m, n, self.ring)

    def nontrivial(self):
        """Invariant factors that are not units."""
        return [d for d in self.diagonal if not self.ring.is_unit(d)]

    def to_json(self):
        out = {
            "ring": self.ring.name,
            "diagonal": [self.ring.to_json(d) for d in self.diagonal],
            "strategy": self.strategy,
        }
        if self.P is not None:
            out["P"] = self.P.to_json()["entries"]
            out["Q"] = self.Q.to_json()["entries"]
        return out


def is_divisibility_chain(diag, ring) -> bool:
    """Check d[i] | d[i+1] with the convention that everything divides 0."""
    return all(ring.divides(a, b) for a, b in zip(diag, diag[1:]))


class _Tracker:
    """Elementary operations applied to a working matrix and, optionally, P and Q."""

    def __init__(self, A: RingMatrix, want: bool, budget_bits):
        self.R = A.ring
        self.M = [list(r) for r in A.rows]
        self.m, self.n = A.nrows, A.ncols
        self.want = want
        self.budget = budget_bits
        if want:
            self.P = [list(r) for r in RingMatrix.identity(self.m, self.R).rows]
            self.Q = [list(r) for r in RingMatrix.identity(self.n, self.R).rows]

    def check(self, x):
        if self.budget is not None and self.R.bits(x) > self.budget:
            raise BudgetExceeded(f"entry exceeded {self.budget} bits")

    def swap_rows(self, i, j):
        if i != j:
            self.M[i], self.M[j] = self.M[j], self.M[i]
            if self.want:
                self.P[i], self.P[j] = self.P[j], self.P[i]

    def swap_cols(self, i, j):
        if i != j:
            for r in self.M:
                r[i], r[j] = r[j], r[i]
            if self.want:
                for r in self.Q:
                    r[i], r[j] = r[j], r[i]

    def add_row(self, dst, src, c, start=0):
        """row[dst] -= c * row[src]."""
        a, b = self.M[dst], self.M[src]
        for k in range(start, self.n):
            if b[k] != 0:
                a[k] = a[k] - c * b[k]
                self.check(a[k])
        if self.want:
            a, b = self.P[dst], self.P[src]
            for k in range(self.m):
                if b[k] != 0:
                    a[k] = a[k] - c * b[k]

    def add_col(self, dst, src, c, start=0):
        """col[dst] -= c * col[src]."""
        for r in self.M[start:]:
            if r[src] != 0:
                r[dst] = r[dst] - c * r[src]
                self.check(r[dst])
        if self.want:
            for r in self.Q:
                if r[src] != 0:
                    r[dst] = r[dst] - c * r[src]

    def scale_row(self, i, u):
        self.M[i] = [u * x for x in self.M[i]]
        if self.want:
            self.P[i] = [u * x for x in self.P[i]]

    def mix_rows(self, i, j, a, b, c, d):
        """(row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)."""
        ri, rj = self.M[i], self.M[j]
        self.M[i] = [a * x + b * y for x, y in zip(ri, rj)]
        self.M[j] = [c * x + d * y for x, y in zip(ri, rj)]
        if self.want:
            ri, rj = self.P[i], self.P[j]
            self.P[i] = [a * x + b * y for x, y in zip(ri, rj)]
            self.P[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def mix_cols(self, i, j, a, b, c, d):
        """(col_i, col_j) <- (a*col_i + c*col_j, b*col_i + d*col_j), i.e. right-multiply by [[a,b],[c,d]]."""
        mats = [self.M, self.Q] if self.want else [self.M]
        for mat in mats:
            for r in mat:
                x, y = r[i], r[j]
                r[i] = a * x + c * y
                r[j] = b * x + d * y


def _diagonalize(T: _Tracker):
    """Reduce to a diagonal matrix by Euclidean row/column steps; returns the rank."""
    R, M = T.R, T.M
    m, n = T.m, T.n
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x != 0:
                    s = R.size(x)
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        T.swap_rows(t, i)
        T.swap_cols(t, j)
        while True:
            piv = M[t][t]
            clean = True
            for i in range(t + 1, m):
                x = M[i][t]
                if x != 0:
                    q, r = R.divmod(x, piv)
                    T.add_row(i, t, q, start=t)
                    if r != 0:
                        clean = False
            for j in range(t + 1, n):
                x = M[t][j]
                if x != 0:
                    q, r = R.divmod(x, piv)
                    T.add_col(j, t, q, start=t)
                    if r != 0:
                        clean = False
            if clean:
                break
            # a nonzero remainder is smaller than the pivot: move it into place
            best = None
            for i in range(t + 1, m):
                x = M[i][t]
                if x != 0 and (best is None or R.size(x) < best[0]):
                    best = (R.size(x), i, t)
            for j in range(t + 1, n):
                x = M[t][j]
                if x != 0 and (best is None or R.size(x) < best[0]):
                    best = (R.size(x), t, j)
            _, i, j = best
            T.swap_rows(t, i)
            T.swap_cols(t, j)
        t += 1
    return t


def _fix_chain(T: _Tracker, r: int):
    """Turn a diagonal d_0..d_{r-1} into a divisibility chain by 2x2 Bezout moves."""
    R, M = T.R, T.M
    for i in range(r):
        for j in range(i + 1, r):
            a, b = M[i][i], M[j][j]
            if R.divides(a, b):
                continue
            g, s, t = R.xgcd(a, b)
            bg = R.exact_div(b, g)
            ag = R.exact_div(a, g)
            # [[s, t], [-b/g, a/g]] * diag(a, b) * [[1, -t*b/g], [1, s*a/g]] = diag(g, a*b/g)
            T.mix_rows(i, j, s, t, -bg, ag)
            T.mix_cols(i, j, R.one, -t * bg, R.one, s * ag)
            M[i][i] = g
            M[j][j] = a * bg
            M[i][j] = R.zero
            M[j][i] = R.zero


def _snf_euclid(A: RingMatrix, want_transforms: bool, budget_bits) -> SnfResult:
    R = A.ring
    T = _Tracker(A, want_transforms, budget_bits)
    r = _diagonalize(T)
    _fix_chain(T, r)
    diag = []
    for i in range(min(T.m, T.n)):
        d = T.M[i][i]
        if i < r:
            c, u = R.normal(d)
            if u != R.one:
                T.scale_row(i, u)
            d = c
        diag.append(d)
    res = SnfResult(diag, R, A.shape)
    if want_transforms:
        P = RingMatrix._raw(T.P, R, T.m)
        Q = RingMatrix._raw(T.Q, R, T.n)
        if P @ A @ Q != res.diagonal_matrix():
            raise AssertionError("internal error: P*A*Q is not the computed diagonal")
        res.P, res.Q = P, Q
    return res


def _snf_int(rows, m, n, want, budget_bits):
    """Integer fast path: same algorithm as the generic one, on plain ints."""
    M = [list(r) for r in rows]
    if want:
        P = [[int(i == j) for j in range(m)] for i in range(m)]
        Q = [[int(i == j) for j in range(n)] for i in range(n)]

    def check(x):
        if budget_bits is not None and x.bit_length() > budget_bits:
            raise BudgetExceeded(f"entry exceeded {budget_bits} bits")

    if budget_bits is not None:
        for row in M:
            for x in row:
                check(x)
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        M[t], M[i] = M[i], M[t]
        if want:
            P[t], P[i] = P[i], P[t]
        if j != t:
            for r in M:
                r[t], r[j] = r[j], r[t]
            if want:
                for r in Q:
                    r[t], r[j] = r[j], r[t]
        while True:
            piv = M[t][t]
            clean = True
            prow = M[t]
            for i in range(t + 1, m):
                x = M[i][t]
                if x:
                    q = ZZ.divmod(x, piv)[0]
                    if q:
                        row = M[i]
                        for k in range(t, n):
                            if prow[k]:
                                row[k] -= q * prow[k]
                                check(row[k])
                        if want:
                            pi, pt = P[i], P[t]
                            for k in range(m):
                                if pt[k]:
                                    pi[k] -= q * pt[k]
                    if M[i][t]:
                        clean = False
            for j in range(t + 1, n):
                x = prow[j]
                if x:
                    q = ZZ.divmod(x, piv)[0]
                    if q:
                        for r in M[t:]:
                            if r[t]:
                                r[j] -= q * r[t]
                                check(r[j])
                        if want:
                            for r in Q:
                                if r[t]:
                                    r[j] -= q * r[t]
                    if prow[j]:
                        clean = False
            if clean:
                break
            best = None
            for i in range(t + 1, m):
                x = M[i][t]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, t)
            for j in range(t + 1, n):
                x = M[t][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), t, j)
            _, i, j = best
            if i != t:
                M[t], M[i] = M[i], M[t]
                if want:
                    P[t], P[i] = P[i], P[t]
            if j != t:
                for r in M:
                    r[t], r[j] = r[j], r[t]
                if want:
                    for r in Q:
                        r[t], r[j] = r[j], r[t]
        t += 1
    r = t
    T = object.__new__(_Tracker)
    T.R, T.M, T.m, T.n, T.want, T.budget = ZZ, M, m, n, want, budget_bits
    if want:
        T.P, T.Q = P, Q
    _fix_chain(T, r)
    diag = []
    for i in range(min(m, n)):
        d = M[i][i]
        if d < 0:
            d = -d
            M[i] = [-x for x in M[i]]
            if want:
                T.P[i] = [-x for x in T.P[i]]
        diag.append(d)
    return diag, (T.P if want else None), (T.Q if want else None)


def snf(A: RingMatrix, want_transforms: bool = False, budget_bits: Optional[int] = DEFAULT_BUDGET_BITS,
        strategy: str = "auto") -> SnfResult:
    """Smith normal form over Z, Q, Q[x] or Q(q)[x].

    ``strategy`` is ``"euclid"`` (row/column reduction), ``"local"``
    (square nonsingular matrices over Q[x]: invariant factors assembled from
    local computations at each prime factor of the determinant) or ``"auto"``.
    Diagonal entries are canonical: nonnegative over Z, monic over F[x],
    zeros last.  With ``want_transforms`` the returned P, Q satisfy
    ``P*A*Q == diag`` (checked before returning).
    """
    R = A.ring
    if isinstance(R, MultiPolyRing):
        raise TypeError("snf needs a Euclidean ring; use snf_via_minors over Z[x,...]")
    if A.nrows == 0 or A.ncols == 0:
        res = SnfResult([], R, A.shape)
        if want_transforms:
            res.P, res.Q = RingMatrix.identity(A.nrows, R), RingMatrix.identity(A.ncols, R)
        return res
    if isinstance(R, IntegerRing):
        diag, P, Q = _snf_int(A.rows, A.nrows, A.ncols, want_transforms, budget_bits)
        res = SnfResult(diag, R, A.shape, strategy="euclid")
        if want_transforms:
            res.P = RingMatrix._raw(P, R, A.nrows)
            res.Q = RingMatrix._raw(Q, R, A.ncols)
            if res.P @ A @ res.Q != res.diagonal_matrix():
                raise AssertionError("internal error: P*A*Q is not the computed diagonal")
        return res
    use_local = strategy == "local" or (
        strategy == "auto"
        and not want_transforms
        and isinstance(R, PolynomialRing)
        and isinstance(R.field, RationalField)
        and A.nrows == A.ncols
        and A.nrows >= 30
    )
    if use_local and not want_transforms:
        from ._localsnf import local_snf

        diag = local_snf(A)
        if diag is not None:
            return SnfResult(diag, R, A.shape, strategy="local")
        if strategy == "local":
            raise ValueError("local strategy needs a square nonsingular matrix over Q[x]")
    return _snf_euclid(A, want_transforms, budget_bits)


# ---------------------------------------------------------------------------
# determinants and minors

def _bareiss(rows, R):
    M = [list(r) for r in rows]
    n = len(M)
    sign = 1
    prev = R.one
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return R.zero
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = R.exact_div(M[i][j] * pk - M[i][k] * M[k][j], prev)
            M[i][k] = R.zero
        prev = pk
    d = M[n - 1][n - 1] if n else R.one
    return d if sign == 1 else -d


def _det_field(rows, R):
    M = [list(r) for r in rows]
    n = len(M)
    det = R.one
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return R.zero
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        pk = M[k][k]
        det = det * pk
        inv = R.one / pk
        for i in range(k + 1, n):
            if M[i][k] != 0:
                f = M[i][k] * inv
                for j in range(k + 1, n):
                    if M[k][j] != 0:
                        M[i][j] = M[i][j] - f * M[k][j]
    return det


def _det_cofactor(rows, R, limit=10):
    n = len(rows)
    if n > limit:
        raise TooLarge(f"cofactor determinant limited to dimension {limit}")
    memo = {}

    def rec(k, cols):
        # determinant of rows k.. and the columns in the tuple ``cols``
        if k == n:
            return R.one
        key = cols
        if key in memo:
            return memo[key]
        acc = R.zero
        row = rows[k]
        for idx, j in enumerate(cols):
            x = row[j]
            if x == 0:
                continue
            sub = rec(k + 1, cols[:idx] + cols[idx + 1:])
            if sub == 0:
                continue
            term = x * sub
            acc = acc - term if idx % 2 else acc + term
        memo[key] = acc
        return acc

    return rec(0, tuple(range(n)))


def det_exact(A: RingMatrix):
    """Exact determinant: Bareiss over Z and F[x], elimination over fields,
    memoized cofactor expansion over multivariate rings (dimension <= 10)."""
    if A.nrows != A.ncols:
        raise NonSquare(f"{A.nrows}x{A.ncols} matrix has no determinant")
    R = A.ring
    if A.nrows == 0:
        return R.one
    if R.is_field:
        return _det_field(A.rows, R)
    if isinstance(R, MultiPolyRing):
        return _det_cofactor(A.rows, R)
    return _bareiss(A.rows, R)


def _minor_det(A, rows, cols):
    sub = [[A.rows[i][j] for j in cols] for i in rows]
    R = A.ring
    if len(rows) == 1:
        return sub[0][0]
    if isinstance(R, MultiPolyRing):
        return _det_cofactor(sub, R)
    if R.is_field:
        return _det_field(sub, R)
    return _bareiss(sub, R)


def gcd_of_minors(A: RingMatrix, k: int):
    """Normalized gcd of all k x k minors (0 when they all vanish)."""
    if not 1 <= k <= min(A.nrows, A.ncols):
        raise KOutOfRange(f"k={k} outside 1..{min(A.nrows, A.ncols)}")
    R = A.ring
    g = R.zero
    for rows in itertools.combinations(range(A.nrows), k):
        for cols in itertools.combinations(range(A.ncols), k):
            d = _minor_det(A, rows, cols)
            if d != 0:
                g = R.gcd(g, d)
                if R.is_unit(g):
                    return R.normal(g)[0]
    return R.normal(g)[0]


@dataclass
class MinorsResult:
    """Diagonal predicted by quotients of successive minor gcds.

    ``certified`` is True over principal ideal domains, where the quotients
    are exactly the invariant factors; elsewhere the sequence is only the
    unique candidate an SNF would have to equal, if one exists.
    """

    diagonal: List
    minor_gcds: List
    certified: bool
    vanish_from: Optional[int] = None  # first k whose k x k minors all vanish


def snf_via_minors(A: RingMatrix) -> MinorsResult:
    """alpha_k = g_k / g_{k-1}, g_k the gcd of k x k minors."""
    R = A.ring
    r = min(A.nrows, A.ncols)
    gs = []
    diag = []
    prev = R.one
    vanish = None
    for k in range(1, r + 1):
        if vanish is not None:
            gs.append(R.zero)
            diag.append(R.zero)
            continue
        g = gcd_of_minors(A, k)
        gs.append(g)
        if g == 0:
            vanish = k
            diag.append(R.zero)
            continue
        if not R.divides(prev, g):
            raise NonDivisible(f"gcd of {k-1}-minors does not divide gcd of {k}-minors", step=k, candidate=diag)
        a = R.normal(R.exact_div(g, prev))[0]
        if diag and not R.divides(diag[-1], a):
            raise NonDivisible(f"quotients fail to divide at step {k}", step=k, candidate=diag + [a])
        diag.append(a)
        prev = g
    certified = R.is_euclidean
    return MinorsResult(diag, gs, certified, vanish)


@dataclass
class Verdict:
    refuted: bool
    point: int
    specialized_snf: List[int]
    candidate_snf: List[int]

    def __str__(self):
        word = "Refuted" if self.refuted else "Consistent"
        return f"{word}: SNF(A at {self.point}) = {self.specialized_snf}, candidate gives {self.candidate_snf}"


def _int_at(x, var_names, point):
    if isinstance(x, int):
        return x
    v = specialize(x, {name: point for name in var_names})
    v = Fraction(v)
    if v.denominator != 1:
        raise ValueError("specialization is not an integer")
    return v.numerator


def refute_snf_by_specialization(A: RingMatrix, candidate: Sequence, point: int) -> Verdict:
    """Compare SNF over Z of A(point) with that of diag(candidate)(point).

    A ring homomorphism Z[x] -> Z sends a true SNF factorization P*A*Q = D to
    one over Z, so any disagreement refutes the candidate.
    """
    R = A.ring
    if isinstance(R, MultiPolyRing):
        names = R.vars
    elif isinstance(R, PolynomialRing):
        names = (R.var,)
    else:
        names = ()
    Ap = RingMatrix([[_int_at(x, names, point) for x in r] for r in A.rows], ZZ)
    m, n = A.shape
    D = RingMatrix.diagonal([_int_at(R.coerce(c), names, point) for c in candidate], m, n, ZZ)
    s1 = snf(Ap).diagonal
    s2 = snf(D).diagonal
    return Verdict(s1 != s2, point, s1, s2)


# ---------------------------------------------------------------------------
# cokernels

@dataclass
class AbelianGroupDesc:
    """Z/f_1 + ... + Z/f_k + Z^free_rank with f_1 | f_2 | ... and every f_i > 1."""

    factors: List[int] = field(default_factory=list)
    free_rank: int = 0

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for f in self.factors:
            out *= f
        return out

    def is_cyclic(self) -> bool:
        return len(self.factors) + self.free_rank <= 1

    def __str__(self):
        parts = [f"Z/{f}" for f in self.factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"factors": [str(f) for f in self.factors], "free_rank": self.free_rank}


def cokernel(A: RingMatrix, ncols: Optional[int] = None) -> AbelianGroupDesc:
    """Z^n modulo the span of the rows of A."""
    if A.ring is not ZZ:
        raise TypeError("cokernel is implemented over Z")
    n = A.ncols if A.nrows else (ncols if ncols is not None else A.ncols)
    if A.nrows == 0:
        return AbelianGroupDesc([], n)
    d = snf(A).diagonal
    rank = sum(1 for x in d if x)
    return AbelianGroupDesc([x for x in d if x > 1], n - rank)
