"""Real hyperplane arrangements, their regions and Varchenko matrices.

Regions are sign vectors whose open polyhedron is nonempty, decided exactly
by Fourier-Motzkin elimination on strict inequalities.  The Varchenko
matrix has (R, R') entry equal to the product of a_H over the hyperplanes
separating R and R'; its q-version sets every a_H = q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import NotSemigeneric, TooLarge
from .exactmat import RingMatrix, snf
from .rings import (
    MultiPoly,
    UniPoly,
    cyclotomic_factor,
    cyclotomic_product,
    multipoly_ring,
    poly_ring,
    specialize,
)

MAX_HYPERPLANES = 12
MAX_DIM = 4
QVAR = "q"


@dataclass(frozen=True)
class Hyperplane:
    """{x : <normal, x> = offset}, with a variable label."""

    normal: Tuple[Fraction, ...]
    offset: Fraction
    label: str

    def value(self, x) -> Fraction:
        return sum((c * xi for c, xi in zip(self.normal, x)), Fraction(0)) - self.offset


def _primitive(normal, offset):
    """Scale (normal, offset) so that it is integral, primitive and its first nonzero entry is positive."""
    vals = list(normal) + [offset]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


class Arrangement:
    """Finite list of affine hyperplanes in Q^n (viewed in R^n)."""

    def __init__(self, dim: int, hyperplanes: Sequence):
        self.dim = dim
        hs = []
        seen = set()
        for k, h in enumerate(hyperplanes):
            if isinstance(h, Hyperplane):
                normal, offset, label = h.normal, h.offset, h.label
            else:
                normal, offset = h[0], h[1]
                label = h[2] if len(h) > 2 else f"a{k + 1}"
            normal = tuple(Fraction(c) for c in normal)
            offset = Fraction(offset)
            if len(normal) != dim:
                raise ValueError(f"normal {normal} does not live in dimension {dim}")
            if not any(normal):
                raise ValueError("zero normal vector")
            key = _primitive(normal, offset)
            if key in seen:
                raise ValueError(f"repeated hyperplane {label}")
            seen.add(key)
            hs.append(Hyperplane(normal, offset, str(label)))
        labels = [h.label for h in hs]
        if len(set(labels)) != len(labels):
            raise ValueError("hyperplane labels must be distinct")
        self.hyperplanes = tuple(hs)

    @property
    def labels(self):
        return tuple(h.label for h in self.hyperplanes)

    def __len__(self):
        return len(self.hyperplanes)

    def __repr__(self):
        return f"Arrangement(dim={self.dim}, {len(self)} hyperplanes)"

    def to_text(self) -> str:
        lines = [str(self.dim)]
        for h in self.hyperplanes:
            lines.append(" ".join(str(c) for c in h.normal) + f" {h.offset} {h.label}")
        return "\n".join(lines) + "\n"


def arrangement_from_text(text: str) -> Arrangement:
    """Line ``n`` then one line ``c1 ... cn b label`` per hyperplane."""
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    n = int(lines[0][0])
    hs = []
    for k, ln in enumerate(lines[1:]):
        normal = [Fraction(t) for t in ln[:n]]
        offset = Fraction(ln[n])
        label = ln[n + 1] if len(ln) > n + 1 else f"a{k + 1}"
        hs.append((normal, offset, label))
    return Arrangement(n, hs)


# ---------------------------------------------------------------------------
# feasibility of strict systems

def _normalize_ineq(a, beta):
    """Scale a*x > beta by a positive rational so duplicate rows coincide."""
    for c in a:
        if c != 0:
            s = abs(c)
            return tuple(x / s for x in a), beta / s
    return tuple(a), beta


def strict_feasible(rows: Sequence[Tuple[Sequence[Fraction], Fraction]], dim: int) -> bool:
    """Is {x : a.x > beta for every (a, beta)} nonempty?  Fourier-Motzkin."""
    system = {_normalize_ineq(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in rows}
    for j in range(dim):
        pos, neg, rest = [], [], set()
        for a, b in system:
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                rest.add((a, b))
        for ap, bp in pos:
            for an, bn in neg:
                # ap.x > bp and an.x > bn with ap_j > 0 > an_j: combine to kill x_j
                lp, ln = -an[j], ap[j]
                a = tuple(lp * x + ln * y for x, y in zip(ap, an))
                b = lp * bp + ln * bn
                rest.add(_normalize_ineq(a, b))
        system = rest
    # remaining rows read 0 > beta
    return all(b < 0 for _, b in system)


# ---------------------------------------------------------------------------
# regions

Region = Tuple[int, ...]


def _check_size(A: Arrangement):
    if len(A) > MAX_HYPERPLANES or A.dim > MAX_DIM:
        raise TooLarge(f"region enumeration is limited to {MAX_HYPERPLANES} hyperplanes in dimension <= {MAX_DIM}")


def region_feasible(A: Arrangement, signs: Sequence[int]) -> bool:
    rows = []
    for h, s in zip(A.hyperplanes, signs):
        rows.append((tuple(s * c for c in h.normal), s * h.offset))
    return strict_feasible(rows, A.dim)


def enumerate_regions(A: Arrangement) -> List[Region]:
    """Feasible sign vectors (+1 / -1 per hyperplane), sorted with +1 before -1."""
    _check_size(A)
    regions: List[Region] = [()]
    for k in range(len(A)):
        sub = Arrangement(A.dim, A.hyperplanes[:k + 1])
        nxt = []
        for r in regions:
            for s in (1, -1):
                cand = r + (s,)
                if region_feasible(sub, cand):
                    nxt.append(cand)
        regions = nxt
    return sorted(regions, key=lambda r: tuple(-s for s in r))


def sep(R1: Region, R2: Region) -> List[int]:
    return [i for i, (a, b) in enumerate(zip(R1, R2)) if a != b]


def varchenko_matrix(A: Arrangement, symbolic: bool = True, regions: Optional[List[Region]] = None) -> RingMatrix:
    """Symbolic (over Z[a_H]) or q-specialized (over Q[q]) Varchenko matrix."""
    regions = enumerate_regions(A) if regions is None else regions
    if symbolic:
        R = multipoly_ring(A.labels)
        gens = R.gens()
        rows = []
        for r1 in regions:
            row = []
            for r2 in regions:
                m = R.one
                for i in sep(r1, r2):
                    m = m * gens[i]
                row.append(m)
            rows.append(row)
        return RingMatrix(rows, R)
    R = poly_ring(QVAR)
    q = R.gen()
    pw = {}
    rows = []
    for r1 in regions:
        row = []
        for r2 in regions:
            k = len(sep(r1, r2))
            if k not in pw:
                pw[k] = q ** k
            row.append(pw[k])
        rows.append(row)
    return RingMatrix._raw(rows, R, len(regions))


# ---------------------------------------------------------------------------
# intersections

def _rank(rows) -> int:
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][j] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][j] != 0:
                f = M[i][j] / M[rank][j]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def _intersection(A: Arrangement, subset) -> Optional[int]:
    """Codimension of the intersection of the given hyperplanes, or None if empty."""
    if not subset:
        return 0
    C = [list(A.hyperplanes[i].normal) for i in subset]
    Cb = [list(A.hyperplanes[i].normal) + [A.hyperplanes[i].offset] for i in subset]
    r = _rank(C)
    return r if r == _rank(Cb) else None


@dataclass(frozen=True)
class IntersectionElement:
    hyperplanes: FrozenSet[int]  # every hyperplane containing the flat
    dim: int


def intersection_poset(A: Arrangement) -> List[IntersectionElement]:
    """All nonempty intersections, the ambient space included, each flat once."""
    n = len(A)
    if n > MAX_HYPERPLANES:
        raise TooLarge("intersection poset limited to 12 hyperplanes")
    flats: Dict[FrozenSet[int], int] = {}
    for k in range(0, n + 1):
        for S in itertools.combinations(range(n), k):
            codim = _intersection(A, S)
            if codim is None:
                continue
            # close S: every hyperplane containing the flat
            closure = set(S)
            for h in range(n):
                if h not in closure:
                    c2 = _intersection(A, tuple(S) + (h,))
                    if c2 is not None and c2 == codim:
                        closure.add(h)
            flats[frozenset(closure)] = A.dim - codim
    return sorted((IntersectionElement(h, d) for h, d in flats.items()),
                  key=lambda x: (-x.dim, sorted(x.hyperplanes)))


def char_poly(A: Arrangement, var: str = "t") -> UniPoly:
    """chi_A(t) = sum over flats x of mu(x) t^dim(x), mu the Moebius function from the ambient space."""
    L = intersection_poset(A)
    mu: Dict[FrozenSet[int], int] = {}
    for x in L:  # sorted by decreasing dimension, so larger flats come first
        if not x.hyperplanes:
            mu[x.hyperplanes] = 1
            continue
        mu[x.hyperplanes] = -sum(m for h, m in mu.items() if h < x.hyperplanes)
    coeffs = [0] * (A.dim + 1)
    for x in L:
        coeffs[x.dim] += mu[x.hyperplanes]
    return UniPoly(coeffs, var)


def char_coefficients(A: Arrangement) -> List[int]:
    """c_0, ..., c_n with chi_A(t) = sum (-1)^i c_i t^(n-i)."""
    chi = char_poly(A)
    n = A.dim
    out = []
    for i in range(n + 1):
        c = chi.coeffs[n - i] if n - i < len(chi.coeffs) else Fraction(0)
        out.append(int(c * (-1) ** i))
    return out


@dataclass
class SemigenericVerdict:
    ok: bool
    witness: Optional[Tuple[int, ...]] = None  # hyperplanes meeting in the wrong codimension

    def __bool__(self):
        return self.ok


def semigeneric_check(A: Arrangement) -> SemigenericVerdict:
    """Every k hyperplanes meet in codimension k or not at all."""
    n = len(A)
    for k in range(2, n + 1):
        for S in itertools.combinations(range(n), k):
            codim = _intersection(A, S)
            if codim is not None and codim != k:
                return SemigenericVerdict(False, S)
    return SemigenericVerdict(True)


def gz_diagonal(A: Arrangement) -> List[MultiPoly]:
    """Diagonal form entries prod_{H containing x} (1 - a_H^2), one per flat x."""
    v = semigeneric_check(A)
    if not v:
        names = [A.hyperplanes[i].label for i in v.witness]
        raise NotSemigeneric(f"hyperplanes {names} meet in the wrong codimension", witness=v.witness)
    R = multipoly_ring(A.labels)
    gens = R.gens()
    out = []
    for x in intersection_poset(A):
        e = R.one
        for i in sorted(x.hyperplanes):
            e = e * (1 - gens[i] * gens[i])
        out.append(e)
    return out


@dataclass
class GZReport:
    computed: list
    predicted: list

    @property
    def ok(self):
        return self.computed == self.predicted


def verify_gz_by_specialization(A: Arrangement) -> GZReport:
    """SNF over Q[q] of V_q against the SNF of the diagonal form at a_H = q."""
    diag = gz_diagonal(A)
    R = poly_ring(QVAR)
    q = R.gen()
    vals = {lab: q for lab in A.labels}
    D = RingMatrix.diagonal([R.coerce(specialize(d, vals)) for d in diag], ring=R)
    V = varchenko_matrix(A, symbolic=False)
    return GZReport(snf(V).diagonal, snf(D).diagonal)


def cyclotomic_profile(diag: Sequence[UniPoly]) -> List[Dict[int, int]]:
    return [cyclotomic_factor(d)[0] for d in diag]


def nd_counts(A: Arrangement, diag: Optional[Sequence[UniPoly]] = None) -> Dict[Tuple[int, int], int]:
    """N_{d,i}: number of SNF entries of V_q divisible by Phi_d^i but not Phi_d^(i+1)."""
    if diag is None:
        diag = snf(varchenko_matrix(A, symbolic=False)).diagonal
    return nd_counts_from_diagonal(diag)


def nd_counts_from_diagonal(diag: Sequence[UniPoly]) -> Dict[Tuple[int, int], int]:
    profiles = cyclotomic_profile(diag)
    ds = sorted({1, 2} | {d for p in profiles for d in p})
    out: Dict[Tuple[int, int], int] = {}
    for d in ds:
        for p in profiles:
            key = (d, p.get(d, 0))
            out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------------------
# braid arrangement

def braid_arrangement(n: int) -> Arrangement:
    """x_i = x_j in R^n, labelled a_i_j."""
    hs = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * n
            v[i], v[j] = 1, -1
            hs.append((v, 0, f"a_{i + 1}_{j + 1}"))
    return Arrangement(n, hs)


def inversions(w: Sequence[int]) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def braid_matrix(n: int) -> RingMatrix:
    """q^inv(w' w^-1) over permutations w, w' in lexicographic order."""
    if n > 6:
        raise TooLarge("braid matrices limited to n <= 6")
    perms = list(itertools.permutations(range(n)))
    R = poly_ring(QVAR)
    q = R.gen()
    pw = [q ** k for k in range(n * (n - 1) // 2 + 1)]
    rows = []
    for w in perms:
        winv = [0] * n
        for i, x in enumerate(w):
            winv[x] = i
        row = []
        for w2 in perms:
            row.append(pw[inversions([w2[winv[i]] for i in range(n)])])
        rows.append(row)
    return RingMatrix._raw(rows, R, len(perms))


def zagier_exponents(n: int) -> Dict[int, int]:
    """j -> C(n,j) (j-2)! (n-j+1)!."""
    return {j: math.comb(n, j) * math.factorial(j - 2) * math.factorial(n - j + 1) for j in range(2, n + 1)}


def zagier_det(n: int) -> UniPoly:
    """prod_{j=2..n} (1 - q^(j(j-1)))^(C(n,j)(j-2)!(n-j+1)!)."""
    out = UniPoly.const(1, QVAR)
    for j, e in zagier_exponents(n).items():
        base = UniPoly([1] + [0] * (j * (j - 1) - 1) + [-1], QVAR)
        out = out * base ** e
    return out


def zagier_cyclotomic(n: int) -> Dict[int, int]:
    """Cyclotomic exponents of the Zagier product, from 1 - q^m = -prod_{d|m} Phi_d."""
    out: Dict[int, int] = {}
    for j, e in zagier_exponents(n).items():
        m = j * (j - 1)
        for d in range(1, m + 1):
            if m % d == 0:
                out[d] = out.get(d, 0) + e
    return out


@dataclass
class ZagierReport:
    n: int
    snf: list
    det_cyclotomic: Dict[int, int]
    expected_cyclotomic: Dict[int, int]
    det_matches: bool

    @property
    def ok(self):
        return self.det_matches and self.det_cyclotomic == self.expected_cyclotomic


def verify_zagier(n: int) -> ZagierReport:
    """Check det V_q(B_n) against the Zagier product exactly, via the SNF.

    det = c * prod(SNF) with c a rational unit; V_q(B_n) is the identity at
    q = 0, so c = 1 / prod(SNF)(0).
    """
    if n > 5:
        raise TooLarge("SNF of braid matrices limited to n <= 5")
    A = braid_matrix(n)
    diag = snf(A).diagonal
    prod = UniPoly.const(1, QVAR)
    for d in diag:
        prod = prod * d
    det = prod / prod(Fraction(0))
    tot: Dict[int, int] = {}
    for p in cyclotomic_profile(diag):
        for d, m in p.items():
            tot[d] = tot.get(d, 0) + m
    return ZagierReport(n, diag, tot, zagier_cyclotomic(n), det == zagier_det(n))


#: SNF diagonal entries of the isotypic blocks V_lambda of V_q(B_4), as
#: published (cyclotomic index -> exponent), transcribed verbatim.
N4_TABLE = {
    (4,): [{2: 2, 3: 1, 4: 1}],
    (3, 1): [{1: 1, 2: 1}, {1: 2, 2: 2, 3: 1}, {1: 3, 2: 3, 3: 2}],
    (2, 2): [{1: 2, 2: 2}, {1: 2, 2: 2, 12: 1}],
    (2, 1, 1): [{1: 1, 2: 1}, {1: 2, 2: 2, 6: 1}, {1: 3, 2: 3, 6: 2}],
    (1, 1, 1, 1): [{1: 1, 2: 1, 4: 1, 6: 1}],
}

#: dimensions f^lambda of the irreducible representations of S_4
F4 = {(4,): 1, (3, 1): 3, (2, 2): 2, (2, 1, 1): 3, (1, 1, 1, 1): 1}


@dataclass
class IsotypicReport:
    braid_snf: list
    table_snf: list
    braid_totals: Dict[int, int]
    table_totals: Dict[int, int]

    @property
    def ok(self):
        return self.braid_snf == self.table_snf


def isotypic_aggregate_check(table=None, braid_diag=None) -> IsotypicReport:
    """Compare SNF(V_q(B_4)) with the SNF of the block-diagonal matrix whose
    entries are the table's rows, each repeated f^lambda times."""
    table = N4_TABLE if table is None else table
    R = poly_ring(QVAR)
    entries = []
    for lam, row in table.items():
        for _ in range(F4[tuple(lam)]):
            entries += [cyclotomic_product(m, QVAR) for m in row]
    table_snf = snf(RingMatrix.diagonal(entries, ring=R)).diagonal
    if braid_diag is None:
        braid_diag = snf(braid_matrix(4)).diagonal

    def totals(diag):
        tot: Dict[int, int] = {}
        for p in cyclotomic_profile(diag):
            for d, m in p.items():
                tot[d] = tot.get(d, 0) + m
        return tot

    return IsotypicReport(braid_diag, table_snf, totals(braid_diag), totals(table_snf))


FIG3 = Arrangement(2, [((0, 1), 0, "a"), ((0, 1), 1, "b"), ((1, 0), 0, "c")])
