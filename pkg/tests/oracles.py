"""Brute-force reference implementations used only by the tests.

Each one is written independently of the package code it checks.
"""

import itertools
from fractions import Fraction
from math import gcd


def det_fraction(rows):
    """Determinant by Gaussian elimination over Q."""
    n = len(rows)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    assert det.denominator == 1
    return int(det)


def minor_gcd(rows, k):
    """gcd of all k x k minors of an integer matrix (0 if there are none nonzero)."""
    m, n = len(rows), len(rows[0]) if rows else 0
    g = 0
    for I in itertools.combinations(range(m), k):
        for J in itertools.combinations(range(n), k):
            g = gcd(g, det_fraction([[rows[i][j] for j in J] for i in I]))
            if g == 1:
                return 1
    return g


def spanning_trees(n, edges):
    """Count spanning trees by checking every (n-1)-subset of the edge multiset."""
    flat = [(u, v) for u, v, k in edges for _ in range(k)]
    count = 0
    for S in itertools.combinations(range(len(flat)), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in S:
            a, b = find(flat[e][0]), find(flat[e][1])
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


def border_strip_results(lam, k):
    """All mu containing lam with |mu / lam| = k, mu / lam connected and free of 2x2 squares."""
    lam = list(lam)
    n = sum(lam) + k
    out = []
    for mu in _partitions(n):
        mu = list(mu)
        if len(mu) < len(lam) or any(mu[i] < lam[i] for i in range(len(lam))):
            continue
        cells = {(i, j) for i in range(len(mu)) for j in range(lam[i] if i < len(lam) else 0, mu[i])}
        if any({(i, j + 1), (i + 1, j), (i + 1, j + 1)} <= cells for i, j in cells):
            continue
        start = next(iter(cells))
        seen, stack = {start}, [start]
        while stack:
            i, j = stack.pop()
            for c in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                if c in cells and c not in seen:
                    seen.add(c)
                    stack.append(c)
        if len(seen) == len(cells):
            rows = {i for i, _ in cells}
            out.append((tuple(mu), max(rows) - min(rows)))
    return sorted(out)


def _partitions(n, maxpart=None):
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def syt_count_by_removal(lam):
    """f^lambda by the branching rule."""
    lam = tuple(p for p in lam if p)
    if sum(lam) == 0:
        return 1
    total = 0
    for i in range(len(lam)):
        if i == len(lam) - 1 or lam[i] > lam[i + 1]:
            smaller = list(lam)
            smaller[i] -= 1
            total += syt_count_by_removal(smaller)
    return total


def sample_sign_vectors(hyperplanes, dim, rng, samples=4000, spread=20):
    """Sign vectors seen at random rational points (points on a hyperplane are skipped)."""
    seen = set()
    for _ in range(samples):
        x = [Fraction(rng.randint(-spread * 50, spread * 50), 50) for _ in range(dim)]
        vals = [sum(c * xi for c, xi in zip(normal, x)) - b for normal, b in hyperplanes]
        if any(v == 0 for v in vals):
            continue
        seen.add(tuple(1 if v > 0 else -1 for v in vals))
    return seen


def ssyt_count(lam, n):
    """Semistandard tableaux of shape lam with entries in 1..n, i.e. s_lam(1^n)."""
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    filling = {}

    def rec(k):
        if k == len(cells):
            return 1
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        total = 0
        for v in range(lo, n + 1):
            filling[(i, j)] = v
            total += rec(k + 1)
        filling.pop((i, j), None)
        return total

    return rec(0)


def skew_generating_terms(cells):
    """Exponent sets of P for a shape: every subset S of cells whose complement
    is closed under moving up or left, i.e. S = shape minus a partition."""
    cells = sorted(cells)
    out = []
    for mask in range(1 << len(cells)):
        S = {cells[k] for k in range(len(cells)) if mask >> k & 1}
        keep = set(cells) - S
        if all((i - 1, j) in keep or (i - 1, j) not in cells for i, j in keep) and \
                all((i, j - 1) in keep or (i, j - 1) not in cells for i, j in keep):
            out.append(frozenset(S))
    return out
