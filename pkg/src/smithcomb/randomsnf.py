"""Smith forms of random integer matrices: Monte Carlo estimates and limit formulas.

Entries are i.i.d. uniform on [-k, k].  Limits as k -> infinity are given
by products of local densities over primes, evaluated here in floating
point with explicit truncation bounds.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.special import zeta as _hurwitz_zeta
from scipy.special import zetac

from .errors import MNTooSmall
from .exactmat import RingMatrix, snf
from .rings import ZZ

RNG_ALGORITHM = "numpy PCG64, one SeedSequence.spawn child per chunk"
CHUNK = 10_000
PRIME_BOUND = 100_000


# ---------------------------------------------------------------------------
# analytic side

def zeta(s: float) -> float:
    """Riemann zeta for real s > 1."""
    if s <= 1:
        raise ValueError("zeta(s) needs s > 1")
    return float(_hurwitz_zeta(s, 1))


def _log_zeta(s: float) -> float:
    return math.log1p(float(zetac(s)))


def _log_zeta_tail(start: int) -> float:
    """sum_{j >= start} log zeta(j); terms fall like 2^-j, cut at 1e-20."""
    total, j = 0.0, start
    while True:
        t = _log_zeta(j)
        total += t
        if t < 1e-20:
            return total
        j += 1


@lru_cache(maxsize=None)
def primes_upto(N: int) -> np.ndarray:
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(N ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0]


def euler_tail_bound(s: float, P: int = PRIME_BOUND) -> float:
    """Upper bound for sum over primes p > P of p^-s (s > 1), by the integral test on all n > P."""
    return P ** (1 - s) / (s - 1)


def alpha1_prob(j: int, m: int, n: int) -> float:
    """lim_k P(alpha_1 = j) = 1 / (j^(mn) zeta(mn))."""
    if m * n <= 1:
        raise MNTooSmall("the alpha_1 law needs mn > 1")
    if j < 1:
        raise ValueError("j must be positive")
    s = m * n
    return math.exp(-s * math.log(j) - _log_zeta(s))


def sigma_limit() -> float:
    """lim_n sigma(n) = 1 / (zeta(6) prod_{j >= 4} zeta(j))."""
    return math.exp(-_log_zeta(6) - _log_zeta_tail(4))


def ekedahl_sigma(n: int, P: int = PRIME_BOUND) -> float:
    """sigma(n) = prod_p (1 + p^-2 + ... + p^-n) / (zeta(2) ... zeta(n)).

    Evaluated as sigma_limit() * prod_{j > n} zeta(j) *
    prod_p (1 - p^(-n-1) / (1 - 1/p + 1/p^2)); the prime product is cut at
    P with relative error below euler_tail_bound(n + 1, P).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    p = primes_upto(P).astype(float)
    local = np.log1p(-p ** (-(n + 1)) / (1 - 1 / p + 1 / p ** 2))
    return math.exp(math.log(sigma_limit()) + _log_zeta_tail(n + 1) + float(local.sum()))


#: limits rho_j of P(cokernel has at most j generators), as published
RHO_REFERENCE = {
    1: 0.846935901735,
    2: 0.994626883543,
    3: 0.999953295075,
    4: 0.999999903035,
    5: 0.999999999951,
}


def rho_reference() -> Dict[int, float]:
    return dict(RHO_REFERENCE)


def c_constant(terms: int = 200) -> float:
    """1 / prod_{i >= 1} (1 - 2^-i)."""
    return math.exp(-sum(math.log1p(-2.0 ** -i) for i in range(1, terms)))


def _rank_le1_density(p: float, n: int) -> float:
    """Probability that an n x n matrix over F_p has rank <= 1:
    sum_{i=(n-1)^2}^{n(n-1)} p^-i - sum_{i=n(n-1)+1}^{n^2-1} p^-i."""
    a = sum(p ** -i for i in range((n - 1) ** 2, n * (n - 1) + 1))
    b = sum(p ** -i for i in range(n * (n - 1) + 1, n * n))
    return a - b


def ws_example_prob(n: int, P: int = PRIME_BOUND) -> float:
    """lim_k P(alpha_1 = 2, alpha_2 = 6) for n x n matrices.

    2-part: 2^-(n^2) (1 - r_2), 3-part: (3/2) 3^-((n-1)^2) (1 - 3^-((n-1)^2)) (1 - 3^-n)^2,
    and prod over p > 3 of (1 - r_p), r_p the rank <= 1 density.  For n = 2
    the last product diverges to 0 (r_p ~ 1/p).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return 0.0
    two = 2.0 ** (-n * n) * (1 - _rank_le1_density(2.0, n))
    e = (n - 1) ** 2
    three = 1.5 * 3.0 ** -e * (1 - 3.0 ** -e) * (1 - 3.0 ** -n) ** 2
    p = primes_upto(P)
    p = p[p > 3].astype(float)
    a = sum(p ** -i for i in range(e, n * (n - 1) + 1))
    b = sum(p ** -i for i in range(n * (n - 1) + 1, n * n))
    rest = float(np.log1p(-(a - b)).sum())
    return two * three * math.exp(rest)


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class SampleSpec:
    m: int
    n: int
    k: int = 100_000
    N: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.N < 1 or self.m < 1 or self.n < 1:
            raise ValueError("m, n, k and N must be positive")


@dataclass
class EventStats:
    event: str
    hits: int
    N: int
    reference: Optional[float] = None

    @property
    def estimate(self) -> float:
        return self.hits / self.N

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.N)

    def to_json(self):
        d = asdict(self)
        d["estimate"] = self.estimate
        d["stderr"] = self.stderr
        return d


_EVENT = re.compile(r"^(?:a(\d+)=(\d+)|cyclic|gens(?:<=)?(\d+)|ws|odd|coprime3|coprime6)$")


def _needs_full_snf(events) -> bool:
    for e in events:
        m = _EVENT.match(e)
        if m is None:
            raise ValueError(f"unknown event {e!r}")
        if e.startswith("a") and m.group(1) == "1":
            continue
        if e in ("odd", "coprime3", "coprime6"):
            continue
        return True
    return False


def _hit(event: str, diag: Sequence[int]) -> bool:
    m = _EVENT.match(event)
    if m.group(1):
        i, j = int(m.group(1)), int(m.group(2))
        return i <= len(diag) and diag[i - 1] == j
    if event == "cyclic":
        return sum(1 for d in diag if d != 1) <= 1
    if m.group(3):
        return sum(1 for d in diag if d != 1) <= int(m.group(3))
    if event == "ws":
        return len(diag) >= 2 and diag[0] == 2 and diag[1] == 6
    a1 = diag[0]
    if event == "odd":
        return a1 % 2 == 1
    if event == "coprime3":
        return a1 % 3 != 0
    if event == "coprime6":
        return a1 % 2 == 1 and a1 % 3 != 0
    raise ValueError(event)


def _chunk(args):
    spec, events, child, size = args
    rng = np.random.Generator(np.random.PCG64(child))
    X = rng.integers(-spec.k, spec.k + 1, size=(size, spec.m, spec.n), dtype=np.int64)
    hits = dict.fromkeys(events, 0)
    if not _needs_full_snf(events):
        g = np.gcd.reduce(X.reshape(size, -1), axis=1)
        for e in events:
            m = _EVENT.match(e)
            if m.group(1):
                hits[e] = int(np.count_nonzero(g == int(m.group(2))))
            elif e == "odd":
                hits[e] = int(np.count_nonzero(g % 2 == 1))
            elif e == "coprime3":
                hits[e] = int(np.count_nonzero(g % 3 != 0))
            else:
                hits[e] = int(np.count_nonzero((g % 2 == 1) & (g % 3 != 0)))
        return hits
    for M in X.tolist():
        diag = snf(RingMatrix(M, ZZ), budget_bits=None).diagonal
        for e in events:
            if _hit(e, diag):
                hits[e] += 1
    return hits


def reference_value(event: str, m: int, n: int) -> Optional[float]:
    """The k -> infinity limit where a formula is available."""
    mt = _EVENT.match(event)
    if mt is None:
        return None
    if mt.group(1) == "1" and m * n > 1:
        return alpha1_prob(int(mt.group(2)), m, n)
    if m == n and n >= 2:
        if event == "cyclic":
            return ekedahl_sigma(n)
        if event == "ws":
            return ws_example_prob(n)
    return None


def run_monte_carlo(spec: SampleSpec, events: Sequence[str], workers: int = 1) -> List[EventStats]:
    """Sample spec.N matrices and count each event.

    Chunks of CHUNK samples draw from their own spawned seed, so the result
    does not depend on the number of workers.
    """
    events = list(events)
    _needs_full_snf(events)  # validates names
    nchunks = -(-spec.N // CHUNK)
    children = np.random.SeedSequence(spec.seed).spawn(nchunks)
    jobs = [(spec, events, children[c], min(CHUNK, spec.N - c * CHUNK)) for c in range(nchunks)]
    if workers > 1 and nchunks > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    out = []
    for e in events:
        out.append(EventStats(e, sum(p[e] for p in parts), spec.N, reference_value(e, spec.m, spec.n)))
    return out
