"""Exact arithmetic substrate.

Python ``int`` plays the role of the arbitrary-precision integer and
``fractions.Fraction`` the rationals.  This module adds

* :class:`UniPoly` -- dense univariate polynomials over a field
  (``Fraction`` or :class:`RatFunc` coefficients),
* :class:`RatFunc` -- reduced rational functions in one variable over Q,
* :class:`MultiPoly` -- sparse multivariate polynomials over Z,

together with gcds, cyclotomic trial division, specialization and the ring
descriptor objects (:data:`ZZ`, :data:`QQ`, :func:`poly_ring`, ...) that the
matrix code is generic over.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple

from .errors import BudgetExceeded, UnknownVariable

#: default cap on the number of terms of any intermediate multivariate polynomial
TERM_LIMIT = 200_000


# ---------------------------------------------------------------------------
# integers

def int_gcd(a: int, b: int) -> int:
    """Nonnegative generator of the ideal (a, b); ``int_gcd(0, 0) == 0``."""
    return math.gcd(a, b)


def int_xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def _coerce_coeff(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    return c


def _frac_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


# ---------------------------------------------------------------------------
# univariate polynomials over a field

class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first.

    Coefficients live in a field: ``Fraction`` (ints are promoted) or
    :class:`RatFunc`.  Values are immutable.
    """

    __slots__ = ("coeffs", "var", "_hash")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var
        self._hash = None

    @classmethod
    def _raw(cls, coeffs, var):
        p = object.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        p.coeffs = tuple(cs)
        p.var = var
        p._hash = None
        return p

    @classmethod
    def gen(cls, var: str = "x") -> "UniPoly":
        return cls._raw((Fraction(0), Fraction(1)), var)

    @classmethod
    def const(cls, c, var: str = "x") -> "UniPoly":
        return cls((c,), var)

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def _lift(self, other):
        if isinstance(other, UniPoly):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise TypeError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, (int, Fraction, RatFunc)) and not isinstance(other, bool):
            return UniPoly._raw((_coerce_coeff(other),), self.var)
        return None

    def _var_with(self, other):
        if self.is_constant() and not other.is_constant():
            return other.var
        return self.var

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly._raw(out, self._var_with(o))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        var = self._var_with(o)
        if not a or not b:
            return UniPoly._raw((), var)
        if len(b) == 1:
            c = b[0]
            return UniPoly._raw([x * c for x in a], var)
        if len(a) == 1:
            c = a[0]
            return UniPoly._raw([c * y for y in b], var)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return UniPoly._raw(out, var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = UniPoly._raw((Fraction(1),), self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        var = self._var_with(o)
        r = list(self.coeffs)
        b = o.coeffs
        db = len(b) - 1
        inv_lc = 1 / b[-1]
        if len(r) - 1 < db:
            return UniPoly._raw((), var), UniPoly._raw(r, var)
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            c = c * inv_lc
            q[k - db] = c
            for j in range(db):
                r[k - db + j] = r[k - db + j] - c * b[j]
            r[k] = 0
        return UniPoly._raw(q, var), UniPoly._raw(r[:db], var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            if not other.is_constant():
                return self.exact_div(other)
            other = other.lc
        inv = 1 / _coerce_coeff(other)
        return UniPoly._raw([c * inv for c in self.coeffs], self.var)

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other) -> bool:
        """True when ``self`` divides ``other``."""
        if self.is_zero():
            return UniPoly._raw((), self.var) == other
        return (other % self).is_zero()

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            if self.coeffs != other.coeffs:
                return False
            return self.var == other.var or len(self.coeffs) <= 1
        if isinstance(other, (int, Fraction, RatFunc)) and not isinstance(other, bool):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if len(self.coeffs) == 0:
                self._hash = hash(0)
            elif len(self.coeffs) == 1:
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.var, self.coeffs))
        return self._hash

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self / self.lc

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                cs = _frac_str(mag)
            else:
                neg, cs = False, f"({c})"
            if i == 0:
                term = cs
            else:
                mono = self.var if i == 1 else f"{self.var}^{i}"
                term = mono if cs == "1" else f"{cs}*{mono}"
            parts.append(("-" if neg else "+", term))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    def to_json(self):
        """Coefficient list ``[c0, c1, ...]`` with rationals as decimal strings."""
        if self.coeffs and not all(isinstance(c, Fraction) for c in self.coeffs):
            return [c.to_json() for c in self.coeffs]
        return [_frac_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data, var: str = "x") -> "UniPoly":
        return cls([Fraction(str(c)) for c in data], var)


def unipoly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the coefficient field; ``gcd(0, 0) == 0``."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def unipoly_xgcd(a: UniPoly, b: UniPoly):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` monic (or zero)."""
    var = a.var if not a.is_constant() else b.var
    one = UniPoly._raw((Fraction(1),), var)
    zero = UniPoly._raw((), var)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


# ---------------------------------------------------------------------------
# rational functions in one variable

class RatFunc:
    """Reduced fraction ``num/den`` of polynomials over Q, ``den`` monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, var: str = "q"):
        num = _as_qpoly(num, var)
        den = _as_qpoly(1 if den is None else den, num.var if not num.is_constant() else var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if den.is_constant():
            num = num / den.lc
            den = UniPoly._raw((Fraction(1),), den.var)
        else:
            g = unipoly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            c = den.lc
            if c != 1:
                num, den = num / c, den / c
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @property
    def var(self):
        return self.num.var if not self.num.is_constant() else self.den.var

    @classmethod
    def gen(cls, var: str = "q") -> "RatFunc":
        return cls(UniPoly.gen(var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFunc._raw(UniPoly._raw((Fraction(other),), self.var),
                                UniPoly._raw((Fraction(1),), self.var))
        if isinstance(other, UniPoly):
            return RatFunc._raw(other, UniPoly._raw((Fraction(1),), other.var))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den, self.var)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc._raw(UniPoly._raw((), self.var), UniPoly._raw((Fraction(1),), self.var))
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc._raw(self.num * o.num, self.den)
        return RatFunc(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, self.var)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._raw(self.num ** e, self.den ** e)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            if self.den.is_constant() and self.num.is_constant():
                self._hash = hash(self.num.lc)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _as_qpoly(p, var):
    if isinstance(p, UniPoly):
        return p
    if isinstance(p, (int, Fraction)):
        return UniPoly._raw((Fraction(p),), var)
    raise TypeError(f"cannot use {p!r} as a polynomial over Q")


def q_bracket(j: int, var: str = "q") -> RatFunc:
    """The q-integer ``(1 - q^j)/(1 - q)`` for any integer ``j``."""
    if j >= 0:
        return RatFunc(UniPoly([1] * j, var), None, var)
    # (1 - q^j)/(1 - q) = -(1 + q + ... + q^{-j-1}) / q^{-j}
    return RatFunc(-UniPoly([1] * (-j), var), UniPoly.gen(var) ** (-j), var)


# ---------------------------------------------------------------------------
# sparse multivariate integer polynomials

class MultiPoly:
    """Sparse polynomial over Z in a fixed, named variable list."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Tuple[int, ...], int], vars: Tuple[str, ...]):
        vars = tuple(vars)
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != len(vars):
                raise ValueError("exponent length does not match variable list")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms, vars):
        p = object.__new__(cls)
        p.vars, p.terms, p._hash = vars, terms, None
        return p

    @classmethod
    def var(cls, name: str, vars: Tuple[str, ...]) -> "MultiPoly":
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(name)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw({e: 1}, vars)

    @classmethod
    def const(cls, c: int, vars: Tuple[str, ...]) -> "MultiPoly":
        vars = tuple(vars)
        return cls._raw({(0,) * len(vars): int(c)} if c else {}, vars)

    @classmethod
    def gens(cls, vars: Tuple[str, ...]):
        return tuple(cls.var(v, vars) for v in vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                if other.is_constant():
                    return MultiPoly.const(other.constant_value(), self.vars)
                if self.is_constant():
                    return other
                raise TypeError("variable lists differ")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return MultiPoly.const(other, self.vars)
        if isinstance(other, Fraction) and other.denominator == 1:
            return MultiPoly.const(other.numerator, self.vars)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.vars != self.vars:
            return o + self
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.vars != self.vars:
            return o * self
        out: Dict[Tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.vars != self.vars:
            return self.is_constant() and o.is_constant() and self.constant_value() == o.constant_value()
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def leading_term(self):
        """Lexicographic leading ``(exponent, coefficient)``."""
        e = max(self.terms)
        return e, self.terms[e]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def exact_div(self, other) -> "MultiPoly":
        """Quotient ``self / other``; raises ArithmeticError if inexact."""
        o = self._lift(other)
        if o is None:
            raise TypeError(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if o.is_constant():
            c = o.constant_value()
            out = {}
            for e, v in self.terms.items():
                if v % c:
                    raise ArithmeticError("inexact division")
                out[e] = v // c
            return MultiPoly._raw(out, self.vars)
        lt_e, lt_c = o.leading_term()
        rest = [(e, c) for e, c in o.terms.items() if e != lt_e]
        r = dict(self.terms)
        q = {}
        while r:
            e = max(r)
            c = r.pop(e)
            if c % lt_c or any(a < b for a, b in zip(e, lt_e)):
                raise ArithmeticError("inexact division")
            qe = tuple(a - b for a, b in zip(e, lt_e))
            qc = c // lt_c
            q[qe] = qc
            for e2, c2 in rest:
                k = tuple(a + b for a, b in zip(e2, qe))
                v = r.get(k, 0) - qc * c2
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        return MultiPoly._raw(q, self.vars)

    def divides(self, other) -> bool:
        if self.is_zero():
            return other == 0
        try:
            self._lift(other).exact_div(self)
        except ArithmeticError:
            return False
        return True

    def __call__(self, **bindings):
        return specialize(self, bindings)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(self.vars, e) if x)
            mag = abs(c)
            body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
            if k == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def to_json(self):
        return [
            {"vars": {v: x for v, x in zip(self.vars, e) if x}, "coef": str(c)}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data, vars: Tuple[str, ...]) -> "MultiPoly":
        vars = tuple(vars)
        terms: Dict[Tuple[int, ...], int] = {}
        for t in data:
            for name in t["vars"]:
                if name not in vars:
                    raise UnknownVariable(name)
            e = tuple(int(t["vars"].get(v, 0)) for v in vars)
            terms[e] = terms.get(e, 0) + int(t["coef"])
        return cls(terms, vars)


def _check_budget(p: MultiPoly, limit):
    if limit is not None and len(p.terms) > limit:
        raise BudgetExceeded(f"intermediate polynomial has {len(p.terms)} terms (limit {limit})")


def _split(p: MultiPoly, i: int) -> Dict[int, MultiPoly]:
    out: Dict[int, dict] = {}
    for e, c in p.terms.items():
        out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
    return {d: MultiPoly._raw(t, p.vars) for d, t in out.items()}


def _join(cs: Mapping[int, MultiPoly], i: int, vars) -> MultiPoly:
    terms = {}
    for d, c in cs.items():
        for e, v in c.terms.items():
            terms[e[:i] + (d,) + e[i + 1:]] = v
    return MultiPoly._raw(terms, vars)


def _normalize_sign(p: MultiPoly) -> MultiPoly:
    if p.terms and p.leading_term()[1] < 0:
        return -p
    return p


def _content_in(p: MultiPoly, i: int, limit) -> MultiPoly:
    g = MultiPoly._raw({}, p.vars)
    for c in _split(p, i).values():
        g = _gcd_rec(g, c, limit)
        if g.is_constant() and abs(g.constant_value()) == 1:
            break
    return _normalize_sign(g)


def _prem(A: Dict[int, MultiPoly], B: Dict[int, MultiPoly], limit) -> Dict[int, MultiPoly]:
    dB = max(B)
    lcB = B[dB]
    R = dict(A)
    e = max(A) - dB + 1
    while R and max(R) >= dB:
        dR = max(R)
        lcR = R[dR]
        shift = dR - dB
        new = {d: c * lcB for d, c in R.items() if d != dR}
        for d, c in B.items():
            if d == dB:
                continue
            k = d + shift
            new[k] = new.get(k, 0) - lcR * c
        R = {d: c for d, c in new.items() if not (isinstance(c, MultiPoly) and c.is_zero()) and not (isinstance(c, int) and c == 0)}
        R = {d: (c if isinstance(c, MultiPoly) else MultiPoly.const(c, lcB.vars)) for d, c in R.items()}
        for c in R.values():
            _check_budget(c, limit)
        e -= 1
    if e > 0 and R:
        f = lcB ** e
        R = {d: c * f for d, c in R.items()}
    return R


def _gcd_rec(a: MultiPoly, b: MultiPoly, limit) -> MultiPoly:
    if a.is_zero():
        return _normalize_sign(b)
    if b.is_zero():
        return _normalize_sign(a)
    vars = a.vars
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(math.gcd(a.content(), b.content()), vars)
    n = len(vars)
    i = next(k for k in range(n) if a.degree_in(k) > 0 or b.degree_in(k) > 0)
    if a.degree_in(i) <= 0:
        return _gcd_rec(a, _content_in(b, i, limit), limit)
    if b.degree_in(i) <= 0:
        return _gcd_rec(_content_in(a, i, limit), b, limit)
    ca, cb = _content_in(a, i, limit), _content_in(b, i, limit)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    c = _gcd_rec(ca, cb, limit)
    A, B = _split(pa, i), _split(pb, i)
    if max(A) < max(B):
        A, B = B, A
    while True:
        R = _prem(A, B, limit)
        if not R:
            break
        if max(R) == 0:
            B = {0: MultiPoly.const(1, vars)}
            break
        rp = _join(R, i, vars)
        rp = rp.exact_div(_content_in(rp, i, limit))
        A, B = B, _split(rp, i)
    g = _join(B, i, vars)
    g = g.exact_div(_content_in(g, i, limit))
    return _normalize_sign(c * g)


def multipoly_gcd(a: MultiPoly, b: MultiPoly, term_limit: int | None = TERM_LIMIT) -> MultiPoly:
    """Gcd in Z[vars], normalized to a positive lexicographic leading coefficient.

    Recursive on variables: content/primitive-part split, then a primitive
    pseudo-remainder sequence in the main variable.
    """
    if isinstance(a, int):
        a = MultiPoly.const(a, b.vars)
    if isinstance(b, int):
        b = MultiPoly.const(b, a.vars)
    if a.vars != b.vars:
        if a.is_constant():
            a = MultiPoly.const(a.constant_value(), b.vars)
        elif b.is_constant():
            b = MultiPoly.const(b.constant_value(), a.vars)
        else:
            raise TypeError("variable lists differ")
    return _normalize_sign(_gcd_rec(a, b, term_limit))


# ---------------------------------------------------------------------------
# cyclotomic polynomials

@lru_cache(maxsize=None)
def _cyclotomic_coeffs(d: int) -> Tuple[int, ...]:
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    p = UniPoly([-1] + [0] * (d - 1) + [1], "q")
    for e in range(1, d):
        if d % e == 0:
            p = p.exact_div(UniPoly(_cyclotomic_coeffs(e), "q"))
    return tuple(int(c) for c in p.coeffs)


def cyclotomic_poly(d: int, var: str = "q") -> UniPoly:
    """Phi_d, built by dividing ``q^d - 1`` by the lower Phi_e, e | d."""
    return UniPoly(_cyclotomic_coeffs(d), var)


def cyclotomic_factor(p: UniPoly, bound: int = 64):
    """Split ``p`` as ``remainder * prod Phi_d^m_d`` by trial division, d <= bound.

    Returns ``(multiplicities, remainder)``; the remainder keeps the unit and
    anything not recognized.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    mult: Dict[int, int] = {}
    rem = p
    for d in range(1, bound + 1):
        phi = cyclotomic_poly(d, p.var)
        if phi.degree > rem.degree:
            # totient is not monotone, keep scanning
            continue
        m = 0
        while rem.degree >= phi.degree:
            q, r = divmod(rem, phi)
            if not r.is_zero():
                break
            rem = q
            m += 1
        if m:
            mult[d] = m
    return mult, rem


def cyclotomic_product(mult: Mapping[int, int], var: str = "q") -> UniPoly:
    out = UniPoly.const(1, var)
    for d in sorted(mult):
        out = out * cyclotomic_poly(d, var) ** mult[d]
    return out


def format_cyclotomic(mult: Mapping[int, int]) -> str:
    if not mult:
        return "1"
    return "*".join(f"Phi{d}" if m == 1 else f"Phi{d}^{m}" for d, m in sorted(mult.items()))


# ---------------------------------------------------------------------------
# specialization

def specialize(p, bindings: Mapping[str, object]):
    """Substitute values for variables.

    A fully bound polynomial evaluates in the ring of the supplied values
    (ints, Fractions, UniPolys, ...).  A partial binding of a MultiPoly needs
    integer values and returns a MultiPoly in the remaining variables.
    """
    if isinstance(p, (int, Fraction)):
        return p
    if isinstance(p, UniPoly):
        for k in bindings:
            if k != p.var:
                raise UnknownVariable(k)
        if p.var in bindings:
            return p(bindings[p.var])
        return p
    if isinstance(p, RatFunc):
        for k in bindings:
            if k != p.var:
                raise UnknownVariable(k)
        if p.var in bindings:
            return p(bindings[p.var])
        return p
    if not isinstance(p, MultiPoly):
        raise TypeError(f"cannot specialize {type(p).__name__}")
    for k in bindings:
        if k not in p.vars:
            raise UnknownVariable(k)
    idx = [i for i, v in enumerate(p.vars) if v in bindings]
    if len(idx) == len(p.vars):
        vals = [bindings[v] for v in p.vars]
        acc = 0
        for e, c in p.terms.items():
            t = c
            for v, x in zip(vals, e):
                if x:
                    t = t * v ** x
            acc = acc + t
        return acc
    keep = [i for i in range(len(p.vars)) if i not in idx]
    new_vars = tuple(p.vars[i] for i in keep)
    terms: Dict[Tuple[int, ...], int] = {}
    for e, c in p.terms.items():
        t = c
        for i in idx:
            val = bindings[p.vars[i]]
            if not isinstance(val, int):
                raise TypeError("partial specialization needs integer values")
            t *= val ** e[i]
        k = tuple(e[i] for i in keep)
        terms[k] = terms.get(k, 0) + t
    return MultiPoly(terms, new_vars)


# ---------------------------------------------------------------------------
# ring descriptors

class IntegerRing:
    """Z with nonnegative canonical representatives."""

    name = "ZZ"
    zero = 0
    one = 1
    is_field = False
    is_euclidean = True

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def is_zero(self, a):
        return a == 0

    def normal(self, a):
        """``(canonical, unit)`` with ``canonical == unit * a``."""
        return (-a, -1) if a < 0 else (a, 1)

    def unit_inverse(self, u):
        return u

    def is_unit(self, a):
        return a == 1 or a == -1

    def gcd(self, a, b):
        return math.gcd(a, b)

    def xgcd(self, a, b):
        return int_xgcd(a, b)

    def divmod(self, a, b):
        q, r = divmod(a, b)
        # symmetric remainder keeps entries small
        if 2 * abs(r) > abs(b):
            if (r > 0) == (b > 0):
                q, r = q + 1, r - b
            else:
                q, r = q - 1, r + b
        return q, r

    def size(self, a):
        return abs(a)

    def divides(self, a, b):
        return b == 0 if a == 0 else b % a == 0

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q

    def bits(self, a):
        return a.bit_length()

    def fmt(self, a):
        return str(a)

    def to_json(self, a):
        return str(a)

    def from_json(self, data):
        return int(data)

    def __repr__(self):
        return "ZZ"


class RationalField:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)
    is_field = True
    is_euclidean = True

    def coerce(self, x):
        return Fraction(x)

    def is_zero(self, a):
        return a == 0

    def normal(self, a):
        if a == 0:
            return a, Fraction(1)
        return Fraction(1), 1 / Fraction(a)

    def unit_inverse(self, u):
        return 1 / u

    def is_unit(self, a):
        return a != 0

    def gcd(self, a, b):
        return Fraction(0) if a == 0 and b == 0 else Fraction(1)

    def xgcd(self, a, b):
        if a != 0:
            return Fraction(1), 1 / Fraction(a), Fraction(0)
        if b != 0:
            return Fraction(1), Fraction(0), 1 / Fraction(b)
        return Fraction(0), Fraction(0), Fraction(0)

    def divmod(self, a, b):
        return Fraction(a) / b, Fraction(0)

    def size(self, a):
        return 0

    def divides(self, a, b):
        return a != 0 or b == 0

    def exact_div(self, a, b):
        return Fraction(a) / b

    def bits(self, a):
        a = Fraction(a)
        return max(a.numerator.bit_length(), a.denominator.bit_length())

    def fmt(self, a):
        return _frac_str(Fraction(a))

    def to_json(self, a):
        return _frac_str(Fraction(a))

    def from_json(self, data):
        return Fraction(str(data))

    def __repr__(self):
        return "QQ"


class RatFuncField:
    """The field Q(var) of reduced rational functions."""

    is_field = True
    is_euclidean = True

    def __init__(self, var: str = "q"):
        self.var = var
        self.name = f"QQ({var})"
        self.zero = RatFunc(0, 1, var)
        self.one = RatFunc(1, 1, var)

    def coerce(self, x):
        if isinstance(x, RatFunc):
            return x
        return RatFunc(x, 1, self.var)

    def is_zero(self, a):
        return a == 0

    def normal(self, a):
        if a == 0:
            return a, self.one
        return self.one, a.inverse() if isinstance(a, RatFunc) else self.coerce(a).inverse()

    def unit_inverse(self, u):
        return self.coerce(u).inverse()

    def is_unit(self, a):
        return a != 0

    def gcd(self, a, b):
        return self.zero if a == 0 and b == 0 else self.one

    def xgcd(self, a, b):
        if a != 0:
            return self.one, self.coerce(a).inverse(), self.zero
        if b != 0:
            return self.one, self.zero, self.coerce(b).inverse()
        return self.zero, self.zero, self.zero

    def divmod(self, a, b):
        return self.coerce(a) / b, self.zero

    def size(self, a):
        return 0

    def divides(self, a, b):
        return a != 0 or b == 0

    def exact_div(self, a, b):
        return self.coerce(a) / b

    def bits(self, a):
        return 0

    def fmt(self, a):
        return str(a)

    def to_json(self, a):
        return self.coerce(a).to_json()

    def from_json(self, data):
        return RatFunc(UniPoly.from_json(data["num"], self.var), UniPoly.from_json(data["den"], self.var), self.var)

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.var == self.var

    def __hash__(self):
        return hash(("RatFuncField", self.var))

    def __repr__(self):
        return self.name


class PolynomialRing:
    """F[var] for a field F (QQ or QQ(q)); Euclidean, canonical form monic."""

    is_field = False
    is_euclidean = True

    def __init__(self, field, var: str = "x"):
        self.field = field
        self.var = var
        self.name = f"{field.name}[{var}]"
        self.zero = UniPoly._raw((), var)
        self.one = UniPoly._raw((field.one,), var)

    def gen(self):
        return UniPoly._raw((self.field.zero, self.field.one), self.var)

    def coerce(self, x):
        if isinstance(x, UniPoly):
            if x.var != self.var and not x.is_constant():
                raise TypeError(f"{x} is not in {self.name}")
            return UniPoly._raw(x.coeffs, self.var)
        return UniPoly._raw((self.field.coerce(x),), self.var)

    def is_zero(self, a):
        return a.is_zero()

    def normal(self, a):
        if a.is_zero():
            return a, self.one
        inv = 1 / a.lc
        return a * inv, UniPoly._raw((inv,), self.var)

    def unit_inverse(self, u):
        return UniPoly._raw((1 / u.lc,), self.var)

    def is_unit(self, a):
        return a.degree == 0

    def gcd(self, a, b):
        return unipoly_gcd(a, b)

    def xgcd(self, a, b):
        return unipoly_xgcd(a, b)

    def divmod(self, a, b):
        return divmod(a, b)

    def size(self, a):
        return a.degree

    def divides(self, a, b):
        return a.divides(b)

    def exact_div(self, a, b):
        return a.exact_div(b)

    def bits(self, a):
        best = 0
        for c in a.coeffs:
            if isinstance(c, Fraction):
                best = max(best, c.numerator.bit_length(), c.denominator.bit_length())
        return best

    def fmt(self, a):
        return str(a)

    def to_json(self, a):
        return a.to_json()

    def from_json(self, data):
        if isinstance(data, (int, str)):
            return self.coerce(Fraction(str(data)))
        if isinstance(self.field, RatFuncField):
            return UniPoly._raw([self.field.from_json(c) for c in data], self.var)
        return UniPoly.from_json(data, self.var)

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.var == self.var and other.field.name == self.field.name

    def __hash__(self):
        return hash(("PolynomialRing", self.field.name, self.var))

    def __repr__(self):
        return self.name


class MultiPolyRing:
    """Z[vars]: a UFD (not Euclidean); canonical form has positive lex leading coefficient."""

    is_field = False
    is_euclidean = False

    def __init__(self, vars: Tuple[str, ...]):
        self.vars = tuple(vars)
        self.name = "ZZ[" + ",".join(self.vars) + "]"
        self.zero = MultiPoly._raw({}, self.vars)
        self.one = MultiPoly.const(1, self.vars)

    def gens(self):
        return MultiPoly.gens(self.vars)

    def coerce(self, x):
        if isinstance(x, MultiPoly):
            if x.vars == self.vars:
                return x
            if x.is_constant():
                return MultiPoly.const(x.constant_value(), self.vars)
            raise TypeError(f"{x} is not in {self.name}")
        return MultiPoly.const(int(x), self.vars)

    def is_zero(self, a):
        return a.is_zero()

    def normal(self, a):
        if a.terms and a.leading_term()[1] < 0:
            return -a, MultiPoly.const(-1, self.vars)
        return a, self.one

    def unit_inverse(self, u):
        return u

    def is_unit(self, a):
        return a.is_constant() and abs(a.constant_value()) == 1

    def gcd(self, a, b):
        return multipoly_gcd(a, b)

    def divides(self, a, b):
        return a.divides(b)

    def exact_div(self, a, b):
        return a.exact_div(b)

    def bits(self, a):
        return max((abs(c).bit_length() for c in a.terms.values()), default=0)

    def fmt(self, a):
        return str(a)

    def to_json(self, a):
        return a.to_json()

    def from_json(self, data):
        if isinstance(data, (int, str)):
            return self.coerce(int(data))
        return MultiPoly.from_json(data, self.vars)

    def __eq__(self, other):
        return isinstance(other, MultiPolyRing) and other.vars == self.vars

    def __hash__(self):
        return hash(("MultiPolyRing", self.vars))

    def __repr__(self):
        return self.name


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def poly_ring(var: str = "x") -> PolynomialRing:
    """Q[var]."""
    return PolynomialRing(QQ, var)


@lru_cache(maxsize=None)
def ratfunc_field(var: str = "q") -> RatFuncField:
    return RatFuncField(var)


@lru_cache(maxsize=None)
def ratfunc_poly_ring(qvar: str = "q", var: str = "n") -> PolynomialRing:
    """Q(qvar)[var]."""
    return PolynomialRing(ratfunc_field(qvar), var)


def multipoly_ring(vars) -> MultiPolyRing:
    return MultiPolyRing(tuple(vars))
