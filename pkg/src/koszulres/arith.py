"""Exact coefficient rings: integers, rationals, prime fields and polynomial extensions.

Elements are plain Python objects with arithmetic operators (``int``,
``fractions.Fraction``, :class:`ModP`, :class:`Poly`).  A ring object supplies
what operators cannot: coercion, exact division, parsing, printing and a pivot
preference used by the elimination routines.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ZZ",
    "QQ",
    "GF",
    "PolyRing",
    "Poly",
    "ModP",
    "Ring",
    "ExactDivisionError",
    "is_prime",
    "val_p",
    "parse_rational",
    "format_rational",
]


class ExactDivisionError(ArithmeticError):
    """A division that had to be exact left a remainder."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test, valid for every ``n < 2**64``."""
    if n >= 1 << 64:
        raise ValueError("primality is only decided for moduli below 2**64")
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def val_p(n: int, p: int) -> int | float:
    """p-adic valuation of an integer; ``math.inf`` for zero."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = abs(int(n))
    if n == 0:
        return math.inf
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Ring:
    """Common interface of the coefficient rings."""

    is_field = False
    characteristic = 0

    zero: object
    one: object

    def __call__(self, x):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def exact_div(self, a, b):
        raise NotImplementedError

    def pivot_key(self, a):
        """Larger key means a more attractive elimination pivot."""
        return 0

    def associated(self, a, b) -> bool:
        """Equality up to sign, the unit ambiguity of every value computed here."""
        return a == b or a == -b

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    @property
    def base(self) -> Ring:
        return self

    @property
    def generators(self) -> tuple[str, ...]:
        return ()


class IntegerRing(Ring):
    zero = 0
    one = 1

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, ModP):
            raise TypeError("cannot lift a residue class to ZZ")
        return int(x)

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ExactDivisionError(f"{a} is not divisible by {b}")
        return q

    def pivot_key(self, a):
        return abs(a)

    def parse(self, text):
        return int(text.strip())

    def __repr__(self):
        return "ZZ"


class RationalField(Ring):
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, ModP):
            raise TypeError("cannot lift a residue class to QQ")
        return Fraction(x)

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return Fraction(a) / b

    def pivot_key(self, a):
        return abs(a)

    def parse(self, text):
        return parse_rational(text)

    def format(self, a):
        return format_rational(a)

    def __repr__(self):
        return "QQ"


ZZ = IntegerRing()
QQ = RationalField()


class ModP:
    """Residue class modulo a prime ``p`` with representative in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing residue classes of different primes")
            return other.v
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, e: int):
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"GF({p}): modulus is not prime")
        self.p = p
        self.characteristic = p
        self.zero = ModP(0, p)
        self.one = ModP(1, p)

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError("residue class of a different prime")
            return x
        if isinstance(x, Fraction):
            return ModP(x.numerator, self.p) / x.denominator
        return ModP(int(x), self.p)

    def exact_div(self, a, b):
        return self(a) / b

    def pivot_key(self, a):
        return 1 if a else 0

    def parse(self, text):
        return self(parse_rational(text))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


# --- polynomial extensions -------------------------------------------------


class Poly:
    """Sparse polynomial over the base ring of a :class:`PolyRing`.

    ``terms`` maps exponent tuples (one entry per generator) to nonzero base
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object]):
        self.ring = ring
        zero = ring.base.zero
        self.terms = {e: c for e, c in terms.items() if c != zero}
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction, ModP)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return self.ring.zero
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.ring.names), self.ring.base.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        k = self.ring.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def leading(self):
        """Lex-largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def diff(self, name: str) -> Poly:
        k = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = c * e[k]
        return Poly(self.ring, out)

    def evaluate(self, assignment: Mapping[str, object]):
        """Substitute base-ring values for every generator."""
        missing = [n for n in self.ring.names if n not in assignment]
        if missing:
            raise KeyError(f"no value for {', '.join(missing)}")
        base = self.ring.base
        vals = [base(assignment[n]) for n in self.ring.names]
        total = base.zero
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def content(self) -> int:
        """gcd of the integer coefficients (``ZZ`` base only)."""
        return reduce(math.gcd, (int(c) for c in self.terms.values()), 0)

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"Poly({self})"


class PolyRing(Ring):
    """``base[names]``: polynomial extension of an exact ring.

    One generator gives the univariate extension ``A[t]``, several the
    generic-coefficient ring ``k[u]``.
    """

    def __init__(self, base: Ring, names: Sequence[str]):
        if isinstance(base, PolyRing):
            raise TypeError("nested polynomial extensions are not supported; merge the variables")
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self._base = base
        self.names = tuple(names)
        self._index = {n: i for i, n in enumerate(self.names)}
        self.characteristic = base.characteristic
        self.zero = Poly(self, {})
        self.one = Poly(self, {(0,) * len(self.names): base.one})

    @property
    def base(self) -> Ring:
        return self._base

    @property
    def generators(self) -> tuple[str, ...]:
        return self.names

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name} is not a generator of {self!r}") from None

    def gen(self, name: str) -> Poly:
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): self._base.one})

    def __call__(self, x):
        if isinstance(x, Poly):
            if x.ring != self:
                raise ValueError("polynomial from a different ring")
            return x
        return Poly(self, {(0,) * len(self.names): self._base(x)})

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other._base == self._base and other.names == self.names

    def __hash__(self):
        return hash((repr(self._base), self.names))

    def is_zero(self, a) -> bool:
        return not a.terms

    def exact_div(self, a: Poly, b: Poly) -> Poly:
        """Exact quotient by lex-leading-term division; a remainder aborts."""
        b = self(b)
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        base = self._base
        if b.is_constant():
            c = b.constant_value()
            return Poly(self, {e: base.exact_div(v, c) for e, v in a.terms.items()})
        lead_e, lead_c = b.leading()
        rem = dict(a.terms)
        quot = {}
        while rem:
            e = max(rem)
            shift = tuple(x - y for x, y in zip(e, lead_e))
            if min(shift) < 0:
                raise ExactDivisionError(f"{a} is not divisible by {b}")
            try:
                qc = base.exact_div(rem[e], lead_c)
            except ExactDivisionError:
                raise ExactDivisionError(f"{a} is not divisible by {b}") from None
            quot[shift] = qc
            for be, bc in b.terms.items():
                k = tuple(x + y for x, y in zip(be, shift))
                v = rem.get(k, base.zero) - qc * bc
                if v == base.zero:
                    rem.pop(k, None)
                else:
                    rem[k] = v
        return Poly(self, quot)

    def pivot_key(self, a: Poly):
        if not a.terms:
            return float("-inf")
        return (-a.total_degree(), -len(a.terms))

    def format(self, a: Poly) -> str:
        if not a.terms:
            return "0"
        parts = []
        for e in sorted(a.terms, reverse=True):
            c = a.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k
            )
            parts.append(_join_term(self._base.format(c), mono))
        return _join_sum(parts)

    def parse(self, text: str) -> Poly:
        from .mpoly import parse_expression

        return parse_expression(text, self)

    def __repr__(self):
        return f"{self._base!r}[{','.join(self.names)}]"


def _join_term(coeff: str, mono: str) -> str:
    if not mono:
        return coeff
    if coeff == "1":
        return mono
    if coeff == "-1":
        return "-" + mono
    if any(ch in coeff[1:] for ch in "+-") or " " in coeff:
        coeff = f"({coeff})"
    return f"{coeff}*{mono}"


def _join_sum(parts: Iterable[str]) -> str:
    out = ""
    for i, s in enumerate(parts):
        if i == 0:
            out = s
        elif s.startswith("-"):
            out += " - " + s[1:]
        else:
            out += " + " + s
    return out
