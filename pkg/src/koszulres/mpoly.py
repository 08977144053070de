"""Multigraded polynomials in blocks of variables ``x[p,0..n_p]``.

Blocks are numbered from 1 as in the usual notation ``x_{p,i}``; inside a
block the variables are numbered from 0.  A monomial is a flat exponent tuple
over all variables.  The canonical order (descending graded lex inside each
block, block 1 most significant) fixes every basis, matrix and sign computed
downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .arith import ZZ, ModP, Poly, PolyRing, Ring, _join_sum, _join_term

Monomial = tuple[int, ...]
MultiDegree = tuple[int, ...]


class NotHomogeneous(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class BlockStructure:
    """Sizes ``n = (n_1, ..., n_q)``; block ``p`` holds ``n_p + 1`` variables."""

    n: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        if not self.n:
            raise ValueError("at least one block of variables is required")
        if any(v < 1 for v in self.n):
            raise ValueError("block sizes must be positive")

    @property
    def q(self) -> int:
        return len(self.n)

    @property
    def nvars(self) -> int:
        return sum(self.n) + self.q

    @property
    def offsets(self) -> tuple[int, ...]:
        out, k = [], 0
        for v in self.n:
            out.append(k)
            k += v + 1
        return tuple(out)

    def index(self, p: int, i: int) -> int:
        """Flat position of ``x[p,i]`` (``p`` counted from 1)."""
        if not 1 <= p <= self.q or not 0 <= i <= self.n[p - 1]:
            raise IndexError(f"x[{p},{i}] is not a variable of shape {self.n}")
        return self.offsets[p - 1] + i

    def blocks(self, mono: Monomial) -> list[tuple[int, ...]]:
        return [mono[o : o + v + 1] for o, v in zip(self.offsets, self.n)]

    def multidegree(self, mono: Monomial) -> MultiDegree:
        return tuple(sum(b) for b in self.blocks(mono))

    def sort_key(self, mono: Monomial) -> tuple:
        key = []
        for b in self.blocks(mono):
            key.append(-sum(b))
            key.extend(-e for e in b)
        return tuple(key)

    def variable(self, p: int, i: int) -> Monomial:
        e = [0] * self.nvars
        e[self.index(p, i)] = 1
        return tuple(e)

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def zero_degree(self) -> MultiDegree:
        return (0,) * self.q


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree in descending lex order."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=4096)
def _basis_cached(n: tuple[int, ...], d: tuple[int, ...]) -> tuple[Monomial, ...]:
    if any(v < 0 for v in d):
        return ()
    per_block = [_compositions(dp, np_ + 1) for dp, np_ in zip(d, n)]
    return tuple(sum(choice, ()) for choice in product(*per_block))


def monomial_basis(shape: BlockStructure, d: Sequence[int]) -> list[Monomial]:
    """All monomials of multidegree ``d`` in canonical order (empty if any d_p < 0)."""
    d = tuple(d)
    if len(d) != shape.q:
        raise ValueError(f"multidegree {d} does not match {shape.q} blocks")
    return list(_basis_cached(shape.n, d))


def basis_size(shape: BlockStructure, d: Sequence[int]) -> int:
    if any(v < 0 for v in d):
        return 0
    out = 1
    for dp, np_ in zip(d, shape.n):
        out *= comb(dp + np_, np_)
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def format_monomial(shape: BlockStructure, mono: Monomial) -> str:
    parts = []
    for p, (o, v) in enumerate(zip(shape.offsets, shape.n), start=1):
        for i in range(v + 1):
            e = mono[o + i]
            if e == 1:
                parts.append(f"x[{p},{i}]")
            elif e:
                parts.append(f"x[{p},{i}]^{e}")
    return "*".join(parts)


class MPoly:
    """Sparse polynomial in the block variables over a coefficient ring."""

    __slots__ = ("shape", "ring", "terms")

    def __init__(self, shape: BlockStructure, ring: Ring, terms: Mapping[Monomial, object] = ()):
        self.shape = shape
        self.ring = ring
        zero = ring.zero
        self.terms = {m: c for m, c in dict(terms).items() if c != zero}

    @classmethod
    def constant(cls, shape, ring, c) -> MPoly:
        return cls(shape, ring, {shape.one(): ring(c)})

    @classmethod
    def variable(cls, shape, ring, p: int, i: int) -> MPoly:
        return cls(shape, ring, {shape.variable(p, i): ring.one})

    @classmethod
    def from_monomials(cls, shape, ring, monos: Sequence[Monomial], coeffs: Iterable) -> MPoly:
        terms: dict = {}
        for m, c in zip(monos, coeffs):
            c = ring(c)
            terms[m] = terms[m] + c if m in terms else c
        return cls(shape, ring, terms)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.shape != self.shape or other.ring != self.ring:
                raise ValueError("polynomials over different shapes or rings")
            return other
        if isinstance(other, (int, Fraction, ModP, Poly)):
            return MPoly.constant(self.shape, self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MPoly(self.shape, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.shape, self.ring, {m: -c for m, c in self.terms.items()})

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
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return MPoly(self.shape, self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.constant(self.shape, self.ring, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def multidegree(self) -> MultiDegree:
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no multidegree")
        degs = {self.shape.multidegree(m) for m in self.terms}
        if len(degs) > 1:
            raise NotHomogeneous(f"mixed multidegrees {sorted(degs)}")
        return degs.pop()

    def is_multihomogeneous(self) -> bool:
        return len({self.shape.multidegree(m) for m in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        key = self.shape.sort_key
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]))

    def coefficient(self, mono: Monomial):
        return self.terms.get(tuple(mono), self.ring.zero)

    def coefficients_in(self, basis: Sequence[Monomial]) -> list:
        zero = self.ring.zero
        return [self.terms.get(m, zero) for m in basis]

    def change_ring(self, ring: Ring) -> MPoly:
        return MPoly(self.shape, ring, {m: ring(c) for m, c in self.terms.items()})

    def map_coefficients(self, fn, ring: Ring) -> MPoly:
        return MPoly(self.shape, ring, {m: fn(c) for m, c in self.terms.items()})

    def specialize(self, assignment: Mapping[str, object]) -> MPoly:
        """Substitute values for the extension variables of the coefficient ring."""
        return specialize(self, assignment)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = [
            _join_term(self.ring.format(c), format_monomial(self.shape, m))
            for m, c in self.sorted_terms()
        ]
        return _join_sum(parts)

    def __repr__(self):
        return f"MPoly({self})"


def generic_names(shape: BlockStructure, d: Sequence[int], tag: int) -> list[str]:
    return [f"u[{tag},{k}]" for k in range(basis_size(shape, d))]


def generic_polynomial(shape: BlockStructure, d: Sequence[int], tag: int, ring: PolyRing | None = None) -> MPoly:
    """``U_tag = sum_m u[tag,rank(m)] * m`` over all monomials of multidegree ``d``."""
    d = tuple(d)
    if not any(d):
        raise ValueError("generic polynomials need a nonzero multidegree")
    names = generic_names(shape, d, tag)
    if ring is None:
        ring = PolyRing(ZZ, names)
    basis = monomial_basis(shape, d)
    return MPoly(shape, ring, {m: ring.gen(name) for m, name in zip(basis, names)})


def generic_sequence(shape: BlockStructure, degrees: Sequence[Sequence[int]], base: Ring = ZZ):
    """Generic polynomials of the given multidegrees sharing one coefficient ring."""
    names = [n for i, d in enumerate(degrees) for n in generic_names(shape, d, i)]
    ring = PolyRing(base, names)
    return ring, [generic_polynomial(shape, d, i, ring) for i, d in enumerate(degrees)]


def generic_assignment(sequence: Sequence[MPoly], degrees: Sequence[Sequence[int]]) -> dict[str, object]:
    """Values of the generic coefficients that specialize ``U_i`` to ``sequence[i]``."""
    out = {}
    for i, (f, d) in enumerate(zip(sequence, degrees)):
        basis = monomial_basis(f.shape, d)
        for name, c in zip(generic_names(f.shape, d, i), f.coefficients_in(basis)):
            out[name] = c
    return out


def specialize(f: MPoly, assignment: Mapping[str, object]) -> MPoly:
    ring = f.ring
    if not isinstance(ring, PolyRing):
        raise TypeError("specialization needs coefficients in a polynomial extension")
    base = ring.base
    used = {ring.names[k] for c in f.terms.values() for e in c.terms for k, x in enumerate(e) if x}
    missing = sorted(used - set(assignment))
    if missing:
        raise KeyError(f"assignment misses {', '.join(missing)}")
    full = {n: assignment.get(n, base.zero) for n in ring.names}
    return MPoly(f.shape, base, {m: c.evaluate(full) for m, c in f.terms.items()})


# --- text format -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*(?:\[\s*\d+(?:\s*,\s*\d+)*\s*\])?)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, re.sub(r"\s+", "", m.group(kind))))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, number, name):
        self.toks = tokens
        self.i = 0
        self.number = number
        self.name = name

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None or (op is not None and tok[1] != op):
            raise ParseError(f"expected {op or 'a token'}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                val = val * self.unary()
            else:
                kind, tok = self.take()
                if kind != "num":
                    raise ParseError("only division by an integer literal is supported")
                if int(tok) == 0:
                    raise ParseError("division by zero")
                val = val * self.number(Fraction(1, int(tok)))
        return val

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, tok = self.take()
            if kind != "num":
                raise ParseError("exponents must be nonnegative integer literals")
            return base ** int(tok)
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return self.number(Fraction(int(tok)))
        if kind == "name":
            return self.name(tok)
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected {tok!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.toks[self.i][1]!r}")
        return val


_XVAR = re.compile(r"x\[(\d+),(\d+)\]$")


def parse_expression(text: str, ring: PolyRing) -> Poly:
    """Parse an element of a polynomial extension ring."""

    def name(tok):
        if tok not in ring.names:
            raise ParseError(f"unknown generator {tok!r} for {ring!r}")
        return ring.gen(tok)

    return _Parser(_tokenize(text), lambda q: ring(ring.base(q)), name).parse()


def parse_mpoly(text: str, shape: BlockStructure, ring: Ring = ZZ) -> MPoly:
    """Parse ``coeff*x[p,i]^e*...`` terms joined by ``+``/``-``.

    Names other than ``x[p,i]`` are generators of ``ring`` (for instance ``t``
    or ``u[0,1]``); parenthesized sub-expressions are allowed.
    """

    def number(q):
        return MPoly.constant(shape, ring, ring(q) if not isinstance(ring, PolyRing) else ring(ring.base(q)))

    def name(tok):
        m = _XVAR.match(tok)
        if m:
            try:
                return MPoly.variable(shape, ring, int(m.group(1)), int(m.group(2)))
            except IndexError as exc:
                raise ParseError(str(exc)) from None
        if isinstance(ring, PolyRing) and tok in ring.names:
            return MPoly.constant(shape, ring, ring.gen(tok))
        raise ParseError(f"unknown variable {tok!r}")

    try:
        return _Parser(_tokenize(text), number, name).parse()
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
