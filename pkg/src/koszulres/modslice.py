"""Componentwise free modules ``A[x]`` and ``A[x]/I`` with ``I`` a monomial ideal.

Every slice of such a module is free on its standard monomials, so slice
bases, Hilbert functions and Hilbert polynomials are pure combinatorics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .mpoly import BlockStructure, Monomial, MultiDegree, MPoly, mono_divides, monomial_basis

log = logging.getLogger(__name__)


class VerificationFailed(RuntimeError):
    pass


class RdegUndefined(ValueError):
    pass


@dataclass(frozen=True)
class MonomialIdeal:
    shape: BlockStructure
    generators: tuple[Monomial, ...]

    def __post_init__(self):
        gens = sorted(set(tuple(g) for g in self.generators), key=self.shape.sort_key)
        if any(len(g) != self.shape.nvars for g in gens):
            raise ValueError("generator length does not match the number of variables")
        if any(not any(g) for g in gens):
            raise ValueError("the unit ideal is not a valid module quotient")
        minimal = [g for g in gens if not any(h != g and mono_divides(h, g) for h in gens)]
        object.__setattr__(self, "generators", tuple(minimal))

    @classmethod
    def from_polys(cls, shape: BlockStructure, polys: Iterable[MPoly]) -> MonomialIdeal:
        gens = []
        for f in polys:
            if len(f.terms) != 1:
                raise ValueError(f"{f} is not a monomial")
            gens.append(next(iter(f.terms)))
        return cls(shape, tuple(gens))

    def contains(self, mono: Monomial) -> bool:
        return any(mono_divides(g, mono) for g in self.generators)

    def max_degree(self) -> MultiDegree:
        degs = [self.shape.multidegree(g) for g in self.generators]
        return tuple(max((d[p] for d in degs), default=0) for p in range(self.shape.q))


@dataclass(frozen=True)
class ModuleSpec:
    """``A[x]`` (no ideal) or ``A[x]/I`` for a monomial ideal ``I``."""

    shape: BlockStructure
    ideal: MonomialIdeal | None = None

    def __post_init__(self):
        if self.ideal is not None:
            if self.ideal.shape != self.shape:
                raise ValueError("ideal lives in a different polynomial ring")
            if not self.ideal.generators:
                object.__setattr__(self, "ideal", None)

    @property
    def is_free(self) -> bool:
        return self.ideal is None

    def is_standard(self, mono: Monomial) -> bool:
        return self.ideal is None or not self.ideal.contains(mono)

    def reduce(self, f: MPoly) -> MPoly:
        """Normal form modulo the ideal: drop every non-standard term."""
        if self.ideal is None:
            return f
        return MPoly(f.shape, f.ring, {m: c for m, c in f.terms.items() if not self.ideal.contains(m)})

    def regularity_offset(self) -> MultiDegree:
        """Degree past which the Hilbert function is trusted: 0 for the free ring."""
        if self.ideal is None:
            return self.shape.zero_degree()
        return tuple(v + 1 for v in self.ideal.max_degree())

    def interpolation_offset(self) -> MultiDegree:
        if self.ideal is None:
            return tuple(1 for _ in self.shape.n)
        return tuple(v + 1 for v in self.ideal.max_degree())


def free_module(n: Sequence[int]) -> ModuleSpec:
    return ModuleSpec(BlockStructure(tuple(n)))


def monomial_quotient(n: Sequence[int], generators: Iterable[Monomial]) -> ModuleSpec:
    shape = BlockStructure(tuple(n))
    return ModuleSpec(shape, MonomialIdeal(shape, tuple(generators)))


_SLICE_CACHE: dict = {}


def slice_basis(M: ModuleSpec, nu: Sequence[int]) -> list[Monomial]:
    """Standard monomials of multidegree ``nu`` in canonical order."""
    nu = tuple(nu)
    key = (M, nu)
    hit = _SLICE_CACHE.get(key)
    if hit is None:
        hit = tuple(m for m in monomial_basis(M.shape, nu) if M.is_standard(m))
        if len(_SLICE_CACHE) > 20000:
            _SLICE_CACHE.clear()
        _SLICE_CACHE[key] = hit
    return list(hit)


def hilbert_function(M: ModuleSpec, nu: Sequence[int]) -> int:
    return len(slice_basis(M, nu))


# --- Hilbert polynomial ------------------------------------------------------


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _lagrange_basis(nodes: Sequence[int]) -> list[list[Fraction]]:
    """Coefficient lists (constant term first) of the Lagrange basis on ``nodes``."""
    out = []
    for j, xj in enumerate(nodes):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for k, xk in enumerate(nodes):
            if k != j:
                poly = _poly_mul(poly, [Fraction(-xk), Fraction(1)])
                denom *= xj - xk
        out.append([c / denom for c in poly])
    return out


@dataclass
class HilbertPolynomial:
    """Polynomial in ``q`` variables, stored as ``{exponent tuple: coefficient}``."""

    q: int
    coeffs: dict[tuple[int, ...], Fraction]
    offset: MultiDegree = field(default=())

    def __call__(self, d: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for x, k in zip(d, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def total_degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant(self) -> Fraction:
        return self.coeffs.get((0,) * self.q, Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = ["d"] if self.q == 1 else [f"d{p}" for p in range(1, self.q + 1)]
        parts = []
        for e in sorted(self.coeffs, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.coeffs[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = str(c)
            if mono:
                term = mono if c == 1 else ("-" + mono if c == -1 else f"{cs}*{mono}")
            else:
                term = cs
            parts.append(term)
        out = parts[0]
        for s in parts[1:]:
            out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
        return out


def _interpolate(M: ModuleSpec, offset: MultiDegree) -> HilbertPolynomial:
    q = M.shape.q
    nodes = [list(range(o, o + n + 1)) for o, n in zip(offset, M.shape.n)]
    bases = [_lagrange_basis(ns) for ns in nodes]
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for idx in product(*(range(len(ns)) for ns in nodes)):
        value = hilbert_function(M, [nodes[p][idx[p]] for p in range(q)])
        if not value:
            continue
        factors = [bases[p][idx[p]] for p in range(q)]
        for e in product(*(range(len(f)) for f in factors)):
            c = Fraction(value)
            for p in range(q):
                c *= factors[p][e[p]]
            if c:
                coeffs[e] = coeffs.get(e, Fraction(0)) + c
    return HilbertPolynomial(q, {e: c for e, c in coeffs.items() if c}, tuple(offset))


def _verification_points(M: ModuleSpec, offset: MultiDegree) -> list[MultiDegree]:
    shifted = [range(o + 1, o + n + 2) for o, n in zip(offset, M.shape.n)]
    pts = [tuple(p) for p in product(*shifted)]
    pts.append(tuple(o + 2 * (n + 1) for o, n in zip(offset, M.shape.n)))
    return pts


@lru_cache(maxsize=256)
def hilbert_polynomial(M: ModuleSpec, max_rounds: int = 4) -> HilbertPolynomial:
    """Interpolate the Hilbert function past the ideal's generator degrees and verify it.

    Per-variable degree is at most ``n_p``.  The offset is doubled when the
    extra verification points disagree.
    """
    offset = M.interpolation_offset()
    for _ in range(max_rounds + 1):
        P = _interpolate(M, offset)
        if all(P(pt) == hilbert_function(M, pt) for pt in _verification_points(M, offset)):
            return P
        log.debug("Hilbert polynomial check failed at offset %s", offset)
        offset = tuple(2 * o for o in offset)
    raise VerificationFailed(f"no stable Hilbert polynomial found up to offset {offset}")


def rdim(M: ModuleSpec) -> int:
    return hilbert_polynomial(M).total_degree()


def rdeg(M: ModuleSpec) -> int:
    P = hilbert_polynomial(M)
    if P.total_degree() > 0:
        raise RdegUndefined(f"relevant dimension {P.total_degree()} > 0")
    c = P.constant()
    assert c.denominator == 1
    return int(c)
