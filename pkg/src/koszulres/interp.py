"""Interpolation on ``G_a x G_m`` inside ``P^1 x P^1``.

Coordinates on the chart ``x[1,0] != 0, x[2,0] != 0`` are ``z = x[1,1]/x[1,0]``
and ``w = x[2,1]/x[2,0]``.  The derivations are ``d/dz`` (translation
invariant) and ``w d/dw`` (multiplication invariant).  A monomial
``x[1,0]^a0 x[1,1]^a1 x[2,0]^b0 x[2,1]^b1`` dehomogenizes to ``z^a1 w^b1``, so

    (d/dz)^s1 (w d/dw)^s2 (z^a1 w^b1) = a1 (a1-1) ... (a1-s1+1) z^(a1-s1) b1^s2 w^b1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .arith import QQ, ZZ
from .exactla import ExactMatrix, kernel_basis, rank
from .modslice import free_module
from .mpoly import BlockStructure, MPoly, monomial_basis, mono_mul
from .multiplicity import OrderBoundReport, check_order_bound
from .koszul import PolySequence

SHAPE = BlockStructure((1, 1))
MODULE = free_module((1, 1))


class HypothesisFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class GroupPoint:
    z: Fraction
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "z", Fraction(self.z))
        object.__setattr__(self, "w", Fraction(self.w))
        if self.w == 0:
            raise ValueError("w = 0 lies outside the multiplicative group")


@dataclass(frozen=True)
class EvalSpec:
    points: tuple[GroupPoint, ...]
    T: int

    def __post_init__(self):
        pts = tuple(p if isinstance(p, GroupPoint) else GroupPoint(*p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("need at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        if self.T < 1:
            raise ValueError("order bound T must be positive")

    def sigmas(self) -> list[tuple[int, int]]:
        """Derivative multi-indices with ``|s| < T``, by total order, ``(k,0)`` first."""
        return [(k - j, j) for k in range(self.T) for j in range(k + 1)]

    def conditions(self) -> int:
        return len(self.points) * sigma_count(self.T)

    def d_ev(self) -> tuple[int, int]:
        k = self.T * len(self.points)
        return (k, k)


def sigma_count(T: int, m: int = 2) -> int:
    """``#{s in N^m : |s| < T}``."""
    return comb(T - 1 + m, m)


def _falling(a: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= a - j
    return out


def derivative_value(mono, point: GroupPoint, sigma) -> Fraction:
    _, a1, _, b1 = mono
    s1, s2 = sigma
    if a1 < s1:
        return Fraction(0)
    return _falling(a1, s1) * point.z ** (a1 - s1) * Fraction(b1) ** s2 * point.w**b1


def apply_derivative(f: MPoly, point: GroupPoint, sigma) -> Fraction:
    return sum((Fraction(c) * derivative_value(m, point, sigma) for m, c in f.terms.items()), Fraction(0))


def eval_matrix(spec: EvalSpec, d: Sequence[int]) -> ExactMatrix:
    d = tuple(d)
    cols = monomial_basis(SHAPE, d)
    rows = [(k, s) for k in range(len(spec.points)) for s in spec.sigmas()]
    entries = [[derivative_value(m, spec.points[k], s) for m in cols] for k, s in rows]
    return ExactMatrix(QQ, entries, len(rows), len(cols), rows, cols)


def interpolation_slice(spec: EvalSpec, d: Sequence[int]) -> list[MPoly]:
    A = eval_matrix(spec, d)
    return [MPoly.from_monomials(SHAPE, ZZ, A.col_labels, v) for v in kernel_basis(A)]


def is_surjective(spec: EvalSpec, d: Sequence[int]) -> bool:
    return rank(eval_matrix(spec, d)) == spec.conditions()


@dataclass
class DegreeCheck:
    expected: int
    measured: dict[tuple[int, int], int]
    passed: bool


def ist_degree_check(spec: EvalSpec, degrees: Sequence[Sequence[int]] | None = None) -> DegreeCheck:
    """Codimension of the interpolation slice at large degrees against ``|S| * #sigmas``."""
    if degrees is None:
        a, b = spec.d_ev()
        degrees = [(a, b), (a + 1, b + 2), (a + 3, b + 1)]
    expected = spec.conditions()
    measured = {}
    for d in degrees:
        d = tuple(d)
        dim = len(monomial_basis(SHAPE, d))
        measured[d] = dim - len(interpolation_slice(spec, d))
    return DegreeCheck(expected, measured, all(v == expected for v in measured.values()))


def generated_check(spec: EvalSpec, d: Sequence[int]) -> bool:
    """Variables times the slice at ``d`` span the slice at ``d + e_p`` for both blocks."""
    d = tuple(d)
    gens = interpolation_slice(spec, d)
    for p in (1, 2):
        up = tuple(x + (k == p - 1) for k, x in enumerate(d))
        target = monomial_basis(SHAPE, up)
        products = [
            (MPoly.variable(SHAPE, ZZ, p, i) * g).coefficients_in(target) for g in gens for i in (0, 1)
        ]
        A = ExactMatrix(ZZ, products, len(products), len(target)) if products else ExactMatrix.zeros(ZZ, 0, len(target))
        if rank(A) != len(interpolation_slice(spec, up)):
            return False
    return True


@dataclass
class DemoSample:
    F: PolySequence
    report: OrderBoundReport


@dataclass
class DemoReport:
    claimed: int
    surjective: dict[tuple[int, int], bool]
    kernel_dims: dict[tuple[int, int], int]
    samples: list[DemoSample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.report.passed for s in self.samples)


def random_kernel_element(basis: Sequence[MPoly], rng: random.Random, bound: int = 5) -> MPoly:
    while True:
        f = MPoly(SHAPE, ZZ)
        for g in basis:
            f = f + g * rng.randint(-bound, bound)
        if f:
            return f


def res_estimate_demo(spec: EvalSpec, degrees: Sequence[Sequence[int]], trials: int, samples: int = 1, seed: int = 0) -> DemoReport:
    """Sample triples from the interpolation slices and bound their directional orders below."""
    degrees = [tuple(d) for d in degrees]
    if len(degrees) != 3:
        raise ValueError("P^1 x P^1 needs exactly three multidegrees")
    surj = {d: is_surjective(spec, d) for d in degrees}
    for d in degrees[:2]:
        if not surj[d]:
            raise HypothesisFailed(f"evaluation map is not surjective in degree {d}")
    bases = {d: interpolation_slice(spec, d) for d in degrees}
    if any(not b for b in bases.values()):
        raise HypothesisFailed("an interpolation slice is zero")
    claimed = spec.conditions()
    report = DemoReport(claimed, surj, {d: len(b) for d, b in bases.items()})
    rng = random.Random(seed)
    for _ in range(samples):
        F = PolySequence(tuple(random_kernel_element(bases[d], rng) for d in degrees), tuple(degrees))
        rep = check_order_bound(MODULE, F, claimed, trials, seed=rng.randrange(2**32))
        report.samples.append(DemoSample(F, rep))
    return report


__all__ = [
    "GroupPoint",
    "EvalSpec",
    "HypothesisFailed",
    "sigma_count",
    "eval_matrix",
    "interpolation_slice",
    "is_surjective",
    "ist_degree_check",
    "generated_check",
    "res_estimate_demo",
    "apply_derivative",
    "derivative_value",
]
