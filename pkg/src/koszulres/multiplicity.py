"""Multiplicity lower bounds checked on instances.

Two flavours: the p-adic valuation of an integer resultant against the number
of common zeros modulo p, and the t-adic order of the resultant along a line
``F + t G`` in coefficient space.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import GF, QQ, ZZ, is_prime, val_p
from .koszul import PolySequence, build_slice, homology_ranks
from .modslice import ModuleSpec
from .mpoly import MPoly, generic_assignment, monomial_basis
from .resultant import (
    HigherHomologyNonzero,
    NotGenericallyExact,
    StabilizationFailure,
    _square_det,
    choose_nu,
    generic_resultant,
    mresultant,
)

log = logging.getLogger(__name__)


class HypothesisNotCertified(RuntimeError):
    pass


class DegenerateLine(ArithmeticError):
    pass


# --- p-adic side ---------------------------------------------------------------


@dataclass
class ZeroCount:
    N: int
    nu: tuple
    homology: dict
    note: str = "certified on window"


def mod_p_zero_degree(F, M: ModuleSpec, p: int, nu: Sequence[int] | None = None, max_rounds: int = 4) -> ZeroCount:
    """``dim_{F_p} (M / F M)_nu`` for the reduction of ``F``, with ``h_{>=2} = 0`` required.

    The count must agree at ``nu`` and every ``nu + e_p``; otherwise the
    degree is doubled, as for the resultant itself.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    F = PolySequence.of(F)
    k = GF(p)
    Fbar = F.change_ring(k)
    nu = tuple(nu) if nu is not None else choose_nu(M, F.degrees)
    for _ in range(max_rounds + 1):
        probes = [nu] + [tuple(x + (j == i) for j, x in enumerate(nu)) for i in range(M.shape.q)]
        hom = {}
        for d in probes:
            h = homology_ranks(build_slice(M, Fbar, d))
            if any(h[2:]):
                raise HypothesisNotCertified(f"higher homology {h} mod {p} at nu={d}")
            hom[d] = h
        counts = {h[0] for h in hom.values()}
        if len(counts) == 1:
            return ZeroCount(counts.pop(), nu, hom)
        nu = tuple(max(2 * x, x + 1) for x in nu)
    raise StabilizationFailure(f"zero count mod {p} did not settle up to nu={nu}")


@dataclass
class ChardinReport:
    N: int
    ord_p: int | float
    passed: bool
    resultant: object
    p: int


def check_chardin(F, M: ModuleSpec, p: int) -> ChardinReport:
    """Compare ``val_p(Res)`` with the number of common zeros modulo ``p``."""
    F = PolySequence.of(F)
    res = mresultant(M, F)
    order = math.inf if res.vanishes else val_p(int(res.value), p)
    N = mod_p_zero_degree(F, M, p).N
    return ChardinReport(N, order, order >= N, res, p)


@dataclass
class DerivativeReport:
    N: int
    valuations: dict[str, int | float]
    passed: bool


def check_derivative_divisibility(F, M: ModuleSpec, p: int) -> DerivativeReport:
    """First partials of the generic resultant, evaluated at ``F``, have ``val_p >= N - 1``."""
    F = PolySequence.of(F)
    R = generic_resultant(M, F.degrees)
    point = {n: int(c) for n, c in generic_assignment(F.polys, F.degrees).items()}
    vals = {}
    for name in R.ring.names:
        dR = R.diff(name)
        vals[name] = val_p(int(dR.evaluate(point)), p) if dR else math.inf
    N = mod_p_zero_degree(F, M, p).N
    return DerivativeReport(N, vals, all(v >= N - 1 for v in vals.values()))


# --- t-adic side ---------------------------------------------------------------


def _newton(xs: Sequence[int], ys: Sequence) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out = out * (t - xs[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [s - xs[i] * o for s, o in zip(shifted, out)]
        out[0] += coef[i]
    return _trim(out)


def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdiv_exact(a: list, b: list) -> list:
    a = list(a)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    if any(_trim(a)):
        raise ArithmeticError("pivot-block determinants do not divide along the line")
    return _trim(q)


def _line(F: PolySequence, G: PolySequence, t) -> PolySequence:
    return PolySequence(tuple(f + g * t for f, g in zip(F.polys, G.polys)), F.degrees)


def _common_ring(F: PolySequence, G: PolySequence):
    if F.ring is QQ or G.ring is QQ:
        return F.change_ring(QQ), G.change_ring(QQ)
    return F, G


@dataclass
class DirectionalOrderReport:
    F: PolySequence
    G: PolySequence
    R: list[Fraction]  # coefficients of R(t), constant term first, up to sign
    order: int
    samples: list[int]
    nu: tuple
    t_star: int

    def polynomial_str(self) -> str:
        terms = []
        for k, c in enumerate(self.R):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*t^{k}")
        return " + ".join(terms) or "0"


def _anchor(M, F, G, rng, attempts=4):
    tried = []
    for _ in range(attempts):
        t = rng.randint(1, 10**4)
        tried.append(t)
        try:
            res = mresultant(M, _line(F, G, t))
        except HigherHomologyNonzero:
            continue
        if not res.vanishes:
            return t, res
    return None, tried


def directional_order(M: ModuleSpec, F, G, seed: int | None = 0) -> DirectionalOrderReport:
    """t-adic order of ``R(t) = Res(F + t G)``, interpolated exactly over ``QQ``.

    The pivot partition is fixed at a random nonzero ``t*`` so that every block
    determinant is a polynomial in ``t`` of degree at most the block size; each
    one is interpolated from that many plus one integer samples.
    """
    F, G = _common_ring(PolySequence.of(F), PolySequence.of(G))
    if F.degrees != G.degrees:
        raise ValueError("direction must have the same multidegrees as the base sequence")
    rng = random.Random(seed)
    t_star, res = _anchor(M, F, G, rng)
    if t_star is None:
        _prove_degenerate(M, F, G)
        raise DegenerateLine("resultant vanishes identically along the line")
    cert = res.certificate
    nu = res.nu
    sizes = cert.block_sizes()
    samples = list(range(max(sizes.values()) + 1))
    values = {p: [] for p in sizes}
    for t in samples:
        S = build_slice(M, _line(F, G, t), nu)
        for p, s in sizes.items():
            if t <= s:
                values[p].append(_square_det(S.D[p], cert.rows[p], cert.cols[p]))
    num, den = [Fraction(1)], [Fraction(1)]
    for p, s in sizes.items():
        poly = _newton(samples[: s + 1], values[p])
        if p % 2:
            num = _pmul(num, poly)
        else:
            den = _pmul(den, poly)
    R = _pdiv_exact(num, den)
    if not R:
        raise DegenerateLine("resultant vanishes identically along the line")
    order = next(k for k, c in enumerate(R) if c)
    return DirectionalOrderReport(F, G, R, order, samples, nu, t_star)


def _prove_degenerate(M, F, G):
    """Random anchors failed: look for any nonvanishing sample below the degree bound."""
    nu = choose_nu(M, F.degrees)
    S = build_slice(M, _line(F, G, 0), nu)
    bound = sum(S.dims())
    for t in range(bound + 1):
        try:
            res = mresultant(M, _line(F, G, t))
        except (HigherHomologyNonzero, NotGenericallyExact):
            continue
        if not res.vanishes:
            raise RuntimeError(f"anchor search missed a nonvanishing sample at t={t}")


@dataclass
class OrderBoundReport:
    claimed: int
    orders: list[int]
    degenerate: int
    passed: bool
    seed: int
    reports: list[DirectionalOrderReport] = field(default_factory=list)


def random_direction(M: ModuleSpec, degrees, rng: random.Random, ring=ZZ, bound: int = 9) -> PolySequence:
    polys = []
    for d in degrees:
        basis = monomial_basis(M.shape, d)
        while True:
            f = MPoly.from_monomials(M.shape, ring, basis, [rng.randint(-bound, bound) for _ in basis])
            if f:
                break
        polys.append(f)
    return PolySequence(tuple(polys), tuple(tuple(d) for d in degrees))


def check_order_bound(M: ModuleSpec, F, claimed: int, trials: int, seed: int = 0, max_redraws: int | None = None) -> OrderBoundReport:
    """Directional orders along ``trials`` random lines; pass iff each is at least ``claimed``."""
    F = PolySequence.of(F)
    rng = random.Random(seed)
    max_redraws = 3 * trials if max_redraws is None else max_redraws
    orders, reports = [], []
    degenerate = 0
    while len(orders) < trials:
        G = random_direction(M, F.degrees, rng, F.ring)
        try:
            rep = directional_order(M, F, G, seed=rng.randrange(2**32))
        except DegenerateLine:
            degenerate += 1
            if degenerate > max_redraws:
                break
            continue
        orders.append(rep.order)
        reports.append(rep)
    passed = len(orders) == trials and all(o >= claimed for o in orders)
    return OrderBoundReport(claimed, orders, degenerate, passed, seed, reports)
