"""Independent reference computations and instance generators for the test suites.

Nothing here calls into the resultant or elimination code of the package: the
determinants are plain Gaussian elimination over Fraction (or cofactor
expansion) and the root-product formula uses floating-point roots.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from koszulres.arith import ZZ
from koszulres.mpoly import BlockStructure, MPoly, monomial_basis


def fraction_det(rows) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def cofactor_det(rows):
    if not rows:
        return 1
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1 :] for r in rows[1:]])
        for j in range(len(rows))
        if rows[0][j]
    )


def sylvester(f: list[int], g: list[int]) -> list[list[int]]:
    """Sylvester matrix of two binary forms given by coefficients of x0^m, x0^(m-1) x1, ..."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for k in range(n):
        rows.append([0] * k + list(f) + [0] * (size - m - 1 - k))
    for k in range(m):
        rows.append([0] * k + list(g) + [0] * (size - n - 1 - k))
    return rows


def root_product_resultant(f: list[int], g: list[int]) -> float:
    """``lc_f^deg g * lc_g^deg f * prod (alpha_i - beta_j)`` with numpy roots (nonzero leading coefficients)."""
    import numpy as np

    m, n = len(f) - 1, len(g) - 1
    alphas = np.roots(f)
    betas = np.roots(g)
    prod = complex(1)
    for a in alphas:
        for b in betas:
            prod *= a - b
    return abs(f[0] ** n * g[0] ** m * prod)


# --- instance generators -------------------------------------------------------

Q1 = BlockStructure((1,))
Q1N2 = BlockStructure((2,))
P1P1 = BlockStructure((1, 1))


def binary_form(coeffs: list[int]) -> MPoly:
    d = len(coeffs) - 1
    return MPoly.from_monomials(Q1, ZZ, monomial_basis(Q1, (d,)), coeffs)


def random_binary_coeffs(rng: random.Random, d: int, bound: int = 9) -> list[int]:
    c = [rng.randint(-bound, bound) for _ in range(d + 1)]
    while c[0] == 0:
        c[0] = rng.randint(-bound, bound)
    return c


def random_form(shape: BlockStructure, d, rng: random.Random, bound: int = 9) -> MPoly:
    basis = monomial_basis(shape, tuple(d))
    while True:
        f = MPoly.from_monomials(shape, ZZ, basis, [rng.randint(-bound, bound) for _ in basis])
        if f:
            return f


def evaluate_at(f: MPoly, point: list[int]) -> int:
    total = 0
    for m, c in f.terms.items():
        term = c
        for e, x in zip(m, point):
            term *= x**e
        total += term
    return total


def random_point(shape: BlockStructure, rng: random.Random, bound: int = 3) -> list[int]:
    """Integer point with all coordinates nonzero (so every monomial is nonzero there)."""
    pts = []
    for _ in range(shape.nvars):
        x = 0
        while x == 0:
            x = rng.randint(-bound, bound)
        pts.append(x)
    return pts


def plant_zero(f: MPoly, point: list[int], rng: random.Random) -> MPoly:
    """``m(P) f - f(P) m`` for a random monomial ``m`` of the same multidegree: vanishes at ``P``."""
    basis = monomial_basis(f.shape, f.multidegree())
    m = MPoly.from_monomials(f.shape, ZZ, [rng.choice(basis)], [1])
    return f * evaluate_at(m, point) - m * evaluate_at(f, point)


SHAPES = {
    "binary": (Q1, None),
    "ternary_linear": (Q1N2, [(1,), (1,), (1,)]),
    "bilinear_triple": (P1P1, [(1, 1), (1, 1), (1, 1)]),
}


def random_sequence(name: str, rng: random.Random, bound: int = 9):
    shape, degrees = SHAPES[name]
    if degrees is None:
        degrees = [(rng.randint(1, 3),), (rng.randint(1, 3),)]
    return shape, degrees, [random_form(shape, d, rng, bound) for d in degrees]


def planted_sequence(name: str, rng: random.Random):
    """Random sequence with an integer common zero, plus that zero."""
    shape, degrees, F = random_sequence(name, rng)
    P = random_point(shape, rng)
    out = []
    for f in F:
        g = plant_zero(f, P, rng)
        while not g:
            g = plant_zero(random_form(shape, f.multidegree(), rng), P, rng)
        out.append(g)
    return shape, degrees, out, P


def common_zero_search(F, shape: BlockStructure, bound: int = 4):
    """Look for a small integer point (nonzero in every block) where all of F vanish."""
    ranges = [range(-bound, bound + 1)] * shape.nvars
    for pt in itertools.product(*ranges):
        blocks = shape.blocks(pt)
        if any(not any(b) for b in blocks):
            continue
        if all(evaluate_at(f, list(pt)) == 0 for f in F):
            return pt
    return None


def is_close(a: float, b: float, rtol: float) -> bool:
    return math.isclose(a, b, rel_tol=rtol, abs_tol=0.0) or (a == 0 and b == 0)
