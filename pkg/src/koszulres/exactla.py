"""Dense exact linear algebra over the coefficient rings of :mod:`koszulres.arith`.

Elimination is fraction-free (Bareiss) so it runs unchanged over ``ZZ``,
``QQ``, ``GF(p)`` and polynomial extensions; every division it performs must
be exact and a remainder raises :class:`~koszulres.arith.ExactDivisionError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

from .arith import QQ, ZZ, ExactDivisionError, PrimeField, Ring


@dataclass
class ExactMatrix:
    ring: Ring
    entries: list[list]
    nrows: int
    ncols: int
    row_labels: list | None = None
    col_labels: list | None = None

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise ValueError("entries do not match the declared shape")
        if self.row_labels is not None and len(self.row_labels) != self.nrows:
            raise ValueError("row labels do not match the row count")
        if self.col_labels is not None and len(self.col_labels) != self.ncols:
            raise ValueError("column labels do not match the column count")

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], ncols: int | None = None, **labels) -> ExactMatrix:
        rows = [[ring(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ring, rows, len(rows), ncols, **labels)

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int, **labels) -> ExactMatrix:
        return cls(ring, [[ring.zero] * ncols for _ in range(nrows)], nrows, ncols, **labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        return ExactMatrix(
            self.ring,
            [[self.entries[i][j] for j in cols] for i in rows],
            len(rows),
            len(cols),
            None if self.row_labels is None else [self.row_labels[i] for i in rows],
            None if self.col_labels is None else [self.col_labels[j] for j in cols],
        )

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.ring,
            [list(col) for col in zip(*self.entries)] if self.nrows else [[] for _ in range(self.ncols)],
            self.ncols,
            self.nrows,
            self.col_labels,
            self.row_labels,
        )

    def map(self, fn: Callable, ring: Ring) -> ExactMatrix:
        return ExactMatrix(ring, [[fn(x) for x in r] for r in self.entries], self.nrows, self.ncols,
                           self.row_labels, self.col_labels)

    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(x == z for r in self.entries for x in r)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        return matmul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.shape == other.shape
            and all(a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s))
        )

    def to_text(self) -> str:
        """Row-major dump: a ``rows cols`` header, then one line per row."""
        fmt = self.ring.format
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(fmt(x) for x in r) for r in self.entries]
        return "\n".join(lines) + "\n"


def matmul(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    if A.ncols != B.nrows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    zero = A.ring.zero
    cols = list(zip(*B.entries)) if B.nrows else [() for _ in range(B.ncols)]
    out = []
    for r in A.entries:
        row = []
        for c in cols:
            s = zero
            for x, y in zip(r, c):
                if x and y:
                    s = s + x * y
            row.append(s)
        out.append(row)
    return ExactMatrix(A.ring, out, A.nrows, B.ncols, A.row_labels, B.col_labels)


# --- fraction-free elimination ---------------------------------------------


def _int_update(piv, a, ri, rr, prev):
    vals = [piv * x - a * y for x, y in zip(ri, rr)]
    if prev == 1:
        return vals
    if prev == -1:
        return [-v for v in vals]
    out = []
    for v in vals:
        q, r = divmod(v, prev)
        if r:
            raise ExactDivisionError(f"Bareiss step: {v} not divisible by {prev}")
        out.append(q)
    return out


def _eliminate(rows: list[list], ring: Ring, ncols: int, stop_on_deficiency: bool = False):
    """Fraction-free row echelon with greedy pivoting by ``ring.pivot_key``.

    ``rows`` is consumed.  Returns ``(rank, pivot_rows, last_pivot, sign,
    complete)`` where ``pivot_rows`` are original row indices in pivot order,
    ``last_pivot`` is the determinant of those rows restricted to the pivot
    columns (in pivot order) and ``sign`` is the parity of the row swaps.
    """
    n = len(rows)
    order = list(range(n))
    is_int = ring is ZZ
    div = ring.exact_div
    key = ring.pivot_key
    zero = ring.zero
    prev = ring.one
    sign = 1
    r = 0
    for c in range(ncols):
        if r == n:
            break
        best, best_key = None, None
        for i in range(r, n):
            x = rows[i][c]
            if x != zero:
                k = key(x)
                if best is None or k > best_key:
                    best, best_key = i, k
        if best is None:
            if stop_on_deficiency:
                return r, order[:r], prev, sign, False
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            order[r], order[best] = order[best], order[r]
            sign = -sign
        piv = rows[r][c]
        tail_r = rows[r][c + 1 :]
        for i in range(r + 1, n):
            ri = rows[i]
            a = ri[c]
            if is_int:
                new = _int_update(piv, a, ri[c + 1 :], tail_r, prev)
            else:
                new = [div(piv * x - a * y, prev) for x, y in zip(ri[c + 1 :], tail_r)]
            rows[i] = ri[:c] + [zero] + new
        prev = piv
        r += 1
    return r, order[:r], prev, sign, True


def _copy_rows(A: ExactMatrix) -> list[list]:
    return [list(r) for r in A.entries]


def rank(A: ExactMatrix) -> int:
    """Rank over the fraction field of ``A.ring``."""
    if A.nrows == 0 or A.ncols == 0:
        return 0
    if isinstance(A.ring, PrimeField):
        return _rank_mod_p([[x.v for x in r] for r in A.entries], A.ring.p)
    rows = _copy_rows(A)
    if A.nrows > A.ncols:
        rows = [list(c) for c in zip(*rows)]
        return _eliminate(rows, A.ring, A.nrows)[0]
    return _eliminate(rows, A.ring, A.ncols)[0]


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        pr = [x * inv % p for x in rows[r]]
        rows[r] = pr
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            if a:
                rows[i] = [(x - a * y) % p for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def bareiss_det(A: ExactMatrix):
    """Determinant by fraction-free elimination (any integral domain)."""
    if A.nrows != A.ncols:
        raise ValueError(f"determinant of a non-square {A.shape} matrix")
    if A.nrows == 0:
        return A.ring.one
    r, _, last, sign, complete = _eliminate(_copy_rows(A), A.ring, A.ncols, stop_on_deficiency=True)
    if not complete or r < A.nrows:
        return A.ring.zero
    return last if sign == 1 else -last


def _inversion_parity(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def select_rows(A: ExactMatrix, cols: Sequence[int]):
    """Pick ``len(cols)`` rows whose square minor on ``cols`` is nonzero.

    Returns ``(rows, det)`` with ``rows`` sorted ascending and ``det`` the minor
    with rows and columns in ascending order, or ``None`` when the columns are
    dependent.
    """
    cols = list(cols)
    k = len(cols)
    if k == 0:
        return [], A.ring.one
    rows = [[A.entries[i][j] for j in cols] for i in range(A.nrows)]
    r, chosen, last, _, complete = _eliminate(rows, A.ring, k, stop_on_deficiency=True)
    if not complete or r < k:
        return None
    det = last if _inversion_parity(chosen) == 1 else -last
    return sorted(chosen), det


# --- kernels over fraction fields --------------------------------------------


def _rref_field(rows: list[list], ncols: int, one, zero):
    pivots = []
    r = 0
    n = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, n) if rows[i][c] != zero), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return rows[:r], pivots


def kernel_basis(A: ExactMatrix) -> list[list]:
    """Basis of the right kernel over the fraction field, in the base domain.

    Over ``ZZ``/``QQ`` vectors are integral, primitive, with first nonzero
    entry positive; over ``GF(p)`` the first nonzero entry is 1.
    """
    ring = A.ring
    if ring is ZZ or ring is QQ:
        one, zero = Fraction(1), Fraction(0)
        rows = [[Fraction(x) for x in r] for r in A.entries]
    elif isinstance(ring, PrimeField):
        one, zero = ring.one, ring.zero
        rows = _copy_rows(A)
    else:
        raise NotImplementedError(f"kernel_basis over {ring!r}")
    red, pivots = _rref_field(rows, A.ncols, one, zero)
    free = [c for c in range(A.ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [zero] * A.ncols
        v[fcol] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(v)
    if ring is ZZ or ring is QQ:
        return [_primitive(v) for v in basis]
    return basis


def _primitive(v: list[Fraction]) -> list[int]:
    den = reduce(math.lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(math.gcd, ints, 0) or 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 1)
    return [-x for x in ints] if lead < 0 else ints


# --- Smith normal form over ZZ ----------------------------------------------


@dataclass
class SmithForm:
    divisors: list[int]
    shape: tuple[int, int]
    rank: int = field(init=False)

    def __post_init__(self):
        self.rank = len(self.divisors)
        for a, b in zip(self.divisors, self.divisors[1:]):
            assert b % a == 0, "divisor chain broken"


def smith_normal_form(A: ExactMatrix) -> SmithForm:
    """Elementary divisors by row/column operations with min-|entry| pivoting."""
    if A.ring is not ZZ:
        raise TypeError("Smith normal form is implemented over ZZ only")
    M = _copy_rows(A)
    m, n = A.nrows, A.ncols
    divisors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = M[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = M[t][t]
            moved = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // piv
                    if q:
                        rt = M[t]
                        M[i] = [x - q * y for x, y in zip(M[i], rt)]
                    if M[i][t]:
                        moved = True
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // piv
                    if q:
                        for row in M:
                            row[j] -= q * row[t]
                    if M[t][j]:
                        moved = True
            if moved:
                # bring the smallest remainder in row/column t to the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                if i != t:
                    M[t], M[i] = M[i], M[t]
                else:
                    for row in M:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % piv),
                None,
            )
            if bad is None:
                break
            M[t] = [x + y for x, y in zip(M[t], M[bad])]
        divisors.append(abs(M[t][t]))
        t += 1
    return SmithForm(divisors, (m, n))


def cokernel_content(A: ExactMatrix, ambient_rank: int) -> int | float:
    """Order of ``ZZ^ambient / im(A)``; ``math.inf`` when the cokernel is infinite."""
    if A.nrows != ambient_rank:
        raise ValueError("the presenting matrix must have one row per ambient generator")
    if ambient_rank == 0:
        return 1
    snf = smith_normal_form(A)
    if snf.rank < ambient_rank:
        return math.inf
    return math.prod(snf.divisors)
