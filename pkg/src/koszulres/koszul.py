"""Multidegree slices of the Koszul complex of a sequence on a componentwise free module."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .arith import QQ, ZZ, PrimeField, Ring
from .exactla import ExactMatrix, matmul, rank
from .modslice import ModuleSpec, slice_basis
from .mpoly import MPoly, Monomial, MultiDegree, mono_mul


@dataclass(frozen=True)
class PolySequence:
    """Polynomials ``f_0..f_r`` with their declared multidegrees."""

    polys: tuple[MPoly, ...]
    degrees: tuple[MultiDegree, ...]

    def __post_init__(self):
        if len(self.polys) != len(self.degrees):
            raise ValueError("one multidegree per polynomial")
        if not self.polys:
            raise ValueError("empty sequence")
        shape, ring = self.polys[0].shape, self.polys[0].ring
        for f, d in zip(self.polys, self.degrees):
            if f.shape != shape or f.ring != ring:
                raise ValueError("sequence mixes shapes or coefficient rings")
            if len(d) != shape.q or not any(d) or min(d) < 0:
                raise ValueError(f"bad multidegree {d}")
            if f and f.multidegree() != tuple(d):
                raise ValueError(f"{f} has multidegree {f.multidegree()}, declared {tuple(d)}")

    @classmethod
    def of(cls, polys: Sequence[MPoly], degrees: Sequence[Sequence[int]] | None = None) -> PolySequence:
        if isinstance(polys, PolySequence):
            return polys
        if degrees is None:
            degrees = [f.multidegree() for f in polys]
        return cls(tuple(polys), tuple(tuple(d) for d in degrees))

    @property
    def shape(self):
        return self.polys[0].shape

    @property
    def ring(self) -> Ring:
        return self.polys[0].ring

    @property
    def r(self) -> int:
        return len(self.polys) - 1

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def map(self, fn, ring: Ring) -> PolySequence:
        return PolySequence(tuple(f.map_coefficients(fn, ring) for f in self.polys), self.degrees)

    def change_ring(self, ring: Ring) -> PolySequence:
        return PolySequence(tuple(f.change_ring(ring) for f in self.polys), self.degrees)


Label = tuple[tuple[int, ...], Monomial]


@dataclass
class KoszulSlice:
    module: ModuleSpec
    sequence: PolySequence
    nu: MultiDegree
    bases: list[list[Label]]  # bases[p] labels K_p^nu, p = 0..r+1
    D: list[ExactMatrix | None] = field(default_factory=list)  # D[p]: K_p -> K_{p-1}; D[0] is None

    @property
    def r(self) -> int:
        return self.sequence.r

    @property
    def ring(self) -> Ring:
        return self.sequence.ring

    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]

    def dump(self) -> str:
        out = [f"# slice at nu={self.nu}, dims {self.dims()}"]
        for p in range(1, self.r + 2):
            out.append(f"D{p}")
            out.append(self.D[p].to_text().rstrip("\n"))
        return "\n".join(out) + "\n"


def _shift(nu, degrees, S) -> tuple[int, ...]:
    out = list(nu)
    for i in S:
        for k, x in enumerate(degrees[i]):
            out[k] -= x
    return tuple(out)


def koszul_basis(M: ModuleSpec, degrees: Sequence[MultiDegree], nu: Sequence[int], p: int) -> list[Label]:
    """Basis of ``K_p^nu``: subsets in lex order, each followed by its slice monomials."""
    out = []
    for S in combinations(range(len(degrees)), p):
        shifted = _shift(nu, degrees, S)
        if min(shifted, default=0) < 0:
            continue
        out.extend((S, m) for m in slice_basis(M, shifted))
    return out


def build_slice(M: ModuleSpec, F, nu: Sequence[int]) -> KoszulSlice:
    F = PolySequence.of(F)
    if F.shape != M.shape:
        raise ValueError("sequence and module live over different block structures")
    nu = tuple(nu)
    ring = F.ring
    zero = ring.zero
    degrees = F.degrees
    bases = [koszul_basis(M, degrees, nu, p) for p in range(F.r + 2)]
    terms = [list(f.terms.items()) for f in F.polys]
    D: list[ExactMatrix | None] = [None]
    for p in range(1, F.r + 2):
        rows, cols = bases[p - 1], bases[p]
        index = {lab: k for k, lab in enumerate(rows)}
        entries = [[zero] * len(cols) for _ in rows]
        for j, (S, m) in enumerate(cols):
            for s, i in enumerate(S):
                target = S[:s] + S[s + 1 :]
                negative = s % 2 == 1  # (-1)^(s+1) with s counted from 1
                for mono, c in terms[i]:
                    mm = mono_mul(mono, m)
                    k = index.get((target, mm))
                    if k is None:  # killed by the monomial ideal
                        continue
                    entries[k][j] = entries[k][j] - c if negative else entries[k][j] + c
        D.append(ExactMatrix(ring, entries, len(rows), len(cols), rows, cols))
    return KoszulSlice(M, F, nu, bases, D)


def _field_for(ring: Ring, over: Ring | None) -> Ring | None:
    if over is None or over == ring:
        return None
    if isinstance(over, PrimeField) or over is QQ:
        return over
    raise ValueError(f"cannot compute ranks over {over!r}")


def differential_ranks(S: KoszulSlice, over: Ring | None = None) -> list[int]:
    """``ranks[p] = rank D_p`` for p = 0..r+2 (the ends are zero maps)."""
    target = _field_for(S.ring, over)
    out = [0]
    for p in range(1, S.r + 2):
        A = S.D[p]
        if target is not None:
            A = A.map(target, target)
        out.append(rank(A))
    out.append(0)
    return out


def homology_ranks(S: KoszulSlice, over: Ring | None = None) -> list[int]:
    """``h_p = dim K_p - rank D_p - rank D_{p+1}`` for p = 0..r+1.

    Ranks are taken over the fraction field of the slice's ring, or over
    ``over`` (a prime field, to which the entries are reduced).
    """
    rk = differential_ranks(S, over)
    return [len(S.bases[p]) - rk[p] - rk[p + 1] for p in range(S.r + 2)]


def is_generically_exact(S: KoszulSlice) -> bool:
    return not any(homology_ranks(S))


def composition_vanishes(S: KoszulSlice) -> bool:
    return all(matmul(S.D[p], S.D[p + 1]).is_zero() for p in range(1, S.r + 1))


# --- filter-regularity on a window -------------------------------------------


@dataclass
class Certificate:
    holds_on_window: bool
    window: list[MultiDegree]
    kernel_dims: dict[MultiDegree, int]
    note: str = "certified on window"


def multiplication_matrix(M: ModuleSpec, f: MPoly, d: MultiDegree, nu: MultiDegree) -> ExactMatrix:
    """Matrix of ``. f : M_nu -> M_{nu+d}`` in slice bases."""
    src = slice_basis(M, nu)
    dst = slice_basis(M, tuple(a + b for a, b in zip(nu, d)))
    index = {m: k for k, m in enumerate(dst)}
    entries = [[f.ring.zero] * len(src) for _ in dst]
    for j, m in enumerate(src):
        for mono, c in f.terms.items():
            k = index.get(mono_mul(mono, m))
            if k is not None:
                entries[k][j] = entries[k][j] + c
    return ExactMatrix(f.ring, entries, len(dst), len(src), dst, src)


def _image_matrix(M: ModuleSpec, polys: Sequence[MPoly], degrees: Sequence[MultiDegree], nu: MultiDegree, ring):
    """Columns spanning ``(g_1, ..., g_k) M`` inside ``M_nu``."""
    target = slice_basis(M, nu)
    blocks = []
    for g, d in zip(polys, degrees):
        src = tuple(a - b for a, b in zip(nu, d))
        if min(src) < 0:
            continue
        blocks.append(multiplication_matrix(M, g, d, src))
    cols = [[] for _ in target]
    for B in blocks:
        for k in range(len(target)):
            cols[k].extend(B.entries[k])
    ncols = sum(B.ncols for B in blocks)
    return ExactMatrix(ring, cols, len(target), ncols)


def _hstack(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(A.ring, [ra + rb for ra, rb in zip(A.entries, B.entries)], A.nrows, A.ncols + B.ncols)


def default_window(M: ModuleSpec) -> list[MultiDegree]:
    base = M.regularity_offset()
    return [tuple(b + k for b, k in zip(base, ks)) for ks in product(range(3), repeat=M.shape.q)]


def is_filter_regular(
    f: MPoly,
    M: ModuleSpec,
    previous: Sequence[MPoly] = (),
    window: Sequence[MultiDegree] | None = None,
) -> Certificate:
    """Check that ``. f`` is injective on ``(M / (previous) M)_nu`` for every ``nu`` in the window.

    The kernel dimension on the quotient is obtained from ranks alone:
    ``dim M_nu + rank A_{nu+d} - rank [A_{nu+d} | f] - rank A_nu`` where
    ``A_nu`` spans ``(previous) M`` in degree ``nu``.
    """
    d = f.multidegree()
    prev_degrees = [g.multidegree() for g in previous]
    window = default_window(M) if window is None else [tuple(w) for w in window]
    ring = f.ring
    field_ring = QQ if ring is ZZ else ring
    kernel = {}
    for nu in window:
        up = tuple(a + b for a, b in zip(nu, d))
        Mf = multiplication_matrix(M, f, d, nu).map(field_ring, field_ring)
        if previous:
            A_up = _image_matrix(M, previous, prev_degrees, up, ring).map(field_ring, field_ring)
            A_nu = _image_matrix(M, previous, prev_degrees, nu, ring).map(field_ring, field_ring)
            k = Mf.ncols + rank(A_up) - rank(_hstack(A_up, Mf)) - rank(A_nu)
        else:
            k = Mf.ncols - rank(Mf)
        kernel[nu] = k
    return Certificate(all(v == 0 for v in kernel.values()), list(window), kernel)
