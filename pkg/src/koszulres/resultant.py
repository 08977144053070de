"""Cayley determinants of Koszul slices and the resultant of a sequence on a module."""

from __future__ import annotations

import logging
from math import prod
from dataclasses import dataclass, field
from typing import Sequence

from .arith import ZZ, PolyRing, Poly
from .exactla import ExactMatrix, bareiss_det, cokernel_content, select_rows, smith_normal_form
from .koszul import KoszulSlice, PolySequence, build_slice, homology_ranks
from .modslice import ModuleSpec, rdim
from .mpoly import MultiDegree, generic_sequence

log = logging.getLogger(__name__)


class NotGenericallyExact(ArithmeticError):
    """The greedy pivot chain broke at ``position`` (1 means at ``D_1``)."""

    def __init__(self, position: int, message: str = ""):
        super().__init__(message or f"no full pivot block at position {position}")
        self.position = position


class HigherHomologyNonzero(ArithmeticError):
    def __init__(self, nu, ranks):
        super().__init__(f"homology ranks {ranks} at nu={nu}: sequence is not filter-regular there")
        self.nu = nu
        self.ranks = ranks


class LengthMismatch(ValueError):
    pass


class StabilizationFailure(RuntimeError):
    pass


class SliceTooLarge(ValueError):
    pass


@dataclass
class PartitionCertificate:
    """Per position ``p``: rows ``b'_{p-1}``, columns ``b''_p`` and ``det(phi_p)``."""

    rows: dict[int, list[int]] = field(default_factory=dict)
    cols: dict[int, list[int]] = field(default_factory=dict)
    dets: dict[int, object] = field(default_factory=dict)

    def block_sizes(self) -> dict[int, int]:
        return {p: len(c) for p, c in self.cols.items()}


@dataclass
class ResultantValue:
    value: object
    nu: MultiDegree
    stabilized: bool
    checked_nus: list[MultiDegree]
    certificate: PartitionCertificate | None
    vanishes: bool = False

    def __abs__(self):
        return abs(self.value)

    def __str__(self):
        return "ZERO" if self.vanishes else str(abs(self.value) if isinstance(self.value, int) else self.value)


def cayley_det(S: KoszulSlice, partition: PartitionCertificate | None = None):
    """``prod det(phi_p)^((-1)^(p+1))`` for a greedy pivot chain, top of the complex first.

    With ``partition`` given, its blocks are reused instead of re-pivoting.
    Returns ``(value, certificate)``; raises :class:`NotGenericallyExact`.
    """
    ring = S.ring
    top = S.r + 1
    cert = PartitionCertificate()
    cols = list(range(len(S.bases[top])))
    for p in range(top, 0, -1):
        D = S.D[p]
        if partition is not None:
            rows, cols = partition.rows[p], partition.cols[p]
            det = _square_det(D, rows, cols)
            if det == ring.zero:
                raise NotGenericallyExact(p, f"reused block at position {p} is singular")
        else:
            picked = select_rows(D, cols)
            if picked is None:
                raise NotGenericallyExact(p)
            rows, det = picked
            if p == 1 and len(rows) != D.nrows:
                raise NotGenericallyExact(1, "D_1 is not surjective over the fraction field")
        cert.rows[p], cert.cols[p], cert.dets[p] = rows, list(cols), det
        chosen = set(rows)
        cols = [k for k in range(D.nrows) if k not in chosen]
    num, den = ring.one, ring.one
    for p, det in cert.dets.items():
        if p % 2:
            num = num * det
        else:
            den = den * det
    return ring.exact_div(num, den), cert


def _square_det(D: ExactMatrix, rows, cols):
    if len(rows) != len(cols):
        raise NotGenericallyExact(0, "partition blocks are not square")
    return bareiss_det(D.submatrix(rows, cols))


def choose_nu(M: ModuleSpec, degrees: Sequence[Sequence[int]]) -> MultiDegree:
    """Starting degree for the resultant slice; stabilization is checked separately."""
    q = M.shape.q
    sums = tuple(sum(d[p] for d in degrees) for p in range(q))
    if q == 1 and M.is_free:
        return (max(sums[0] - M.shape.n[0], max(d[0] for d in degrees)),)
    return tuple(s + o for s, o in zip(sums, M.regularity_offset()))


def _evaluate(M: ModuleSpec, F: PolySequence, nu):
    S = build_slice(M, F, nu)
    try:
        value, cert = cayley_det(S)
    except NotGenericallyExact as exc:
        if exc.position == 1:
            return None, None
        raise HigherHomologyNonzero(nu, homology_ranks(S)) from exc
    return value, cert


def _agree(ring, a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return ring.associated(a, b)


def mresultant(M: ModuleSpec, F, nu: Sequence[int] | None = None, verify: bool = True, max_rounds: int = 4) -> ResultantValue:
    """Resultant of ``F`` on ``M`` as a Cayley determinant, checked at ``nu`` and ``nu + e_p``.

    A vanishing value is returned with ``vanishes=True``; on disagreement the
    degree is doubled up to ``max_rounds`` times.
    """
    F = PolySequence.of(F)
    need = rdim(M) + 1
    if len(F) != need:
        raise LengthMismatch(f"{len(F)} polynomials given, the module needs {need}")
    nu = tuple(nu) if nu is not None else choose_nu(M, F.degrees)
    ring = F.ring
    checked: list[MultiDegree] = []
    for _ in range(max_rounds + 1):
        value, cert = _evaluate(M, F, nu)
        checked.append(nu)
        stable = True
        if verify:
            for p in range(M.shape.q):
                up = tuple(x + (k == p) for k, x in enumerate(nu))
                other, _ = _evaluate(M, F, up)
                checked.append(up)
                if not _agree(ring, value, other):
                    log.info("value changed between %s and %s", nu, up)
                    stable = False
                    break
        if stable:
            return ResultantValue(
                ring.zero if value is None else value, nu, verify, checked, cert, vanishes=value is None
            )
        nu = tuple(max(2 * x, x + 1) for x in nu)
    raise StabilizationFailure(f"no agreement between neighbouring degrees up to nu={nu}")


def content_oracle(M: ModuleSpec, F, nu: Sequence[int]) -> int | float:
    """Order of the torsion group ``(M / F M)_nu``, read off the Smith form of ``D_1``."""
    F = PolySequence.of(F)
    if F.ring is not ZZ:
        raise TypeError("the content oracle needs integer coefficients")
    S = build_slice(M, F, nu)
    D1 = S.D[1]
    return cokernel_content(D1, D1.nrows)


def torsion_orders(S: KoszulSlice) -> list[int]:
    """Orders of the torsion subgroups of ``H_0, ..., H_r`` of an integer slice.

    ``C_p / ker D_p`` is torsion-free, so the torsion of ``H_p`` is the torsion of
    ``coker D_{p+1}``: the product of the elementary divisors of ``D_{p+1}``.
    For a generically exact slice ``|det| = prod_p t_p^((-1)^p)``.
    """
    if S.sequence.ring is not ZZ:
        raise TypeError("torsion orders need integer coefficients")
    out = []
    for p in range(len(S.D)):
        if p + 1 < len(S.D):
            out.append(prod(smith_normal_form(S.D[p + 1]).divisors))
        else:
            out.append(1)  # top module injects into nothing above it
    return out


def integrally_exact(S: KoszulSlice) -> bool:
    """True when ``H_p`` vanishes over ZZ for every p >= 1."""
    return not any(homology_ranks(S)[1:]) and all(t == 1 for t in torsion_orders(S)[1:])


def generic_resultant(M: ModuleSpec, degrees: Sequence[Sequence[int]], nu: Sequence[int] | None = None, limit: int = 12) -> Poly:
    """Resultant of generic polynomials of the given multidegrees, over ``ZZ[u]``, content removed."""
    degrees = [tuple(d) for d in degrees]
    ring, U = generic_sequence(M.shape, degrees)
    F = PolySequence(tuple(U), tuple(degrees))
    need = rdim(M) + 1
    if len(F) != need:
        raise LengthMismatch(f"{len(F)} polynomials given, the module needs {need}")
    nu = tuple(nu) if nu is not None else choose_nu(M, degrees)
    S = build_slice(M, F, nu)
    if max(S.dims()) > limit:
        raise SliceTooLarge(f"slice dimensions {S.dims()} exceed {limit}")
    try:
        value, _ = cayley_det(S)
    except NotGenericallyExact as exc:
        raise HigherHomologyNonzero(nu, homology_ranks(S)) from exc
    c = value.content()
    value = ring.exact_div(value, ring(c)) if c > 1 else value
    return value


def generic_ring(M: ModuleSpec, degrees) -> PolyRing:
    return generic_sequence(M.shape, [tuple(d) for d in degrees])[0]
