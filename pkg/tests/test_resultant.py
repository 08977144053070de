import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszulres.arith import GF, QQ, ZZ
from koszulres.koszul import PolySequence, build_slice
from koszulres.modslice import free_module, monomial_quotient
from koszulres.mpoly import MPoly, generic_assignment, monomial_basis, parse_mpoly
from koszulres.resultant import (
    HigherHomologyNonzero,
    LengthMismatch,
    NotGenericallyExact,
    SliceTooLarge,
    cayley_det,
    choose_nu,
    content_oracle,
    generic_resultant,
    integrally_exact,
    mresultant,
    torsion_orders,
)
from oracles import P1P1, Q1, Q1N2, binary_form, cofactor_det, random_binary_coeffs, random_form, sylvester

K2 = free_module((1,))
P2 = free_module((2,))
PP = free_module((1, 1))


def q1(text):
    return parse_mpoly(text, Q1)


def test_cayley_det_examples():
    rng = random.Random(0)
    for _ in range(10):
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        S = build_slice(K2, [binary_form([a, b]), binary_form([c, d])], (1,))
        if a * d - b * c:
            value, cert = cayley_det(S)
            assert abs(value) == abs(a * d - b * c)
            assert cert.block_sizes() == {2: 0, 1: 2}
    value, _ = cayley_det(build_slice(K2, [q1("x[1,0]"), q1("x[1,1]")], (1,)))
    assert abs(value) == 1
    with pytest.raises(NotGenericallyExact):
        cayley_det(build_slice(K2, [q1("x[1,0]"), q1("x[1,0]")], (2,)))


def test_choose_nu_examples():
    assert choose_nu(K2, [(2,), (3,)]) == (4,)
    assert choose_nu(PP, [(1, 1)] * 3) == (3, 3)
    assert choose_nu(P2, [(1,), (1,), (1,)]) == (1,)
    assert choose_nu(K2, [(1,), (5,)]) == (5,)  # floored at the largest degree


def test_mresultant_examples():
    assert abs(mresultant(K2, [q1("3*x[1,0] - 2*x[1,1]"), q1("x[1,0] + x[1,1]")]).value) == 5
    bilinear = [parse_mpoly(s, P1P1) for s in ("x[1,0]*x[2,0]", "x[1,0]*x[2,1]", "x[1,1]*x[2,0]")]
    assert mresultant(PP, bilinear).vanishes
    for p in (2, 3, 7, 101):
        res = mresultant(K2, [q1("x[1,0]"), q1(f"x[1,0] + {p}*x[1,1]")])
        assert abs(res.value) == p and res.stabilized
        assert res.checked_nus == [(1,), (2,)]


def test_content_oracle_examples():
    assert content_oracle(K2, [q1("3*x[1,0] - 2*x[1,1]"), q1("x[1,0] + x[1,1]")], (1,)) == 5
    assert content_oracle(K2, [q1("x[1,0]"), q1("x[1,1]")], (1,)) == 1
    assert content_oracle(K2, [q1("x[1,0]"), q1("x[1,0] + 13*x[1,1]")], (1,)) == 13


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        mresultant(K2, [q1("x[1,0]")])
    with pytest.raises(LengthMismatch):
        mresultant(PP, [parse_mpoly("x[1,0]*x[2,0]", P1P1)] * 2)


def test_higher_homology_is_reported():
    y = [parse_mpoly(f"x[1,{i}]", Q1N2) for i in range(3)]
    # (x0, x0, x1) has the common zero [0:0:1]: exactness breaks only at positions 0 and 1
    assert mresultant(P2, [y[0], y[0], y[1]]).vanishes
    # (x0, x0, x0) is not filter-regular: second homology survives at nu = 3
    with pytest.raises(HigherHomologyNonzero) as info:
        mresultant(P2, [y[0], y[0], y[0]], nu=(3,))
    assert info.value.ranks[2] > 0


def test_linear_systems_match_coefficient_determinant():
    rng = random.Random(3)
    for n in (1, 2, 3):
        M = free_module((n,))
        for _ in range(10):
            A = [[rng.randint(-9, 9) for _ in range(n + 1)] for _ in range(n + 1)]
            basis = monomial_basis(M.shape, (1,))
            F = [MPoly.from_monomials(M.shape, ZZ, basis, row) for row in A]
            if any(not f for f in F):
                continue
            res = mresultant(M, F)
            d = cofactor_det(A)
            assert res.vanishes == (d == 0)
            if d:
                assert abs(res.value) == abs(d)


def test_generic_resultant_examples():
    R = generic_resultant(K2, [(1,), (1,)])
    u = {n: R.ring.gen(n) for n in R.ring.names}
    expected = u["u[0,0]"] * u["u[1,1]"] - u["u[0,1]"] * u["u[1,0]"]
    assert R == expected or R == -expected
    R = generic_resultant(K2, [(1,), (2,)])
    # Sylvester matrix of a0 x0 + a1 x1 and b0 x0^2 + b1 x0 x1 + b2 x1^2, expanded symbolically
    a = [R.ring.gen(f"u[0,{k}]") for k in range(2)]
    b = [R.ring.gen(f"u[1,{k}]") for k in range(3)]
    zero = R.ring(0)
    S = [[a[0], a[1], zero], [zero, a[0], a[1]], [b[0], b[1], b[2]]]
    expected = cofactor_det(S)
    assert R == expected or R == -expected
    with pytest.raises(SliceTooLarge):
        generic_resultant(K2, [(7,), (7,)])


def test_generic_resultant_specializes_to_mresultant():
    rng = random.Random(5)
    for degrees in ([(1,), (1,)], [(1,), (2,)], [(2,), (2,)]):
        R = generic_resultant(K2, degrees)
        for _ in range(10):
            F = [binary_form(random_binary_coeffs(rng, d[0])) for d in degrees]
            value = R.evaluate({k: int(v) for k, v in generic_assignment(F, degrees).items()})
            res = mresultant(K2, F)
            assert abs(value) == (0 if res.vanishes else abs(res.value))


def test_resultant_over_other_fields():
    F = [q1("3*x[1,0] - 2*x[1,1]"), q1("x[1,0] + x[1,1]")]
    assert mresultant(K2, [f.change_ring(QQ) for f in F]).value in (5, -5)
    assert mresultant(K2, [f.change_ring(GF(5)) for f in F]).vanishes
    assert mresultant(K2, [f.change_ring(GF(7)) for f in F]).value in (GF(7)(5), GF(7)(-5))


def test_resultant_on_monomial_quotient():
    # k[x0,x1]/(x0 x1) has two points; a linear form vanishing at neither has resultant +-(a*b)
    M = monomial_quotient((1,), [(1, 1)])
    res = mresultant(M, [q1("3*x[1,0] + 5*x[1,1]")])
    assert abs(res.value) == 15
    assert mresultant(M, [q1("x[1,0]")]).vanishes


coef = st.integers(-9, 9)


@given(st.lists(coef, min_size=3, max_size=3), st.lists(coef, min_size=3, max_size=3))
def test_sylvester_quadratics(f, g):
    if not any(f) or not any(g):
        return
    res = mresultant(K2, [binary_form(f), binary_form(g)])
    d = cofactor_det(sylvester(f, g))
    assert res.vanishes == (d == 0)
    if d:
        assert abs(res.value) == abs(d)


@given(st.integers(0, 2**32))
def test_stabilization_and_content(seed):
    rnd = random.Random(seed)
    F = [random_form(P1P1, (1, 1), rnd) for _ in range(3)]
    res = mresultant(PP, F)
    if res.vanishes:
        return
    assert res.nu == (3, 3)
    for nu in [(3, 3), (4, 3), (3, 4), (4, 4)]:
        S = build_slice(PP, F, nu)
        assert alternating_torsion(S) == abs(res.value)
        if integrally_exact(S):
            assert content_oracle(PP, F, nu) == abs(res.value)


def alternating_torsion(S):
    out = Fraction(1)
    for p, t in enumerate(torsion_orders(S)):
        out *= Fraction(t) ** (-1) ** p
    return out


def test_torsion_in_first_homology_inflates_the_content():
    # mod 2 every form is divisible by x10, so H_1 over ZZ picks up 2-torsion growing with nu
    F = [
        parse_mpoly(s, P1P1)
        for s in (
            "-3*x[1,0]*x[2,0] - 3*x[1,0]*x[2,1] + 4*x[1,1]*x[2,0] + 8*x[1,1]*x[2,1]",
            "-8*x[1,0]*x[2,0] - 5*x[1,0]*x[2,1] + 6*x[1,1]*x[2,0] - 8*x[1,1]*x[2,1]",
            "7*x[1,0]*x[2,0] - 4*x[1,0]*x[2,1] + 4*x[1,1]*x[2,0] - 2*x[1,1]*x[2,1]",
        )
    ]
    res = mresultant(PP, F)
    assert abs(res.value) == 770960
    for nu, extra in [((3, 3), 2), ((4, 4), 4)]:
        S = build_slice(PP, F, nu)
        assert not integrally_exact(S)
        assert torsion_orders(S)[1] == extra
        assert content_oracle(PP, F, nu) == extra * 770960


def test_sign_is_deterministic():
    F = PolySequence.of([q1("3*x[1,0] - 2*x[1,1]"), q1("x[1,0] + x[1,1]")])
    values = {mresultant(K2, F).value for _ in range(3)}
    assert len(values) == 1


def test_zero_value_printing():
    res = mresultant(K2, [q1("x[1,0]"), q1("2*x[1,0]")])
    assert res.vanishes and str(res) == "ZERO"
