import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulres.arith import ZZ
from koszulres.exactla import ExactMatrix, rank
from koszulres.interp import (
    SHAPE,
    EvalSpec,
    GroupPoint,
    HypothesisFailed,
    apply_derivative,
    eval_matrix,
    generated_check,
    interpolation_slice,
    is_surjective,
    ist_degree_check,
    res_estimate_demo,
    sigma_count,
)
from koszulres.mpoly import MPoly, monomial_basis, parse_mpoly

ONE = (1, 0, 1, 0)
W = (1, 0, 0, 1)
Z = (0, 1, 1, 0)
ZW = (0, 1, 0, 1)


def by_function(A):
    """Rows of an evaluation matrix at d = (1, 1), columns reordered as (1, z, w, zw)."""
    order = [A.col_labels.index(m) for m in (ONE, Z, W, ZW)]
    return [[row[j] for j in order] for row in A.entries]


def test_eval_matrix_examples():
    A = eval_matrix(EvalSpec([(0, 1)], 1), (1, 1))
    assert by_function(A) == [[1, 0, 1, 0]]
    A = eval_matrix(EvalSpec([(0, 1)], 2), (1, 1))
    assert by_function(A) == [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]]
    assert A.row_labels == [(0, (0, 0)), (0, (1, 0)), (0, (0, 1))]
    A = eval_matrix(EvalSpec([(3, 2)], 3), (0, 0))
    assert A.entries == [[1], [0], [0], [0], [0], [0]]


def test_interpolation_slice_examples():
    basis = interpolation_slice(EvalSpec([(0, 1)], 1), (1, 1))
    assert len(basis) == 3
    z = parse_mpoly("x[1,1]*x[2,0]", SHAPE)
    # z lies in the span: a kernel vector at T = 1 only has to kill the value at the point
    assert apply_derivative(z, GroupPoint(0, 1), (0, 0)) == 0
    cols = monomial_basis(SHAPE, (1, 1))
    span = [g.coefficients_in(cols) for g in basis] + [z.coefficients_in(cols)]
    assert rank(ExactMatrix.from_rows(ZZ, span)) == 3
    assert len(interpolation_slice(EvalSpec([(0, 1)], 2), (1, 1))) == 1
    assert interpolation_slice(EvalSpec([(0, 1)], 1), (0, 0)) == []


def test_surjectivity_examples():
    assert is_surjective(EvalSpec([(0, 1)], 1), (1, 1))
    assert not is_surjective(EvalSpec([(0, 1), (1, 1)], 1), (0, 0))
    assert is_surjective(EvalSpec([(0, 1)], 3), (3, 3))


def test_degree_examples():
    for points, T, expected in [([(0, 1)], 2, 3), ([(0, 1), (1, 2)], 1, 2), ([(0, 1)], 1, 1)]:
        check = ist_degree_check(EvalSpec(points, T))
        assert check.expected == expected and check.passed, check


def test_sigma_order_and_count():
    spec = EvalSpec([(0, 1)], 3)
    assert spec.sigmas() == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert [sigma_count(T) for T in range(1, 6)] == [T * (T + 1) // 2 for T in range(1, 6)]


def test_spec_validation():
    with pytest.raises(ValueError):
        GroupPoint(1, 0)
    with pytest.raises(ValueError):
        EvalSpec([(0, 1), (0, 1)], 1)
    with pytest.raises(ValueError):
        EvalSpec([(0, 1)], 0)


def test_slices_are_generated_in_high_degree():
    spec = EvalSpec([(0, 1), (2, 3)], 1)
    assert generated_check(spec, spec.d_ev())


def test_kernel_elements_vanish_to_order_T():
    spec = EvalSpec([(1, 2), (Fraction(1, 2), -1)], 2)
    for g in interpolation_slice(spec, spec.d_ev()):
        for P in spec.points:
            assert all(apply_derivative(g, P, s) == 0 for s in spec.sigmas())


def test_demo_rejects_non_surjective_degrees():
    spec = EvalSpec([(0, 1), (1, 2)], 2)
    with pytest.raises(HypothesisFailed):
        res_estimate_demo(spec, [(1, 1), (1, 1), (4, 4)], trials=1)


def test_demo_one_point_order_one():
    rep = res_estimate_demo(EvalSpec([(0, 1)], 1), [(1, 1)] * 3, trials=2, samples=2, seed=1)
    assert rep.claimed == 1 and rep.passed
    assert all(o >= 1 for s in rep.samples for o in s.report.orders)


def _direct_derivative(f: MPoly, P: GroupPoint, sigma):
    """Differentiate the dehomogenized Laurent polynomial term by term, one derivation at a time."""
    terms = {(m[1], m[3]): Fraction(c) for m, c in f.terms.items()}
    for _ in range(sigma[0]):
        terms = {(a - 1, b): c * a for (a, b), c in terms.items() if a}
    for _ in range(sigma[1]):
        terms = {(a, b): c * b for (a, b), c in terms.items()}
    return sum((c * P.z**a * P.w**b for (a, b), c in terms.items()), Fraction(0))


pt = st.tuples(st.integers(-3, 3), st.integers(-3, 3).filter(bool))


@settings(max_examples=30)
@given(pt, st.integers(1, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2**32))
def test_closed_form_entries_match_repeated_differentiation(P, T, a, b, seed):
    rnd = random.Random(seed)
    basis = monomial_basis(SHAPE, (a, b))
    f = MPoly.from_monomials(SHAPE, ZZ, basis, [rnd.randint(-4, 4) for _ in basis])
    spec = EvalSpec([P], T)
    for s in spec.sigmas():
        assert apply_derivative(f, spec.points[0], s) == _direct_derivative(f, spec.points[0], s)


@settings(max_examples=15)
@given(st.lists(pt, min_size=1, max_size=2, unique=True), st.integers(1, 2), st.integers(0, 2), st.integers(0, 2))
def test_surjective_above_d_ev(points, T, da, db):
    spec = EvalSpec(points, T)
    a, b = spec.d_ev()
    assert is_surjective(spec, (a + da, b + db))
