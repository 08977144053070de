import random
from itertools import combinations

import pytest

from koszulres.arith import GF, ZZ
from koszulres.exactla import ExactMatrix
from koszulres.koszul import (
    PolySequence,
    build_slice,
    composition_vanishes,
    homology_ranks,
    is_filter_regular,
    is_generically_exact,
    koszul_basis,
)
from koszulres.modslice import free_module, hilbert_function, monomial_quotient
from koszulres.mpoly import BlockStructure, MPoly, parse_mpoly
from oracles import P1P1, Q1, random_form

K2 = free_module((1,))


def q1(text):
    return parse_mpoly(text, Q1)


def test_d1_identity_at_degree_one():
    S = build_slice(K2, [q1("x[1,0]"), q1("x[1,1]")], (1,))
    assert S.D[1].entries == [[1, 0], [0, 1]]
    assert S.D[1].col_labels == [((0,), (0, 0)), ((1,), (0, 0))]
    assert S.D[2].shape == (2, 0)
    assert homology_ranks(S) == [0, 0, 0]


def test_d2_column_follows_the_sign_rule():
    S = build_slice(K2, [q1("x[1,0]"), q1("x[1,1]")], (2,))
    col = [row[0] for row in S.D[2].entries]
    labels = S.D[2].row_labels
    got = {lab: c for lab, c in zip(labels, col) if c}
    # column ({0,1}, 1): +x0 in the e1 block, -x1 in the e0 block
    assert got == {((1,), (1, 0)): 1, ((0,), (0, 1)): -1}
    assert composition_vanishes(S)


def test_degenerate_pair_has_first_homology():
    S = build_slice(K2, [q1("x[1,0]"), q1("x[1,0]")], (2,))
    h = homology_ranks(S)
    assert h[1] > 0
    assert not is_generically_exact(S)


def test_zero_sequence_is_not_exact():
    zero = MPoly(Q1, ZZ)
    S = build_slice(K2, PolySequence((zero, zero), ((1,), (1,))), (2,))
    assert not is_generically_exact(S)


def test_generic_bilinear_triple_is_exact():
    rng = random.Random(1)
    F = [random_form(P1P1, (1, 1), rng) for _ in range(3)]
    S = build_slice(free_module((1, 1)), F, (3, 3))
    assert homology_ranks(S) == [0, 0, 0, 0]


def test_sequence_validation():
    with pytest.raises(ValueError):
        PolySequence.of([q1("x[1,0]^2")], [(1,)])
    with pytest.raises(ValueError):
        PolySequence.of([q1("x[1,0]")], [(0,)])


def _shapes():
    return [
        (free_module((1,)), [(2,), (3,)]),
        (free_module((2,)), [(1,), (1,), (2,)]),
        (free_module((1, 1)), [(1, 1), (1, 1), (1, 1)]),
        (free_module((1, 1)), [(1, 2), (2, 1), (1, 1)]),
        (monomial_quotient((1,), [(1, 1)]), [(2,)]),
        (monomial_quotient((2, 1), [(0, 0, 0, 0, 1)]), [(1, 0), (1, 1), (2, 0)]),
    ]


def test_structure_on_random_slices():
    rng = random.Random(2)
    for M, degrees in _shapes():
        for _ in range(3):
            F = [random_form(M.shape, d, rng) for d in degrees]
            nu = tuple(sum(d[p] for d in degrees) + rng.randint(-1, 1) for p in range(M.shape.q))
            nu = tuple(max(x, 0) for x in nu)
            S = build_slice(M, F, nu)
            assert composition_vanishes(S)
            for p in range(len(F) + 1):
                expected = 0
                for T in combinations(range(len(F)), p):
                    shifted = tuple(nu[k] - sum(degrees[i][k] for i in T) for k in range(M.shape.q))
                    if min(shifted) >= 0:
                        expected += hilbert_function(M, shifted)
                assert len(S.bases[p]) == expected
                assert koszul_basis(M, degrees, nu, p) == S.bases[p]


def test_reduction_mod_p_commutes_with_building():
    rng = random.Random(4)
    for M, degrees in _shapes():
        F = PolySequence.of([random_form(M.shape, d, rng) for d in degrees])
        nu = tuple(sum(d[p] for d in degrees) for p in range(M.shape.q))
        for p in (2, 5, 13):
            k = GF(p)
            over_z = build_slice(M, F, nu)
            over_k = build_slice(M, F.change_ring(k), nu)
            for j in range(1, len(F) + 1):
                reduced = over_z.D[j].map(k, k)
                assert reduced == over_k.D[j]
                assert reduced.row_labels == over_k.D[j].row_labels


def test_homology_over_prime_field():
    S = build_slice(K2, [q1("x[1,0]"), q1("x[1,0] + 5*x[1,1]")], (1,))
    assert homology_ranks(S) == [0, 0, 0]
    assert homology_ranks(S, over=GF(5)) == [1, 1, 0]


def test_filter_regular_examples():
    assert is_filter_regular(q1("x[1,0]"), K2).holds_on_window
    shape = BlockStructure((2, 1))
    M = monomial_quotient((2, 1), [(0, 0, 0, 0, 1)])
    cert = is_filter_regular(parse_mpoly("x[2,0]", shape), M)
    assert cert.holds_on_window and cert.note == "certified on window"
    crossing = monomial_quotient((1,), [(1, 1)])
    cert = is_filter_regular(q1("x[1,0]"), crossing)
    assert not cert.holds_on_window
    assert all(v == 1 for v in cert.kernel_dims.values())


def test_filter_regular_on_quotient_by_previous_elements():
    # x1 is regular modulo x0 on k[x0, x1]; x0 is not regular modulo x0
    x0, x1 = q1("x[1,0]"), q1("x[1,1]")
    assert is_filter_regular(x1, K2, previous=[x0]).holds_on_window
    cert = is_filter_regular(x0, K2, previous=[x0], window=[(1,), (2,)])
    assert not cert.holds_on_window
    # on P^2, (x0, x1) is regular, but after x0 and x1 a third form x0 + x1 is a zero divisor
    P2 = free_module((2,))
    sh = P2.shape
    y = [parse_mpoly(f"x[1,{i}]", sh) for i in range(3)]
    assert is_filter_regular(y[1], P2, previous=[y[0]]).holds_on_window
    assert not is_filter_regular(y[0] + y[1], P2, previous=[y[0], y[1]]).holds_on_window


def test_generic_sequences_have_no_higher_homology():
    rng = random.Random(9)
    for M, degrees in _shapes():
        nu = tuple(sum(d[p] for d in degrees) + o for p, o in enumerate(M.regularity_offset()))
        for _ in range(3):
            F = [random_form(M.shape, d, rng) for d in degrees]
            h = homology_ranks(build_slice(M, F, nu))
            assert not any(h[1:]), (degrees, h)


def test_text_dump():
    S = build_slice(K2, [q1("x[1,0]"), q1("x[1,1]")], (1,))
    text = S.dump()
    assert "D1\n2 2\n1 0\n0 1" in text
    assert ExactMatrix.from_rows(ZZ, [[1, -2]]).to_text() == "1 2\n1 -2\n"
