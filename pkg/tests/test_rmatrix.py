from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cybe_forge.bdtriples import enumerate_triples
from cybe_forge.grading import alpha_grading
from cybe_forge.manin import classify_vertex_triple
from cybe_forge.rmatrix import (ExpFactor, GaugeError, NotUnitaryError, QuasiTrigSolution, TorusFactor,
                                apply_gauge, gauge_window, is_antisymmetric, is_unitary, lift_i_prime_to_W,
                                omega_solution, solution_from_subalgebra, solution_from_subalgebra_dual,
                                standard_r3, subalgebra_from_solution, verify_cybe, w_conditions)

from conftest import algebra

SMALL = [("A", 1), ("A", 2), ("B", 2)]


def vertex_solutions(kind, rank):
    L = algebra(kind, rank)
    for a in range(1, rank + 1):
        V = alpha_grading(L, a)
        for T in enumerate_triples(V):
            lag, _ = classify_vertex_triple(V, T)
            yield T, lift_i_prime_to_W(V, lag)


@pytest.mark.parametrize("kind,rank", SMALL)
def test_r3_and_negative_control(kind, rank):
    L = algebra(kind, rank)
    r3 = standard_r3(L)
    assert verify_cybe(r3) and is_unitary(r3)
    assert not verify_cybe(QuasiTrigSolution(L))
    assert not is_unitary(QuasiTrigSolution(L))


@pytest.mark.parametrize("kind,rank", SMALL)
def test_r3_window_round_trip(kind, rank):
    r3 = standard_r3(algebra(kind, rank))
    W = subalgebra_from_solution(r3)
    assert all(w_conditions(W).values())
    assert solution_from_subalgebra(W) == r3
    assert solution_from_subalgebra_dual(W) == r3


@pytest.mark.parametrize("kind,rank", SMALL)
def test_vertex_solutions(kind, rank):
    for T, W in vertex_solutions(kind, rank):
        assert all(w_conditions(W).values()), T.describe()
        X = solution_from_subalgebra(W)
        assert verify_cybe(X) and is_unitary(X)
        # the polynomial part is non-constant exactly when the affine node is moved
        assert X.degrees == ((1, 1) if 0 in T.gamma1 else (0, 0))
        assert solution_from_subalgebra_dual(W) == X
        assert subalgebra_from_solution(X) == W


def test_twist_is_antisymmetric(o5):
    r3 = standard_r3(o5)
    for T, W in vertex_solutions("B", 2):
        assert is_antisymmetric(solution_from_subalgebra(W) - r3)


def test_non_unitary_input_rejected(sl2):
    with pytest.raises(NotUnitaryError):
        subalgebra_from_solution(omega_solution(sl2) + omega_solution(sl2))


def test_perturbation_breaks_cybe(sl3):
    T, W = next((T, W) for T, W in vertex_solutions("A", 2) if T.mapping)
    X = solution_from_subalgebra(W)
    key = sorted(X.p)[0]
    Y = X.copy()
    Y.add(*key, F(1, 3))
    assert not verify_cybe(Y)


def test_json_round_trip(o5):
    for _, W in vertex_solutions("B", 2):
        X = solution_from_subalgebra(W)
        assert QuasiTrigSolution.from_json(o5, X.to_json()) == X


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SMALL), st.fractions(max_denominator=4).map(F).filter(bool),
       st.integers(0, 1), st.booleans())
def test_gauge_preserves_cybe(kr, c, m, use_torus):
    L = algebra(*kr)
    e = L.root_index[L.rs.positive_roots[-1]]
    factors = [ExpFactor(e, c, m)]
    if use_torus:
        factors.append(TorusFactor(tuple([F(2)] * L.rank)))
    Y = apply_gauge(standard_r3(L), factors)
    assert verify_cybe(Y) and is_unitary(Y)


def test_constant_gauge_commutes_with_window(o5):
    e = o5.root_index[o5.rs.positive_roots[0]]
    factors = [ExpFactor(e, F(2), 0), TorusFactor((F(3), F(3)))]
    r3 = standard_r3(o5)
    assert subalgebra_from_solution(apply_gauge(r3, factors)) == gauge_window(subalgebra_from_solution(r3), factors)


def test_gauge_rejects_cartan_direction(sl2):
    with pytest.raises(GaugeError):
        apply_gauge(standard_r3(sl2), [ExpFactor(0, F(1), 0)])
