from __future__ import annotations

from fractions import Fraction as F

import pytest

from cybe_forge.bdtriples import enumerate_triples
from cybe_forge.grading import alpha_grading, delta_alpha, is_closed
from cybe_forge.linalg import Subspace, is_isotropic
from cybe_forge.manin import (build_i_prime, cartan_spaces, check_i_a_prime, classify_vertex_triple,
                              construct_i_a_prime, verify_manin)
from cybe_forge.scalar import Scalar

from conftest import algebra


def all_triples(kind, rank):
    L = algebra(kind, rank)
    for a in range(1, rank + 1):
        V = alpha_grading(L, a)
        for T in enumerate_triples(V):
            yield V, T


@pytest.mark.parametrize("kind,rank", [("A", 1), ("A", 2), ("B", 2), ("A", 3), ("C", 3)])
def test_every_triple_gives_a_manin_triple(kind, rank):
    for V, T in all_triples(kind, rank):
        lag, rep = classify_vertex_triple(V, T)
        assert rep.ok, (T.describe(), rep.as_dict())
        assert lag.sqrt_d == 1
        k, ia, n = lag.component_dims()
        assert k + ia + n == lag.space.dim


def test_o5_sqrt5_cartan_vector(o5):
    V = alpha_grading(o5, 2)
    T = next(t for t in enumerate_triples(V) if t.mapping)
    C = cartan_spaces(V, T)
    s5 = Scalar(0, 1, 5)
    h1 = o5.cartan_from_diagonal([F(-2), F(1), F(0), F(-1), F(2)])[:2]
    h2 = o5.cartan_from_diagonal([F(0), s5, F(0), -s5, F(0)])[:2]
    flags = check_i_a_prime(C, [h1 + h2])
    assert flags["isotropic"] and flags["condf"] and flags["half_dimensional"]
    # the vector is not annihilated by the long simple root on the right
    assert not flags["inside_a_prime"]


def test_constructed_cartan_piece_is_lagrangian(o5):
    V = alpha_grading(o5, 1)
    T = next(t for t in enumerate_triples(V) if t.mapping)
    C = cartan_spaces(V, T)
    ia, d = construct_i_a_prime(C)
    assert 2 * ia.dim == C.a_prime.dim
    assert is_isotropic(ia, C.gram) and C.a_prime.contains_space(ia)
    assert all(check_i_a_prime(C, ia.basis).values())


def test_broken_lagrangian_is_flagged(sl3):
    V = alpha_grading(sl3, 1)
    T = next(t for t in enumerate_triples(V) if t.mapping)
    lag, _ = classify_vertex_triple(V, T)
    smaller = Subspace(V.ambient, lag.space.basis[1:])
    rep = verify_manin(V, smaller)
    assert not rep.half_dimensional and not rep.ok
    rep2 = verify_manin(V, delta_alpha(V))
    assert not rep2.intersection_with_delta_trivial


def test_i_prime_components(o5):
    V = alpha_grading(o5, 2)
    T = next(t for t in enumerate_triples(V) if t.mapping)
    ia, d = construct_i_a_prime(cartan_spaces(V, T))
    lag = build_i_prime(V, T, ia, d)
    assert is_closed(lag.space, V.bracket)
    assert is_isotropic(lag.space, V.q_prime_gram)
    assert lag.space.dim == delta_alpha(V).dim
