from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cybe_forge.bdtriples import (BDTriple, NotAnIsometryError, RankGuardError, VertexDiagram,
                                  automorphism_partners, brute_force_enumerate, check_triple, classify,
                                  enumerate_triples, is_bd_admissible)
from cybe_forge.liecore import build_root_system

ORACLE = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 3), ("B", 3), ("D", 4), ("G", 2), ("F", 4)]


def diagram(kind, rank, alpha):
    return VertexDiagram(build_root_system(kind, rank), alpha)


def describe_all(D):
    return [t.describe() for t in enumerate_triples(D)]


def test_o5_triples():
    assert describe_all(diagram("B", 2, 1)) == ["empty", "type I: {a0->a2}"]
    assert describe_all(diagram("B", 2, 2)) == ["empty", "type II: {a0->a2}"]


def test_sl2_triples():
    assert describe_all(diagram("A", 1, 1)) == ["empty", "type II: {a0->a1}"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_shift_triples_present(n):
    triples = enumerate_triples(diagram("A", n, n))
    maps = {(t.kind, t.mapping) for t in triples}
    assert ("I", tuple((j, j + 1) for j in range(n - 1))) in maps
    assert ("II", tuple((j, j + 1) for j in range(n))) in maps


@pytest.mark.parametrize("kind,rank", ORACLE)
def test_structured_matches_brute_force(kind, rank):
    for a in range(1, rank + 1):
        D = diagram(kind, rank, a)
        assert set(enumerate_triples(D)) == set(brute_force_enumerate(D))


def test_brute_force_rank_guard():
    with pytest.raises(RankGuardError):
        brute_force_enumerate(diagram("A", 5, 1))


def test_enumeration_is_sorted_and_valid():
    D = diagram("A", 3, 2)
    triples = enumerate_triples(D)
    assert triples == sorted(triples, key=BDTriple.sort_key)
    assert all(check_triple(D, t) for t in triples)


def test_admissibility_rejects_cycles():
    inner = build_root_system("A", 3).node_inner
    assert not is_bd_admissible({1, 3}, {1, 3}, {1: 3, 3: 1}, inner)
    with pytest.raises(NotAnIsometryError):
        is_bd_admissible({0}, {1}, {0: 2}, inner)


def test_classify_rejects_non_isometry():
    D = diagram("B", 2, 1)
    with pytest.raises(NotAnIsometryError):
        classify(D, {0: 1})


def test_json_round_trip():
    for t in enumerate_triples(diagram("A", 3, 3)):
        assert BDTriple.from_json(3, t.to_json()) == t


def test_automorphism_partners_are_symmetric():
    D = diagram("A", 3, 2)
    triples = enumerate_triples(D)
    partners = automorphism_partners(D, triples)
    assert any(partners.values())
    for i, js in partners.items():
        for j in js:
            assert i in partners[j]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("A", 4), ("D", 4), ("B", 3), ("C", 3)]), st.data())
def test_every_emitted_triple_rechecks(kr, data):
    kind, rank = kr
    a = data.draw(st.integers(1, rank))
    D = diagram(kind, rank, a)
    t = data.draw(st.sampled_from(enumerate_triples(D)))
    assert check_triple(D, t)
    assert len(t.gamma1) == len(t.gamma2)
