from __future__ import annotations

from fractions import Fraction as F

import pytest

from cybe_forge.liecore import (DiagramOnlyError, UnsupportedAlgebraError, build_root_system, casimir,
                                parse_algebra_label)

from conftest import algebra

CLASSICAL = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4)]


@pytest.mark.parametrize("kind,rank", CLASSICAL + [("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8)])
def test_root_counts(kind, rank):
    rs = build_root_system(kind, rank)
    assert len(rs.roots) == rs.expected_root_count()
    assert rs.theta in rs.positive_roots


def test_b2_conventions():
    rs = build_root_system("B", 2)
    assert rs.theta == (2, 1)
    assert rs.node_inner(1, 1) == 1 and rs.node_inner(2, 2) == 2
    assert rs.cartan == ((2, -2), (-1, 2))  # cartan[i][j] = 2(a_i, a_j)/(a_i, a_i)


@pytest.mark.parametrize("label,expected", [("sl3", ("A", 2)), ("o5", ("B", 2)), ("sp6", ("C", 3)),
                                            ("so8", ("D", 4)), ("B2", ("B", 2))])
def test_parse_labels(label, expected):
    assert parse_algebra_label(label) == expected


def test_bad_labels():
    with pytest.raises(UnsupportedAlgebraError):
        build_root_system("Q", 2)
    with pytest.raises(UnsupportedAlgebraError):
        build_root_system("D", 2)


@pytest.mark.parametrize("kind,rank", CLASSICAL)
def test_jacobi_and_invariance(kind, rank):
    L = algebra(kind, rank)
    n = L.dim
    assert n == build_root_system(kind, rank).dimension
    idx = list(range(0, n, max(1, n // 7)))
    for i in idx:
        for j in idx:
            for k in idx:
                x, y, z = L.unit(i), L.unit(j), L.unit(k)
                jac = [a + b + c for a, b, c in zip(L.bracket(x, L.bracket(y, z)),
                                                    L.bracket(y, L.bracket(z, x)),
                                                    L.bracket(z, L.bracket(x, y)))]
                assert not any(jac)
                assert L.form(L.bracket(x, y), z) == L.form(x, L.bracket(y, z))


@pytest.mark.parametrize("kind,rank", CLASSICAL[:4])
def test_chevalley_triples(kind, rank):
    L = algebra(kind, rank)
    for r in L.rs.positive_roots:
        x, y, h = L.chevalley_triple(r)
        assert L.bracket(x, y) == h
        assert L.root_value(r, h) == 2


def test_casimir_is_invariant(sl3):
    om = casimir(sl3).omega
    assert om.flip() == om
    n = sl3.dim
    for a in range(n):
        z = sl3.unit(a)
        acc = {}
        for (i, j), c in om.terms.items():
            for k, v in enumerate(sl3.bracket(z, sl3.unit(i))):
                if v:
                    acc[(k, j)] = acc.get((k, j), 0) + c * v
            for k, v in enumerate(sl3.bracket(z, sl3.unit(j))):
                if v:
                    acc[(i, k)] = acc.get((i, k), 0) + c * v
        assert not any(acc.values())


def test_exceptional_is_diagram_only():
    from cybe_forge.grading import alpha_grading
    L = algebra("G", 2)
    with pytest.raises(DiagramOnlyError):
        alpha_grading(L, 1)


def test_cartan_from_diagonal_o5(o5):
    h = o5.cartan_from_diagonal([F(-2), F(1), F(0), F(-1), F(2)])
    assert len(h) == o5.dim and not any(h[o5.rank:])
