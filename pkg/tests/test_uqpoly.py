from __future__ import annotations

import pytest

from cybe_forge.liecore import build_root_system
from cybe_forge.uqpoly import (NCPoly, Rewriter, affine_exponent, check_hopf_on_generators,
                               classical_limit_check, counit_of_relations, generate_presentation,
                               rewrite_normal_form, serre_exponent)

LABELS = [("A", 1), ("A", 2), ("B", 2), ("C", 3), ("G", 2)]


def presentation(kind, rank, mode="quantum"):
    return generate_presentation(build_root_system(kind, rank), mode)


def test_k0_identity_o5():
    assert presentation("B", 2).k0_identity() == "k_{delta-theta} = k_1^{-2} k_2^{-1}"


def test_exponents_o5():
    rs = build_root_system("B", 2)
    assert serre_exponent(rs, 1, 2) == 3 and serre_exponent(rs, 2, 1) == 2
    assert affine_exponent(rs, 1) == 3 and affine_exponent(rs, 2) == 1


def test_sl2_has_quartic_and_affine_serre():
    P = presentation("A", 1)
    tags = P.tags()
    assert "sl2-quartic" in tags and "affine-serre:1" in tags
    assert P.relation("affine-serre:1").meta["n"] == 3
    assert not any(t.startswith("affine-cubic") for t in tags)


def test_bad_mode():
    with pytest.raises(ValueError):
        generate_presentation(build_root_system("A", 1), "other")


@pytest.mark.parametrize("kind,rank", LABELS)
def test_rewriting_confluent(kind, rank):
    assert Rewriter(presentation(kind, rank)).critical_pairs(3) == []


def test_normal_form_moves_k_right():
    P = presentation("A", 1)
    nf = rewrite_normal_form(("k1", "e1", "K1"), P)
    assert list(nf.terms) == [("e1",)]
    assert nf.terms[("e1",)] == P.F.q_power(2)
    assert rewrite_normal_form(("k0", "k1"), P) == NCPoly.one(P.F)


@pytest.mark.parametrize("kind,rank", LABELS)
def test_hopf_axioms(kind, rank):
    rep = check_hopf_on_generators(presentation(kind, rank))
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("kind,rank", LABELS)
def test_counit_kills_relations(kind, rank):
    assert all(counit_of_relations(presentation(kind, rank)).values())


@pytest.mark.parametrize("kind,rank", LABELS)
def test_classical_limit(kind, rank):
    rep = classical_limit_check(build_root_system(kind, rank))
    assert rep.ok
    assert rep.results["e-f-bracket:1:1"]["order"] == 1
    assert rep.results["k-inverse:1"]["order"] is None


def test_c_type_uses_fractional_exponent():
    assert presentation("C", 3).F.m == 2
    assert presentation("B", 2).F.m == 1


def test_json_export():
    data = presentation("A", 2).to_json()
    assert {"tag", "monomials"} <= set(data[0])
    assert all(isinstance(m["word"], list) for r in data for m in r["monomials"])
