"""Acceptance criteria, one test each.

Each test records a PASS/FAIL line; the lines are printed in the pytest
terminal summary (see conftest.py) and when this file is run as a script.
"""
from __future__ import annotations

import time
from fractions import Fraction as F

import pytest

from cybe_forge.bdtriples import VertexDiagram, brute_force_enumerate, enumerate_triples
from cybe_forge.grading import (DoubleWindow, alpha_grading, computed_perp, delta_alpha, is_closed,
                                order_model, order_model_perp)
from cybe_forge.linalg import is_isotropic, rank
from cybe_forge.liecore import build_root_system
from cybe_forge.manin import cartan_spaces, check_i_a_prime, classify_vertex_triple
from cybe_forge.records import build_records, mismatches, nontrivial, record_ok
from cybe_forge.rmatrix import (QuasiTrigSolution, is_unitary, lift_i_prime_to_W, solution_from_subalgebra,
                                standard_r3, subalgebra_from_solution, verify_cybe)
from cybe_forge.scalar import Scalar
from cybe_forge.uqpoly import (Rewriter, affine_exponent, check_hopf_on_generators, classical_limit_check,
                               generate_presentation, serre_exponent)

from conftest import algebra

RESULTS: dict = {}


def record(number: int, name: str, ok: bool, elapsed: float, note: str = "") -> None:
    line = f"acceptance {number} [{name}]: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s){' ' + note if note else ''}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_acceptance_1_o5_count():
    t = time.perf_counter()
    recs = build_records("B2")
    nt = nontrivial(recs)
    ok = (len(nt) == 2
          and sorted(r["vertex"] for r in nt) == ["alpha1", "alpha2"]
          and all(r["gamma1"] == [0] and r["gamma2"] == [2] for r in nt)
          and all(record_ok(r) for r in recs))
    elapsed = time.perf_counter() - t
    record(1, "o5 count", ok and elapsed < 10, elapsed, f"{len(nt)} non-trivial records")


def test_acceptance_2_o5_sqrt5_vector():
    t = time.perf_counter()
    L = algebra("B", 2)
    V = alpha_grading(L, 2)
    T = next(x for x in enumerate_triples(V) if x.gamma1 == (0,) and x.gamma2 == (2,))
    s5 = Scalar(0, 1, 5)
    left = L.cartan_from_diagonal([F(-2), F(1), F(0), F(-1), F(2)])[: L.rank]
    right = L.cartan_from_diagonal([F(0), s5, F(0), -s5, F(0)])[: L.rank]
    flags = check_i_a_prime(cartan_spaces(V, T), [left + right])
    ok = flags["isotropic"] and flags["condf"]
    record(2, "o5 alternative Cartan vector", ok, time.perf_counter() - t,
           "isotropic and condf hold" if ok else str(flags))


def test_acceptance_3_shift_triples():
    t = time.perf_counter()
    ok = True
    for n in (2, 3, 4):
        V = alpha_grading(algebra("A", n), n)
        triples = {(x.kind, x.mapping): x for x in enumerate_triples(V)}
        for kind, length in (("I", n - 1), ("II", n)):
            key = (kind, tuple((j, j + 1) for j in range(length)))
            if key not in triples:
                ok = False
                continue
            _, rep = classify_vertex_triple(V, triples[key])
            ok = ok and rep.ok
    elapsed = time.perf_counter() - t
    record(3, "shift triples", ok and elapsed < 60, elapsed)


def test_acceptance_4_cybe_suite():
    t = time.perf_counter()
    ok = True
    count = 0
    for kind, n in (("A", 1), ("A", 2), ("B", 2)):
        L = algebra(kind, n)
        ok = ok and verify_cybe(standard_r3(L)) and not verify_cybe(QuasiTrigSolution(L))
        for rec in build_records(f"{kind}{n}", include_empty=True):
            X = QuasiTrigSolution.from_json(L, rec["solution"])
            ok = ok and verify_cybe(X) and is_unitary(X) and max(X.degrees) <= 1
            count += 1
    elapsed = time.perf_counter() - t
    record(4, "CYBE suite", ok and elapsed < 300, elapsed, f"{count} solutions")


def test_acceptance_5_perp_oracle():
    t = time.perf_counter()
    ok = True
    for kind, n in (("A", 2), ("B", 2)):
        L = algebra(kind, n)
        W = DoubleWindow(L)
        for a in range(1, n + 1):
            V = alpha_grading(L, a)
            ok = ok and computed_perp(order_model(V, W), W) == order_model_perp(V, W)
    record(5, "orthogonal of the order model", ok, time.perf_counter() - t)


def test_acceptance_6_structural_invariants():
    t = time.perf_counter()
    ok = True
    count = 0
    for kind, n in (("A", 1), ("A", 2), ("B", 2), ("A", 3), ("C", 3)):
        L = algebra(kind, n)
        for a in range(1, n + 1):
            V = alpha_grading(L, a)
            D = delta_alpha(V)
            ok = ok and 2 * D.dim == V.n_la + V.n and is_isotropic(D, V.q_prime_gram) and is_closed(D, V.bracket)
            for T in enumerate_triples(V):
                lag, _ = classify_vertex_triple(V, T)
                S = lag.space
                ok = (ok and is_isotropic(S, V.q_prime_gram) and 2 * S.dim == V.ambient
                      and is_closed(S, V.bracket) and rank(S.basis + D.basis, V.ambient) == V.ambient)
                count += 1
    record(6, "structural invariants", ok, time.perf_counter() - t, f"{count} Lagrangian subalgebras")


def test_acceptance_7_enumeration_oracle():
    t = time.perf_counter()
    ok = True
    for kind, n in (("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 3)):
        rs = build_root_system(kind, n)
        for a in range(1, n + 1):
            D = VertexDiagram(rs, a)
            ok = ok and set(enumerate_triples(D)) == set(brute_force_enumerate(D))
    elapsed = time.perf_counter() - t
    record(7, "enumeration oracle", ok and elapsed < 60, elapsed)


def test_acceptance_8_round_trip():
    t = time.perf_counter()
    ok = True
    for kind, n in (("A", 2), ("B", 2)):
        L = algebra(kind, n)
        r3 = standard_r3(L)
        ok = ok and solution_from_subalgebra(subalgebra_from_solution(r3)) == r3
        for a in range(1, n + 1):
            V = alpha_grading(L, a)
            for T in enumerate_triples(V):
                lag, _ = classify_vertex_triple(V, T)
                W = lift_i_prime_to_W(V, lag)
                X = solution_from_subalgebra(W)
                ok = ok and subalgebra_from_solution(X) == W and solution_from_subalgebra(subalgebra_from_solution(X)) == X
    record(8, "round trip", ok, time.perf_counter() - t)


def test_acceptance_9_uq_checks():
    t = time.perf_counter()
    ok = True
    expected_k0 = {"A1": "k_1^{-1}", "A2": "k_1^{-1} k_2^{-1}", "B2": "k_1^{-2} k_2^{-1}"}
    for kind, n in (("A", 1), ("A", 2), ("B", 2)):
        rs = build_root_system(kind, n)
        P = generate_presentation(rs)
        ok = ok and P.k0_identity() == "k_{delta-theta} = " + expected_k0[rs.label]
        for r in P.relations:
            parts = r.tag.split(":")
            if parts[0] == "q-serre":
                i, j = int(parts[2]), int(parts[3])
                ok = ok and r.meta["n"] == serre_exponent(rs, i, j) == 1 - rs.cartan[i - 1][j - 1]
            if parts[0] == "affine-serre":
                i = int(parts[1])
                ok = ok and r.meta["n"] == affine_exponent(rs, i) == 1 - 2 * rs.node_inner(i, 0) / rs.node_inner(i, i)
        ok = ok and Rewriter(P).critical_pairs(3) == []
        ok = ok and check_hopf_on_generators(P).ok and classical_limit_check(rs).ok
    elapsed = time.perf_counter() - t
    record(9, "quantum loop algebra checks", ok and elapsed < 30, elapsed)


def test_acceptance_records_self_validate():
    recs = build_records("A2")
    assert all(mismatches(r) == [] for r in recs)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
