"""Classification records: build, serialize and re-verify.

A record is flat JSON so that two runs can be compared with ``diff``.
Everything a verifier needs is inside the record: the algebra label, the
vertex, the triple, the Cartan piece i_{a'} and the polynomial part p(u, v).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .bdtriples import BDTriple, automorphism_partners, check_triple, enumerate_triples
from .grading import VertexData, alpha_grading, delta_alpha
from .liecore import (LieAlgebra, UnsupportedAlgebraError, build_lie_algebra, build_root_system,
                      parse_algebra_label)
from .linalg import Subspace
from .manin import build_i_prime, cartan_spaces, check_i_a_prime, construct_i_a_prime, verify_manin
from .rmatrix import QuasiTrigSolution, is_unitary, solution_for_vertex, verify_cybe
from .scalar import format_scalar, parse_scalar

SCHEMA = "cybe-forge/1"

MANIN_FLAGS = ("isotropic", "half_dimensional", "subalgebra_closed",
               "intersection_with_delta_trivial", "sum_with_delta_full")
CHECKED_FIELDS = (
    "triple_valid", "i_a_prime_valid", "dim_L_alpha", "dim_delta_alpha", "dim_i_prime",
    *(f"manin_{f}" for f in MANIN_FLAGS),
    "solution_matches_lagrangian", "polynomial_degree", "cybe_verified", "unitary",
)
BOOLEAN_FIELDS = tuple(f for f in CHECKED_FIELDS if not f.startswith("dim_") and f != "polynomial_degree")


class RecordError(ValueError):
    """A record is malformed (missing keys, bad scalars, wrong schema)."""


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CYBE_FORGE_THREADS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def lie_algebra(label: str) -> LieAlgebra:
    kind, n = parse_algebra_label(label)
    return build_lie_algebra(build_root_system(kind, n))


def parse_vertex(text, rank: int) -> int:
    s = str(text).strip().lower()
    for prefix in ("alpha_", "alpha", "a"):
        if s.startswith(prefix) and s[len(prefix):].isdigit():
            s = s[len(prefix):]
            break
    if not s.isdigit() or not 1 <= int(s) <= rank:
        raise UnsupportedAlgebraError(f"vertex must be alpha1..alpha{rank}, got {text!r}")
    return int(s)


def _check(V: VertexData, T: BDTriple, i_a_prime: Subspace, sqrt_d: int,
           X: Optional[QuasiTrigSolution]) -> Tuple[Dict[str, object], QuasiTrigSolution]:
    """Every derived field of a record, recomputed from its inputs.

    With X None the solution is derived from the Lagrangian and returned.
    """
    out: Dict[str, object] = {"triple_valid": check_triple(V, T)}
    C = cartan_spaces(V, T)
    ia = check_i_a_prime(C, i_a_prime.basis)
    out["i_a_prime_valid"] = all(ia.values())
    lag = build_i_prime(V, T, i_a_prime, sqrt_d)
    delta = delta_alpha(V)
    rep = verify_manin(V, lag, delta)
    out["dim_L_alpha"] = V.n_la
    out["dim_delta_alpha"] = delta.dim
    out["dim_i_prime"] = lag.space.dim
    for f in MANIN_FLAGS:
        out[f"manin_{f}"] = getattr(rep, f)
    derived = solution_for_vertex(V, lag) if rep.ok and out["i_a_prime_valid"] else None
    if X is None:
        if derived is None:
            raise RecordError(f"no solution for {T.describe()} at alpha{V.alpha}")
        X = derived
    out["solution_matches_lagrangian"] = derived is not None and derived == X
    out["polynomial_degree"] = list(X.degrees)
    out["cybe_verified"] = verify_cybe(X)
    out["unitary"] = is_unitary(X)
    return out, X


def _triple_fields(T: BDTriple) -> Dict[str, object]:
    return {"triple_type": T.kind, "gamma1": list(T.gamma1), "gamma2": list(T.gamma2),
            "map": [[b, c] for b, c in T.mapping]}


def build_vertex_records(label: str, alpha: int, include_empty: bool = False) -> List[dict]:
    L = lie_algebra(label)
    V = alpha_grading(L, alpha)
    triples = enumerate_triples(V)
    partners = automorphism_partners(V, triples)
    records = []
    for idx, T in enumerate(triples):
        if not T.mapping and not include_empty:
            continue
        ia, d = construct_i_a_prime(cartan_spaces(V, T))
        fields, X = _check(V, T, ia, d, None)
        rec: Dict[str, object] = {"algebra": L.label, "vertex": f"alpha{alpha}"}
        rec.update(_triple_fields(T))
        rec["i_a_prime"] = [[format_scalar(x) for x in v] for v in ia.basis]
        rec["sqrt_d"] = d
        rec["automorphism_partners"] = [[[b, c] for b, c in triples[j].mapping] for j in partners[idx]]
        rec["solution"] = X.to_json()
        rec.update(fields)
        records.append(rec)
    return records


def build_records(label: str, vertex: Optional[int] = None, include_empty: bool = False) -> List[dict]:
    """Records for one vertex or all vertices, in vertex order."""
    L = lie_algebra(label)
    vertices = [vertex] if vertex is not None else list(range(1, L.rank + 1))
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        chunks = list(pool.map(lambda a: build_vertex_records(label, a, include_empty), vertices))
    return [r for chunk in chunks for r in chunk]


def record_ok(rec: dict) -> bool:
    return all(rec.get(f) is True for f in BOOLEAN_FIELDS)


def document(records: Sequence[dict]) -> dict:
    return {"schema": SCHEMA, "records": list(records)}


def load_document(data) -> List[dict]:
    """Accept the versioned document or a bare list of records."""
    if isinstance(data, list):
        return data
    if not isinstance(data, dict) or data.get("schema") != SCHEMA or not isinstance(data.get("records"), list):
        raise RecordError(f"expected a {SCHEMA} document with a 'records' list")
    return data["records"]


def recompute(rec: dict) -> Dict[str, object]:
    """Rebuild every derived field of a record from its inputs."""
    try:
        L = lie_algebra(str(rec["algebra"]))
        alpha = parse_vertex(rec["vertex"], L.rank)
        V = alpha_grading(L, alpha)
        T = BDTriple.from_json(alpha, {"type": rec["triple_type"], "map": rec["map"]})
        vecs = [[parse_scalar(str(x)) for x in v] for v in rec["i_a_prime"]]
        if any(len(v) != 2 * L.rank for v in vecs):
            raise RecordError("i_a_prime vectors must have length 2*rank")
        X = QuasiTrigSolution.from_json(L, rec["solution"])
        sqrt_d = int(rec.get("sqrt_d", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"malformed record: {exc}") from exc
    if list(T.gamma1) != list(rec.get("gamma1", T.gamma1)) or list(T.gamma2) != list(rec.get("gamma2", T.gamma2)):
        return {"triple_valid": False}
    return _check(V, T, Subspace(2 * L.rank, vecs), sqrt_d, X)[0]


def mismatches(rec: dict) -> List[str]:
    """Fields whose stored value differs from the recomputed one, or is a failing flag."""
    fresh = recompute(rec)
    bad = []
    for f in CHECKED_FIELDS:
        if f not in fresh:
            bad.append(f)
        elif rec.get(f) != fresh[f]:
            bad.append(f"{f} (stored {rec.get(f)!r}, recomputed {fresh[f]!r})")
        elif f in BOOLEAN_FIELDS and fresh[f] is not True:
            bad.append(f"{f} (false)")
    return bad


def nontrivial(records: Sequence[dict]) -> List[dict]:
    """Records whose solution has a non-constant polynomial part."""
    return [r for r in records if any(d > 0 for d in r["polynomial_degree"])]


def diagram_lines(label: str, alpha: int) -> List[str]:
    """ASCII picture of the extended diagram with the chosen vertex crossed out.

    Nodes print as ``o0``, ``o1``, ... with ``x`` for the crossed vertex; a bond
    prints as ``-m-`` for multiplicity m, with ``>`` pointing to the shorter root.
    """
    rs = lie_algebra(label).rs
    nodes = rs.extended_nodes

    def name(j):
        return f"{'x' if j == alpha else 'o'}{j}"

    lines = ["nodes: " + " ".join(name(j) for j in nodes)]
    for a, b in ((a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]):
        ip = rs.node_inner(a, b)
        if ip == 0:
            continue
        la, lb = rs.node_inner(a, a), rs.node_inner(b, b)
        m = 4 * ip * ip / (la * lb)
        arrow = ">" if la > lb else "<" if la < lb else "-"
        lines.append(f"  {name(a)} -{m}{arrow} {name(b)}")
    return lines
