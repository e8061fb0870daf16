"""Belavin-Drinfeld type triples attached to a vertex of the extended diagram.

Everything here is diagram level: nodes are indices into the extended
diagram (0 is the affine node -theta, 1..l the simple roots), and only the
root-lattice inner product is used.  The routines accept either a
:class:`~cybe_forge.grading.VertexData` or a bare ``(RootSystem, alpha)``
through :class:`VertexDiagram`, so exceptional types work as well.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .liecore import RootSystem

Pairs = Tuple[Tuple[int, int], ...]


class NotAnIsometryError(ValueError):
    """The proposed bijection does not preserve inner products."""


class RankGuardError(ValueError):
    pass


@dataclass(frozen=True)
class VertexDiagram:
    rs: RootSystem
    alpha: int

    @property
    def domain_nodes(self) -> Tuple[int, ...]:
        """Gamma^ext without alpha."""
        return tuple(j for j in self.rs.extended_nodes if j != self.alpha)

    @property
    def target_nodes(self) -> Tuple[int, ...]:
        return tuple(range(1, self.rs.rank + 1))

    def inner(self, i: int, j: int):
        return self.rs.node_inner(i, j)


def as_diagram(V) -> VertexDiagram:
    if isinstance(V, VertexDiagram):
        return V
    return VertexDiagram(V.L.rs, V.alpha)


@dataclass(frozen=True)
class BDTriple:
    alpha: int
    mapping: Pairs          # sorted pairs (beta in Gamma'_1, A'(beta) in Gamma'_2)
    kind: str               # "I", "II" or "empty"

    @property
    def gamma1(self) -> Tuple[int, ...]:
        return tuple(sorted(b for b, _ in self.mapping))

    @property
    def gamma2(self) -> Tuple[int, ...]:
        return tuple(sorted(c for _, c in self.mapping))

    @property
    def as_dict(self) -> Dict[int, int]:
        return dict(self.mapping)

    def sort_key(self):
        return (len(self.mapping), self.gamma1, self.gamma2, self.mapping)

    def describe(self) -> str:
        if not self.mapping:
            return "empty"
        arrows = ", ".join(f"a{b}->a{c}" for b, c in self.mapping)
        return f"type {self.kind}: {{{arrows}}}"

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "gamma1": list(self.gamma1),
            "gamma2": list(self.gamma2),
            "map": [[b, c] for b, c in self.mapping],
        }

    @classmethod
    def from_json(cls, alpha: int, data: Mapping) -> "BDTriple":
        pairs = tuple(sorted((int(b), int(c)) for b, c in data["map"]))
        return cls(alpha, pairs, str(data["type"]))


@dataclass
class GBDData:
    """A triple together with its Cartan Lagrangian piece i_{a'}.

    The bijection A is always the diagonal one, A(i(gamma), 0) = (0, gamma);
    i_a is diag(zeta_S).  Both are implied and not stored.
    """

    triple: BDTriple
    i_a_prime: list = field(default_factory=list)   # basis vectors in h x h (coroot coordinates)
    sqrt_d: int = 1


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

def is_isometry(mapping: Mapping[int, int], inner) -> bool:
    items = list(mapping.items())
    for b1, c1 in items:
        for b2, c2 in items:
            if inner(b1, b2) != inner(c1, c2):
                return False
    return True


def is_bd_admissible(gamma1: Iterable[int], gamma2: Iterable[int], tau: Mapping[int, int], inner) -> bool:
    """Every node of gamma1 leaves gamma1 after finitely many applications of tau."""
    g1, g2 = set(gamma1), set(gamma2)
    if set(tau) != g1 or set(tau.values()) != g2 or len(g1) != len(g2):
        raise NotAnIsometryError("tau is not a bijection gamma1 -> gamma2")
    if not is_isometry(tau, inner):
        raise NotAnIsometryError("tau does not preserve inner products")
    for start in g1:
        seen = set()
        x = start
        while x in g1:
            if x in seen:
                return False
            seen.add(x)
            x = tau[x]
    return True


def classify(D: VertexDiagram, mapping: Mapping[int, int]) -> Optional[str]:
    """Type tag of a candidate isometric bijection, or None if it has no type."""
    if not mapping:
        return "empty"
    if not is_isometry(mapping, D.inner):
        raise NotAnIsometryError(f"{dict(mapping)} does not preserve inner products")
    alpha = D.alpha
    g1, g2 = set(mapping), set(mapping.values())
    if alpha not in g2:
        return "I" if is_bd_admissible(g1, g2, mapping, D.inner) else None
    beta = next(b for b, c in mapping.items() if c == alpha)
    rest = {b: c for b, c in mapping.items() if b != beta}
    return "II" if is_bd_admissible(set(rest), set(rest.values()), rest, D.inner) else None


def check_triple(V, T: BDTriple) -> bool:
    """Re-run the type predicate and the isometry test on an emitted triple."""
    D = as_diagram(V)
    m = T.as_dict
    if not set(m) <= set(D.domain_nodes) or not set(m.values()) <= set(D.target_nodes):
        return False
    if not is_isometry(m, D.inner):
        return False
    return classify(D, m) == T.kind


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _finish(D: VertexDiagram, candidates: Iterable[Dict[int, int]]) -> List[BDTriple]:
    out = set()
    for m in candidates:
        kind = classify(D, m)
        if kind is not None:
            out.add(BDTriple(D.alpha, tuple(sorted(m.items())), kind))
    return sorted(out, key=BDTriple.sort_key)


def enumerate_triples(V) -> List[BDTriple]:
    """All type I / type II triples at the vertex, plus the empty triple.

    Depth-first over the domain nodes; each node is either skipped or sent
    to an unused target node with the same length and the same inner
    products with every node assigned so far.
    """
    D = as_diagram(V)
    dom, tgt = D.domain_nodes, D.target_nodes
    found: List[Dict[int, int]] = []

    def extend(pos: int, current: Dict[int, int], used: FrozenSet[int]):
        if pos == len(dom):
            found.append(dict(current))
            return
        b = dom[pos]
        extend(pos + 1, current, used)
        for c in tgt:
            if c in used or D.inner(b, b) != D.inner(c, c):
                continue
            if any(D.inner(b, b2) != D.inner(c, c2) for b2, c2 in current.items()):
                continue
            current[b] = c
            extend(pos + 1, current, used | {c})
            del current[b]

    extend(0, {}, frozenset())
    return _finish(D, found)


def brute_force_enumerate(V) -> List[BDTriple]:
    """Independent oracle: all subset pairs, all bijections, then filter."""
    D = as_diagram(V)
    if D.rs.rank > 4:
        raise RankGuardError(f"brute force is limited to rank <= 4 (got {D.rs.rank})")
    dom, tgt = D.domain_nodes, D.target_nodes
    cands = []
    for size in range(0, min(len(dom), len(tgt)) + 1):
        for g1 in itertools.combinations(dom, size):
            for g2 in itertools.combinations(tgt, size):
                for perm in itertools.permutations(g2):
                    m = dict(zip(g1, perm))
                    if is_isometry(m, D.inner):
                        cands.append(m)
    return _finish(D, cands)


# ---------------------------------------------------------------------------
# Diagram automorphisms (reported, not used for identification)
# ---------------------------------------------------------------------------

def domain_automorphisms(D: VertexDiagram) -> List[Dict[int, int]]:
    """Inner-product preserving permutations of Gamma^ext minus alpha."""
    dom = D.domain_nodes
    out = []
    for perm in itertools.permutations(dom):
        m = dict(zip(dom, perm))
        if is_isometry(m, D.inner):
            out.append(m)
    return out


def automorphism_partners(V, triples: Sequence[BDTriple]) -> Dict[int, List[int]]:
    """Indices of triples related to each triple by a diagram automorphism.

    An automorphism phi of Gamma^ext minus alpha is used when, extended by
    alpha -> alpha, it also restricts to an automorphism of Gamma.  Then
    T' is a partner of T when T' sends phi(b) to phi(A'(b)).
    """
    D = as_diagram(V)
    tgt = D.target_nodes
    index = {t.mapping: i for i, t in enumerate(triples)}
    out: Dict[int, List[int]] = {i: [] for i in range(len(triples))}
    for phi in domain_automorphisms(D):
        if all(k == v for k, v in phi.items()):
            continue
        full = dict(phi)
        full[D.alpha] = D.alpha
        on_target = {c: full[c] for c in tgt}
        if set(on_target.values()) != set(tgt) or not is_isometry(on_target, D.inner):
            continue
        for i, t in enumerate(triples):
            image = tuple(sorted((full[b], full[c]) for b, c in t.mapping))
            j = index.get(image)
            if j is not None and j != i and j not in out[i]:
                out[i].append(j)
    return out
