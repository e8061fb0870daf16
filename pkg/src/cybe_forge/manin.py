"""Lagrangian subalgebras of L_alpha x g attached to a triple.

The Cartan of L_alpha is the Cartan h of g, so every Cartan datum lives in
h x h, written in coroot coordinates (two blocks of length rank).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .bdtriples import BDTriple
from .grading import VertexData, delta_alpha, is_closed
from .linalg import ONE, ZERO, Subspace, bilinear, is_isotropic, nullspace, rank, rref
from .scalar import sqrt_rational, squarefree_part


class ConstructionError(AssertionError):
    """No admissible Cartan piece was found; should not happen."""


@dataclass
class CartanSpaces:
    rank: int
    a_prime: Subspace       # annihilator of Gamma'_1 (left) x annihilator of Gamma'_2 (right)
    a1: Subspace            # left factor of a', inside h
    a2: Subspace            # right factor of a', inside h
    f_prime: Subspace       # span (H_b, H_A'b)
    f: Subspace             # span (H_i(g), H_g), g in S
    i_a: Subspace           # diag(zeta_S)
    gram: List[List]        # Q' restricted to h x h
    h_gram: List[List]      # B restricted to h
    coroot_pairs: Tuple[List[list], List[list]] = ([], [])   # (H_b), (H_A'b)


def _coroot_h(V: VertexData, node: int) -> list:
    root = V.L.rs.simple_root(node)
    return V.L.coroot(root)[: V.L.rank]


def _annihilator(V: VertexData, nodes: Sequence[int]) -> Subspace:
    l = V.L.rank
    unit = [[ONE if i == j else ZERO for j in range(l)] for i in range(l)]
    rows = [[V.L.root_value(V.L.rs.simple_root(b), unit[c]) for c in range(l)] for b in nodes]
    return Subspace(l, nullspace(rows, l) if rows else unit)


def _join(x: Sequence, y: Sequence) -> list:
    return list(x) + list(y)


def cartan_spaces(V: VertexData, T: BDTriple) -> CartanSpaces:
    l = V.L.rank
    zero = [ZERO] * l
    a1 = _annihilator(V, T.gamma1)
    a2 = _annihilator(V, T.gamma2)
    a_prime = Subspace(2 * l, [_join(x, zero) for x in a1.basis] + [_join(zero, y) for y in a2.basis], "a'")
    f_prime = Subspace(2 * l, [_join(_coroot_h(V, b), _coroot_h(V, c)) for b, c in T.mapping], "f'")
    S = [j for j in range(1, l + 1) if j != V.alpha]
    f = Subspace(2 * l, [_join(_coroot_h(V, j), _coroot_h(V, j)) for j in S], "f")
    i_a = Subspace(2 * l, [_join(z, z) for z in V.zeta.basis], "i_a")
    hB = [row[:l] for row in V.L.gram[:l]]
    gram = [[ZERO] * (2 * l) for _ in range(2 * l)]
    for i in range(l):
        for j in range(l):
            gram[i][j] = hB[i][j]
            gram[l + i][l + j] = -hB[i][j]
    pairs = ([_coroot_h(V, b) for b, _ in T.mapping], [_coroot_h(V, c) for _, c in T.mapping])
    return CartanSpaces(l, a_prime, a1, a2, f_prime, f, i_a, gram, hB, pairs)


def condf_holds(C: CartanSpaces, i_a_prime: Sequence[Sequence]) -> bool:
    """(f' + i_a') meets (f + i_a) only in zero, with the expected dimensions."""
    left = C.f_prime.basis + [list(v) for v in i_a_prime]
    right = (C.f + C.i_a).basis
    return rank(left, 2 * C.rank) == len(left) and rank(left + right, 2 * C.rank) == len(left) + len(right)


def check_i_a_prime(C: CartanSpaces, vectors: Sequence[Sequence]) -> Dict[str, bool]:
    """Flags for a user-supplied Cartan piece."""
    space = Subspace(2 * C.rank, vectors)
    return {
        "isotropic": is_isotropic(space, C.gram),
        "half_dimensional": space.dim * 2 == C.a_prime.dim,
        "inside_a_prime": C.a_prime.contains_space(space),
        "condf": condf_holds(C, space.basis),
    }


# ---------------------------------------------------------------------------
# Building a Lagrangian graph inside a'
# ---------------------------------------------------------------------------

def _orthogonal_basis(basis: Sequence[Sequence], gram) -> List[list]:
    out: List[list] = []
    for v in basis:
        w = list(v)
        for e in out:
            c = bilinear(w, gram, e) / bilinear(e, gram, e)
            w = [a - c * b for a, b in zip(w, e)]
        out.append(w)
    return out


def _parameters() -> Iterator[Fraction]:
    yield Fraction(0)
    n = 1
    while True:
        for t in (Fraction(n), Fraction(-n), Fraction(1, n + 1), Fraction(-1, n + 1)):
            yield t
        n += 1


def _cayley(gram: Sequence[Sequence], i: int, j: int, t: Fraction) -> List[List]:
    """Rational B-orthogonal map (I - G^-1 S)(I + G^-1 S)^-1 for an elementary skew S."""
    m = len(gram)
    S = [[ZERO] * m for _ in range(m)]
    S[i][j], S[j][i] = t, -t
    aug = [list(gram[r]) + list(S[r]) for r in range(m)]
    r, _ = rref(aug, 2 * m)
    K = [row[m:] for row in r]                     # G^-1 S
    plus = [[(ONE if a == b else ZERO) + K[a][b] for b in range(m)] for a in range(m)]
    minus = [[(ONE if a == b else ZERO) - K[a][b] for b in range(m)] for a in range(m)]
    aug = [plus[a] + [ONE if a == b else ZERO for b in range(m)] for a in range(m)]
    r, _ = rref(aug, 2 * m)
    inv = [row[m:] for row in r]
    return [[sum((minus[a][c] * inv[c][b] for c in range(m)), ZERO) for b in range(m)] for a in range(m)]


def _pairings(na: Sequence[Fraction], nb: Sequence[Fraction]) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Permutations pi with na[i]/nb[pi[i]] in one square class; yields (pi, d)."""
    m = len(na)
    options = []
    for pi in itertools.permutations(range(m)):
        classes = {squarefree_part(na[i] / nb[pi[i]]) for i in range(m)}
        classes.discard(1)
        if len(classes) <= 1:
            options.append((len(classes), pi, classes.pop() if classes else 1))
    for _, pi, d in sorted(options):
        yield pi, d


def _reflect(v: Sequence, r: Sequence, gram) -> list:
    c = 2 * bilinear(v, gram, r) / bilinear(r, gram, r)
    return [a - c * b for a, b in zip(v, r)]


def witt_isometry(sources: Sequence[Sequence], targets: Sequence[Sequence], gram) -> List[list]:
    """Reflections whose product is a rational isometry sending sources[i] to targets[i].

    The two families must have the same Gram matrix.  They are first made
    orthogonal by the same Gram-Schmidt recipe, then matched one vector at a
    time; each reflection fixes the vectors already matched.
    """
    us, vs = [list(x) for x in sources], [list(y) for y in targets]
    ou: List[list] = []
    ov: List[list] = []
    for u, v in zip(us, vs):
        for eu, ev in zip(ou, ov):
            c = bilinear(u, gram, eu) / bilinear(eu, gram, eu)
            u = [a - c * b for a, b in zip(u, eu)]
            v = [a - c * b for a, b in zip(v, ev)]
        ou.append(u)
        ov.append(v)
    mirrors: List[list] = []

    def apply(x):
        for r in mirrors:
            x = _reflect(x, r, gram)
        return x

    for u, v in zip(ou, ov):
        x = apply(u)
        diff = [a - b for a, b in zip(x, v)]
        if not any(diff):
            continue
        if bilinear(diff, gram, diff):
            mirrors.append(diff)
        else:
            mirrors.append([a + b for a, b in zip(x, v)])
            mirrors.append(list(v))
    return mirrors


def _graph_candidates(C: CartanSpaces, phi0: List[list]) -> Iterator[List[list]]:
    """Graphs of R o phi0 for rational isometries R of a2: signs, then Cayley rotations."""
    hB = C.h_gram
    m = C.a1.dim
    A = C.a1.basis
    Bs = _orthogonal_basis(C.a2.basis, hB)
    a2_gram = [[bilinear(x, hB, y) for y in Bs] for x in Bs]
    coords = [_ortho_coords(Bs, img, hB) for img in phi0]
    rotations: List[Optional[List[List]]] = [None]
    params = _parameters()
    next(params)
    for _ in range(12):
        t = next(params)
        for i in range(m):
            for j in range(i + 1, m):
                rotations.append(_cayley(a2_gram, i, j, t))
    for R in rotations:
        for signs in itertools.product((1, -1), repeat=m):
            vecs = []
            for a, c in zip(A, coords):
                img = [sg * x for sg, x in zip(signs, c)]
                if R is not None:
                    img = [sum((R[p][q] * img[q] for q in range(m)), ZERO) for p in range(m)]
                right = [ZERO] * C.rank
                for q in range(m):
                    if img[q]:
                        right = [x + img[q] * y for x, y in zip(right, Bs[q])]
                vecs.append(list(a) + right)
            yield vecs


def _ortho_coords(basis: Sequence[Sequence], v: Sequence, gram) -> list:
    """Coordinates of v in an orthogonal basis."""
    return [bilinear(v, gram, e) / bilinear(e, gram, e) for e in basis]


def _sqrt_candidates(C: CartanSpaces) -> Iterator[Tuple[List[list], int]]:
    """Fallback: pair orthogonal bases, adjoining one square root if needed."""
    hB = C.h_gram
    m = C.a1.dim
    A = _orthogonal_basis(C.a1.basis, hB)
    Bs = _orthogonal_basis(C.a2.basis, hB)
    na = [bilinear(e, hB, e) for e in A]
    nb = [bilinear(e, hB, e) for e in Bs]
    for pi, d in _pairings(na, nb):
        scales = [sqrt_rational(na[i] / nb[pi[i]]) for i in range(m)]
        for signs in itertools.product((1, -1), repeat=m):
            vecs = []
            for i in range(m):
                right = [signs[i] * scales[i] * y for y in Bs[pi[i]]]
                vecs.append(A[i] + right)
            yield vecs, d


def _lagrangian_candidates(C: CartanSpaces, coroots: Tuple[List[list], List[list]]) -> Iterator[Tuple[List[list], int]]:
    if C.a1.dim == 0:
        yield [], 1
        return
    mirrors = witt_isometry(coroots[0], coroots[1], C.h_gram)
    phi0 = []
    for a in C.a1.basis:
        x = list(a)
        for r in mirrors:
            x = _reflect(x, r, C.h_gram)
        phi0.append(x)
    for vecs in _graph_candidates(C, phi0):
        yield vecs, 1
    yield from _sqrt_candidates(C)


def construct_i_a_prime(C: CartanSpaces) -> Tuple[Subspace, int]:
    """A Q'-Lagrangian subspace of a' satisfying condf; returns (space, d)."""
    if C.a1.dim != C.a2.dim:
        raise ConstructionError(f"a' factors have dimensions {C.a1.dim} and {C.a2.dim}")
    for vecs, d in _lagrangian_candidates(C, C.coroot_pairs):
        space = Subspace(2 * C.rank, vecs, "i_a'")
        if space.dim * 2 == C.a_prime.dim and is_isotropic(space, C.gram) and condf_holds(C, space.basis):
            return space, d
    raise ConstructionError(
        f"no Lagrangian Cartan piece found: dim a'={C.a_prime.dim}, f'={C.f_prime.canonical_key()}"
    )


# ---------------------------------------------------------------------------
# i' = k' + i_a' + n'
# ---------------------------------------------------------------------------

@dataclass
class LagrangianSubalgebra:
    space: Subspace
    triple: BDTriple
    k_prime: Subspace
    i_a_prime: Subspace
    n_prime: Subspace
    sqrt_d: int = 1

    def component_dims(self) -> Tuple[int, int, int]:
        return self.k_prime.dim, self.i_a_prime.dim, self.n_prime.dim


def _span_closure(gens: List[list], bracket, ambient: int) -> Subspace:
    space = Subspace(ambient, gens)
    frontier = list(space.basis)
    while True:
        new = []
        basis = space.basis
        for x in frontier:
            for y in basis:
                z = bracket(x, y)
                if any(z) and not space.contains(z) and not Subspace(ambient, new).contains(z):
                    new.append(z)
        if not new:
            return space
        space = Subspace(ambient, space.basis + new)
        frontier = new


def _in_span(root_coords: Dict[int, int], nodes: Sequence[int]) -> bool:
    allowed = set(nodes)
    return all(j in allowed for j, c in root_coords.items() if c)


def build_i_prime(V: VertexData, T: BDTriple, i_a_prime: Subspace, sqrt_d: int = 1) -> LagrangianSubalgebra:
    L = V.L
    n, l = V.n, L.rank
    zero = [ZERO] * n
    gens = []
    for b, c in T.mapping:
        xb, yb, _ = L.chevalley_triple(L.rs.simple_root(b))
        xc, yc, _ = L.chevalley_triple(L.rs.simple_root(c))
        gens.append(V.pack(xb, xc))
        gens.append(V.pack(yb, yc))
    k_prime = _span_closure(gens, V.bracket, V.ambient) if gens else Subspace(V.ambient, [], "k'")
    cart = []
    for v in i_a_prime.basis:
        cart.append(V.pack(list(v[:l]) + [ZERO] * (n - l), list(v[l:]) + [ZERO] * (n - l)))
    ia = Subspace(V.ambient, cart, "i_a'")
    nvecs = []
    for i in V.la_basis:
        r = L.root_of(i)
        if r is None or V.la_positive(r):
            continue
        coords = V.la_coordinates(r)
        if not _in_span(coords, T.gamma1):
            nvecs.append(V.pack(L.unit(i), zero))
    for r in L.rs.positive_roots:
        coords = {j + 1: c for j, c in enumerate(r)}
        if not _in_span(coords, T.gamma2):
            nvecs.append(V.pack(zero, L.unit(L.root_index[r])))
    n_prime = Subspace(V.ambient, nvecs, "n'")
    space = Subspace(V.ambient, k_prime.basis + ia.basis + n_prime.basis, "i'")
    return LagrangianSubalgebra(space, T, k_prime, ia, n_prime, sqrt_d)


@dataclass
class ManinReport:
    isotropic: bool
    half_dimensional: bool
    subalgebra_closed: bool
    intersection_with_delta_trivial: bool
    sum_with_delta_full: bool
    details: Dict[str, int] = field(default_factory=dict)

    FLAGS = ("isotropic", "half_dimensional", "subalgebra_closed",
             "intersection_with_delta_trivial", "sum_with_delta_full")

    @property
    def ok(self) -> bool:
        return all(getattr(self, f) for f in self.FLAGS)

    def as_dict(self) -> Dict[str, bool]:
        return {f: getattr(self, f) for f in self.FLAGS}


def verify_manin(V: VertexData, l, delta: Optional[Subspace] = None) -> ManinReport:
    space = l.space if isinstance(l, LagrangianSubalgebra) else l
    delta = delta if delta is not None else delta_alpha(V)
    total = rank(space.basis + delta.basis, V.ambient)
    return ManinReport(
        isotropic=is_isotropic(space, V.q_prime_gram),
        half_dimensional=2 * space.dim == V.ambient,
        subalgebra_closed=is_closed(space, V.bracket),
        intersection_with_delta_trivial=total == space.dim + delta.dim,
        sum_with_delta_full=total == V.ambient,
        details={"dim": space.dim, "delta_dim": delta.dim, "sum_rank": total},
    )


def classify_vertex_triple(V: VertexData, T: BDTriple) -> Tuple[LagrangianSubalgebra, ManinReport]:
    C = cartan_spaces(V, T)
    ia, d = construct_i_a_prime(C)
    lag = build_i_prime(V, T, ia, d)
    return lag, verify_manin(V, lag)
