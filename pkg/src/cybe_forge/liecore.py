"""Root systems, Chevalley-type bases and the Casimir element.

Classical algebras are realized by explicit matrices: sl(n+1) as traceless
matrices, o(2n+1), sp(2n), o(2n) as matrices skew with respect to an
anti-diagonal form, so that the Cartan subalgebra is diagonal.  Structure
constants are read off from the matrices.  Exceptional types exist at the
root-system level only.

Conventions
-----------
* Roots are integer tuples in the simple-root basis.
* The inner product is normalized so that long roots have squared length 2.
* ``cartan[i][j] = 2 (a_i, a_j) / (a_i, a_i)``; with this orientation the
  Serre exponents are ``1 - cartan[i][j]``.
* For rank-2 type B the short simple root comes first (theta = 2 a_1 + a_2).
* Basis of g: coroots ``H_1..H_l`` of the simple roots, then one root vector
  per root in ``RootSystem.roots`` order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import ONE, ZERO, rref, solve

Root = Tuple[int, ...]


class UnsupportedAlgebraError(ValueError):
    pass


class DiagramOnlyError(RuntimeError):
    """Raised when a matrix-level operation is requested for a diagram-only algebra."""


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

def _path_inner(n: int, lengths: Sequence[Fraction]) -> List[List[Fraction]]:
    """Inner products for a path diagram a_1 - a_2 - ... with given squared lengths."""
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = Fraction(lengths[i])
    for i in range(n - 1):
        a, b = Fraction(lengths[i]), Fraction(lengths[i + 1])
        # single bond between equal lengths, double bond for length ratio 2
        g[i][i + 1] = g[i + 1][i] = -a / 2 if a == b else -min(a, b)
    return g


def _inner_products(kind: str, n: int) -> List[List[Fraction]]:
    two, one = Fraction(2), Fraction(1)
    if kind == "A":
        return _path_inner(n, [two] * n)
    if kind == "B":
        if n == 2:
            return _path_inner(2, [one, two])
        return _path_inner(n, [two] * (n - 1) + [one])
    if kind == "C":
        return _path_inner(n, [one] * (n - 1) + [two])
    if kind == "D":
        g = _path_inner(n - 1, [two] * (n - 1))
        for row in g:
            row.append(Fraction(0))
        g.append([Fraction(0)] * n)
        g[n - 1][n - 1] = two
        g[n - 3][n - 1] = g[n - 1][n - 3] = Fraction(-1)
        return g
    if kind == "G":
        return [[Fraction(2, 3), Fraction(-1)], [Fraction(-1), two]]
    if kind == "F":
        g = _path_inner(4, [two, two, one, one])
        return g
    if kind == "E":
        # Bourbaki numbering: 1-3-4-5-6-7-8 chain, 2 attached to 4
        g = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = two
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]
        for a, b in edges:
            g[a][b] = g[b][a] = Fraction(-1)
        return g
    raise UnsupportedAlgebraError(f"unknown type {kind!r}")


_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "G": lambda n: n == 2,
    "F": lambda n: n == 4,
    "E": lambda n: n in (6, 7, 8),
}

MATRIX_TYPES = frozenset("ABCD")


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    inner_matrix: Tuple[Tuple[Fraction, ...], ...]
    cartan: Tuple[Tuple[int, ...], ...]
    roots: Tuple[Root, ...]
    positive_roots: Tuple[Root, ...]
    theta: Root
    marks: Tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        g = self.inner_matrix
        return sum((x[i] * g[i][j] * y[j] for i in range(self.rank) if x[i]
                    for j in range(self.rank) if y[j]), Fraction(0))

    def simple_root(self, i: int) -> Root:
        """Simple root a_i for 1 <= i <= rank; i == 0 gives the affine node -theta."""
        if i == 0:
            return tuple(-c for c in self.theta)
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    node = simple_root

    @property
    def extended_nodes(self) -> Tuple[int, ...]:
        return tuple(range(self.rank + 1))

    def node_inner(self, i: int, j: int) -> Fraction:
        return self.inner(self.simple_root(i), self.simple_root(j))

    def extended_diagram_gram(self) -> List[List[Fraction]]:
        return [[self.node_inner(i, j) for j in self.extended_nodes] for i in self.extended_nodes]

    def height(self, r: Sequence[int]) -> int:
        return sum(r)

    def is_root(self, r: Sequence[int]) -> bool:
        return tuple(r) in self._root_set

    @cached_property
    def _root_set(self):
        return frozenset(self.roots)

    def reflect(self, i: int, r: Sequence[int]) -> Root:
        """Simple reflection s_i (1-based) applied to r."""
        a = self.simple_root(i)
        c = 2 * self.inner(r, a) / self.inner(a, a)
        assert c.denominator == 1
        return tuple(x - int(c) * y for x, y in zip(r, a))

    def expected_root_count(self) -> int:
        n = self.rank
        return {
            "A": n * (n + 1),
            "B": 2 * n * n,
            "C": 2 * n * n,
            "D": 2 * n * (n - 1),
            "G": 12,
            "F": 48,
            "E": {6: 72, 7: 126, 8: 240}.get(n, -1),
        }[self.kind]

    @property
    def dimension(self) -> int:
        return self.rank + len(self.roots)


def build_root_system(kind: str, rank: int) -> RootSystem:
    kind = kind.upper()
    if kind not in _VALID_RANKS:
        raise UnsupportedAlgebraError(f"unsupported root system type {kind!r}; expected one of A,B,C,D,G,F,E")
    if not isinstance(rank, int) or not _VALID_RANKS[kind](rank):
        raise UnsupportedAlgebraError(f"rank {rank} is not valid for type {kind}")
    g = _inner_products(kind, rank)
    n = rank
    cartan = tuple(tuple(int(2 * g[i][j] / g[i][i]) for j in range(n)) for i in range(n))

    def inner(x, y):
        return sum((x[i] * g[i][j] * y[j] for i in range(n) if x[i] for j in range(n) if y[j]), Fraction(0))

    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    positive = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for r in layer:
            for i, a in enumerate(simple):
                if r == a:
                    continue
                # length of the a-string below r
                p = 0
                lower = list(r)
                while True:
                    lower = [x - y for x, y in zip(lower, a)]
                    if tuple(lower) in positive:
                        p += 1
                    else:
                        break
                q = p - int(2 * inner(r, a) / g[i][i])
                if q > 0:
                    s = tuple(x + y for x, y in zip(r, a))
                    if s not in positive:
                        positive.add(s)
                        nxt.append(s)
        layer = nxt
    pos = tuple(sorted(positive, key=lambda r: (sum(r), tuple(-x for x in r))))
    roots = pos + tuple(tuple(-x for x in r) for r in pos)
    theta = max(pos, key=sum)
    rs = RootSystem(
        kind=kind,
        rank=rank,
        inner_matrix=tuple(tuple(row) for row in g),
        cartan=cartan,
        roots=roots,
        positive_roots=pos,
        theta=theta,
        marks=tuple(theta),
    )
    if len(roots) != rs.expected_root_count():
        raise AssertionError(f"root generation produced {len(roots)} roots for {rs.label}")
    return rs


def parse_algebra_label(label: str) -> Tuple[str, int]:
    """'B2' -> ('B', 2); also accepts 'sl3', 'o5', 'sp4'."""
    s = label.strip()
    low = s.lower()
    try:
        if low.startswith("sl"):
            return "A", int(low[2:].strip("()")) - 1
        if low.startswith("sp"):
            m = int(low[2:].strip("()"))
            return "C", m // 2
        if low.startswith("so") or low.startswith("o"):
            m = int(low.lstrip("so").strip("()"))
            return ("B", (m - 1) // 2) if m % 2 else ("D", m // 2)
        return s[0].upper(), int(s[1:])
    except ValueError:
        raise UnsupportedAlgebraError(f"cannot parse algebra label {label!r}") from None


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

Matrix = List[List[Fraction]]


def _zeros(m: int) -> Matrix:
    return [[Fraction(0)] * m for _ in range(m)]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    out = _zeros(m)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for k in range(m):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(m):
                    if bk[j]:
                        oi[j] += x * bk[j]
    return out


def _commutator(a: Matrix, b: Matrix) -> Matrix:
    ab = _matmul(a, b)
    ba = _matmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def _trace_product(a: Matrix, b: Matrix) -> Fraction:
    m = len(a)
    return sum((a[i][k] * b[k][i] for i in range(m) for k in range(m) if a[i][k] and b[k][i]), Fraction(0))


def _classical_form(kind: str, n: int) -> Tuple[int, Optional[Matrix]]:
    if kind == "A":
        return n + 1, None
    if kind == "B":
        m = 2 * n + 1
        j = _zeros(m)
        for i in range(m):
            j[i][m - 1 - i] = Fraction(1)
        return m, j
    if kind == "D":
        m = 2 * n
        j = _zeros(m)
        for i in range(m):
            j[i][m - 1 - i] = Fraction(1)
        return m, j
    if kind == "C":
        m = 2 * n
        j = _zeros(m)
        for i in range(n):
            j[i][m - 1 - i] = Fraction(1)
            j[m - 1 - i][i] = Fraction(-1)
        return m, j
    raise DiagramOnlyError(f"no matrix realization for type {kind}")


def _simple_roots_t(kind: str, n: int) -> List[List[Fraction]]:
    """Simple roots as linear functionals on the diagonal coordinates t_k."""
    def unit(k, width):
        return [Fraction(1) if i == k else Fraction(0) for i in range(width)]

    if kind == "A":
        w = n + 1
        return [[a - b for a, b in zip(unit(i, w), unit(i + 1, w))] for i in range(n)]
    chain = [[a - b for a, b in zip(unit(i, n), unit(i + 1, n))] for i in range(n - 1)]
    if kind == "B":
        if n == 2:
            return [unit(1, 2), chain[0]]
        return chain + [unit(n - 1, n)]
    if kind == "C":
        return chain + [[2 * x for x in unit(n - 1, n)]]
    if kind == "D":
        return chain + [[a + b for a, b in zip(unit(n - 2, n), unit(n - 1, n))]]
    raise DiagramOnlyError(kind)


@dataclass
class LieAlgebra:
    """A simple Lie algebra with a fixed basis, structure constants and trace form."""

    rs: RootSystem
    diagram_only: bool = False
    size: int = 0
    matrices: List[Matrix] = field(default_factory=list)
    gram: List[List[Fraction]] = field(default_factory=list)
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = field(default_factory=dict)
    root_index: Dict[Root, int] = field(default_factory=dict)
    coroot_vectors: Dict[Root, List[Fraction]] = field(default_factory=dict)
    root_t: Dict[Root, List[Fraction]] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.rs.dimension

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def label(self) -> str:
        return self.rs.label

    def _require_matrices(self):
        if self.diagram_only:
            raise DiagramOnlyError(f"{self.label} is available at diagram level only")

    # --- basis helpers --------------------------------------------------
    def basis_label(self, i: int) -> str:
        if i < self.rank:
            return f"H{i + 1}"
        r = self.rs.roots[i - self.rank]
        return ("E" if sum(r) > 0 else "F") + "".join(str(abs(c)) for c in r)

    def root_of(self, i: int) -> Optional[Root]:
        return None if i < self.rank else self.rs.roots[i - self.rank]

    def unit(self, i: int) -> List[Fraction]:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def zero(self) -> List[Fraction]:
        return [ZERO] * self.dim

    # --- algebra operations ---------------------------------------------
    def bracket(self, x: Sequence, y: Sequence) -> list:
        self._require_matrices()
        out = [ZERO] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            for j, b in ys:
                t = self.brackets.get((i, j))
                if t:
                    ab = a * b
                    for k, c in t.items():
                        out[k] = out[k] + ab * c
        return out

    def bracket_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        self._require_matrices()
        return self.brackets.get((i, j), {})

    def form(self, x: Sequence, y: Sequence):
        self._require_matrices()
        g = self.gram
        total = ZERO
        for i, a in enumerate(x):
            if a:
                gi = g[i]
                for j, b in enumerate(y):
                    if b and gi[j]:
                        total = total + a * gi[j] * b
        return total

    def matrix_of(self, v: Sequence) -> Matrix:
        self._require_matrices()
        out = _zeros(self.size)
        for k, c in enumerate(v):
            if c:
                mk = self.matrices[k]
                for i in range(self.size):
                    for j in range(self.size):
                        if mk[i][j]:
                            out[i][j] = out[i][j] + c * mk[i][j]
        return out

    def vector_of_matrix(self, m: Sequence[Sequence]) -> list:
        """Coordinates of a matrix in the basis (raises if outside the algebra)."""
        self._require_matrices()
        coeffs = [sum((d[i][j] * m[j][i] for i in range(self.size) for j in range(self.size)
                       if d[i][j] and m[j][i]), ZERO) for d in self._dual_matrices]
        back = self.matrix_of(coeffs)
        for i in range(self.size):
            for j in range(self.size):
                if back[i][j] != m[i][j]:
                    raise ValueError("matrix does not lie in the algebra")
        return coeffs

    def cartan_from_diagonal(self, diag: Sequence) -> list:
        m = [[ZERO] * self.size for _ in range(self.size)]
        for i, x in enumerate(diag):
            m[i][i] = x
        return self.vector_of_matrix(m)

    def root_value(self, root: Sequence[int], h: Sequence) -> object:
        """beta(h) for h in the Cartan part (first rank coordinates)."""
        # beta(H_i) = <beta, a_i^vee> = 2 (beta, a_i)/(a_i, a_i)
        total = ZERO
        for i in range(self.rank):
            if h[i]:
                a = self.rs.simple_root(i + 1)
                total = total + h[i] * (2 * self.rs.inner(root, a) / self.rs.inner(a, a))
        return total

    def coroot(self, root: Sequence[int]) -> List[Fraction]:
        return list(self.coroot_vectors[tuple(root)])

    def chevalley_triple(self, root: Sequence[int]):
        """(X, Y, H) with X in g_root, Y in g_-root, [X, Y] = H, root(H) = 2."""
        self._require_matrices()
        root = tuple(root)
        neg = tuple(-c for c in root)
        x = self.unit(self.root_index[root])
        h = self.coroot(root)
        br = self.bracket(x, self.unit(self.root_index[neg]))
        # br = c * h for some nonzero c
        k = next(i for i, v in enumerate(h) if v)
        c = br[k] / h[k]
        y = [ZERO] * self.dim
        y[self.root_index[neg]] = ONE / c
        return x, y, h

    @cached_property
    def _dual_matrices(self) -> List[Matrix]:
        n = self.dim
        aug = [list(self.gram[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        r, piv = rref(aug, 2 * n)
        assert piv == list(range(n)), "degenerate invariant form"
        ginv = [row[n:] for row in r]
        duals = []
        for k in range(n):
            m = _zeros(self.size)
            for j in range(n):
                c = ginv[k][j]
                if c:
                    mj = self.matrices[j]
                    for a in range(self.size):
                        for b in range(self.size):
                            if mj[a][b]:
                                m[a][b] += c * mj[a][b]
            duals.append(m)
        return duals

    @cached_property
    def gram_inverse(self) -> List[List[Fraction]]:
        n = self.dim
        aug = [list(self.gram[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        r, piv = rref(aug, 2 * n)
        if piv != list(range(n)):
            raise AssertionError("degenerate invariant form")
        return [row[n:] for row in r]


def build_lie_algebra(rs: RootSystem) -> LieAlgebra:
    if rs.kind not in MATRIX_TYPES:
        return LieAlgebra(rs=rs, diagram_only=True)
    kind, n = rs.kind, rs.rank
    m, J = _classical_form(kind, n)
    simple_t = _simple_roots_t(kind, n)
    tw = len(simple_t[0])

    def diag_to_t(i: int) -> List[Fraction]:
        """Functional d_i (i-th diagonal entry) in t-coordinates."""
        v = [Fraction(0)] * tw
        if kind == "A":
            v[i] = Fraction(1)
        elif i < m // 2:
            v[i] = Fraction(1)
        elif i >= m - m // 2:
            v[m - 1 - i] = Fraction(-1)
        return v

    # candidate root vectors
    if J is None:
        def project(i, j):
            e = _zeros(m)
            e[i][j] = Fraction(1)
            return e
    else:
        jinv = [[J[c][r] for c in range(m)] for r in range(m)]  # J is a signed permutation

        def project(i, j):
            e = _zeros(m)
            e[i][j] = Fraction(1)
            et = _zeros(m)
            et[j][i] = Fraction(1)
            corr = _matmul(_matmul(jinv, et), J)
            out = [[e[a][b] - corr[a][b] for b in range(m)] for a in range(m)]
            s = out[i][j]
            if not s:
                return None
            return [[x / s for x in row] for row in out]

    root_vectors: Dict[Root, Matrix] = {}
    root_t: Dict[Root, List[Fraction]] = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            w = [a - b for a, b in zip(diag_to_t(i), diag_to_t(j))]
            if not any(w):
                continue
            coords = solve(simple_t, w)
            if coords is None:
                continue
            assert all(c.denominator == 1 for c in coords)
            r = tuple(int(c) for c in coords)
            if r in root_vectors:
                continue
            mat = project(i, j)
            if mat is None:
                continue
            root_vectors[r] = mat
            root_t[r] = w
    if set(root_vectors) != set(rs.roots):
        raise AssertionError(f"matrix realization of {rs.label} does not match the root system")

    def t_value(w: Sequence[Fraction], h: Matrix) -> Fraction:
        if kind == "A":
            return sum((w[k] * h[k][k] for k in range(tw)), Fraction(0))
        return sum((w[k] * h[k][k] for k in range(tw)), Fraction(0))

    coroot_mats: Dict[Root, Matrix] = {}
    for r in rs.roots:
        neg = tuple(-c for c in r)
        t = _commutator(root_vectors[r], root_vectors[neg])
        c = t_value(root_t[r], t)
        coroot_mats[r] = [[2 * x / c for x in row] for row in t]

    matrices = [coroot_mats[rs.simple_root(i + 1)] for i in range(n)]
    matrices += [root_vectors[r] for r in rs.roots]
    dim = len(matrices)
    gram = [[_trace_product(a, b) for b in matrices] for a in matrices]
    L = LieAlgebra(rs=rs, size=m, matrices=matrices, gram=gram)
    L.root_index = {r: n + k for k, r in enumerate(rs.roots)}
    L.root_t = root_t
    duals = L._dual_matrices

    def coords(mat: Matrix) -> List[Fraction]:
        return [sum((d[a][b] * mat[b][a] for a in range(m) for b in range(m) if d[a][b] and mat[b][a]),
                    Fraction(0)) for d in duals]

    L.coroot_vectors = {r: coords(coroot_mats[r]) for r in rs.roots}
    for i in range(dim):
        for j in range(i + 1, dim):
            c = coords(_commutator(matrices[i], matrices[j]))
            entry = {k: v for k, v in enumerate(c) if v}
            if entry:
                L.brackets[(i, j)] = entry
                L.brackets[(j, i)] = {k: -v for k, v in entry.items()}
    return L


# ---------------------------------------------------------------------------
# Tensors and the Casimir element
# ---------------------------------------------------------------------------

@dataclass
class TensorElement:
    """Sparse element of g^{(x)order}: basis-index tuple -> coefficient."""

    order: int
    terms: Dict[Tuple[int, ...], object] = field(default_factory=dict)

    def add(self, key: Tuple[int, ...], c) -> None:
        if not c:
            return
        v = self.terms.get(key, ZERO) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = TensorElement(self.order, dict(self.terms))
        for k, c in other.terms.items():
            out.add(k, c)
        return out

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.order, {k: v * c for k, v in self.terms.items()} if c else {})

    def flip(self) -> "TensorElement":
        assert self.order == 2
        return TensorElement(2, {(j, i): c for (i, j), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.order == other.order and self.terms == other.terms


@dataclass
class Casimir:
    omega: TensorElement
    omega0: TensorElement
    positive_part: TensorElement  # sum over positive roots of e_a (x) f_a, B(e_a, f_a) = 1


def casimir(L: LieAlgebra) -> Casimir:
    ginv = L.gram_inverse
    omega = TensorElement(2)
    omega0 = TensorElement(2)
    for i in range(L.dim):
        for j in range(L.dim):
            c = ginv[i][j]
            if c:
                omega.add((i, j), c)
                if i < L.rank and j < L.rank:
                    omega0.add((i, j), c)
    pos = TensorElement(2)
    for r in L.rs.positive_roots:
        i = L.root_index[r]
        j = L.root_index[tuple(-c for c in r)]
        pos.add((i, j), ONE / L.gram[i][j])
    return Casimir(omega, omega0, pos)
