"""Grading of g by a simple root, the order model and the split form on L_alpha x g.

Two ambient spaces appear here.

* ``L_alpha x g``: vectors of length ``len(V.la_basis) + dim g``.  The left
  block uses coordinates over the g-basis indices listed in ``V.la_basis``.
* :class:`DoubleWindow`: a truncation of g((u^-1)) x g to u-degrees
  ``-N..M``; coordinates are degree-major, then g-basis index, followed by
  the second factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .liecore import LieAlgebra, Root
from .linalg import ONE, ZERO, Subspace, bilinear, nullspace


class GradingError(ValueError):
    pass


class WindowEscapeError(ArithmeticError):
    """A window bracket produced a u-degree above the window."""


@dataclass
class VertexData:
    L: LieAlgebra
    alpha: int                       # 1-based index of the crossed-out simple root
    k: int                           # mark of alpha
    pieces: Dict[int, List[int]]     # grade -> g-basis indices
    la_basis: List[int]              # g-basis indices spanning L_alpha
    nodes: Tuple[int, ...]           # extended nodes other than alpha
    zeta: Subspace                   # zeta_S inside the Cartan (coroot coordinates)
    la_index: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.la_index = {g: i for i, g in enumerate(self.la_basis)}

    # --- dimensions ------------------------------------------------------
    @property
    def n(self) -> int:
        return self.L.dim

    @property
    def n_la(self) -> int:
        return len(self.la_basis)

    @property
    def ambient(self) -> int:
        return self.n_la + self.n

    def dims(self) -> Tuple[int, ...]:
        return tuple(len(self.pieces[r]) for r in range(-self.k, self.k + 1))

    # --- root bookkeeping ------------------------------------------------
    def grade(self, root: Sequence[int]) -> int:
        return root[self.alpha - 1]

    def la_coordinates(self, root: Sequence[int]) -> Dict[int, int]:
        """Coefficients of an L_alpha root over the nodes Gamma^ext minus alpha."""
        r = self.grade(root)
        if r not in (-self.k, 0, self.k):
            raise GradingError(f"{root} is not a root of L_alpha")
        c0 = -r // self.k
        rest = [x + c0 * t for x, t in zip(root, self.L.rs.theta)]
        out = {0: c0} if c0 else {}
        for j, c in enumerate(rest):
            if c:
                out[j + 1] = c
        assert (self.alpha not in out), "alpha coefficient must vanish"
        return out

    def la_positive(self, root: Sequence[int]) -> bool:
        c = self.la_coordinates(root)
        return all(v >= 0 for v in c.values())

    def la_roots(self) -> List[Root]:
        return [self.L.root_of(i) for i in self.la_basis if i >= self.L.rank]

    def la_simple_roots(self) -> List[Root]:
        """Indecomposable positive roots of L_alpha."""
        pos = [r for r in self.la_roots() if self.la_positive(r)]
        pset = set(pos)
        out = []
        for r in pos:
            if not any(tuple(a - b for a, b in zip(r, s)) in pset for s in pos if s != r):
                out.append(r)
        return out

    # --- L_alpha x g vectors ---------------------------------------------
    def pack(self, left: Sequence, right: Sequence) -> list:
        """(g-vector supported on L_alpha, g-vector) -> ambient coordinates."""
        out = [ZERO] * self.ambient
        for i, c in enumerate(left):
            if c:
                if i not in self.la_index:
                    raise GradingError(f"left component leaves L_alpha at basis {self.L.basis_label(i)}")
                out[self.la_index[i]] = c
        out[self.n_la:] = list(right)
        return out

    def unpack(self, v: Sequence) -> Tuple[list, list]:
        left = [ZERO] * self.n
        for j, g in enumerate(self.la_basis):
            left[g] = v[j]
        return left, list(v[self.n_la:])

    def bracket(self, x: Sequence, y: Sequence) -> list:
        a, b = self.unpack(x)
        c, d = self.unpack(y)
        return self.pack(self.L.bracket(a, c), self.L.bracket(b, d))

    @cached_property
    def q_prime_gram(self) -> List[List]:
        n, m = self.n_la, self.n
        g = [[ZERO] * (n + m) for _ in range(n + m)]
        B = self.L.gram
        for i, gi in enumerate(self.la_basis):
            for j, gj in enumerate(self.la_basis):
                g[i][j] = B[gi][gj]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = -B[i][j]
        return g


def alpha_grading(L: LieAlgebra, alpha: int) -> VertexData:
    """Grade g by the coefficient of the simple root alpha (1-based)."""
    L._require_matrices()
    rs = L.rs
    if not isinstance(alpha, int) or not 1 <= alpha <= rs.rank:
        raise GradingError(f"alpha must be a simple root index in 1..{rs.rank}, got {alpha!r}")
    k = rs.marks[alpha - 1]
    pieces: Dict[int, List[int]] = {r: [] for r in range(-k, k + 1)}
    pieces[0].extend(range(rs.rank))
    for r in rs.roots:
        pieces[r[alpha - 1]].append(L.root_index[r])
    la_basis = sorted(set(pieces[-k] + pieces[0] + pieces[k]))
    nodes = tuple(j for j in rs.extended_nodes if j != alpha)
    S = [rs.simple_root(j) for j in range(1, rs.rank + 1) if j != alpha]
    rows = [[L.root_value(b, [ONE if i == c else ZERO for i in range(rs.rank)]) for c in range(rs.rank)]
            for b in S]
    zeta = Subspace(rs.rank, nullspace(rows, rs.rank) if rows else Subspace.full(rs.rank).basis, "zeta_S")
    return VertexData(L=L, alpha=alpha, k=k, pieces=pieces, la_basis=la_basis, nodes=nodes, zeta=zeta)


def q_prime(V: VertexData, x: Sequence, y: Sequence):
    """B(a, c) - B(b, d) for x = (a, b), y = (c, d)."""
    return bilinear(x, V.q_prime_gram, y)


def delta_alpha(V: VertexData) -> Subspace:
    """Pairs (a, b), a in g_0 + g_-k, b in g_0 + ... + g_-k, with equal g_0 parts."""
    vecs = []
    n = V.n
    for i in V.pieces[-V.k]:
        vecs.append(V.pack(V.L.unit(i), [ZERO] * n))
    for r in range(1, V.k + 1):
        for i in V.pieces[-r]:
            vecs.append(V.pack([ZERO] * n, V.L.unit(i)))
    for i in V.pieces[0]:
        e = V.L.unit(i)
        vecs.append(V.pack(e, e))
    return Subspace(V.ambient, vecs, "delta_alpha")


# ---------------------------------------------------------------------------
# The truncated double
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleWindow:
    L: LieAlgebra
    N: int = 2
    M: int = 1

    def __post_init__(self):
        if self.N < 2:
            raise GradingError(f"window needs N >= 2 (got N={self.N}); use N=2")
        if self.M < 1:
            raise GradingError(f"window needs M >= 1 (got M={self.M})")

    @property
    def degrees(self) -> range:
        return range(-self.N, self.M + 1)

    @property
    def loop_dim(self) -> int:
        return len(self.degrees) * self.L.dim

    @property
    def dim(self) -> int:
        return self.loop_dim + self.L.dim

    def index(self, deg: int, i: int) -> int:
        if not -self.N <= deg <= self.M:
            raise WindowEscapeError(f"degree {deg} outside window [-{self.N}, {self.M}]")
        return (deg + self.N) * self.L.dim + i

    def second(self, i: int) -> int:
        return self.loop_dim + i

    def element(self, loop: Dict[int, Sequence], const: Optional[Sequence] = None) -> list:
        """Window vector from {degree: g-vector} and a second-factor g-vector."""
        v = [ZERO] * self.dim
        n = self.L.dim
        for d, x in loop.items():
            if d < -self.N:
                continue
            base = self.index(d, 0)
            v[base:base + n] = [a + b for a, b in zip(v[base:base + n], x)]
        if const is not None:
            v[self.loop_dim:] = list(const)
        return v

    def split(self, v: Sequence) -> Tuple[Dict[int, list], list]:
        n = self.L.dim
        loop = {}
        for d in self.degrees:
            base = self.index(d, 0)
            part = list(v[base:base + n])
            if any(part):
                loop[d] = part
        return loop, list(v[self.loop_dim:])

    def from_polynomial(self, coeffs: Dict[int, Sequence]) -> list:
        """Image of a polynomial x(u) in g[u] under x -> (x(u), x(0))."""
        zero = [ZERO] * self.L.dim
        return self.element(dict(coeffs), coeffs.get(0, zero))

    @cached_property
    def gram(self) -> List[List]:
        return _window_gram(self.L, self.N, self.M)

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """Window bracket; degrees below -N are dropped, nonzero degrees above M raise."""
        lx, cx = self.split(x)
        ly, cy = self.split(y)
        out: Dict[int, list] = {}
        for d1, a in lx.items():
            for d2, b in ly.items():
                d = d1 + d2
                if d < -self.N:
                    continue
                br = self.L.bracket(a, b)
                prev = out.get(d)
                out[d] = br if prev is None else [s + t for s, t in zip(prev, br)]
        for d, part in out.items():
            if d > self.M and any(part):
                raise WindowEscapeError(f"bracket reaches degree {d} > {self.M}")
        return self.element({d: v for d, v in out.items() if d <= self.M}, self.L.bracket(cx, cy))

    def polynomial_subspace(self) -> Subspace:
        """Window image of g[u] (degrees 0..M)."""
        vecs = []
        for d in range(0, self.M + 1):
            for i in range(self.L.dim):
                vecs.append(self.from_polynomial({d: self.L.unit(i)}))
        return Subspace(self.dim, vecs, "g[u]")

    def low_subspace(self, below: int) -> Subspace:
        """u^below g[[u^-1]] x 0 inside the window."""
        vecs = [
            self.element({d: self.L.unit(i)}) for d in range(-self.N, below + 1) for i in range(self.L.dim)
        ]
        return Subspace(self.dim, vecs, f"u^{below}g[[u^-1]]")


def _window_gram(L: LieAlgebra, N: int, M: int) -> List[List]:
    n = L.dim
    degs = list(range(-N, M + 1))
    size = len(degs) * n + n
    g = [[ZERO] * size for _ in range(size)]
    B = L.gram
    for a, d1 in enumerate(degs):
        for b, d2 in enumerate(degs):
            if d1 + d2:
                continue
            for i in range(n):
                row = g[a * n + i]
                for j in range(n):
                    if B[i][j]:
                        row[b * n + j] = B[i][j]
    base = len(degs) * n
    for i in range(n):
        for j in range(n):
            if B[i][j]:
                g[base + i][base + j] = -B[i][j]
    return g


def q_form(window: DoubleWindow, x: Sequence, y: Sequence):
    return bilinear(x, window.gram, y)


def _degree_caps(V: VertexData, model: str) -> Dict[int, Optional[int]]:
    """Highest allowed u-degree for each grade (None means absent)."""
    k = V.k
    caps: Dict[int, Optional[int]] = {}
    for r in range(-k, k + 1):
        if model == "order":
            # union reading: a grade listed by several terms keeps the widest range
            allowed = []
            if 1 <= r <= k:
                allowed.append(-1)
            if 1 - k <= r <= 0:
                allowed.append(0)
            if r == -k:
                allowed.append(1)
            caps[r] = max(allowed) if allowed else None
        else:
            allowed = []
            if -k <= r <= -1:
                allowed.append(0)
            if 0 <= r <= k - 1:
                allowed.append(-1)
            if r == k:
                allowed.append(-2)
            caps[r] = max(allowed) if allowed else None
    return caps


def _graded_window_space(V: VertexData, window: DoubleWindow, caps, with_second: bool, tag: str) -> Subspace:
    if window.L is not V.L:
        raise GradingError("window and vertex data belong to different algebras")
    vecs = []
    for r, cap in caps.items():
        if cap is None:
            continue
        if cap > window.M:
            raise GradingError(f"window needs M >= {cap}")
        for d in range(-window.N, cap + 1):
            for i in V.pieces[r]:
                vecs.append(window.element({d: V.L.unit(i)}))
    if with_second:
        for i in range(V.n):
            vecs.append(window.element({}, V.L.unit(i)))
    return Subspace(window.dim, vecs, tag)


def order_model(V: VertexData, window: DoubleWindow) -> Subspace:
    """Window image of O_alpha x g."""
    return _graded_window_space(V, window, _degree_caps(V, "order"), True, "O_alpha x g")


def order_model_perp(V: VertexData, window: DoubleWindow) -> Subspace:
    """Closed-form Q-orthogonal of the order model inside the window."""
    return _graded_window_space(V, window, _degree_caps(V, "perp"), False, "perp(O_alpha x g)")


def computed_perp(space: Subspace, window: DoubleWindow) -> Subspace:
    return space.perp(window.gram)


def quotient_iso_sigma(V: VertexData, window: DoubleWindow, x: Sequence) -> list:
    """sigma((f, a)) = (g_k part of f_-1 + g_0 part of f_0 + g_-k part of f_1, a)."""
    if not order_model(V, window).contains(x):
        raise GradingError("element is not in the order model")
    loop, const = window.split(x)
    left = [ZERO] * V.n
    for deg, grade in ((-1, V.k), (0, 0), (1, -V.k)):
        coeffs = loop.get(deg)
        if coeffs is None:
            continue
        for i in V.pieces[grade]:
            left[i] = left[i] + coeffs[i]
    return V.pack(left, const)


def sigma_lift(V: VertexData, window: DoubleWindow, y: Sequence) -> list:
    """A preimage of y in L_alpha x g under sigma."""
    left, right = V.unpack(y)
    loop: Dict[int, list] = {}
    for deg, grade in ((-1, V.k), (0, 0), (1, -V.k)):
        part = [ZERO] * V.n
        for i in V.pieces[grade]:
            part[i] = left[i]
        if any(part):
            prev = loop.get(deg)
            loop[deg] = part if prev is None else [a + b for a, b in zip(prev, part)]
    return window.element(loop, right)


def is_closed(space: Subspace, bracket) -> bool:
    b = space.basis
    return all(space.contains(bracket(b[i], b[j])) for i in range(len(b)) for j in range(i + 1, len(b)))
