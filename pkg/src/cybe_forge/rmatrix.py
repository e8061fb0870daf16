"""Quasi-trigonometric solutions X(u, v) = v Omega / (u - v) + p(u, v).

Only the polynomial part p is stored, as a sparse map
``(i, j, deg_u, deg_v) -> scalar`` over the basis of g.  Subalgebras W of
g((u^-1)) x g are handled inside a :class:`~cybe_forge.grading.DoubleWindow`.

Dictionary between the two sides: with p_(k,a) = (u^k e_a, [k == 0] e_a) the
window image of g[u], and I^a the B-dual basis, the Q-dual of p_(k,a) in W
is (F, F_0 - [k == 0] I^a) where F(u) is the coefficient of v^k (x) e_a in
X(u, v).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .grading import (DoubleWindow, VertexData, WindowEscapeError, is_closed, order_model_perp,
                      sigma_lift)
from .liecore import LieAlgebra, casimir
from .linalg import ONE, ZERO, Subspace, bilinear, is_isotropic, rank, solve
from .manin import LagrangianSubalgebra, verify_manin
from .scalar import format_scalar, parse_scalar

PKey = Tuple[int, int, int, int]
Poly = Dict[Tuple[int, ...], object]


class NotUnitaryError(ValueError):
    pass


class NoSolutionError(ValueError):
    """The subalgebra is not a Lagrangian complement of g[u]."""


class GaugeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Small polynomial helpers (dict exponent-tuple -> coefficient)
# ---------------------------------------------------------------------------

def _padd(acc: Poly, other: Poly, scale=ONE) -> None:
    for e, c in other.items():
        v = acc.get(e, ZERO) + c * scale
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, ZERO) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _linear(nvars: int, plus: int, minus: int) -> Poly:
    """x_plus - x_minus."""
    e1 = tuple(1 if i == plus else 0 for i in range(nvars))
    e2 = tuple(1 if i == minus else 0 for i in range(nvars))
    return {e1: ONE, e2: -ONE}


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------

@dataclass
class QuasiTrigSolution:
    L: LieAlgebra
    p: Dict[PKey, object] = field(default_factory=dict)

    def add(self, i: int, j: int, du: int, dv: int, c) -> None:
        if not c:
            return
        key = (i, j, du, dv)
        v = self.p.get(key, ZERO) + c
        if v:
            self.p[key] = v
        else:
            self.p.pop(key, None)

    def copy(self) -> "QuasiTrigSolution":
        return QuasiTrigSolution(self.L, dict(self.p))

    def __add__(self, other: "QuasiTrigSolution") -> "QuasiTrigSolution":
        out = self.copy()
        for (i, j, a, b), c in other.p.items():
            out.add(i, j, a, b, c)
        return out

    def __sub__(self, other: "QuasiTrigSolution") -> "QuasiTrigSolution":
        out = self.copy()
        for (i, j, a, b), c in other.p.items():
            out.add(i, j, a, b, -c)
        return out

    def __eq__(self, other):
        return isinstance(other, QuasiTrigSolution) and self.p == other.p

    @property
    def degrees(self) -> Tuple[int, int]:
        if not self.p:
            return (0, 0)
        return max(k[2] for k in self.p), max(k[3] for k in self.p)

    def pairs(self) -> Dict[Tuple[int, int], Dict[Tuple[int, int], object]]:
        out: Dict[Tuple[int, int], Dict[Tuple[int, int], object]] = {}
        for (i, j, a, b), c in self.p.items():
            out.setdefault((i, j), {})[(a, b)] = c
        return out

    def swapped(self) -> "QuasiTrigSolution":
        """p^21(v, u)."""
        return QuasiTrigSolution(self.L, {(j, i, b, a): c for (i, j, a, b), c in self.p.items()})

    def to_json(self) -> List[dict]:
        return [
            {"left_basis_index": i, "right_basis_index": j, "deg_u": a, "deg_v": b, "scalar": format_scalar(c)}
            for (i, j, a, b), c in sorted(self.p.items())
        ]

    @classmethod
    def from_json(cls, L: LieAlgebra, data: Iterable[dict]) -> "QuasiTrigSolution":
        out = cls(L)
        for rec in data:
            out.add(int(rec["left_basis_index"]), int(rec["right_basis_index"]),
                    int(rec["deg_u"]), int(rec["deg_v"]), parse_scalar(str(rec["scalar"])))
        return out


def standard_r3(L: LieAlgebra) -> QuasiTrigSolution:
    """p = sum e_a (x) f_a + Omega_0 / 2."""
    cas = casimir(L)
    X = QuasiTrigSolution(L)
    for (i, j), c in cas.positive_part.terms.items():
        X.add(i, j, 0, 0, c)
    for (i, j), c in cas.omega0.terms.items():
        X.add(i, j, 0, 0, c / 2)
    return X


def omega_solution(L: LieAlgebra) -> QuasiTrigSolution:
    """Omega as a constant polynomial tensor."""
    X = QuasiTrigSolution(L)
    for (i, j), c in casimir(L).omega.terms.items():
        X.add(i, j, 0, 0, c)
    return X


def unitarity_defect(X: QuasiTrigSolution) -> QuasiTrigSolution:
    """p(u, v) + p^21(v, u) - Omega; zero iff X(u,v) + X^21(v,u) = 0."""
    return X + X.swapped() - omega_solution(X.L)


def is_unitary(X: QuasiTrigSolution) -> bool:
    return not unitarity_defect(X).p


# ---------------------------------------------------------------------------
# CYBE
# ---------------------------------------------------------------------------

def _numerators(X: QuasiTrigSolution):
    """N12, N13, N23 as {(a, b): poly in (u, v, w)}, with X^ij = N_ij / (x_i - x_j)."""
    omega = casimir(X.L).omega.terms
    pairs = X.pairs()
    out = []
    for (s, t) in ((0, 1), (0, 2), (1, 2)):
        diff = _linear(3, s, t)
        N: Dict[Tuple[int, int], Poly] = {}
        for (a, b), c in omega.items():
            e = tuple(1 if i == t else 0 for i in range(3))
            N.setdefault((a, b), {})[e] = c
        for (a, b), mono in pairs.items():
            poly: Poly = {}
            for (du, dv), c in mono.items():
                e = [0, 0, 0]
                e[s] += du
                e[t] += dv
                poly[tuple(e)] = c
            _padd(N.setdefault((a, b), {}), _pmul(poly, diff))
        out.append({k: v for k, v in N.items() if v})
    return out


def _bracket_term(L: LieAlgebra, A, B, slot: str, factor: Poly) -> Dict[Tuple[int, int, int], Poly]:
    acc: Dict[Tuple[int, int, int], Poly] = {}
    br = L.brackets
    for (a, b), P in A.items():
        for (c, d), R in B.items():
            if slot == "13":            # [a,c] (x) b (x) d
                t = br.get((a, c))
                if not t:
                    continue
                keys = [((k, b, d), v) for k, v in t.items()]
            elif slot == "12-23":       # a (x) [b,c] (x) d
                t = br.get((b, c))
                if not t:
                    continue
                keys = [((a, k, d), v) for k, v in t.items()]
            else:                       # a (x) c (x) [b,d]
                t = br.get((b, d))
                if not t:
                    continue
                keys = [((a, c, k), v) for k, v in t.items()]
            prod = _pmul(P, R)
            for key, v in keys:
                _padd(acc.setdefault(key, {}), prod, v)
    return {k: _pmul(v, factor) for k, v in acc.items() if v}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CYBE_FORGE_THREADS", "1")))
    except ValueError:
        return 1


def cyb_residual(X: QuasiTrigSolution) -> Dict[Tuple[int, int, int], Poly]:
    """(u-v)(u-w)(v-w) CYB(X) as a map from basis triples to polynomials in (u, v, w)."""
    L = X.L
    N12, N13, N23 = _numerators(X)
    jobs = [
        (N12, N13, "13", _linear(3, 1, 2)),
        (N12, N23, "12-23", _linear(3, 0, 2)),
        (N13, N23, "13-23", _linear(3, 0, 1)),
    ]
    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, 3)) as ex:
            parts = list(ex.map(lambda j: _bracket_term(L, *j), jobs))
    else:
        parts = [_bracket_term(L, *j) for j in jobs]
    total: Dict[Tuple[int, int, int], Poly] = {}
    for part in parts:
        for key, poly in part.items():
            _padd(total.setdefault(key, {}), poly)
    return {k: v for k, v in total.items() if v}


def verify_cybe(X: QuasiTrigSolution) -> bool:
    return not cyb_residual(X)


# ---------------------------------------------------------------------------
# The W correspondence
# ---------------------------------------------------------------------------

@dataclass
class WSubalgebra:
    space: Subspace
    window: DoubleWindow

    @property
    def N(self) -> int:
        return self.window.N

    def __eq__(self, other):
        return isinstance(other, WSubalgebra) and self.space == other.space


def _dual_basis(L: LieAlgebra) -> List[list]:
    return [list(row) for row in L.gram_inverse]


def polynomial_basis(window: DoubleWindow) -> List[Tuple[int, int, list]]:
    """[(k, a, window image of u^k e_a)] for 0 <= k <= M."""
    L = window.L
    return [(k, a, window.from_polynomial({k: L.unit(a)})) for k in range(window.M + 1) for a in range(L.dim)]


def subalgebra_from_solution(X: QuasiTrigSolution, window: Optional[DoubleWindow] = None) -> WSubalgebra:
    L = X.L
    window = window or DoubleWindow(L)
    if not is_unitary(X):
        raise NotUnitaryError("X(u,v) + X^21(v,u) does not vanish")
    du, dv = X.degrees
    if du > window.M or dv > window.M:
        raise WindowEscapeError(f"polynomial part has degrees ({du}, {dv}); window allows {window.M}")
    duals = _dual_basis(L)
    coeffs: Dict[Tuple[int, int], Dict[int, list]] = {}
    for (i, j, a, b), c in X.p.items():
        vec = coeffs.setdefault((b, j), {}).setdefault(a, [ZERO] * L.dim)
        vec[i] = vec[i] + c
    vecs = []
    for k in range(window.M + 1):
        for a in range(L.dim):
            F = {d: list(v) for d, v in coeffs.get((k, a), {}).items()}
            if k >= 1 and -k >= -window.N:
                F[-k] = [x + y for x, y in zip(F.get(-k, [ZERO] * L.dim), duals[a])]
            const = list(F.get(0, [ZERO] * L.dim))
            if k == 0:
                const = [x - y for x, y in zip(const, duals[a])]
            vecs.append(window.element(F, const))
    vecs.extend(window.low_subspace(-window.N).basis)
    return WSubalgebra(Subspace(window.dim, vecs, "W"), window)


def w_conditions(W: WSubalgebra) -> Dict[str, bool]:
    """The three conditions of the correspondence, checked in the window."""
    win = W.window
    P = win.polynomial_subspace()
    low = win.low_subspace(-win.N)
    total = rank(W.space.basis + P.basis, win.dim)
    try:
        closed = is_closed(W.space, win.bracket)
    except WindowEscapeError:
        closed = False
    return {
        "contains_low": W.space.contains_space(low),
        "isotropic": is_isotropic(W.space, win.gram),
        "lagrangian_dimension": 2 * W.space.dim == win.dim + low.dim,
        "transversal_to_polynomials": total == win.dim and W.space.dim + P.dim == win.dim,
        "subalgebra": closed,
    }


def _decompose(W: Subspace, P: Subspace, x: Sequence) -> Tuple[list, list]:
    """x = w + p with w in W, p in P."""
    cols = W.basis + P.basis
    c = solve(cols, x)
    if c is None:
        raise NoSolutionError("W + g[u] does not span the window")
    nW = len(W.basis)
    w = [ZERO] * len(x)
    p = [ZERO] * len(x)
    for idx, coef in enumerate(c):
        if not coef:
            continue
        target, vec = (w, W.basis[idx]) if idx < nW else (p, P.basis[idx - nW])
        for t, v in enumerate(vec):
            if v:
                target[t] = target[t] + coef * v
    return w, p


def _q_duals(space: Subspace, window: DoubleWindow) -> List[list]:
    """Elements w_j of the space with Q(w_j, p_i) = delta_ij for the g[u] basis p_i."""
    pb = polynomial_basis(window)
    G = window.gram
    pair_cols = [[bilinear(b, G, p) for _, _, p in pb] for b in space.basis]
    out = []
    for j in range(len(pb)):
        target = [ONE if i == j else ZERO for i in range(len(pb))]
        c = solve(pair_cols, target)
        if c is None:
            raise NoSolutionError("subalgebra does not pair nondegenerately with g[u]")
        w = [ZERO] * window.dim
        for coef, vec in zip(c, space.basis):
            if coef:
                w = [a + coef * b for a, b in zip(w, vec)]
        out.append(w)
    return out


def solution_from_subalgebra(W: WSubalgebra, L: Optional[LieAlgebra] = None) -> QuasiTrigSolution:
    """Twist route: X = r_3 + s with s read off the graph map from W_3 to W over g[u]."""
    win = W.window
    L = L or win.L
    cond = w_conditions(W)
    if not (cond["transversal_to_polynomials"] and cond["contains_low"]):
        raise NoSolutionError(f"W is not a complement of g[u]: {cond}")
    if not (cond["isotropic"] and cond["lagrangian_dimension"]):
        raise NoSolutionError(f"W is not Lagrangian: {cond}")
    r3 = standard_r3(L)
    W3 = subalgebra_from_solution(r3, win)
    P = win.polynomial_subspace()
    pb = polynomial_basis(win)
    s = QuasiTrigSolution(L)
    for (k, a, _), w3 in zip(pb, _q_duals(W3.space, win)):
        _, l0 = _decompose(W.space, P, w3)
        loop, const = win.split(l0)
        for d, vec in loop.items():
            if d < 0:
                raise NoSolutionError("graph map left g[u]")
            for i, c in enumerate(vec):
                if c:
                    s.add(i, a, d, k, -c)
    if not is_antisymmetric(s):
        raise AssertionError("twist is not antisymmetric; W is not Lagrangian")
    return r3 + s


def solution_from_subalgebra_dual(W: WSubalgebra, L: Optional[LieAlgebra] = None) -> QuasiTrigSolution:
    """Cross-check: read p directly from the Q-duals of the g[u] basis inside W."""
    win = W.window
    L = L or win.L
    duals = _dual_basis(L)
    X = QuasiTrigSolution(L)
    for (k, a, _), w in zip(polynomial_basis(win), _q_duals(W.space, win)):
        loop, _ = win.split(w)
        if k >= 1 and -k in loop:
            loop[-k] = [x - y for x, y in zip(loop[-k], duals[a])]
        for d, vec in loop.items():
            if d == -win.N:
                continue            # ambiguous modulo the radical
            if d < 0 and any(vec):
                raise NoSolutionError("dual element has a non-polynomial tail")
            for i, c in enumerate(vec):
                if c:
                    X.add(i, a, d, k, c)
    return X


def is_antisymmetric(s: QuasiTrigSolution) -> bool:
    return not (s + s.swapped()).p


def lift_i_prime_to_W(V: VertexData, l, window: Optional[DoubleWindow] = None) -> WSubalgebra:
    """sigma-preimage of a Lagrangian subalgebra of L_alpha x g."""
    window = window or DoubleWindow(V.L)
    rep = verify_manin(V, l)
    if not rep.ok:
        raise NoSolutionError(f"Lagrangian subalgebra failed verification: {rep.as_dict()}")
    space = l.space if isinstance(l, LagrangianSubalgebra) else l
    perp = order_model_perp(V, window)
    vecs = perp.basis + [sigma_lift(V, window, y) for y in space.basis]
    return WSubalgebra(Subspace(window.dim, vecs, "W"), window)


def solution_for_vertex(V: VertexData, l, window: Optional[DoubleWindow] = None) -> QuasiTrigSolution:
    return solution_from_subalgebra(lift_i_prime_to_W(V, l, window), V.L)


# ---------------------------------------------------------------------------
# Gauge action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpFactor:
    """exp(ad(c u^m x)) for a root vector x (basis index)."""
    index: int
    c: object
    m: int = 0


@dataclass(frozen=True)
class TorusFactor:
    """Acts on e_beta by prod t_i^beta_i, trivially on the Cartan."""
    t: Tuple[object, ...]


UPoly = Dict[int, list]     # u-degree -> g-vector


def _act_exp(L: LieAlgebra, f: ExpFactor, x: UPoly) -> UPoly:
    if L.root_of(f.index) is None:
        raise GaugeError("exponent must be a root vector; ad of a Cartan element is not nilpotent")
    out: UPoly = {}
    for d, vec in x.items():
        term = list(vec)
        k = 0
        power = ONE
        while any(term):
            scale = power / factorial(k)
            power = power * f.c
            deg = d + f.m * k
            acc = out.setdefault(deg, [ZERO] * L.dim)
            out[deg] = [a + scale * b for a, b in zip(acc, term)]
            term = L.bracket(L.unit(f.index), term)
            k += 1
            if k > 2 * L.rs.rank + 4 * max(sum(r) for r in L.rs.positive_roots):
                raise GaugeError("adjoint series did not terminate")
    return {d: v for d, v in out.items() if any(v)}


def _act_torus(L: LieAlgebra, f: TorusFactor, x: UPoly) -> UPoly:
    if len(f.t) != L.rank or any(not c for c in f.t):
        raise GaugeError("torus factor needs one nonzero scalar per simple root")
    out: UPoly = {}
    for d, vec in x.items():
        new = list(vec)
        for i, c in enumerate(vec):
            r = L.root_of(i)
            if c and r is not None:
                s = ONE
                for ti, e in zip(f.t, r):
                    s = s * (ti ** e if e >= 0 else (ONE / ti) ** (-e))
                new[i] = c * s
        out[d] = new
    return out


def gauge_apply_element(L: LieAlgebra, factors: Sequence, x: UPoly) -> UPoly:
    """sigma(u) x(u), with the gauge factors applied right to left."""
    for f in reversed(list(factors)):
        if isinstance(f, ExpFactor):
            x = _act_exp(L, f, x)
        elif isinstance(f, TorusFactor):
            x = _act_torus(L, f, x)
        else:
            raise GaugeError(f"unknown gauge factor {f!r}")
    return x


def _gauge_images(L: LieAlgebra, factors) -> List[UPoly]:
    return [gauge_apply_element(L, factors, {0: L.unit(i)}) for i in range(L.dim)]


def _divide_by_u_minus_v(P: Poly) -> Poly:
    """Exact quotient of a polynomial in (u, v) by (u - v)."""
    if not P:
        return {}
    top = max(e[0] for e in P)
    # coefficient of u^d as a polynomial in v
    cols: List[Dict[int, object]] = [dict() for _ in range(top + 1)]
    for (du, dv), c in P.items():
        cols[du][dv] = c
    Q: Poly = {}
    carry: Dict[int, object] = {}
    for d in range(top, 0, -1):
        q = dict(cols[d])
        for e, c in carry.items():
            q[e] = q.get(e, ZERO) + c
        q = {e: c for e, c in q.items() if c}
        for e, c in q.items():
            Q[(d - 1, e)] = c
        carry = {e + 1: c for e, c in q.items()}
    rem = dict(cols[0])
    for e, c in carry.items():
        rem[e] = rem.get(e, ZERO) + c
    if any(rem.values()):
        raise ArithmeticError("polynomial is not divisible by u - v")
    return Q


def apply_gauge(X: QuasiTrigSolution, factors: Sequence) -> QuasiTrigSolution:
    """Y(u, v) = (sigma(u) (x) sigma(v)) X(u, v), returned in quasi-trigonometric form."""
    L = X.L
    images = _gauge_images(L, factors)

    def transform(terms: Dict[Tuple[int, int], Poly]) -> Dict[Tuple[int, int], Poly]:
        out: Dict[Tuple[int, int], Poly] = {}
        for (a, b), poly in terms.items():
            for da, va in images[a].items():
                for i, ca in enumerate(va):
                    if not ca:
                        continue
                    for db, vb in images[b].items():
                        for j, cb in enumerate(vb):
                            if not cb:
                                continue
                            shifted = {(e[0] + da, e[1] + db): c * ca * cb for e, c in poly.items()}
                            _padd(out.setdefault((i, j), {}), shifted)
        return {k: v for k, v in out.items() if v}

    omega = {(a, b): {(0, 0): c} for (a, b), c in casimir(L).omega.terms.items()}
    p_terms: Dict[Tuple[int, int], Poly] = {}
    for (a, b), mono in X.pairs().items():
        p_terms[(a, b)] = dict(mono)
    new_omega = transform(omega)
    new_p = transform(p_terms)
    Y = QuasiTrigSolution(L)
    for key in set(new_omega) | set(omega):
        diff = dict(new_omega.get(key, {}))
        _padd(diff, omega.get(key, {}), -ONE)
        if not diff:
            continue
        q = _divide_by_u_minus_v(diff)
        for (du, dv), c in q.items():
            Y.add(key[0], key[1], du, dv + 1, c)
    for (i, j), poly in new_p.items():
        for (du, dv), c in poly.items():
            Y.add(i, j, du, dv, c)
    return Y


def gauge_window(W: WSubalgebra, factors: Sequence) -> WSubalgebra:
    """Image of W under sigma(u) on the loop factor and sigma(0) on the second factor."""
    win = W.window
    L = win.L
    vecs = []
    for v in W.space.basis:
        loop, const = win.split(v)
        img = gauge_apply_element(L, factors, loop) if loop else {}
        zero_factors = [ExpFactor(f.index, f.c if f.m == 0 else ZERO, 0) if isinstance(f, ExpFactor) else f
                        for f in factors]
        cimg = gauge_apply_element(L, zero_factors, {0: const}).get(0, [ZERO] * L.dim) if any(const) else const
        vecs.append(win.element(img, cimg))
    return WSubalgebra(Subspace(win.dim, vecs, "W"), win)
