"""Presentations of U(g[u]) and U_q(g[u]) and generator-level Hopf checks.

Letters are short strings: ``k1``/``K1`` for k_{alpha_1}^{+1}/k_{alpha_1}^{-1},
``e1``/``f1`` for e_{+alpha_1}/e_{-alpha_1}, ``e0`` for e_{delta-theta},
``k0``/``K0`` for k_{delta-theta}^{+1}/k_{delta-theta}^{-1}, and ``h1`` for
the classical Cartan generators.  The classical h_i acts on e_j by
(alpha_i, alpha_j).

Coefficients live in Q(s) with q = s^m; m is the least integer making every
q-exponent (beta, gamma) integral (m = 1 for types A, B, D).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.fields import field as frac_field

from .liecore import RootSystem

Word = Tuple[str, ...]


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

class QScalar:
    """The field Q(s) with q = s**m."""

    def __init__(self, m: int = 1):
        self.m = m
        self.name = "q" if m == 1 else "s"
        self.K, self.s = frac_field(self.name, QQ)
        self.one = self.K.one
        self.zero = self.K.zero

    def q_power(self, c) -> object:
        e = Fraction(c) * self.m
        if e.denominator != 1:
            raise ValueError(f"q-exponent {c} needs m divisible by {e.denominator}")
        return self.s ** int(e)

    @property
    def q(self):
        return self.s ** self.m

    def const(self, c) -> object:
        c = Fraction(c)
        return self.K(QQ(c.numerator, c.denominator))

    def fmt(self, x) -> str:
        return str(x.as_expr()) if hasattr(x, "as_expr") else str(x)

    def hbar_series(self, poly_elem, order: int) -> List[Fraction]:
        """Coefficients of s -> exp(hbar/m) applied to a polynomial in s, up to hbar^order."""
        out = [Fraction(0)] * (order + 1)
        for (e,), c in poly_elem.terms():
            c = Fraction(int(c.numerator), int(c.denominator))
            x = Fraction(e, self.m)
            for r in range(order + 1):
                out[r] += c * x ** r / factorial(r)
        return out


def _exponent_denominator(rs: RootSystem) -> int:
    m = 1
    for row in rs.inner_matrix:
        for x in row:
            m = lcm(m, Fraction(x).denominator)
    return m


# ---------------------------------------------------------------------------
# Noncommutative polynomials
# ---------------------------------------------------------------------------

class NCPoly:
    """Sparse noncommutative polynomial: word -> coefficient."""

    __slots__ = ("F", "terms")

    def __init__(self, F, terms: Optional[Dict[Word, object]] = None):
        self.F = F
        self.terms: Dict[Word, object] = {}
        for w, c in (terms or {}).items():
            self._add(w, c)

    def _add(self, w: Word, c) -> None:
        if not c:
            return
        v = self.terms.get(w, self.F.zero) + c
        if v:
            self.terms[w] = v
        else:
            self.terms.pop(w, None)

    @classmethod
    def word(cls, F, *letters: str, coeff=None) -> "NCPoly":
        return cls(F, {tuple(letters): F.one if coeff is None else coeff})

    @classmethod
    def one(cls, F) -> "NCPoly":
        return cls(F, {(): F.one})

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = NCPoly(self.F, self.terms)
        for w, c in other.terms.items():
            out._add(w, c)
        return out

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.F, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        return NCPoly(self.F, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        out = NCPoly(self.F)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._add(w1 + w2, c1 * c2)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def to_json(self) -> List[dict]:
        return [{"coeff": self.F.fmt(c), "word": list(w)} for w, c in sorted(self.terms.items())]

    def __repr__(self):
        parts = [f"({self.F.fmt(c)})*{'*'.join(w) or '1'}" for w, c in sorted(self.terms.items())]
        return " + ".join(parts) or "0"


def _letter(x: str) -> Tuple[str, int]:
    return x[0], int(x[1:])


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass
class Relation:
    tag: str
    poly: NCPoly
    meta: Dict[str, object] = field(default_factory=dict)


@dataclass
class Presentation:
    rs: RootSystem
    mode: str
    F: QScalar
    generators: List[str]
    relations: List[Relation]
    k0_marks: Tuple[int, ...]           # k_{delta-theta} = prod k_i^{-n_i}
    coproduct: Dict[str, List[Tuple[Word, Word, object]]] = field(default_factory=dict)
    antipode: Dict[str, NCPoly] = field(default_factory=dict)
    counit: Dict[str, object] = field(default_factory=dict)

    def weight(self, letter: str) -> Tuple[int, ...]:
        """Finite part of the weight (delta dropped)."""
        kind, i = _letter(letter)
        l = self.rs.rank
        if kind == "e" and i == 0:
            return tuple(-t for t in self.rs.theta)
        if kind in "ef":
            sgn = 1 if kind == "e" else -1
            return tuple(sgn if j == i - 1 else 0 for j in range(l))
        return (0,) * l

    def inner(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return self.rs.inner(x, y)

    def relation(self, tag: str) -> Relation:
        for r in self.relations:
            if r.tag == tag:
                return r
        raise KeyError(tag)

    def tags(self) -> List[str]:
        return [r.tag for r in self.relations]

    def k0_identity(self) -> str:
        parts = [f"k_{i + 1}^{{{-n}}}" for i, n in enumerate(self.k0_marks) if n]
        return "k_{delta-theta} = " + " ".join(parts)

    def to_json(self) -> List[dict]:
        return [{"tag": r.tag, "monomials": r.poly.to_json()} for r in self.relations]


def serre_exponent(rs: RootSystem, i: int, j: int) -> int:
    return 1 - rs.cartan[i - 1][j - 1]


def affine_exponent(rs: RootSystem, i: int) -> int:
    a = rs.simple_root(i)
    v = 1 + 2 * rs.inner(a, rs.theta) / rs.inner(a, a)
    assert v.denominator == 1
    return int(v)


def _homogeneous_commutator(P: Presentation, x: NCPoly, wx, y: NCPoly, wy, quantum: bool) -> NCPoly:
    """[x, y]_q = x y - q^{(wx, wy)} y x (plain commutator in classical mode)."""
    c = P.F.q_power(P.inner(wx, wy)) if quantum else P.F.one
    return x * y - (y * x).scale(c)


def _ad_power(P: Presentation, a: str, b: str, n: int, quantum: bool) -> NCPoly:
    F = P.F
    wa = P.weight(a)
    cur, wcur = NCPoly.word(F, b), P.weight(b)
    for _ in range(n):
        cur = _homogeneous_commutator(P, NCPoly.word(F, a), wa, cur, wcur, quantum)
        wcur = tuple(x + y for x, y in zip(wcur, wa))
    return cur


def generate_presentation(rs: RootSystem, mode: str = "quantum") -> Presentation:
    if mode not in ("quantum", "classical"):
        raise ValueError(f"mode must be 'quantum' or 'classical', got {mode!r}")
    quantum = mode == "quantum"
    F = QScalar(_exponent_denominator(rs) if quantum else 1)
    l = rs.rank
    idx = range(1, l + 1)
    if quantum:
        gens = [f"k{i}" for i in idx] + [f"K{i}" for i in idx]
    else:
        gens = [f"h{i}" for i in idx]
    gens += [f"e{i}" for i in idx] + [f"f{i}" for i in idx] + ["e0"]
    if quantum:
        gens += ["k0", "K0"]
    P = Presentation(rs, mode, F, gens, [], tuple(rs.theta))
    W = lambda *ls: NCPoly.word(F, *ls)  # noqa: E731
    rels = P.relations
    sl2 = rs.kind == "A" and l == 1

    def ip(x, y):
        return rs.inner(x, y)

    for i in idx:
        for j in idx:
            ai, aj = rs.simple_root(i), rs.simple_root(j)
            if quantum:
                if i < j:
                    for a, b in ((f"k{i}", f"k{j}"), (f"k{i}", f"K{j}"), (f"K{i}", f"k{j}"), (f"K{i}", f"K{j}")):
                        rels.append(Relation(f"k-commute:{a}:{b}", W(a, b) - W(b, a), {"classical": f"h-commute:{i}:{j}"}))
                c = ip(ai, aj)
                rels.append(Relation(f"k-conjugate:e:{i}:{j}",
                                     W(f"k{i}", f"e{j}", f"K{i}") - W(f"e{j}").scale(F.q_power(c)),
                                     {"classical": f"h-action:e:{i}:{j}"}))
                rels.append(Relation(f"k-conjugate:f:{i}:{j}",
                                     W(f"k{i}", f"f{j}", f"K{i}") - W(f"f{j}").scale(F.q_power(-c)),
                                     {"classical": f"h-action:f:{i}:{j}"}))
                bracket = W(f"e{i}", f"f{j}") - W(f"f{j}", f"e{i}")
                if i == j:
                    inv = F.one / (F.q - F.one / F.q)
                    bracket = bracket - (W(f"k{i}") - W(f"K{i}")).scale(inv)
                rels.append(Relation(f"e-f-bracket:{i}:{j}", bracket, {"classical": f"e-f-bracket:{i}:{j}"}))
            else:
                if i < j:
                    rels.append(Relation(f"h-commute:{i}:{j}", W(f"h{i}", f"h{j}") - W(f"h{j}", f"h{i}")))
                c = F.const(ip(ai, aj))
                for kind, sgn in (("e", 1), ("f", -1)):
                    rels.append(Relation(f"h-action:{kind}:{i}:{j}",
                                         W(f"h{i}", f"{kind}{j}") - W(f"{kind}{j}", f"h{i}")
                                         - W(f"{kind}{j}").scale(c * sgn)))
                bracket = W(f"e{i}", f"f{j}") - W(f"f{j}", f"e{i}")
                if i == j:
                    bracket = bracket - W(f"h{i}")
                rels.append(Relation(f"e-f-bracket:{i}:{j}", bracket))
        if quantum:
            rels.append(Relation(f"k-inverse:{i}", W(f"k{i}", f"K{i}") - NCPoly.one(F), {"classical": None}))
            rels.append(Relation(f"k-inverse-left:{i}", W(f"K{i}", f"k{i}") - NCPoly.one(F), {"classical": None}))
    for i in idx:
        for j in idx:
            if i == j:
                continue
            n = serre_exponent(rs, i, j)
            for kind in ("e", "f"):
                sign = "+" if kind == "e" else "-"
                poly = _ad_power(P, f"{kind}{i}", f"{kind}{j}", n, quantum)
                tag = f"{'q-serre' if quantum else 'serre'}:{sign}:{i}:{j}"
                rels.append(Relation(tag, poly, {"n": n, "classical": f"serre:{sign}:{i}:{j}"}))
    for i in idx:
        ai = rs.simple_root(i)
        c = ip(ai, rs.theta)
        if quantum:
            rels.append(Relation(f"k-conjugate-affine:{i}",
                                 W(f"k{i}", "e0", f"K{i}") - W("e0").scale(F.q_power(-c)),
                                 {"classical": f"h-action-affine:{i}"}))
        else:
            rels.append(Relation(f"h-action-affine:{i}",
                                 W(f"h{i}", "e0") - W("e0", f"h{i}") + W("e0").scale(F.const(c))))
        rels.append(Relation(f"f-affine-commute:{i}", W(f"f{i}", "e0") - W("e0", f"f{i}"),
                             {"classical": f"f-affine-commute:{i}"}))
        n0 = affine_exponent(rs, i)
        rels.append(Relation(f"affine-serre:{i}", _ad_power(P, f"e{i}", "e0", n0, quantum),
                             {"n": n0, "classical": f"affine-serre:{i}"}))
        if not sl2 and c != 0:
            inner = _homogeneous_commutator(P, W(f"e{i}"), P.weight(f"e{i}"), W("e0"), P.weight("e0"), quantum)
            w_inner = tuple(x + y for x, y in zip(P.weight(f"e{i}"), P.weight("e0")))
            # the delta parts of both weights are null and orthogonal to everything
            poly = _homogeneous_commutator(P, inner, w_inner, W("e0"), P.weight("e0"), quantum)
            rels.append(Relation(f"affine-cubic:{i}", poly, {"classical": f"affine-cubic:{i}"}))
    if sl2:
        cur = _homogeneous_commutator(P, W("e1"), P.weight("e1"), W("e0"), P.weight("e0"), quantum)
        wcur = tuple(x + y for x, y in zip(P.weight("e1"), P.weight("e0")))
        for _ in range(2):
            cur = _homogeneous_commutator(P, cur, wcur, W("e0"), P.weight("e0"), quantum)
            wcur = tuple(x + y for x, y in zip(wcur, P.weight("e0")))
        rels.append(Relation("sl2-quartic", cur, {"classical": "sl2-quartic"}))
    if quantum:
        _hopf_tables(P)
    return P


def _hopf_tables(P: Presentation) -> None:
    F = P.F
    one = F.one
    for i in range(1, P.rs.rank + 1):
        k, K, e, f = f"k{i}", f"K{i}", f"e{i}", f"f{i}"
        P.coproduct[k] = [((k,), (k,), one)]
        P.coproduct[K] = [((K,), (K,), one)]
        P.coproduct[f] = [((f,), (k,), one), ((), (f,), one)]
        P.coproduct[e] = [((e,), (), one), ((K,), (e,), one)]
        P.antipode[k] = NCPoly.word(F, K)
        P.antipode[K] = NCPoly.word(F, k)
        P.antipode[f] = NCPoly.word(F, f, K, coeff=-one)
        P.antipode[e] = NCPoly.word(F, k, e, coeff=-one)
        P.counit.update({k: one, K: one, e: F.zero, f: F.zero})
    P.coproduct["k0"] = [(("k0",), ("k0",), one)]
    P.coproduct["K0"] = [(("K0",), ("K0",), one)]
    P.coproduct["e0"] = [(("e0",), (), one), (("K0",), ("e0",), one)]
    P.antipode["k0"] = NCPoly.word(F, "K0")
    P.antipode["K0"] = NCPoly.word(F, "k0")
    P.antipode["e0"] = NCPoly.word(F, "k0", "e0", coeff=-one)
    P.counit.update({"k0": one, "K0": one, "e0": F.zero})


# ---------------------------------------------------------------------------
# Rewriting (k-commutation fragment only)
# ---------------------------------------------------------------------------

def _is_k(x: str) -> bool:
    return x[0] in "kK"


def _k_key(x: str) -> Tuple[int, int]:
    kind, i = _letter(x)
    return i, 0 if kind == "k" else 1


class Rewriter:
    """k-letters move to the right, get sorted, and cancel against inverses.

    Rules on a word, leftmost match first:
      k0 -> K1^n1 ... Kl^nl and K0 -> k1^n1 ... kl^nl (marks of theta)
      k x -> q^{+-(alpha_i, wt x)} x k for a k-letter followed by a non-k letter
      k_i K_i -> 1, K_i k_i -> 1
      a b -> b a for k-letters out of order
    The measure (k0 count, k/non-k inversions, k count, k/k inversions)
    decreases lexicographically at every step.
    """

    def __init__(self, P: Presentation):
        if P.mode != "quantum":
            raise ValueError("rewriting is defined for the quantum presentation")
        self.P = P
        self.F = P.F
        self._cache: Dict[Word, Dict[Word, object]] = {}

    def step(self, w: Word, pos: int) -> Optional[Dict[Word, object]]:
        """Apply the rule matching at position pos; None if nothing matches there."""
        F, P = self.F, self.P
        x = w[pos]
        if x in ("k0", "K0"):
            kind = "K" if x == "k0" else "k"
            rep = tuple(f"{kind}{i + 1}" for i, n in enumerate(P.k0_marks) for _ in range(n))
            return {w[:pos] + rep + w[pos + 1:]: F.one}
        if pos + 1 >= len(w):
            return None
        y = w[pos + 1]
        if y in ("k0", "K0"):
            return None
        if _is_k(x) and not _is_k(y):
            kind, i = _letter(x)
            c = P.inner(P.rs.simple_root(i), P.weight(y))
            if kind == "K":
                c = -c
            return {w[:pos] + (y, x) + w[pos + 2:]: F.q_power(c)}
        if _is_k(x) and _is_k(y):
            (kx, ix), (ky, iy) = _letter(x), _letter(y)
            if ix == iy and kx != ky:
                return {w[:pos] + w[pos + 2:]: F.one}
            if _k_key(x) > _k_key(y):
                return {w[:pos] + (y, x) + w[pos + 2:]: F.one}
        return None

    def one_step(self, w: Word) -> Optional[Dict[Word, object]]:
        for pos in range(len(w)):
            r = self.step(w, pos)
            if r is not None:
                return r
        return None

    def normal_word(self, w: Word) -> Dict[Word, object]:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        r = self.one_step(w)
        if r is None:
            out = {w: self.F.one}
        else:
            out = {}
            for w2, c in r.items():
                for w3, c3 in self.normal_word(w2).items():
                    v = out.get(w3, self.F.zero) + c * c3
                    if v:
                        out[w3] = v
                    else:
                        out.pop(w3, None)
        self._cache[w] = out
        return out

    def normal_form(self, p: NCPoly) -> NCPoly:
        out = NCPoly(self.F)
        for w, c in p.terms.items():
            for w2, c2 in self.normal_word(w).items():
                out._add(w2, c * c2)
        return out

    def critical_pairs(self, max_length: int = 3) -> List[Word]:
        """Words where two different one-step rewrites reach different normal forms."""
        bad = []
        alphabet = self.P.generators
        for n in range(1, max_length + 1):
            for w in itertools.product(alphabet, repeat=n):
                results = []
                for pos in range(len(w)):
                    r = self.step(w, pos)
                    if r is not None:
                        results.append(self.normal_form(NCPoly(self.F, r)))
                if any(res != results[0] for res in results[1:]):
                    bad.append(w)
        return bad


def rewrite_normal_form(p, P: Presentation) -> NCPoly:
    if isinstance(p, (tuple, list)):
        p = NCPoly.word(P.F, *p)
    return Rewriter(P).normal_form(p)


# ---------------------------------------------------------------------------
# Hopf structure on generators
# ---------------------------------------------------------------------------

Tensor = Dict[Tuple[Word, ...], object]


def _tadd(acc: Tensor, key, c, F) -> None:
    if not c:
        return
    v = acc.get(key, F.zero) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _coproduct_word(P: Presentation, w: Word) -> Tensor:
    F = P.F
    acc: Tensor = {((), ()): F.one}
    for x in w:
        nxt: Tensor = {}
        for (a, b), c in acc.items():
            for (a2, b2, c2) in P.coproduct[x]:
                _tadd(nxt, (a + a2, b + b2), c * c2, F)
        acc = nxt
    return acc


def _apply_slot(P: Presentation, t: Tensor, slot: int, fn) -> Tensor:
    """Replace the word in one tensor slot by fn(word) -> Tensor over two slots."""
    out: Tensor = {}
    for key, c in t.items():
        for sub, c2 in fn(key[slot]).items():
            _tadd(out, key[:slot] + sub + key[slot + 1:], c * c2, P.F)
    return out


def _counit_word(P: Presentation, w: Word):
    c = P.F.one
    for x in w:
        c = c * P.counit[x]
    return c


def _antipode_word(P: Presentation, w: Word) -> NCPoly:
    out = NCPoly.one(P.F)
    for x in reversed(w):
        out = out * P.antipode[x]
    return out


def _normal_tensor(R: Rewriter, t: Tensor) -> Tensor:
    F = R.F
    out: Tensor = {}
    for key, c in t.items():
        parts = [R.normal_word(w) for w in key]
        for combo in itertools.product(*[list(p.items()) for p in parts]):
            coeff = c
            for _, cc in combo:
                coeff = coeff * cc
            _tadd(out, tuple(w for w, _ in combo), coeff, F)
    return out


@dataclass
class HopfReport:
    results: Dict[str, Dict[str, bool]]

    @property
    def ok(self) -> bool:
        return all(all(v.values()) for v in self.results.values())

    def failures(self) -> List[str]:
        return [f"{g}:{k}" for g, r in self.results.items() for k, v in r.items() if not v]


def check_hopf_on_generators(P: Presentation) -> HopfReport:
    if P.mode != "quantum":
        raise ValueError("Hopf checks need the quantum presentation")
    R = Rewriter(P)
    F = P.F
    results: Dict[str, Dict[str, bool]] = {}
    for g in P.generators:
        d = _coproduct_word(P, (g,))
        left = _apply_slot(P, d, 0, lambda w: _coproduct_word(P, w))
        right = _apply_slot(P, d, 1, lambda w: _coproduct_word(P, w))
        coassoc = _normal_tensor(R, left) == _normal_tensor(R, right)
        x = R.normal_form(NCPoly.word(F, g))
        eps_left = NCPoly(F)
        eps_right = NCPoly(F)
        for (a, b), c in d.items():
            eps_left = eps_left + NCPoly(F, {b: c * _counit_word(P, a)})
            eps_right = eps_right + NCPoly(F, {a: c * _counit_word(P, b)})
        unit = NCPoly(F, {(): P.counit[g]})
        s_left = NCPoly(F)
        s_right = NCPoly(F)
        for (a, b), c in d.items():
            s_left = s_left + (_antipode_word(P, a) * NCPoly(F, {b: c}))
            s_right = s_right + (NCPoly(F, {a: c}) * _antipode_word(P, b))
        results[g] = {
            "coassociative": coassoc,
            "counit_left": R.normal_form(eps_left) == x,
            "counit_right": R.normal_form(eps_right) == x,
            "antipode_left": R.normal_form(s_left) == R.normal_form(unit),
            "antipode_right": R.normal_form(s_right) == R.normal_form(unit),
        }
    return HopfReport(results)


def counit_of_relations(P: Presentation) -> Dict[str, bool]:
    """epsilon applied to each relation by substitution; True means it gives 0."""
    out = {}
    for r in P.relations:
        total = P.F.zero
        for w, c in r.poly.terms.items():
            total = total + c * _counit_word(P, w)
        out[r.tag] = not total
    return out


# ---------------------------------------------------------------------------
# Classical limit
# ---------------------------------------------------------------------------

FPoly = Dict[Word, Fraction]


def _hbar_expand_letter(P: Presentation, x: str, order: int) -> List[FPoly]:
    """Series of a letter in hbar: k_i -> exp(hbar h_i), others fixed."""
    out: List[FPoly] = [dict() for _ in range(order + 1)]
    kind, i = _letter(x)
    if kind not in "kK":
        out[0][(x,)] = Fraction(1)
        return out
    if i == 0:
        # k_{delta-theta} = prod k_j^{-n_j} -> exp(-hbar sum n_j h_j)
        sign = -1 if kind == "k" else 1
        lin = {(f"h{j + 1}",): Fraction(sign * n) for j, n in enumerate(P.k0_marks) if n}
    else:
        lin = {(f"h{i}",): Fraction(1 if kind == "k" else -1)}
    power: FPoly = {(): Fraction(1)}
    for r in range(order + 1):
        for w, c in power.items():
            out[r][w] = out[r].get(w, 0) + c / factorial(r)
        nxt: FPoly = {}
        for w, c in power.items():
            for w2, c2 in lin.items():
                nxt[w + w2] = nxt.get(w + w2, 0) + c * c2
        power = nxt
    return out


def _series_mul(a: List[FPoly], b: List[FPoly], order: int) -> List[FPoly]:
    out: List[FPoly] = [dict() for _ in range(order + 1)]
    for i, pa in enumerate(a):
        for j, pb in enumerate(b):
            if i + j > order:
                continue
            tgt = out[i + j]
            for w1, c1 in pa.items():
                for w2, c2 in pb.items():
                    v = tgt.get(w1 + w2, 0) + c1 * c2
                    if v:
                        tgt[w1 + w2] = v
                    else:
                        tgt.pop(w1 + w2, None)
    return out


def hbar_expansion(P: Presentation, poly: NCPoly, order: int = 3) -> List[FPoly]:
    """Series in hbar of a quantum relation after clearing coefficient denominators."""
    F = P.F
    denom = None
    for c in poly.terms.values():
        denom = c.denom if denom is None else denom.lcm(c.denom)
    out: List[FPoly] = [dict() for _ in range(order + 1)]
    for w, c in poly.terms.items():
        c2 = c * F.K(denom)
        coeffs = [x / _ground(c2.denom) for x in F.hbar_series(c2.numer, order)]
        series: List[FPoly] = [{(): coeffs[r]} if coeffs[r] else {} for r in range(order + 1)]
        for x in w:
            series = _series_mul(series, _hbar_expand_letter(P, x, order), order)
        for r in range(order + 1):
            for w2, v in series[r].items():
                nv = out[r].get(w2, 0) + v
                if nv:
                    out[r][w2] = nv
                else:
                    out[r].pop(w2, None)
    return out


def _as_fpoly(P: Presentation, poly: NCPoly) -> FPoly:
    out: FPoly = {}
    for w, c in poly.terms.items():
        out[w] = _ground(c.numer) / _ground(c.denom)
    return out


def _ground(p) -> Fraction:
    if not p.is_ground:
        raise ValueError("coefficient is not a constant")
    g = p.LC
    return Fraction(int(g.numerator), int(g.denominator))


def _proportional(a: FPoly, b: FPoly) -> bool:
    if set(a) != set(b) or not a:
        return False
    w = next(iter(a))
    ratio = a[w] / b[w]
    return all(a[x] == ratio * b[x] for x in a)


@dataclass
class LimitReport:
    results: Dict[str, Dict[str, object]]

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.results.values())


def classical_limit_check(rs: RootSystem, order: int = 3) -> LimitReport:
    """Lowest nonzero hbar order of each quantum relation against its classical partner."""
    Pq = generate_presentation(rs, "quantum")
    Pc = generate_presentation(rs, "classical")
    classical = {r.tag: _as_fpoly(Pc, r.poly) for r in Pc.relations}
    results: Dict[str, Dict[str, object]] = {}
    for rel in Pq.relations:
        target = rel.meta.get("classical")
        series = hbar_expansion(Pq, rel.poly, order)
        lowest = next((r for r, s in enumerate(series) if s), None)
        if target is None:
            results[rel.tag] = {"ok": lowest is None, "order": lowest, "classical": None}
            continue
        ok = lowest is not None and _proportional(series[lowest], classical[target])
        results[rel.tag] = {"ok": ok, "order": lowest, "classical": target}
    return LimitReport(results)
