"""Exact dense linear algebra over Q or Q(sqrt(d)).

Vectors are plain lists of field elements.  Everything reduces to one
Gauss-Jordan routine; :class:`Subspace` keeps its basis in reduced row
echelon form so equal subspaces have identical bases.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import format_scalar

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)} in a {ncols}-column matrix")
    pivots: list[int] = []
    top = 0
    for c in range(ncols):
        if top == len(m):
            break
        piv = None
        for i in range(top, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[top], m[piv] = m[piv], m[top]
        prow = m[top]
        inv = ONE / prow[c]
        if inv != 1:
            prow = [x * inv if x else ZERO for x in prow]
            m[top] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(m)):
            if i == top:
                continue
            row = m[i]
            f = row[c]
            if not f:
                continue
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        top += 1
    return m[:top], pivots


def rank(rows: Iterable[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {x : M x = 0}."""
    r, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [ZERO] * ncols
        v[fcol] = ONE
        for row, p in zip(r, pivots):
            if row[fcol]:
                v[p] = -row[fcol]
        basis.append(v)
    return basis


def solve(columns: Sequence[Sequence], target: Sequence):
    """Coefficients c with sum_i c_i * columns[i] == target, or None."""
    n = len(target)
    k = len(columns)
    aug = [[columns[i][row] for i in range(k)] + [target[row]] for row in range(n)]
    r, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    c = [ZERO] * k
    for row, p in zip(r, pivots):
        c[p] = row[k]
    return c


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in m]


def bilinear(x: Sequence, gram: Sequence[Sequence], y: Sequence):
    total = ZERO
    for i, xi in enumerate(x):
        if not xi:
            continue
        gi = gram[i]
        for j, yj in enumerate(y):
            if yj and gi[j]:
                total = total + xi * gi[j] * yj
    return total


def is_zero(v: Sequence) -> bool:
    return not any(v)


class Subspace:
    """A linear subspace of k^n stored as a canonical RREF basis."""

    __slots__ = ("ambient", "basis", "pivots", "tag")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = (), tag: str = ""):
        self.ambient = ambient
        self.basis, self.pivots = rref(vectors, ambient)
        self.tag = tag

    @classmethod
    def full(cls, ambient: int, tag: str = "") -> "Subspace":
        return cls(ambient, [[ONE if i == j else ZERO for j in range(ambient)] for i in range(ambient)], tag)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> list:
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                for j in range(p, self.ambient):
                    if row[j]:
                        v[j] = v[j] - f * row[j]
        return v

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence) -> list:
        """Coordinates in the canonical basis; raises if v is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [v[p] for p in self.pivots]

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, self.basis + other.basis)

    def annihilator(self) -> "Subspace":
        """Orthogonal complement for the standard dot product."""
        return Subspace(self.ambient, nullspace(self.basis, self.ambient))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def perp(self, gram: Sequence[Sequence]) -> "Subspace":
        """{x : b(s, x) = 0 for all s in self} for the form with this Gram matrix."""
        rows = [[sum((s[i] * gram[i][j] for i in range(self.ambient) if s[i] and gram[i][j]), ZERO)
                 for j in range(self.ambient)] for s in self.basis]
        return Subspace(self.ambient, nullspace(rows, self.ambient) if rows else Subspace.full(self.ambient).basis)

    def _check(self, other: "Subspace") -> None:
        if other.ambient != self.ambient:
            raise ValueError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash(self.canonical_key())

    def canonical_key(self) -> str:
        return ";".join(",".join(format_scalar(x) for x in row) for row in self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}{', ' + self.tag if self.tag else ''})"


def is_isotropic(space: Subspace, gram: Sequence[Sequence]) -> bool:
    b = space.basis
    return all(not bilinear(b[i], gram, b[j]) for i in range(len(b)) for j in range(i, len(b)))
