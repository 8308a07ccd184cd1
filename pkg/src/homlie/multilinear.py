"""Sparse exterior algebra over a finite-dimensional space.

Basis ``k``-vectors are strictly increasing index tuples (0-based), ordered
lexicographically; every sign comes from sorting a concatenated tuple.  A
:class:`MultiVector` lives in ``∧^k g`` and a :class:`MultiForm` in ``∧^k g*``;
the pairing ``<e_I, e^J>`` is the determinant pairing, i.e. ``δ_IJ`` on the
canonical bases.

Interior products slot forms from the left: ``contract(w, [ξ, η])`` is
``ι_η ι_ξ w``, so ``<contract(w, [ξ, η]), θ> = <w, ξ∧η∧θ>``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .scalars import canonical

if TYPE_CHECKING:
    from .algebra import HomLieAlgebra

__all__ = [
    "DimensionMismatch",
    "MultiVector",
    "MultiForm",
    "wedge_basis",
    "sort_sign",
    "wedge",
    "wedge_all",
    "extend_map",
    "apply_map",
    "extended_bracket",
    "contract",
    "pairing",
]


class DimensionMismatch(ValueError):
    pass


def wedge_basis(n: int, k: int) -> list[tuple[int, ...]]:
    """Lexicographic basis of ``∧^k`` of an ``n``-dimensional space."""
    return list(combinations(range(n), k))


def sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort counts transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


class MultiVector:
    """Homogeneous element of ``∧^k`` with sparse canonical coordinates."""

    __slots__ = ("degree", "dim", "terms")
    _letter = "e"

    def __init__(self, dim: int, degree: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], object] = {}
        for idx, c in (terms or {}).items():
            c = canonical(c)
            if c == 0:
                continue
            if len(idx) != degree:
                raise DimensionMismatch(f"index {idx} does not have degree {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise DimensionMismatch(f"index {idx} out of range for dimension {dim}")
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            c = clean.get(key, 0) + sign * c
            if c == 0:
                clean.pop(key, None)
            else:
                clean[key] = c
        self.terms = dict(sorted(clean.items()))

    # -- constructors -------------------------------------------------------
    @classmethod
    def basis(cls, dim: int, *idx: int, coef=1):
        return cls(dim, len(idx), {tuple(idx): coef})

    @classmethod
    def from_vector(cls, coords: Sequence):
        return cls(len(coords), 1, {(i,): c for i, c in enumerate(coords)})

    @classmethod
    def from_coords(cls, dim: int, degree: int, coords: Sequence):
        """Inverse of :meth:`coords` (dense coordinates over ``wedge_basis``)."""
        return cls(dim, degree, dict(zip(wedge_basis(dim, degree), coords)))

    @classmethod
    def zero(cls, dim: int, degree: int):
        return cls(dim, degree)

    # -- coordinates --------------------------------------------------------
    def coords(self) -> np.ndarray:
        basis = wedge_basis(self.dim, self.degree)
        return linalg.vector(self.terms.get(b, 0) for b in basis)

    def coefficient(self, *idx: int):
        sign, key = sort_sign(idx)
        return sign * self.terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    # -- vector space structure ---------------------------------------------
    def _check(self, other: "MultiVector"):
        if type(self) is not type(other) or self.dim != other.dim or self.degree != other.degree:
            raise DimensionMismatch("incompatible multivectors")

    def __add__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return type(self)(self.dim, self.degree, terms)

    def __neg__(self):
        return type(self)(self.dim, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, MultiVector):
            return NotImplemented
        return type(self)(self.dim, self.degree, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return (type(self) is type(other) and self.dim == other.dim
                and (self.degree == other.degree or (not self.terms and not other.terms))
                and self.terms == other.terms)

    def __hash__(self):
        return hash((type(self).__name__, self.dim, self.degree, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0, dim={self.dim}, degree={self.degree})"
        parts = []
        for idx, c in self.terms.items():
            basis = "∧".join(f"{self._letter}{i + 1}" for i in idx) or "1"
            parts.append(f"({c})*{basis}")
        return " + ".join(parts)


class MultiForm(MultiVector):
    """Element of ``∧^k g*`` over the dual basis ``e^i``."""

    __slots__ = ()
    _letter = "e^"


def wedge(u: MultiVector, v: MultiVector) -> MultiVector:
    if type(u) is not type(v) or u.dim != v.dim:
        raise DimensionMismatch("wedge of multivectors over different spaces")
    terms: dict[tuple[int, ...], object] = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            sign, key = sort_sign(a + b)
            if sign:
                terms[key] = terms.get(key, 0) + sign * ca * cb
    return type(u)(u.dim, u.degree + v.degree, terms)


def wedge_all(vectors: Iterable[MultiVector], dim: int, cls=MultiVector) -> MultiVector:
    out = cls(dim, 0, {(): 1})
    for v in vectors:
        out = wedge(out, v)
    return out


def _minor_det(f: np.ndarray, rows: tuple[int, ...], cols: tuple[int, ...]):
    if len(rows) == 1:
        return f[rows[0], cols[0]]
    if len(rows) == 2:
        (r0, r1), (c0, c1) = rows, cols
        return f[r0, c0] * f[r1, c1] - f[r0, c1] * f[r1, c0]
    return linalg.det(f[np.ix_(rows, cols)])


def extend_map(f: np.ndarray, k: int) -> np.ndarray:
    """Matrix of ``f∧…∧f`` on ``∧^k`` in the lexicographic wedge basis (the k-th compound)."""
    f = np.asarray(f, dtype=object)
    n = f.shape[0]
    if f.shape != (n, n):
        raise DimensionMismatch("extend_map needs a square matrix")
    basis = wedge_basis(n, k)
    out = linalg.zeros(len(basis), len(basis))
    if k == 0:
        out[0, 0] = Fraction(1)
        return out
    for j, cols in enumerate(basis):
        for i, rows in enumerate(basis):
            out[i, j] = canonical(_minor_det(f, rows, cols))
    return out


def apply_map(f: np.ndarray, w: MultiVector) -> MultiVector:
    """Apply ``f`` degreewise: ``f(x1∧…∧xk) = f(x1)∧…∧f(xk)``."""
    f = np.asarray(f, dtype=object)
    if f.shape[1] != w.dim:
        raise DimensionMismatch("map and multivector dimensions differ")
    target = f.shape[0]
    out = type(w)(target, w.degree)
    for idx, c in w.terms.items():
        term = wedge_all((type(w).from_vector(f[:, i]) for i in idx), target, type(w))
        out = out + term * c
    return out


def extended_bracket(a: MultiVector, b: MultiVector, g: "HomLieAlgebra") -> MultiVector:
    """Bracket of ``∧^m g`` with ``∧^n g`` landing in ``∧^{m+n-1} g``.

    On decomposables ``[x1∧…∧xm, y1∧…∧yn] = Σ (-1)^{i+j} [xi, yj] ∧ φ(x̂i, ŷj)``
    with ``i, j`` counted from 1 and the hatted factors kept in order
    (remaining x's, then remaining y's).
    """
    if a.dim != g.dim or b.dim != g.dim:
        raise DimensionMismatch("multivector dimension differs from the algebra")
    if a.degree < 1 or b.degree < 1:
        raise DimensionMismatch("extended bracket needs degrees >= 1")
    n = g.dim
    deg = a.degree + b.degree - 1
    terms: dict[tuple[int, ...], object] = {}
    phi = g.twist
    for xs, ca in a.terms.items():
        for ys, cb in b.terms.items():
            coef = ca * cb
            for i, xi in enumerate(xs):
                for j, yj in enumerate(ys):
                    br = g.structure[xi, yj]
                    if all(c == 0 for c in br):
                        continue
                    sign = -1 if (i + j) % 2 else 1
                    rest = xs[:i] + xs[i + 1:] + ys[:j] + ys[j + 1:]
                    head = MultiVector.from_vector(br)
                    tail = wedge_all((MultiVector.from_vector(phi[:, r]) for r in rest), n)
                    for key, c in wedge(head, tail).terms.items():
                        terms[key] = terms.get(key, 0) + sign * coef * c
    return MultiVector(n, deg, terms)


def contract(w: MultiVector, forms: Sequence[MultiForm]):
    """Successive left interior products, first form innermost.

    Returns a :class:`MultiVector` of degree ``k - len(forms)``; when every slot
    is filled the scalar value of the determinant pairing is returned.
    """
    out = w
    for xi in forms:
        if xi.degree != 1 or xi.dim != w.dim:
            raise DimensionMismatch("contract expects 1-forms on the same space")
        if out.degree == 0:
            raise DimensionMismatch("more forms than the degree of the multivector")
        terms: dict[tuple[int, ...], object] = {}
        for idx, c in out.terms.items():
            for p, i in enumerate(idx):
                val = xi.terms.get((i,), 0)
                if val == 0:
                    continue
                key = idx[:p] + idx[p + 1:]
                sign = -1 if p % 2 else 1
                terms[key] = terms.get(key, 0) + sign * val * c
        out = MultiVector(w.dim, out.degree - 1, terms)
    if out.degree == 0:
        return out.terms.get((), Fraction(0))
    return out


def pairing(w: MultiVector, f: MultiForm):
    """``<w, f>`` for equal degrees; the canonical bases are dual to each other."""
    if w.dim != f.dim or w.degree != f.degree:
        raise DimensionMismatch("pairing needs equal dimension and degree")
    total = Fraction(0)
    for idx, c in w.terms.items():
        d = f.terms.get(idx)
        if d is not None:
            total = total + c * d
    return total
