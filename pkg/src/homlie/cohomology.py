"""The twisted Chevalley-Eilenberg differential on ``Hom(∧^k g, V)``.

A ``k``-cochain is stored as a ``d × C(n, k)`` matrix whose columns are its
values on the lexicographic basis ``e_I`` of ``∧^k g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .algebra import HomLieAlgebra, fmt_vec
from .multilinear import MultiVector, extend_map, extended_bracket, wedge_all, wedge_basis
from .report import CheckReport
from .reps import Representation, adjoint_rep

__all__ = [
    "Cochain",
    "d_rho",
    "differential_matrix",
    "check_d_squared",
    "is_one_cocycle_derivation",
    "cohomology_ranks",
]


@dataclass(frozen=True, eq=False)
class Cochain:
    rep: Representation
    degree: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=object)
        shape = (self.rep.dim, comb(self.rep.algebra.dim, self.degree))
        if vals.shape != shape:
            raise ValueError(f"cochain of degree {self.degree} needs shape {shape}, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, rep: Representation, degree: int) -> "Cochain":
        return cls(rep, degree, linalg.zeros(rep.dim, comb(rep.algebra.dim, degree)))

    @classmethod
    def from_function(cls, rep: Representation, degree: int, f) -> "Cochain":
        """Tabulate ``f(i_1, …, i_k)`` on increasing index tuples."""
        cols = [linalg.vector(f(*idx)) for idx in wedge_basis(rep.algebra.dim, degree)]
        vals = linalg.zeros(rep.dim, len(cols))
        for c, v in enumerate(cols):
            vals[:, c] = v
        return cls(rep, degree, vals)

    def evaluate(self, vectors) -> np.ndarray:
        """Value on ``x_1 ∧ … ∧ x_k`` for arbitrary vectors ``x_i`` of ``g``."""
        n = self.rep.algebra.dim
        w = wedge_all((MultiVector.from_vector(v) for v in vectors), n)
        return self.values @ w.coords() if self.degree else self.values[:, 0].copy()

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and linalg.equal(self.values, other.values)

    __hash__ = None


def _eval_on_wedge(values: np.ndarray, w: MultiVector) -> np.ndarray:
    if w.degree == 0:
        return values[:, 0] * w.terms.get((), 0)
    return values @ w.coords()


def d_rho(f: Cochain) -> Cochain:
    r"""``(d f)(x_1..x_{k+1})`` with ``φ^{-1}`` on the passive arguments.

    ``Σ_i (-1)^{i+1} ρ(x_i) f(φ^{-1}x_1, …, x̂_i, …)``
    ``+ Σ_{i<j} (-1)^{i+j} β f([φ^{-2}x_i, φ^{-2}x_j], φ^{-1}x_1, …, x̂_i, x̂_j, …)``
    """
    rep, k = f.rep, f.degree
    g = rep.algebra
    n = g.dim
    inv1 = [MultiVector.from_vector(g.twist_inv[:, i]) for i in range(n)]
    inv2 = g.twist_power(-2)
    out = linalg.zeros(rep.dim, comb(n, k + 1))
    for col, idx in enumerate(wedge_basis(n, k + 1)):
        total = linalg.zeros(rep.dim)
        for p, i in enumerate(idx):
            rest = idx[:p] + idx[p + 1:]
            w = wedge_all((inv1[r] for r in rest), n)
            term = rep.matrices[i] @ _eval_on_wedge(f.values, w)
            total = total - term if p % 2 else total + term
        for p, q in combinations(range(k + 1), 2):
            br = g.bracket(inv2[:, idx[p]], inv2[:, idx[q]])
            if linalg.is_zero(br):
                continue
            rest = idx[:p] + idx[p + 1:q] + idx[q + 1:]
            w = wedge_all([MultiVector.from_vector(br)] + [inv1[r] for r in rest], n)
            term = rep.beta @ _eval_on_wedge(f.values, w)
            total = total - term if (p + q) % 2 else total + term
        out[:, col] = total
    return Cochain(rep, k + 1, out)


def differential_matrix(rep: Representation, k: int) -> np.ndarray:
    """Matrix of ``d_ρ`` from degree ``k`` to ``k+1`` (cochains flattened row-major)."""
    n, d = rep.algebra.dim, rep.dim
    src, tgt = comb(n, k), comb(n, k + 1)
    m = linalg.zeros(d * tgt, d * src)
    for a in range(d):
        for c in range(src):
            basis = linalg.zeros(d, src)
            basis[a, c] = 1
            m[:, a * src + c] = d_rho(Cochain(rep, k, basis)).values.reshape(d * tgt)
    return m


def check_d_squared(g: HomLieAlgebra, rep: Representation, k_max: int = 2) -> CheckReport:
    """``d∘d = 0`` on every basis cochain of degree ``0..k_max``."""
    if rep.algebra is not g and rep.algebra != g:
        raise ValueError("representation is over a different algebra")
    report = CheckReport(f"d^2 = 0 for {rep.name or 'rep'}")
    n, d = g.dim, rep.dim
    for k in range(k_max + 1):
        if k + 2 > n:
            report.add(f"degree {k}", True)
            continue
        bad = None
        for a in range(d):
            for c, idx in enumerate(wedge_basis(n, k)):
                vals = linalg.zeros(d, comb(n, k))
                vals[a, c] = 1
                dd = d_rho(d_rho(Cochain(rep, k, vals)))
                if not linalg.is_zero(dd.values):
                    col = next(j for j in range(dd.values.shape[1]) if not linalg.is_zero(dd.values[:, j]))
                    tup = wedge_basis(n, k + 2)[col]
                    bad = (f"f = v{a + 1} on {'^'.join(f'e{i + 1}' for i in idx) or '1'}: "
                           f"d^2 f({', '.join(f'e{i + 1}' for i in tup)}) = {fmt_vec(dd.values[:, col], 'v')}")
                    break
            if bad:
                break
        report.add(f"degree {k}", bad is None, bad or "")
    return report


def is_one_cocycle_derivation(g: HomLieAlgebra, theta: np.ndarray) -> CheckReport:
    """Is ``θ: g → ∧²g`` (columns ``θ(e_i)``) a twisted derivation into ``∧²g``?

    Checks commutation with the twist, the pairwise identity
    ``[φ^{-2}x, θ(φ^{-1}y)] - [φ^{-2}y, θ(φ^{-1}x)] = θ([φ^{-1}x, φ^{-1}y])``,
    and, independently, ``d θ = 0`` for ``ad`` twisted by ``φ^{-2}`` on ``∧²g``.
    """
    theta = np.asarray(theta, dtype=object)
    n = g.dim
    report = CheckReport("1-cocycle")
    lift = extend_map(g.twist, 2)
    report.add("commutes-with-twist", linalg.equal(theta @ g.twist, lift @ theta),
               "theta(phi x) != phi(theta x)")
    inv1, inv2 = g.twist_inv, g.twist_power(-2)

    def th(v):
        return MultiVector.from_coords(n, 2, theta @ v)

    bad = None
    for i, j in combinations(range(n), 2):
        x1, y1 = inv1[:, i], inv1[:, j]
        lhs = (extended_bracket(MultiVector.from_vector(inv2[:, i]), th(y1), g)
               - extended_bracket(MultiVector.from_vector(inv2[:, j]), th(x1), g))
        rhs = th(g.bracket(x1, y1))
        if lhs != rhs:
            bad = f"(e{i + 1},e{j + 1}): defect {lhs - rhs!r}"
            break
    report.add("derivation-identity", bad is None, bad or "")
    rep = adjoint_rep(g, -2, 2)
    closed = linalg.is_zero(d_rho(Cochain(rep, 1, theta)).values)
    report.add("closed-under-d", closed, "d theta != 0")
    return report


def cohomology_ranks(g: HomLieAlgebra, rep: Representation, k: int) -> tuple[int, int, int]:
    """``(dim Z^k, dim B^k, dim H^k)``; over ``Q(a)`` these are generic ranks."""
    n, d = g.dim, rep.dim
    if not 0 <= k <= n:
        raise ValueError(f"degree must lie in 0..{n}")
    dk = differential_matrix(rep, k)
    z = d * comb(n, k) - linalg.rank(dk)
    b = linalg.rank(differential_matrix(rep, k - 1)) if k > 0 else 0
    return z, b, z - b
