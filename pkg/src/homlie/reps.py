"""Representations of Hom-Lie algebras, their twisted duals and semidirect products."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import linalg
from .algebra import HomLieAlgebra, fmt_vec
from .multilinear import MultiVector, extend_map, extended_bracket, wedge_basis
from .report import CheckReport

__all__ = [
    "SingularBeta",
    "InvalidRepresentation",
    "Representation",
    "check_representation",
    "adjoint_rep",
    "dual_rep",
    "coadjoint",
    "semidirect",
]


class SingularBeta(ValueError):
    pass


class InvalidRepresentation(ValueError):
    def __init__(self, report: CheckReport):
        super().__init__(report.summary())
        self.report = report


@dataclass(frozen=True, eq=False)
class Representation:
    """``matrices[i]`` is ``ρ(e_i)`` acting on a ``d``-dimensional carrier; ``beta`` twists it."""

    algebra: HomLieAlgebra
    matrices: np.ndarray
    beta: np.ndarray
    name: str = ""
    beta_inv: np.ndarray | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        mats = np.asarray(self.matrices, dtype=object)
        beta = np.asarray(self.beta, dtype=object)
        d = beta.shape[0]
        n = self.algebra.dim
        if beta.shape != (d, d) or mats.shape != (n, d, d):
            raise ValueError(f"expected {n} matrices of size {d}x{d} and a {d}x{d} twist")
        try:
            inv = linalg.inverse(beta) if d else beta
        except linalg.SingularMatrix:
            inv = None
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "beta_inv", inv)

    @property
    def dim(self) -> int:
        return self.beta.shape[0]

    def rho(self, x) -> np.ndarray:
        out = linalg.zeros(self.dim, self.dim)
        for i, c in enumerate(x):
            if c != 0:
                out = out + c * self.matrices[i]
        return out

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.algebra == other.algebra and linalg.equal(self.matrices, other.matrices)
                and linalg.equal(self.beta, other.beta))

    __hash__ = None


def check_representation(rep: Representation) -> CheckReport:
    """Both axioms on basis elements and basis pairs; first failure is the witness."""
    g = rep.algebra
    report = CheckReport(f"representation {rep.name}".strip())
    phi, beta = g.twist, rep.beta
    bad = None
    for i in range(g.dim):
        lhs = rep.rho(phi[:, i]) @ beta
        rhs = beta @ rep.matrices[i]
        if not linalg.equal(lhs, rhs):
            bad = f"x=e{i + 1}: rho(phi x) beta != beta rho(x)"
            break
    report.add("twist-compatibility", bad is None, bad or "")
    bad = None
    for i, j in combinations(range(g.dim), 2):
        lhs = rep.rho(g.structure[i, j]) @ beta
        rhs = rep.rho(phi[:, i]) @ rep.matrices[j] - rep.rho(phi[:, j]) @ rep.matrices[i]
        if not linalg.equal(lhs, rhs):
            diff = (lhs - rhs)
            col = next(c for c in range(rep.dim) if not linalg.is_zero(diff[:, c]))
            bad = (f"(e{i + 1},e{j + 1}): rho([x,y]) beta - (rho(phi x)rho(y) - rho(phi y)rho(x)) "
                   f"sends v{col + 1} to {fmt_vec(diff[:, col], 'v')}")
            break
    report.add("bracket-compatibility", bad is None, bad or "")
    return report


def adjoint_rep(g: HomLieAlgebra, s: int = 0, k: int = 1) -> Representation:
    """``ρ(x)Y = [φ^s x, Y]`` on ``∧^k g`` with twist ``∧^k φ``."""
    if k < 1:
        raise ValueError("adjoint representation needs degree k >= 1")
    n = g.dim
    basis = wedge_basis(n, k)
    phis = g.twist_power(s)
    mats = linalg.zeros(n, len(basis), len(basis))
    for i in range(n):
        x = MultiVector.from_vector(phis[:, i])
        for col, idx in enumerate(basis):
            mats[i][:, col] = extended_bracket(x, MultiVector.basis(n, *idx), g).coords()
    return Representation(g, mats, extend_map(g.twist, k), f"ad^{s} on wedge^{k}" if k > 1 else f"ad^{s}")


def dual_rep(rep: Representation, s: int = 1) -> Representation:
    """``ρ_s⋆(x) = -ρ(φ^s x)^T ∘ (β^{-2})^T`` on the dual carrier, twisted by ``(β^{-1})^T``."""
    if rep.beta_inv is None:
        raise SingularBeta("the representation twist is not invertible")
    g = rep.algebra
    phis = g.twist_power(s)
    binv2_t = (rep.beta_inv @ rep.beta_inv).T
    mats = linalg.zeros(g.dim, rep.dim, rep.dim)
    for i in range(g.dim):
        mats[i] = -(rep.rho(phis[:, i]).T @ binv2_t)
    return Representation(g, mats, rep.beta_inv.T.copy(), f"dual({rep.name})" if rep.name else "dual")


def coadjoint(g: HomLieAlgebra) -> Representation:
    rep = dual_rep(adjoint_rep(g, 0, 1), 1)
    return Representation(g, rep.matrices, rep.beta, "coadjoint")


def semidirect(g: HomLieAlgebra, rep: Representation, verify: bool = True) -> HomLieAlgebra:
    """``g ⊕ W`` with ``[x+u, y+w] = [x,y] + ρ(x)w - ρ(y)u`` and twist ``φ ⊕ γ``.

    Basis order: the basis of ``g`` first, then the carrier basis.
    """
    if verify:
        report = check_representation(rep)
        if not report:
            raise InvalidRepresentation(report)
    n, d = g.dim, rep.dim
    s = linalg.zeros(n + d, n + d, n + d)
    s[:n, :n, :n] = g.structure
    for i in range(n):
        for b in range(d):
            v = rep.matrices[i][:, b]
            s[i, n + b, n:] = v
            s[n + b, i, n:] = -v
    name = f"{g.name} x {rep.name}".strip() if g.name or rep.name else ""
    return HomLieAlgebra(s, linalg.block_diag(g.twist, rep.beta), name)
