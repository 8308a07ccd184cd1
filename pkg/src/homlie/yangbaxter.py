"""r-matrices, the classical Hom-Yang-Baxter equation and Hom-O-operators."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import HomLieAlgebra, fmt_vec
from .bialgebra import HomLieBialgebra
from .multilinear import MultiForm, MultiVector, contract, extended_bracket, wedge_basis
from .report import CheckReport
from .reps import Representation, coadjoint, dual_rep, semidirect

__all__ = [
    "ConrViolated",
    "TwistIncompatible",
    "RMatrix",
    "OOperator",
    "check_conr",
    "require_conr",
    "coboundary_delta",
    "dualize_delta",
    "induced_dual_bracket",
    "formu_sides",
    "check_formu",
    "FORMU_PRETWIST",
    "rr_bracket",
    "check_chybe",
    "check_o_operator",
    "lift_T",
    "search_chybe",
    "all_r_valid",
    "triangular_bialgebra",
    "search_threads",
]


class ConrViolated(ValueError):
    pass


class TwistIncompatible(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RMatrix:
    """``r ∈ ∧²g`` together with ``r♯ξ = ι_ξ r`` (so ``<r♯ξ, η> = <r, ξ∧η>``)."""

    algebra: HomLieAlgebra
    r: MultiVector
    rsharp: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.algebra.dim
        if self.r.degree != 2 and not self.r.is_zero():
            raise ValueError("an r-matrix has degree 2")
        if self.r.dim != n:
            raise ValueError("r-matrix lives over a different dimension")
        r = self.r if self.r.degree == 2 else MultiVector.zero(n, 2)
        object.__setattr__(self, "r", r)
        m = linalg.zeros(n, n)
        for a in range(n):
            m[:, a] = contract(r, [MultiForm.basis(n, a)]).coords()
        object.__setattr__(self, "rsharp", m)

    @classmethod
    def from_entries(cls, g: HomLieAlgebra, entries: dict[tuple[int, int], object]) -> "RMatrix":
        """``entries[(i, j)]`` is the coefficient of ``e_i ∧ e_j``; repeated pairs add up."""
        return cls(g, MultiVector(g.dim, 2, dict(_accumulate(entries))))

    def sharp(self, xi) -> np.ndarray:
        return self.rsharp @ np.asarray(xi, dtype=object)

    def __eq__(self, other):
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.r == other.r and self.algebra == other.algebra

    __hash__ = None

    def __repr__(self):
        return f"RMatrix({self.r!r})"


def _accumulate(entries):
    out: dict[tuple[int, int], object] = {}
    for (i, j), c in entries.items() if isinstance(entries, dict) else entries:
        if i == j:
            continue
        key, c = ((i, j), c) if i < j else ((j, i), -c)
        out[key] = out.get(key, 0) + c
    return out.items()


@dataclass(frozen=True, eq=False)
class OOperator:
    """``T: V → g`` (columns ``T(v_a)``) for a representation on ``V``."""

    rep: Representation
    T: np.ndarray

    def __post_init__(self):
        t = linalg.matrix(self.T)
        if t.shape != (self.rep.algebra.dim, self.rep.dim):
            raise ValueError("T must map the carrier into the algebra")
        object.__setattr__(self, "T", t)


def check_conr(g: HomLieAlgebra, rm: RMatrix) -> bool:
    """``r♯ ∘ (φ^{-1})^T = φ ∘ r♯``."""
    return linalg.equal(rm.rsharp @ g.twist_inv.T, g.twist @ rm.rsharp)


def require_conr(g: HomLieAlgebra, rm: RMatrix) -> None:
    if not check_conr(g, rm):
        raise ConrViolated(f"r = {rm.r!r} is not compatible with the twist")


def coboundary_delta(g: HomLieAlgebra, rm: RMatrix) -> np.ndarray:
    """``Δ(x) = [φ^{-2}x, r]`` as a ``C(n,2) × n`` matrix."""
    require_conr(g, rm)
    n = g.dim
    inv2 = g.twist_power(-2)
    out = linalg.zeros(len(wedge_basis(n, 2)), n)
    for i in range(n):
        out[:, i] = extended_bracket(MultiVector.from_vector(inv2[:, i]), rm.r, g).coords()
    return out


def dualize_delta(g: HomLieAlgebra, delta: np.ndarray, name: str = "") -> HomLieAlgebra:
    """Bracket on ``g*`` with ``<x, [ξ,η]> = <Δx, ξ∧η>`` and twist ``(φ^{-1})^T``."""
    n = g.dim
    s = linalg.zeros(n, n, n)
    for row, (i, j) in enumerate(wedge_basis(n, 2)):
        s[i, j] = delta[row, :]
        s[j, i] = -delta[row, :]
    return HomLieAlgebra(s, g.twist_inv.T.copy(), name or (f"{g.name}*" if g.name else ""))


def induced_dual_bracket(g: HomLieAlgebra, rm: RMatrix) -> HomLieAlgebra:
    """``[ξ,η] = ad⋆_{r♯ξ} η - ad⋆_{r♯η} ξ`` on the dual basis."""
    require_conr(g, rm)
    n = g.dim
    coad = coadjoint(g)
    s = linalg.zeros(n, n, n)
    for i, j in combinations(range(n), 2):
        xi, eta = linalg.unit(n, i), linalg.unit(n, j)
        v = coad.rho(rm.sharp(xi)) @ eta - coad.rho(rm.sharp(eta)) @ xi
        s[i, j] = v
        s[j, i] = -v
    return HomLieAlgebra(s, g.twist_inv.T.copy(), f"{g.name}*" if g.name else "")


def rr_bracket(g: HomLieAlgebra, rm: RMatrix) -> MultiVector:
    return extended_bracket(rm.r, rm.r, g)


# The twisted r-matrix identity compares the failure of r♯∘φ^T to be a bracket
# map with half of [r,r] contracted against two covectors.  The covectors are
# fed in untwisted; the (φ^{-2})^T pretwisted reading is computed alongside and
# reported as the rejected alternative (it disagrees on dim3(a)).
FORMU_PRETWIST = False


def formu_sides(g: HomLieAlgebra, rm: RMatrix, i: int, j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(lhs, rhs_plain, rhs_pretwisted)`` for the covector pair ``(e^i, e^j)``."""
    n = g.dim
    dual = induced_dual_bracket(g, rm)
    sharp_phi = rm.rsharp @ g.twist.T
    xi, eta = linalg.unit(n, i), linalg.unit(n, j)
    lhs = g.bracket(sharp_phi @ xi, sharp_phi @ eta) - sharp_phi @ dual.bracket(xi, eta)
    rr = rr_bracket(g, rm)
    half = Fraction(1, 2)

    def rhs(a, b):
        if n < 3:
            return linalg.zeros(n)
        w = contract(rr, [MultiForm.from_vector(a), MultiForm.from_vector(b)])
        return w.coords() * half

    inv2t = g.twist_power(-2).T
    return lhs, rhs(xi, eta), rhs(inv2t @ xi, inv2t @ eta)


def check_formu(g: HomLieAlgebra, rm: RMatrix) -> CheckReport:
    require_conr(g, rm)
    report = CheckReport("r-matrix identity")
    n = g.dim
    bad = None
    rejected_residual = []
    for i, j in combinations(range(n), 2):
        lhs, plain, twisted = formu_sides(g, rm, i, j)
        chosen, other = (twisted, plain) if FORMU_PRETWIST else (plain, twisted)
        if bad is None and not linalg.equal(lhs, chosen):
            bad = f"(e^{i + 1},e^{j + 1}): lhs {fmt_vec(lhs)} vs rhs {fmt_vec(chosen)}"
        if not linalg.equal(lhs, other):
            rejected_residual.append(f"(e^{i + 1},e^{j + 1}): {fmt_vec(lhs - other)}")
    report.add("identity", bad is None, bad or "")
    label = "plain" if FORMU_PRETWIST else "pretwisted"
    report.note(f"{label} covectors residual: " + ("; ".join(rejected_residual) or "0"))
    return report


def check_chybe(g: HomLieAlgebra, rm: RMatrix) -> tuple[bool, bool]:
    """``([r,r] = 0, [x,[r,r]] = 0 for every basis x)``."""
    require_conr(g, rm)
    rr = rr_bracket(g, rm)
    if rr.is_zero():
        return True, True
    n = g.dim
    adr = all(extended_bracket(MultiVector.basis(n, i), rr, g).is_zero() for i in range(n))
    return False, adr


def check_o_operator(op: OOperator) -> CheckReport:
    rep, T = op.rep, op.T
    g = rep.algebra
    report = CheckReport("O-operator")
    lhs, rhs = T @ rep.beta, g.twist @ T
    bad = None
    if not linalg.equal(lhs, rhs):
        col = next(c for c in range(rep.dim) if not linalg.equal(lhs[:, c], rhs[:, c]))
        bad = f"v{col + 1}: T(beta v) = {fmt_vec(lhs[:, col])}, phi(T v) = {fmt_vec(rhs[:, col])}"
    report.add("twist", bad is None, bad or "")
    bad = None
    if rep.beta_inv is None:
        bad = "beta is not invertible"
    else:
        tb = T @ rep.beta_inv
        for a, b in combinations(range(rep.dim), 2):
            u, v = linalg.unit(rep.dim, a), linalg.unit(rep.dim, b)
            left = g.bracket(T[:, a], T[:, b])
            right = T @ (rep.rho(tb @ u) @ v - rep.rho(tb @ v) @ u)
            if not linalg.equal(left, right):
                bad = f"(v{a + 1},v{b + 1}): [Tu,Tv] = {fmt_vec(left)}, T(...) = {fmt_vec(right)}"
                break
    report.add("bracket", bad is None, bad or "")
    return report


def lift_T(op: OOperator) -> tuple[HomLieAlgebra, RMatrix]:
    """``r = Σ_a v^a ∧ T(v_a)`` in ``g ⋉ V*`` (basis: ``g`` first, then ``V*``)."""
    rep, T = op.rep, op.T
    g = rep.algebra
    if not linalg.equal(T @ rep.beta, g.twist @ T):
        raise TwistIncompatible("T does not intertwine beta with the algebra twist")
    n, d = g.dim, rep.dim
    h = semidirect(g, dual_rep(rep), verify=False)
    terms: dict[tuple[int, int], object] = {}
    for a in range(d):
        for i in range(n):
            if T[i, a] != 0:
                terms[(n + a, i)] = T[i, a]
    return h, RMatrix(h, MultiVector(n + d, 2, terms))


def all_r_valid(g: HomLieAlgebra) -> bool:
    """With ``∧³g = 0`` every ``r`` solves the equation."""
    return g.dim <= 2


def search_threads() -> int:
    try:
        return max(1, int(os.environ.get("HOMLIE_THREADS", "1")))
    except ValueError:
        return 1


def _evaluate(args):
    g, support, coeffs = args
    rm = RMatrix.from_entries(g, list(zip(support, coeffs)))
    if not check_conr(g, rm):
        return False
    return all_r_valid(g) or check_chybe(g, rm)[0]


def search_chybe(g: HomLieAlgebra, support: Sequence[tuple[int, int]], grid: Sequence,
                 workers: int | None = None) -> list[RMatrix]:
    """Exhaustive grid search; candidates are ordered like ``itertools.product(grid, ...)``.

    ``support`` holds 0-based pairs; each candidate is ``Σ c_p e_i∧e_j`` over
    the support.  The result lists one r-matrix per accepted coefficient tuple.
    """
    support = [tuple(p) for p in support]
    for i, j in support:
        if not (0 <= i < g.dim and 0 <= j < g.dim) or i == j:
            raise ValueError(f"support pair ({i + 1},{j + 1}) is not a valid basis pair")
    candidates = list(product(list(grid), repeat=len(support)))
    workers = workers or search_threads()
    jobs = [(g, support, c) for c in candidates]
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            keep = list(pool.map(_evaluate, jobs, chunksize=16))
    else:
        keep = [_evaluate(j) for j in jobs]
    return [RMatrix.from_entries(g, list(zip(support, c))) for c, ok in zip(candidates, keep) if ok]


def triangular_bialgebra(g: HomLieAlgebra, rm: RMatrix) -> HomLieBialgebra:
    return HomLieBialgebra(g, induced_dual_bracket(g, rm))
