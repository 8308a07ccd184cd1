"""Twisted derivations of finite-dimensional associative algebras.

Linear maps are square matrices in the column convention and are flattened
row-major (``D[a, b]`` is unknown ``a*n + b``) when solving for them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from . import linalg
from .algebra import HomLieAlgebra
from .report import CheckReport

__all__ = [
    "NotEndomorphism",
    "SingularSigma",
    "ClosureFailure",
    "AssociativeAlgebra",
    "DerivationSpace",
    "check_associative",
    "is_derivation",
    "derivation_system",
    "compute_derivations",
    "derivation_bracket",
    "derivation_homlie",
    "dual_numbers",
    "truncated_polynomials",
    "upper_triangular",
    "diagonal_algebra",
]


class NotEndomorphism(ValueError):
    def __init__(self, which: str, pair: tuple[int, int]):
        i, j = pair
        super().__init__(f"{which} is not multiplicative on (e{i + 1}, e{j + 1})")
        self.which = which
        self.pair = pair


class SingularSigma(ZeroDivisionError):
    pass


class ClosureFailure(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class AssociativeAlgebra:
    """Multiplication ``e_i e_j = Σ_k mult[i, j, k] e_k``."""

    mult: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.mult, dtype=object)
        n = m.shape[0]
        if m.shape != (n, n, n):
            raise ValueError("multiplication table must be n x n x n")
        object.__setattr__(self, "mult", m)

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def product(self, a, b) -> np.ndarray:
        out = linalg.zeros(self.dim)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    out = out + (ai * bj) * self.mult[i, j]
        return out


@dataclass(frozen=True, eq=False)
class DerivationSpace:
    algebra: AssociativeAlgebra
    sigma: np.ndarray
    tau: np.ndarray
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def check_associative(A: AssociativeAlgebra) -> CheckReport:
    report = CheckReport(f"associative {A.name}".strip())
    n = A.dim
    bad = None
    for i, j, k in product(range(n), repeat=3):
        left = A.product(A.mult[i, j], linalg.unit(n, k))
        right = A.product(linalg.unit(n, i), A.mult[j, k])
        if not linalg.equal(left, right):
            bad = f"(e{i + 1} e{j + 1}) e{k + 1} != e{i + 1} (e{j + 1} e{k + 1})"
            break
    report.add("associativity", bad is None, bad or "")
    return report


def _endomorphism_failure(A: AssociativeAlgebra, f: np.ndarray):
    n = A.dim
    for i, j in product(range(n), repeat=2):
        if not linalg.equal(f @ A.mult[i, j], A.product(f[:, i], f[:, j])):
            return i, j
    return None


def is_derivation(A: AssociativeAlgebra, D, sigma, tau) -> bool:
    n = A.dim
    return all(
        linalg.equal(D @ A.mult[i, j], A.product(D[:, i], tau[:, j]) + A.product(sigma[:, i], D[:, j]))
        for i, j in product(range(n), repeat=2))


def derivation_system(A: AssociativeAlgebra, sigma, tau) -> np.ndarray:
    """Coefficient matrix of ``D(e_i e_j) - D(e_i)τ(e_j) - σ(e_i)D(e_j) = 0``.

    Rows are indexed by ``(i, j, k)``, columns by the unknowns ``D[a, b]``.
    """
    n = A.dim
    m = A.mult
    sys = linalg.zeros(n ** 3, n * n)
    for i, j, k in product(range(n), repeat=3):
        row = (i * n + j) * n + k
        for l in range(n):
            if m[i, j, l] != 0:
                sys[row, k * n + l] += m[i, j, l]
        for p, q in product(range(n), repeat=2):
            c = m[p, q, k]
            if c == 0:
                continue
            # D(e_i) τ(e_j): D[p, i] τ[q, j]
            if tau[q, j] != 0:
                sys[row, p * n + i] -= tau[q, j] * c
            # σ(e_i) D(e_j): σ[p, i] D[q, j]
            if sigma[p, i] != 0:
                sys[row, q * n + j] -= sigma[p, i] * c
    return sys


def compute_derivations(A: AssociativeAlgebra, sigma, tau) -> DerivationSpace:
    sigma, tau = linalg.matrix(sigma), linalg.matrix(tau)
    for which, f in (("sigma", sigma), ("tau", tau)):
        bad = _endomorphism_failure(A, f)
        if bad is not None:
            raise NotEndomorphism(which, bad)
    n = A.dim
    vectors = linalg.nullspace(derivation_system(A, sigma, tau))
    basis = []
    if vectors:
        stacked = linalg.zeros(len(vectors), n * n)
        for r, v in enumerate(vectors):
            stacked[r] = v
        reduced, pivots = linalg.rref(stacked)
        basis = [reduced[r].reshape(n, n).copy() for r in range(len(pivots))]
    return DerivationSpace(A, sigma, tau, basis)


def _sigma_powers(sigma: np.ndarray, m: int, l: int):
    try:
        return linalg.mat_pow(sigma, l), linalg.mat_pow(sigma, -m), linalg.mat_pow(sigma, -l)
    except linalg.SingularMatrix as exc:
        raise SingularSigma("sigma is not invertible") from exc


def derivation_bracket(space: DerivationSpace, D1, D2, m: int = 1, l: int = 1) -> np.ndarray:
    """``σ^l D1 σ^{-m} D2 σ^{-l} - σ^l D2 σ^{-m} D1 σ^{-l}``, checked to be a ``σ^m``-derivation."""
    sigma = space.sigma
    if not linalg.equal(sigma, space.tau):
        raise ValueError("the bracket needs sigma = tau")
    sl, sm_inv, sl_inv = _sigma_powers(sigma, m, l)
    D1, D2 = linalg.matrix(D1), linalg.matrix(D2)
    out = sl @ (D1 @ sm_inv @ D2 - D2 @ sm_inv @ D1) @ sl_inv
    sm = linalg.mat_pow(sigma, m)
    if not is_derivation(space.algebra, out, sm, sm):
        raise ClosureFailure("bracket is not a derivation; were D1 and D2 in the right space?")
    return out


def derivation_homlie(space: DerivationSpace, m: int = 1, l: int = 1) -> HomLieAlgebra:
    """Structure constants of ``[·,·]_{ml}`` with twist ``Ad_{σ^l}`` on a basis of ``Der_{σ^m}``."""
    sigma = space.sigma
    if not linalg.equal(sigma, space.tau):
        raise ValueError("the Hom-Lie structure needs sigma = tau")
    sl, _, sl_inv = _sigma_powers(sigma, m, l)
    if m == 1:
        basis = space.basis
    else:
        sm = linalg.mat_pow(sigma, m)
        basis = compute_derivations(space.algebra, sm, sm).basis
    k = len(basis)
    n = space.algebra.dim
    cols = linalg.zeros(n * n, k)
    for c, D in enumerate(basis):
        cols[:, c] = D.reshape(n * n)

    def coords(M):
        try:
            return linalg.solve(cols, M.reshape(n * n))
        except linalg.InconsistentSystem as exc:
            raise ClosureFailure("result leaves the span of the derivation basis") from exc

    s = linalg.zeros(k, k, k)
    for a, b in combinations(range(k), 2):
        v = coords(derivation_bracket(space, basis[a], basis[b], m, l))
        s[a, b] = v
        s[b, a] = -v
    twist = linalg.zeros(k, k)
    for c, D in enumerate(basis):
        twist[:, c] = coords(sl @ D @ sl_inv)
    name = f"Der({space.algebra.name})" if space.algebra.name else "Der"
    return HomLieAlgebra(s, twist, name)


# -- small associative algebras ------------------------------------------------

def dual_numbers() -> AssociativeAlgebra:
    """``Q[ε]/(ε²)`` on the basis ``1, ε``."""
    return truncated_polynomials(2)


def truncated_polynomials(n: int) -> AssociativeAlgebra:
    """``Q[t]/(t^n)`` on ``1, t, …, t^{n-1}``."""
    m = linalg.zeros(n, n, n)
    for i, j in product(range(n), repeat=2):
        if i + j < n:
            m[i, j, i + j] = 1
    return AssociativeAlgebra(m, f"Q[t]/(t^{n})")


def upper_triangular(n: int = 2) -> AssociativeAlgebra:
    """Upper-triangular ``n×n`` matrices on the units ``E_ab`` (``a <= b``) in row order."""
    units = [(a, b) for a in range(n) for b in range(a, n)]
    index = {u: i for i, u in enumerate(units)}
    d = len(units)
    m = linalg.zeros(d, d, d)
    for (i, (a, b)), (j, (c, e)) in product(enumerate(units), repeat=2):
        if b == c:
            m[i, j, index[(a, e)]] = 1
    return AssociativeAlgebra(m, f"T{n}")


def diagonal_algebra(n: int) -> AssociativeAlgebra:
    """``Q^n`` with orthogonal idempotents."""
    m = linalg.zeros(n, n, n)
    for i in range(n):
        m[i, i, i] = 1
    return AssociativeAlgebra(m, f"Q^{n}")
