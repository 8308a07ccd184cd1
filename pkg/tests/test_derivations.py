from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import pytest
import sympy

from homlie import linalg
from homlie.algebra import check_hom_lie
from homlie.derivations import (
    ClosureFailure,
    NotEndomorphism,
    SingularSigma,
    check_associative,
    compute_derivations,
    derivation_bracket,
    derivation_homlie,
    diagonal_algebra,
    dual_numbers,
    is_derivation,
    truncated_polynomials,
    upper_triangular,
)


def oracle_dimension(A, sigma, tau):
    """Dimension of the derivation space by sympy's linsolve over symbolic entries of D."""
    n = A.dim
    syms = sympy.symbols(f"d0:{n * n}")
    D = sympy.Matrix(n, n, syms)
    S = sympy.Matrix(n, n, lambda i, j: sympy.Rational(sigma[i, j]))
    T = sympy.Matrix(n, n, lambda i, j: sympy.Rational(tau[i, j]))

    def mult(u, v):
        out = sympy.zeros(n, 1)
        for i, j in product(range(n), repeat=2):
            if u[i] != 0 and v[j] != 0:
                out += u[i] * v[j] * sympy.Matrix([sympy.Rational(x) for x in A.mult[i, j]])
        return out

    eqs = []
    for i, j in product(range(n), repeat=2):
        prod_ij = sympy.Matrix([sympy.Rational(x) for x in A.mult[i, j]])
        lhs = D * prod_ij
        rhs = mult(D[:, i], T[:, j]) + mult(S[:, i], D[:, j])
        eqs.extend(list(lhs - rhs))
    (sol,) = sympy.linsolve(eqs, syms)
    free = set().union(*(sympy.sympify(x).free_symbols for x in sol))
    return len(free)


def conjugation(P):
    """Algebra automorphism X ↦ P X P⁻¹ of upper-triangular 2×2 matrices (basis E11, E12, E22)."""
    P = linalg.matrix(P)
    Pi = linalg.inverse(P)
    units = [(0, 0), (0, 1), (1, 1)]
    out = linalg.zeros(3, 3)
    for c, (a, b) in enumerate(units):
        e = linalg.zeros(2, 2)
        e[a, b] = Fraction(1)
        img = P @ e @ Pi
        out[:, c] = linalg.vector([img[u] for u in units])
    return out


CASES = [
    (dual_numbers(), [linalg.identity(2), linalg.matrix([[1, 0], [0, 2]]), linalg.matrix([[1, 0], [0, -1]])]),
    (truncated_polynomials(3), [linalg.matrix([[1, 0, 0], [0, 2, 0], [0, 0, 4]]),
                                linalg.matrix([[1, 0, 0], [0, -1, 0], [0, 0, 1]])]),
    (truncated_polynomials(4), [linalg.matrix([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 4, 0], [0, 0, 0, 8]]),
                                linalg.matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 2, 1]])]),
    (upper_triangular(2), [conjugation([[1, 0], [0, 2]]), conjugation([[1, 1], [0, 1]])]),
    (diagonal_algebra(3), [linalg.matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
                           linalg.matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])]),
]


@pytest.mark.parametrize("A,sigmas", CASES, ids=lambda v: getattr(v, "name", ""))
def test_spaces_match_linsolve_oracle(A, sigmas):
    assert check_associative(A).passed
    for sigma in sigmas:
        space = compute_derivations(A, sigma, sigma)
        assert space.dim == oracle_dimension(A, sigma, sigma)
        for D in space.basis:
            assert is_derivation(A, D, sigma, sigma)


@pytest.mark.parametrize("A,sigmas", CASES, ids=lambda v: getattr(v, "name", ""))
def test_derivation_algebras_are_hom_lie(A, sigmas):
    for sigma in sigmas:
        space = compute_derivations(A, sigma, sigma)
        for m, l in ((1, 1), (0, 1), (1, 0), (2, 1)):
            g = derivation_homlie(space, m, l)
            assert check_hom_lie(g).passed, (m, l)


def test_dual_numbers_identity():
    space = compute_derivations(dual_numbers(), linalg.identity(2), linalg.identity(2))
    assert space.dim == 1
    # D(1) = 0, D(ε) = ε
    assert linalg.equal(space.basis[0], linalg.matrix([[0, 0], [0, 1]]))
    g = derivation_homlie(space)
    assert g.dim == 1 and g.is_abelian()


def test_separable_algebra_has_no_derivations():
    assert compute_derivations(diagonal_algebra(2), linalg.identity(2), linalg.identity(2)).dim == 0


def test_zero_is_always_a_derivation():
    for A, sigmas in CASES:
        for s in sigmas:
            assert is_derivation(A, linalg.zeros(A.dim, A.dim), s, s)


def test_twisted_dual_numbers_closure():
    A = dual_numbers()
    sigma = linalg.matrix([[1, 0], [0, 2]])
    space = compute_derivations(A, sigma, sigma)
    for D1, D2 in product(space.basis, repeat=2):
        out = derivation_bracket(space, D1, D2)
        assert is_derivation(A, out, sigma, sigma)
    for D in space.basis:
        assert linalg.is_zero(derivation_bracket(space, D, D))


def test_m_l_zero_is_commutator():
    A = truncated_polynomials(3)
    sigma = linalg.matrix([[1, 0, 0], [0, 2, 0], [0, 0, 4]])
    space = compute_derivations(A, sigma, sigma)
    ident = compute_derivations(A, linalg.identity(3), linalg.identity(3))
    for D1, D2 in combinations(ident.basis, 2):
        out = derivation_bracket(space, D1, D2, m=0, l=0)
        assert linalg.equal(out, D1 @ D2 - D2 @ D1)


def test_twist_is_automorphism_of_bracket():
    A = upper_triangular(2)
    sigma = conjugation([[1, 0], [0, 2]])
    space = compute_derivations(A, sigma, sigma)
    ad = lambda D: sigma @ D @ linalg.inverse(sigma)  # noqa: E731
    for D1, D2 in product(space.basis, repeat=2):
        lhs = ad(derivation_bracket(space, D1, D2))
        rhs = derivation_bracket(space, ad(D1), ad(D2))
        assert linalg.equal(lhs, rhs)


def test_basis_is_reduced_echelon():
    A = truncated_polynomials(4)
    space = compute_derivations(A, linalg.identity(4), linalg.identity(4))
    stacked = linalg.zeros(space.dim, 16)
    for r, D in enumerate(space.basis):
        stacked[r] = D.reshape(16)
    reduced, _ = linalg.rref(stacked)
    assert linalg.equal(reduced, stacked)


def test_errors():
    A = dual_numbers()
    with pytest.raises(NotEndomorphism) as err:
        compute_derivations(A, linalg.matrix([[2, 0], [0, 1]]), linalg.identity(2))
    assert err.value.which == "sigma"
    singular = linalg.matrix([[1, 0], [0, 0]])
    space = compute_derivations(A, singular, singular)
    with pytest.raises(SingularSigma):
        derivation_homlie(space)
    ident = compute_derivations(A, linalg.identity(2), linalg.identity(2))
    with pytest.raises(ClosureFailure):
        derivation_bracket(ident, linalg.matrix([[0, 1], [0, 0]]), linalg.matrix([[0, 0], [0, 1]]))
