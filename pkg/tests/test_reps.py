from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from homlie import linalg
from homlie.algebra import NAMED_KEYS, HomLieAlgebra, check_hom_lie, named_example
from homlie.multilinear import MultiVector, extended_bracket, wedge_basis
from homlie.reps import (
    InvalidRepresentation,
    Representation,
    SingularBeta,
    adjoint_rep,
    check_representation,
    coadjoint,
    dual_rep,
    semidirect,
)

from randgen import random_rep


def axioms_hold(rep):
    """Both representation identities evaluated directly from the matrices."""
    g = rep.algebra
    phi, beta = g.twist, rep.beta
    rho = lambda v: sum((v[i] * rep.matrices[i] for i in range(g.dim) if v[i] != 0),  # noqa: E731
                        linalg.zeros(rep.dim, rep.dim))
    for i in range(g.dim):
        if not linalg.equal(rho(phi[:, i]) @ beta, beta @ rep.matrices[i]):
            return False
    for i, j in product(range(g.dim), repeat=2):
        lhs = rho(g.structure[i, j]) @ beta
        rhs = rho(phi[:, i]) @ rep.matrices[j] - rho(phi[:, j]) @ rep.matrices[i]
        if not linalg.equal(lhs, rhs):
            return False
    return True


def test_adjoint_on_dim2_matches_direct_oracle():
    g = named_example("dim2").algebra
    rep = adjoint_rep(g)
    assert check_representation(rep).passed
    assert axioms_hold(rep)
    for i in range(2):
        assert linalg.equal(rep.matrices[i], g.ad(linalg.unit(2, i)))
    assert linalg.equal(rep.beta, g.twist)


def test_corrupted_rep_fails_with_witness():
    rep = adjoint_rep(named_example("dim2").algebra)
    mats = rep.matrices.copy()
    mats[0, 0, 0] = mats[0, 0, 0] + 1
    report = check_representation(Representation(rep.algebra, mats, rep.beta))
    assert not report.passed
    assert all(c.witness for c in report.failures())


@pytest.mark.parametrize("key", NAMED_KEYS)
def test_adjoint_family_on_named_examples(key):
    g = named_example(key).algebra
    for s in range(-2, 3):
        for k in (1, 2):
            rep = adjoint_rep(g, s, k)
            assert check_representation(rep).passed
            assert check_representation(dual_rep(rep)).passed


def test_adjoint_on_wedge_two_uses_extended_bracket():
    g = named_example("dim3(a)").algebra
    rep = adjoint_rep(g, -2, 2)
    assert check_representation(rep).passed
    inv2 = g.twist_power(-2)
    basis = wedge_basis(3, 2)
    for i in range(3):
        for col, idx in enumerate(basis):
            img = extended_bracket(MultiVector.from_vector(inv2[:, i]), MultiVector.basis(3, *idx), g)
            assert linalg.equal(rep.matrices[i][:, col], img.coords())


def test_abelian_gives_zero_reps():
    g = HomLieAlgebra.abelian(3, linalg.matrix([[2, 0, 0], [0, 1, 0], [0, 0, 3]]))
    rep = adjoint_rep(g, 1, 2)
    assert linalg.is_zero(rep.matrices)
    d = dual_rep(rep)
    assert linalg.is_zero(d.matrices)
    assert linalg.equal(d.beta, linalg.inverse(rep.beta).T)


def test_double_dual_is_identity_on_random_reps():
    rng = random.Random(31)
    for _ in range(50):
        rep = random_rep(rng)
        assert check_representation(rep).passed
        back = dual_rep(dual_rep(rep))
        assert linalg.equal(back.matrices, rep.matrices)
        assert linalg.equal(back.beta, rep.beta)


@pytest.mark.parametrize("s", range(-3, 4))
def test_every_s_twisted_dual_is_a_representation(s):
    rng = random.Random(100 + s)
    for _ in range(8):
        rep = random_rep(rng)
        assert check_representation(dual_rep(rep, s)).passed


def test_dual_intertwines_twist():
    rng = random.Random(37)
    for _ in range(20):
        d = dual_rep(random_rep(rng))
        g = d.algebra
        for i in range(g.dim):
            assert linalg.equal(d.beta @ d.matrices[i], d.rho(g.twist[:, i]) @ d.beta)


def test_dual_formula_explicit():
    rep = adjoint_rep(named_example("dim2").algebra)
    g = rep.algebra
    d = dual_rep(rep)
    binv2 = linalg.mat_pow(rep.beta, -2)
    for i in range(2):
        expected = -(rep.rho(g.twist[:, i]).T) @ binv2.T
        assert linalg.equal(d.matrices[i], expected)


def test_singular_beta():
    g = HomLieAlgebra.abelian(2)
    rep = Representation(g, linalg.zeros(2, 2, 2), linalg.matrix([[1, 0], [0, 0]]))
    with pytest.raises(SingularBeta):
        dual_rep(rep)


def test_coadjoint_is_dual_of_adjoint():
    for key in NAMED_KEYS:
        g = named_example(key).algebra
        c = coadjoint(g)
        assert check_representation(c).passed
        assert axioms_hold(c)
        ref = dual_rep(adjoint_rep(g, 0, 1), 1)
        assert linalg.equal(c.matrices, ref.matrices)


def test_coadjoint_on_quadratic_subalgebra():
    q = named_example("quadratic4").algebra
    # span{e1, e2} is closed under bracket and twist
    s = linalg.zeros(2, 2, 2)
    s[:, :, :] = q.structure[:2, :2, :2]
    sub = HomLieAlgebra(s, q.twist[:2, :2].copy())
    assert check_hom_lie(sub).passed
    assert check_representation(coadjoint(sub)).passed


@pytest.mark.parametrize("key", ["dim2", "dim3(a)", "quadratic4"])
def test_semidirect_with_coadjoint(key):
    g = named_example(key).algebra
    h = semidirect(g, coadjoint(g))
    assert h.dim == 2 * g.dim
    assert check_hom_lie(h).passed


def test_semidirect_on_random_reps():
    rng = random.Random(41)
    for _ in range(25):
        rep = random_rep(rng)
        h = semidirect(rep.algebra, rep)
        assert check_hom_lie(h).passed
        n = rep.algebra.dim
        assert linalg.equal(h.twist, linalg.block_diag(rep.algebra.twist, rep.beta))
        # [x, w] = ρ(x) w for x in g, w in the carrier
        for i, a in product(range(n), range(rep.dim)):
            assert linalg.equal(h.structure[i, n + a][n:], rep.matrices[i][:, a])


def test_semidirect_abelian_zero_rep():
    g = HomLieAlgebra.abelian(2)
    rep = Representation(g, linalg.zeros(2, 1, 1), linalg.identity(1))
    assert semidirect(g, rep).is_abelian()


def test_semidirect_rejects_bad_rep():
    g = named_example("dim2").algebra
    mats = adjoint_rep(g).matrices.copy()
    mats[1, 1, 1] = Fraction(5)
    with pytest.raises(InvalidRepresentation):
        semidirect(g, Representation(g, mats, g.twist))


def test_random_rep_helper_produces_valid_reps():
    rng = random.Random(43)
    for _ in range(30):
        rep = random_rep(rng)
        assert axioms_hold(rep)
