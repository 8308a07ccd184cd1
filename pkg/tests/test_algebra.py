from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from homlie import linalg
from homlie.algebra import (
    NAMED_KEYS,
    HomLieAlgebra,
    NotHomLie,
    SingularTwist,
    UnknownKey,
    check_hom_lie,
    gl_beta,
    named_example,
    q_witt,
    witt_bracket,
    witt_check_jacobi,
    witt_crosscheck,
    witt_twist,
)
from homlie.scalars import substitute, variable

from randgen import random_homlie, random_invertible


@pytest.mark.parametrize("key", NAMED_KEYS)
def test_named_examples_are_hom_lie(key):
    report = check_hom_lie(named_example(key).algebra)
    assert report.passed, report.summary()


def test_named_example_data():
    g = named_example("quadratic4").algebra
    assert linalg.equal(g.bracket_table()[(0, 3)], linalg.vector([-1, -1, 1, -1]))
    assert linalg.equal(g.bracket_table()[(0, 1)], linalg.vector([0, 1, 0, 0]))

    a = variable("a")
    g3 = named_example("dim3(a)").algebra
    assert linalg.equal(g3.twist, linalg.matrix([[a, 0, 0], [0, 1, 0], [0, 0, 1 / a]]))
    assert linalg.equal(g3.structure[0, 2], linalg.vector([0, 1, 0]))
    assert linalg.is_zero(g3.structure[0, 1]) and linalg.is_zero(g3.structure[1, 2])

    g2 = named_example("dim2").algebra
    assert linalg.equal(g2.structure[0, 1], linalg.vector([0, 1]))
    # the row-form matrix lists images as rows: φ(e1) = e1 + e2, φ(e2) = e2
    assert linalg.equal(g2.twist, linalg.matrix([[1, 1], [0, 1]]).T)

    with pytest.raises(UnknownKey):
        named_example("dim7")


def test_abelian_with_any_twist():
    rng = random.Random(1)
    for n in range(1, 5):
        assert check_hom_lie(HomLieAlgebra.abelian(n, random_invertible(rng, n))).passed


def test_random_algebras_are_hom_lie():
    rng = random.Random(2)
    for _ in range(30):
        assert check_hom_lie(random_homlie(rng)).passed


def test_corrupted_structure_constant_reports_triple():
    g = named_example("quadratic4").algebra
    s = g.structure.copy()
    s[1, 3, 2] = Fraction(2)
    s[3, 1, 2] = Fraction(-2)
    report = check_hom_lie(HomLieAlgebra(s, g.twist))
    assert not report.passed
    failing = report.failures()
    assert failing and all(c.witness for c in failing)


def test_non_multiplicative_twist_rejected_by_constructor():
    with pytest.raises(NotHomLie) as err:
        HomLieAlgebra.from_brackets(2, {(0, 1): [0, 1]}, [[2, 0], [0, 1]])
    assert "automorphism" in str(err.value)
    loose = HomLieAlgebra.from_brackets(2, {(0, 1): [0, 1]}, [[2, 0], [0, 1]],
                                        require_multiplicative=False)
    assert not check_hom_lie(loose)["automorphism"].passed


def test_skew_failure_is_reported():
    s = linalg.zeros(2, 2, 2)
    s[0, 1, 1] = Fraction(1)
    report = check_hom_lie(HomLieAlgebra(s, linalg.identity(2)))
    assert not report["skew"].passed


def test_singular_twist_rejected():
    with pytest.raises((SingularTwist, ZeroDivisionError)):
        HomLieAlgebra.abelian(2, linalg.matrix([[1, 1], [1, 1]]))
    with pytest.raises(SingularTwist):
        gl_beta(2, [[1, 2], [2, 4]])


def _elementary(n, idx):
    m = linalg.zeros(n, n)
    m[divmod(idx, n)] = Fraction(1)
    return m


def test_gl_beta_identity_is_commutator():
    g = gl_beta(2, linalg.identity(2))
    for p, q in product(range(4), repeat=2):
        a, b = _elementary(2, p), _elementary(2, q)
        assert linalg.equal(g.structure[p, q], (a @ b - b @ a).reshape(4))
    assert linalg.equal(g.twist, linalg.identity(4))


def test_gl_beta_diag_jacobi_brute_force():
    g = gl_beta(2, linalg.matrix([[2, 0], [0, 1]]))
    assert check_hom_lie(g).passed
    beta = linalg.matrix([[2, 0], [0, 1]])
    binv = linalg.inverse(beta)

    def br(x, y):
        return beta @ x @ binv @ y @ binv - beta @ y @ binv @ x @ binv

    def ad(x):
        return beta @ x @ binv

    for i, j, k in product(range(4), repeat=3):
        x, y, z = (_elementary(2, t) for t in (i, j, k))
        total = br(ad(x), br(y, z)) + br(ad(y), br(z, x)) + br(ad(z), br(x, y))
        assert linalg.is_zero(total)


def test_gl_beta_twist_is_automorphism_for_random_beta():
    rng = random.Random(4)
    for _ in range(10):
        beta = random_invertible(rng, 2)
        binv = linalg.inverse(beta)
        g = gl_beta(2, beta)
        for p, q in product(range(4), repeat=2):
            x, y = _elementary(2, p), _elementary(2, q)
            bracket = beta @ x @ binv @ y @ binv - beta @ y @ binv @ x @ binv
            assert linalg.equal(g.structure[p, q], bracket.reshape(4))
            ax, ay = beta @ x @ binv, beta @ y @ binv
            lhs = beta @ bracket @ binv
            rhs = beta @ ax @ binv @ ay @ binv - beta @ ay @ binv @ ax @ binv
            assert linalg.equal(lhs, rhs)


def test_gl_beta_three_dimensional():
    rng = random.Random(6)
    for _ in range(2):
        assert check_hom_lie(gl_beta(3, random_invertible(rng, 3))).passed


def test_q_witt_examples():
    q = variable("q")
    case1, case2 = q_witt("I"), q_witt("II")
    assert witt_bracket(case1, 0, 1) == (0, q ** -2)
    assert witt_check_jacobi(case1, 0, 1, 2)
    assert witt_twist(case2, 0) == (-2, -q)


def test_q_witt_closed_forms_and_jacobi():
    q = variable("q")
    for case in ("I", "II"):
        fam = q_witt(case)
        for n, m in product(range(-5, 6), repeat=2):
            idx, c = witt_bracket(fam, n, m)
            if case == "I":
                assert (idx, c) == (n + m - 1, (m - n) * q ** (n + m - 3))
            else:
                assert (idx, c) == (-n - m - 3, (m - n) * q ** (n + m + 1))
            assert witt_bracket(fam, m, n) == (idx, -c)
        for n in range(-5, 6):
            expected = (n, q ** (n - 1)) if case == "I" else (-n - 2, -(q ** (n + 1)))
            assert witt_twist(fam, n) == expected


@pytest.mark.parametrize("case", ["I", "II"])
def test_q_witt_jacobi_on_all_small_triples(case):
    fam = q_witt(case)
    for n, m, l in product(range(-5, 6), repeat=3):
        assert witt_check_jacobi(fam, n, m, l)


@pytest.mark.parametrize("case", ["I", "II"])
def test_q_witt_closed_form_matches_operator_oracle(case):
    report = witt_crosscheck(q_witt(case), bound=4, kmax=5)
    assert report.passed, report.summary()


def test_q_witt_at_q_equal_one_is_witt_algebra():
    fam = q_witt("I")
    for n, m in product(range(-4, 5), repeat=2):
        idx, c = witt_bracket(fam, n, m)
        assert (idx, substitute(c, 1)) == (n + m - 1, Fraction(m - n))
        tidx, tc = witt_twist(fam, n)
        assert (tidx, substitute(tc, 1)) == (n, 1)


def test_change_basis_preserves_axioms_and_round_trips():
    rng = random.Random(8)
    for _ in range(10):
        g = random_homlie(rng)
        p = random_invertible(rng, g.dim)
        h = g.change_basis(p)
        assert check_hom_lie(h).passed
        assert h.change_basis(linalg.inverse(p)) == g
