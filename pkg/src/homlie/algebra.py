"""Hom-Lie algebras given by structure constants, plus the standing examples.

Indices are 0-based in the API and 1-based in every printed witness.  The
twist is a matrix in the column convention (``twist[:, j]`` is ``φ(e_j)``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Mapping, Sequence

import numpy as np

from . import linalg
from .report import CheckReport
from .scalars import canonical, variable

__all__ = [
    "SingularTwist",
    "NotHomLie",
    "UnknownKey",
    "HomLieAlgebra",
    "fmt_vec",
    "check_hom_lie",
    "require_hom_lie",
    "gl_beta",
    "GradedHomLieFamily",
    "q_witt",
    "witt_bracket",
    "witt_twist",
    "witt_check_jacobi",
    "witt_operator_bracket",
    "witt_operator_twist",
    "witt_crosscheck",
    "witt_table",
    "NamedExample",
    "named_example",
    "NAMED_KEYS",
]


class SingularTwist(ValueError):
    pass


class NotHomLie(ValueError):
    def __init__(self, report: CheckReport):
        super().__init__(report.summary())
        self.report = report


class UnknownKey(KeyError):
    pass


def fmt_vec(v, letter: str = "e") -> str:
    """``-e1 + 2*e3`` style rendering with 1-based indices."""
    out = ""
    for i, c in enumerate(v):
        if c == 0:
            continue
        name = f"{letter}{i + 1}"
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        body = name if mag == 1 else (f"{mag}*{name}" if isinstance(mag, Fraction) else f"({mag})*{name}")
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


@dataclass(frozen=True, eq=False)
class HomLieAlgebra:
    """Skew bracket ``structure[i, j, k] = c^k_{ij}`` with an invertible twist.

    Only the axioms that are cheap and structural (shape, invertible twist) are
    enforced here; multiplicativity and Hom-Jacobi are left to
    :func:`check_hom_lie` so that candidate structures can be inspected.
    """

    structure: np.ndarray
    twist: np.ndarray
    name: str = ""
    twist_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        s = np.asarray(self.structure, dtype=object)
        t = np.asarray(self.twist, dtype=object)
        n = t.shape[0]
        if t.shape != (n, n) or s.shape != (n, n, n):
            raise ValueError("structure constants and twist have inconsistent shapes")
        try:
            inv = linalg.inverse(t)
        except linalg.SingularMatrix as exc:
            raise SingularTwist(f"twist of {self.name or 'algebra'} is not invertible") from exc
        object.__setattr__(self, "structure", s)
        object.__setattr__(self, "twist", t)
        object.__setattr__(self, "twist_inv", inv)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence | Mapping[int, object]],
                      twist, name: str = "", require_multiplicative: bool = True) -> "HomLieAlgebra":
        """Build from ``{(i, j): [e_i, e_j]}`` with ``i < j``; skew-symmetry is implied.

        A twist that is not an algebra automorphism is rejected with
        :class:`NotHomLie` unless ``require_multiplicative`` is false.
        """
        s = linalg.zeros(dim, dim, dim)
        for (i, j), val in brackets.items():
            if i == j:
                raise ValueError(f"bracket [e{i + 1}, e{i + 1}] must vanish")
            vec = linalg.zeros(dim)
            items = val.items() if isinstance(val, Mapping) else enumerate(val)
            for k, c in items:
                vec[k] = canonical(c)
            if i > j:
                i, j, vec = j, i, -vec
            s[i, j, :] = vec
            s[j, i, :] = -vec
        g = cls(s, linalg.matrix(twist), name)
        if require_multiplicative:
            report = check_hom_lie(g)
            if not report["automorphism"].passed:
                raise NotHomLie(report)
        return g

    @classmethod
    def abelian(cls, dim: int, twist=None, name: str = "abelian") -> "HomLieAlgebra":
        t = linalg.identity(dim) if twist is None else linalg.matrix(twist)
        return cls(linalg.zeros(dim, dim, dim), t, name)

    @property
    def dim(self) -> int:
        return self.twist.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        out = linalg.zeros(self.dim)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj != 0 and i != j:
                    out = out + (xi * yj) * self.structure[i, j]
        return out

    def ad(self, x) -> np.ndarray:
        n = self.dim
        m = linalg.zeros(n, n)
        for j in range(n):
            m[:, j] = self.bracket(x, linalg.unit(n, j))
        return m

    def twist_power(self, k: int) -> np.ndarray:
        return self._powers(k)

    def _powers(self, k: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_power_cache", {})
        if k not in cache:
            if k == 0:
                cache[k] = linalg.identity(self.dim)
            elif k > 0:
                cache[k] = self._powers(k - 1) @ self.twist
            else:
                cache[k] = self._powers(k + 1) @ self.twist_inv
        return cache[k]

    def basis_vector(self, i: int) -> np.ndarray:
        return linalg.unit(self.dim, i)

    def bracket_table(self) -> dict[tuple[int, int], np.ndarray]:
        return {(i, j): self.structure[i, j].copy() for i, j in combinations(range(self.dim), 2)
                if any(c != 0 for c in self.structure[i, j])}

    def is_abelian(self) -> bool:
        return linalg.is_zero(self.structure)

    def with_twist(self, twist) -> "HomLieAlgebra":
        return HomLieAlgebra(self.structure, linalg.matrix(twist), self.name)

    def change_basis(self, p) -> "HomLieAlgebra":
        """Same algebra in the basis given by the columns of ``p``."""
        p = linalg.matrix(p)
        pinv = linalg.inverse(p)
        n = self.dim
        s = linalg.zeros(n, n, n)
        for i, j in combinations(range(n), 2):
            v = pinv @ self.bracket(p[:, i], p[:, j])
            s[i, j] = v
            s[j, i] = -v
        return HomLieAlgebra(s, pinv @ self.twist @ p, self.name)

    def __eq__(self, other):
        if not isinstance(other, HomLieAlgebra):
            return NotImplemented
        return linalg.equal(self.structure, other.structure) and linalg.equal(self.twist, other.twist)

    __hash__ = None

    def __repr__(self):
        rows = [f"[e{i + 1},e{j + 1}] = {fmt_vec(v)}" for (i, j), v in self.bracket_table().items()]
        return f"HomLieAlgebra({self.name or 'dim ' + str(self.dim)}: {'; '.join(rows) or 'abelian'})"


def check_hom_lie(g: HomLieAlgebra) -> CheckReport:
    """Skew-symmetry, multiplicativity of the twist, and the twisted Jacobi identity.

    Witnesses are the lexicographically smallest failing pair/triple.
    """
    rep = CheckReport(f"hom-lie {g.name}".strip())
    n = g.dim
    s = g.structure
    skew_fail = next(((i, j) for i, j in product(range(n), repeat=2)
                      if not linalg.equal(s[i, j], -s[j, i])), None)
    rep.add("skew", skew_fail is None,
            skew_fail and f"[e{skew_fail[0] + 1},e{skew_fail[1] + 1}] != -[e{skew_fail[1] + 1},e{skew_fail[0] + 1}]")

    phi = g.twist
    auto_fail = None
    for i, j in combinations(range(n), 2):
        lhs = phi @ s[i, j]
        rhs = g.bracket(phi[:, i], phi[:, j])
        if not linalg.equal(lhs, rhs):
            auto_fail = f"(e{i + 1},e{j + 1}): phi[x,y] = {fmt_vec(lhs)} but [phi x, phi y] = {fmt_vec(rhs)}"
            break
    rep.add("automorphism", auto_fail is None, auto_fail or "")

    triples = combinations(range(n), 3) if skew_fail is None else product(range(n), repeat=3)
    jac_fail = None
    for i, j, k in triples:
        total = hom_jacobiator(g, i, j, k)
        if not linalg.is_zero(total):
            jac_fail = f"(e{i + 1},e{j + 1},e{k + 1}): jacobiator = {fmt_vec(total)}"
            break
    rep.add("hom-jacobi", jac_fail is None, jac_fail or "")
    return rep


def hom_jacobiator(g: HomLieAlgebra, i: int, j: int, k: int) -> np.ndarray:
    phi, s = g.twist, g.structure
    return (g.bracket(phi[:, i], s[j, k]) + g.bracket(phi[:, j], s[k, i])
            + g.bracket(phi[:, k], s[i, j]))


def require_hom_lie(g: HomLieAlgebra) -> HomLieAlgebra:
    report = check_hom_lie(g)
    if not report:
        raise NotHomLie(report)
    return g


# -- gl(V) with the beta-twisted commutator ---------------------------------

def gl_beta(n: int, beta) -> HomLieAlgebra:
    """``(gl(n), [A,B]_β, Ad_β)`` on elementary matrices ``E_ab`` (index ``a*n + b``)."""
    beta = linalg.matrix(beta)
    if beta.shape != (n, n):
        raise ValueError("beta must be n x n")
    try:
        binv = linalg.inverse(beta)
    except linalg.SingularMatrix as exc:
        raise SingularTwist("beta is not invertible") from exc
    dim = n * n

    def elem(idx):
        m = linalg.zeros(n, n)
        m[divmod(idx, n)] = Fraction(1)
        return m

    s = linalg.zeros(dim, dim, dim)
    for p, q in combinations(range(dim), 2):
        a, b = elem(p), elem(q)
        br = beta @ a @ binv @ b @ binv - beta @ b @ binv @ a @ binv
        v = br.reshape(dim)
        s[p, q] = v
        s[q, p] = -v
    twist = linalg.zeros(dim, dim)
    for p in range(dim):
        twist[:, p] = (beta @ elem(p) @ binv).reshape(dim)
    return HomLieAlgebra(s, twist, f"gl({n})_beta")


# -- q-deformed Witt family ---------------------------------------------------

@dataclass(frozen=True)
class GradedHomLieFamily:
    """Infinite-dimensional algebra on ``{d_n : n ∈ Z}`` with monomial bracket and twist.

    ``bracket(n, m)`` and ``twist(n)`` return ``(target index, coefficient)``.
    """

    case: str
    var: str
    bracket: Callable[[int, int], tuple[int, object]]
    twist: Callable[[int], tuple[int, object]]

    def bracket_elem(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for n, a in u.items():
            for m, b in v.items():
                idx, c = self.bracket(n, m)
                if c != 0:
                    out[idx] = out.get(idx, 0) + a * b * c
        return {k: c for k, c in out.items() if c != 0}

    def twist_elem(self, u: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for n, a in u.items():
            idx, c = self.twist(n)
            out[idx] = out.get(idx, 0) + a * c
        return {k: c for k, c in out.items() if c != 0}


def q_witt(case: str, var: str = "q") -> GradedHomLieFamily:
    """Case ``"I"``: ``σ(t) = qt``; case ``"II"``: ``σ(t) = q/t``."""
    q = variable(var)
    case = case.upper()
    if case == "I":
        return GradedHomLieFamily(
            "I", var,
            lambda n, m: (n + m - 1, (m - n) * q ** (n + m - 3)),
            lambda n: (n, q ** (n - 1)),
        )
    if case == "II":
        return GradedHomLieFamily(
            "II", var,
            lambda n, m: (-n - m - 3, (m - n) * q ** (n + m + 1)),
            lambda n: (-n - 2, -(q ** (n + 1))),
        )
    raise UnknownKey(f"unknown q-Witt case {case!r}")


def witt_bracket(fam: GradedHomLieFamily, n: int, m: int) -> tuple[int, object]:
    return fam.bracket(n, m)


def witt_twist(fam: GradedHomLieFamily, n: int) -> tuple[int, object]:
    return fam.twist(n)


def witt_check_jacobi(fam: GradedHomLieFamily, n: int, m: int, l: int) -> bool:
    d = lambda k: {k: Fraction(1)}
    total: dict[int, object] = {}
    for a, b, c in ((n, m, l), (m, l, n), (l, n, m)):
        term = fam.bracket_elem(fam.twist_elem(d(a)), fam.bracket_elem(d(b), d(c)))
        for k, v in term.items():
            total[k] = total.get(k, 0) + v
    return all(v == 0 for v in total.values())


# Operator oracle: act on Laurent monomials t^k with coefficients in Q(q).

def _sigma_image(case: str, q) -> tuple[int, object]:
    """``σ(t) = coef * t^exp``."""
    return (1, q) if case == "I" else (-1, q)


def _subst(case: str, q, poly: Mapping[int, object], inverse: bool) -> dict[int, object]:
    # σ^{-1}(t) = t/q in case I; σ is an involution in case II
    exp, coef = _sigma_image(case, q)
    if inverse and case == "I":
        coef = 1 / q
    out: dict[int, object] = {}
    for k, c in poly.items():
        out[exp * k] = out.get(exp * k, 0) + c * coef ** k
    return {k: c for k, c in out.items() if c != 0}


def _d(case: str, q, n: int, poly: Mapping[int, object]) -> dict[int, object]:
    """``d_n(f) = f'(σ(t)) t^n`` applied termwise to ``t^k``."""
    exp, coef = _sigma_image(case, q)
    out: dict[int, object] = {}
    for k, c in poly.items():
        if k == 0:
            continue
        e = exp * (k - 1) + n
        out[e] = out.get(e, 0) + c * k * coef ** (k - 1)
    return {k: c for k, c in out.items() if c != 0}


def witt_operator_bracket(case: str, n: int, m: int, k: int, var: str = "q") -> dict[int, object]:
    """``[d_n, d_m]_σ (t^k)`` computed from the operator definition, not the closed form."""
    q = variable(var)
    f = {k: Fraction(1)}

    def chain(a, b):
        x = _subst(case, q, f, inverse=True)
        x = _d(case, q, b, x)
        x = _subst(case, q, x, inverse=True)
        x = _d(case, q, a, x)
        return _subst(case, q, x, inverse=False)

    left, right = chain(n, m), chain(m, n)
    out = dict(left)
    for e, c in right.items():
        out[e] = out.get(e, 0) - c
    return {e: c for e, c in out.items() if c != 0}


def witt_operator_twist(case: str, n: int, k: int, var: str = "q") -> dict[int, object]:
    """``Ad_σ(d_n)(t^k) = σ d_n σ^{-1}(t^k)``."""
    q = variable(var)
    x = _subst(case, q, {k: Fraction(1)}, inverse=True)
    x = _d(case, q, n, x)
    return _subst(case, q, x, inverse=False)


def witt_crosscheck(fam: GradedHomLieFamily, bound: int = 5, kmax: int = 6) -> CheckReport:
    """Compare the closed-form coefficients with the operator oracle on ``t^k``."""
    q = variable(fam.var)
    rep = CheckReport(f"q-witt case {fam.case} closed form vs operators")
    ks = [k for k in range(-kmax, kmax + 1) if k != 0]
    bad_br = bad_tw = None
    for n, m in product(range(-bound, bound + 1), repeat=2):
        idx, c = fam.bracket(n, m)
        for k in ks:
            expect = {e: c * v for e, v in _d(fam.case, q, idx, {k: Fraction(1)}).items()}
            expect = {e: v for e, v in expect.items() if v != 0}
            got = witt_operator_bracket(fam.case, n, m, k, fam.var)
            if got != expect:
                bad_br = bad_br or f"[d{n},d{m}](t^{k}): closed form {expect} vs operator {got}"
    for n in range(-bound, bound + 1):
        idx, c = fam.twist(n)
        for k in ks:
            expect = {e: c * v for e, v in _d(fam.case, q, idx, {k: Fraction(1)}).items() if c * v != 0}
            got = witt_operator_twist(fam.case, n, k, fam.var)
            if got != expect:
                bad_tw = bad_tw or f"Ad(d{n})(t^{k}): closed form {expect} vs operator {got}"
    rep.add("bracket", bad_br is None, bad_br or "")
    rep.add("twist", bad_tw is None, bad_tw or "")
    return rep


def witt_table(fam: GradedHomLieFamily, bound: int) -> dict[tuple[int, int], tuple[int, object]]:
    return {(n, m): fam.bracket(n, m) for n, m in product(range(-bound, bound + 1), repeat=2) if n < m}


# -- worked examples ---------------------------------------------------------

@dataclass
class NamedExample:
    algebra: HomLieAlgebra
    extras: dict = field(default_factory=dict)


def _rows_to_columns(rows) -> np.ndarray:
    """Transcribe a row-form matrix (images as rows) into the column convention."""
    return linalg.matrix(rows).T.copy()


def _dim2() -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(
        2, {(0, 1): [0, 1]}, _rows_to_columns([[1, 1], [0, 1]]), "dim2")


def _quadratic4() -> NamedExample:
    brackets = {
        (0, 1): [0, 1, 0, 0],
        (0, 2): [0, 1, 0, 0],
        (0, 3): [-1, -1, 1, -1],
        (1, 2): [0, 0, 0, 0],
        (1, 3): [0, 0, 1, 0],
        (2, 3): [0, 0, 1, 0],
    }
    phi = _rows_to_columns([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]])
    g = HomLieAlgebra.from_brackets(4, brackets, phi, "quadratic4")
    form = linalg.matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    return NamedExample(g, {"B": form, "split": ([0, 1], [2, 3])})


def _manin_gprime() -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(
        2, {(0, 1): [1, 0]}, _rows_to_columns([[1, 0], [-1, 1]]), "manin-gprime")


def _dim3(var: str = "a") -> NamedExample:
    a = variable(var)
    g = HomLieAlgebra.from_brackets(
        3, {(0, 2): [0, 1, 0]}, linalg.matrix([[a, 0, 0], [0, 1, 0], [0, 0, 1 / a]]), "dim3(a)")
    from .multilinear import MultiVector
    dual = HomLieAlgebra.from_brackets(
        3, {(0, 1): [1 / a, 0, 0], (1, 2): [0, 0, -a]}, linalg.inverse(g.twist).T.copy(), "dim3(a)*")
    return NamedExample(g, {"r": MultiVector.basis(3, 0, 2), "dual": dual})


def named_example(key: str) -> NamedExample:
    """The worked examples with their attached data.

    ``extras`` may carry ``B`` (bilinear form), ``split`` (index lists of a
    Manin triple), ``r`` (an r-matrix), ``dual`` (the expected dual algebra)
    and ``T`` (the reference O-operator candidate, read with columns as the
    images of the dual basis vectors).
    """
    from .multilinear import MultiVector

    if key == "quadratic4":
        return _quadratic4()
    if key == "manin-g":
        g = _dim2()
        return NamedExample(HomLieAlgebra(g.structure, g.twist, "manin-g"),
                            {"dual": _manin_gprime()})
    if key == "manin-gprime":
        return NamedExample(_manin_gprime())
    if key == "dim2":
        g = _dim2()
        dual = HomLieAlgebra.from_brackets(2, {(0, 1): [1, 0]}, linalg.inverse(g.twist).T.copy(), "dim2*")
        return NamedExample(g, {
            "r": MultiVector.basis(2, 0, 1),
            "dual": dual,
            "T": linalg.matrix([[-1, 1], [-1, 0]]),
        })
    if key in ("dim3", "dim3(a)"):
        return _dim3()
    raise UnknownKey(f"unknown example {key!r}; choose from {', '.join(NAMED_KEYS)}")


NAMED_KEYS = ("quadratic4", "manin-g", "manin-gprime", "dim2", "dim3(a)")
