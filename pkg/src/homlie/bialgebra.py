"""Quadratic Hom-Lie algebras, Manin triples and purely Hom-Lie bialgebras.

A bialgebra is stored as the pair ``(g, g*)``; the cobracket ``Δ`` is always
read off the structure constants of ``g*``, never kept separately.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import linalg
from .algebra import HomLieAlgebra, check_hom_lie, fmt_vec
from .multilinear import MultiVector, extended_bracket, wedge_basis
from .report import CheckReport
from .reps import coadjoint

__all__ = [
    "TwistMismatch",
    "InvalidBialgebra",
    "NonstandardPairing",
    "QuadraticHomLie",
    "ManinTriple",
    "HomLieBialgebra",
    "check_quadratic",
    "check_manin_triple",
    "check_bialgebra",
    "cobracket_matrix",
    "cobracket_defect",
    "double",
    "split",
]


class TwistMismatch(ValueError):
    pass


class InvalidBialgebra(ValueError):
    def __init__(self, report: CheckReport):
        super().__init__(report.summary())
        self.report = report


class NonstandardPairing(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuadraticHomLie:
    algebra: HomLieAlgebra
    form: np.ndarray

    def __post_init__(self):
        f = linalg.matrix(self.form)
        n = self.algebra.dim
        if f.shape != (n, n):
            raise ValueError(f"bilinear form must be {n}x{n}")
        object.__setattr__(self, "form", f)

    def pair(self, u, v):
        return u @ self.form @ v


def _as_columns(sub, n: int) -> np.ndarray:
    arr = np.asarray(sub, dtype=object)
    if arr.ndim == 2:
        return linalg.matrix(arr)
    out = linalg.zeros(n, len(arr))
    for j, i in enumerate(arr):
        out[int(i), j] = 1
    return out


@dataclass(frozen=True, eq=False)
class ManinTriple:
    """Ambient quadratic algebra split into two subspaces.

    ``g_basis`` and ``gp_basis`` are either lists of ambient basis indices or
    matrices whose columns span the subspaces.
    """

    ambient: QuadraticHomLie
    g_basis: np.ndarray
    gp_basis: np.ndarray

    def __post_init__(self):
        n = self.ambient.algebra.dim
        object.__setattr__(self, "g_basis", _as_columns(self.g_basis, n))
        object.__setattr__(self, "gp_basis", _as_columns(self.gp_basis, n))


@dataclass(frozen=True, eq=False)
class HomLieBialgebra:
    g: HomLieAlgebra
    dual: HomLieAlgebra

    def __post_init__(self):
        if self.g.dim != self.dual.dim:
            raise ValueError("g and its dual must have the same dimension")

    @property
    def delta(self) -> np.ndarray:
        """``Δ`` as a ``C(n,2) × n`` matrix: column ``k`` holds ``Δ(e_k)``."""
        return cobracket_matrix(self.dual)

    def __eq__(self, other):
        if not isinstance(other, HomLieBialgebra):
            return NotImplemented
        return self.g == other.g and self.dual == other.dual

    __hash__ = None


def _basis_name(v: np.ndarray) -> str:
    return fmt_vec(v)


def check_quadratic(q: QuadraticHomLie) -> CheckReport:
    g, b = q.algebra, q.form
    n = g.dim
    phi = g.twist
    report = CheckReport(f"quadratic {g.name}".strip())
    sym = next(((i, j) for i, j in combinations(range(n), 2) if b[i, j] != b[j, i]), None)
    report.add("symmetric", sym is None, sym and f"B(e{sym[0] + 1},e{sym[1] + 1}) != B(e{sym[1] + 1},e{sym[0] + 1})")
    report.add("nondegenerate", linalg.rank(b) == n, f"rank {linalg.rank(b)} < {n}")
    bad = None
    for i, j, k in product(range(n), repeat=3):
        u, v, w = (linalg.unit(n, t) for t in (i, j, k))
        lhs = q.pair(g.bracket(u, v), phi[:, k])
        rhs = -q.pair(phi[:, j], g.bracket(u, w))
        if lhs != rhs:
            bad = f"(u,v,w)=(e{i + 1},e{j + 1},e{k + 1}): B([u,v],phi w) = {lhs}, -B(phi v,[u,w]) = {rhs}"
            break
    report.add("invariance", bad is None, bad or "")
    bad = None
    for i, j in product(range(n), repeat=2):
        lhs = q.pair(phi[:, i], phi[:, j])
        if lhs != b[i, j]:
            bad = f"B(phi e{i + 1}, phi e{j + 1}) = {lhs} but B(e{i + 1},e{j + 1}) = {b[i, j]}"
            break
    report.add("twist-isometry", bad is None, bad or "")
    return report


def _in_span(cols: np.ndarray, v: np.ndarray) -> bool:
    try:
        linalg.solve(cols, v)
        return True
    except linalg.InconsistentSystem:
        return False


def check_manin_triple(t: ManinTriple) -> CheckReport:
    q = t.ambient
    g = q.algebra
    n = g.dim
    gb, hb = t.g_basis, t.gp_basis
    report = CheckReport(f"manin triple {g.name}".strip())
    report.extend(check_quadratic(q), "quadratic:")
    both = np.concatenate([gb, hb], axis=1)
    report.add("direct-sum", both.shape[1] == n and linalg.rank(both) == n,
               f"dim g + dim g' = {both.shape[1]}, rank {linalg.rank(both)}, ambient {n}")
    bad = None
    for label, sub in (("g", gb), ("g'", hb)):
        for a, c in product(range(sub.shape[1]), repeat=2):
            val = q.pair(sub[:, a], sub[:, c])
            if val != 0:
                bad = f"B({_basis_name(sub[:, a])},{_basis_name(sub[:, c])})={val} in {label}"
                break
        if bad:
            break
    report.add("isotropy", bad is None, bad or "")
    bad = None
    for label, sub in (("g", gb), ("g'", hb)):
        for a, c in combinations(range(sub.shape[1]), 2):
            br = g.bracket(sub[:, a], sub[:, c])
            if not _in_span(sub, br):
                bad = f"[{_basis_name(sub[:, a])},{_basis_name(sub[:, c])}] = {fmt_vec(br)} leaves {label}"
                break
        if bad:
            break
    report.add("subalgebras", bad is None, bad or "")
    bad = None
    for label, sub in (("g", gb), ("g'", hb)):
        for a in range(sub.shape[1]):
            img = g.twist @ sub[:, a]
            if not _in_span(sub, img):
                bad = f"phi({_basis_name(sub[:, a])}) = {fmt_vec(img)} leaves {label}"
                break
        if bad:
            break
    report.add("twist-splits", bad is None, bad or "")
    return report


def cobracket_matrix(alg: HomLieAlgebra) -> np.ndarray:
    """Dualize a bracket on ``V`` into a cobracket ``V* → ∧²V*``.

    Entry ``((i,j), k)`` is ``c^k_{ij}`` for ``i < j``: the transpose of the
    bracket viewed as a map ``∧²V → V``.
    """
    n = alg.dim
    pairs = wedge_basis(n, 2)
    m = linalg.zeros(len(pairs), n)
    for row, (i, j) in enumerate(pairs):
        m[row, :] = alg.structure[i, j]
    return m


def cobracket_defect(alg: HomLieAlgebra, cob: np.ndarray, i: int, j: int) -> MultiVector:
    """``Δ([x,y]) - ad_{φ^{-1}x}Δ(y) + ad_{φ^{-1}y}Δ(x)`` for ``x=e_i, y=e_j``."""
    n = alg.dim

    def delta(v):
        return MultiVector.from_coords(n, 2, cob @ v)

    x = MultiVector.from_vector(alg.twist_inv[:, i])
    y = MultiVector.from_vector(alg.twist_inv[:, j])
    return (delta(alg.structure[i, j])
            - extended_bracket(x, delta(linalg.unit(n, j)), alg)
            + extended_bracket(y, delta(linalg.unit(n, i)), alg))


def _compatibility(alg: HomLieAlgebra, cob: np.ndarray, letter: str = "e") -> str | None:
    for i, j in combinations(range(alg.dim), 2):
        d = cobracket_defect(alg, cob, i, j)
        if not d.is_zero():
            return f"({letter}{i + 1},{letter}{j + 1}): defect {d!r}"
    return None


def check_bialgebra(b: HomLieBialgebra) -> CheckReport:
    """Cobracket compatibility on ``g``, the mirrored condition on ``g*``, and their agreement."""
    g, dual = b.g, b.dual
    expected = g.twist_inv.T
    if not linalg.equal(dual.twist, expected):
        raise TwistMismatch("dual twist must be the transpose of the inverse twist")
    report = CheckReport(f"bialgebra {g.name}".strip())
    report.extend(check_hom_lie(g), "g:")
    report.extend(check_hom_lie(dual), "g*:")
    on_g = _compatibility(g, cobracket_matrix(dual))
    report.add("cocycle", on_g is None, on_g or "")
    on_dual = _compatibility(dual, cobracket_matrix(g), "e^")
    report.add("dual-cocycle", on_dual is None, on_dual or "")
    report.add("conditions-agree", (on_g is None) == (on_dual is None),
               "one compatibility condition holds and the other fails")
    return report


def double(b: HomLieBialgebra, verify: bool = True) -> ManinTriple:
    """``g ⊕ g*`` with the mixed bracket and the canonical pairing.

    Basis: ``e_1..e_n`` followed by ``e^1..e^n``.
    """
    if verify:
        report = check_bialgebra(b)
        if not report:
            raise InvalidBialgebra(report)
    g, dual = b.g, b.dual
    n = g.dim
    on_dual = coadjoint(g)       # g acting on g*
    on_g = coadjoint(dual)       # g* acting on g** = g
    s = linalg.zeros(2 * n, 2 * n, 2 * n)
    s[:n, :n, :n] = g.structure
    s[n:, n:, n:] = dual.structure
    for i in range(n):
        for j in range(n):
            v = linalg.zeros(2 * n)
            v[:n] = -on_g.matrices[j][:, i]
            v[n:] = on_dual.matrices[i][:, j]
            s[i, n + j] = v
            s[n + j, i] = -v
    ambient = HomLieAlgebra(s, linalg.block_diag(g.twist, dual.twist), f"double({g.name})" if g.name else "double")
    form = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        form[i, n + i] = form[n + i, i] = 1
    return ManinTriple(QuadraticHomLie(ambient, form), list(range(n)), list(range(n, 2 * n)))


def split(t: ManinTriple) -> HomLieBialgebra:
    """Read ``(g, g*)`` off a Manin triple.

    The second subspace is rebased to the ``B``-dual basis of the first, so any
    complementary isotropic split is accepted as long as ``B`` pairs the two
    factors nondegenerately.
    """
    q = t.ambient
    gb, hb = t.g_basis, t.gp_basis
    k = gb.shape[1]
    pairing = gb.T @ q.form @ hb
    if hb.shape[1] != k:
        raise NonstandardPairing("factors have different dimensions")
    try:
        pinv = linalg.inverse(pairing)
    except linalg.SingularMatrix as exc:
        raise NonstandardPairing("B does not pair the two factors nondegenerately") from exc
    basis = np.concatenate([gb, hb @ pinv], axis=1)
    if not linalg.equal(basis.T @ q.form @ basis, _standard_form(k)):
        raise NonstandardPairing("factors are not isotropic")
    amb = q.algebra.change_basis(basis)
    s, phi = amb.structure, amb.twist
    if not (linalg.is_zero(s[:k, :k, k:]) and linalg.is_zero(s[k:, k:, :k])
            and linalg.is_zero(phi[:k, k:]) and linalg.is_zero(phi[k:, :k])):
        raise NonstandardPairing("factors are not closed under the bracket and the twist")
    g = HomLieAlgebra(s[:k, :k, :k].copy(), phi[:k, :k].copy(), "g")
    dual = HomLieAlgebra(s[k:, k:, k:].copy(), phi[k:, k:].copy(), "g*")
    return HomLieBialgebra(g, dual)


def _standard_form(k: int) -> np.ndarray:
    f = linalg.zeros(2 * k, 2 * k)
    for i in range(k):
        f[i, k + i] = f[k + i, i] = 1
    return f
