"""Exact computations with regular Hom-Lie algebras, their bialgebras and r-matrices."""
from __future__ import annotations

__version__ = "0.1.0"

from .algebra import HomLieAlgebra, check_hom_lie, named_example, q_witt
from .bialgebra import HomLieBialgebra, ManinTriple, QuadraticHomLie, check_bialgebra, double, split
from .multilinear import MultiForm, MultiVector, extended_bracket
from .reps import Representation, adjoint_rep, coadjoint, dual_rep, semidirect
from .report import CheckReport
from .scalars import RatFunc, parse_scalar, variable
from .yangbaxter import OOperator, RMatrix, check_chybe, check_o_operator, search_chybe

__all__ = [
    "__version__",
    "HomLieAlgebra",
    "check_hom_lie",
    "named_example",
    "q_witt",
    "HomLieBialgebra",
    "ManinTriple",
    "QuadraticHomLie",
    "check_bialgebra",
    "double",
    "split",
    "MultiForm",
    "MultiVector",
    "extended_bracket",
    "Representation",
    "adjoint_rep",
    "coadjoint",
    "dual_rep",
    "semidirect",
    "CheckReport",
    "RatFunc",
    "parse_scalar",
    "variable",
    "OOperator",
    "RMatrix",
    "check_chybe",
    "check_o_operator",
    "search_chybe",
]
