"""Vieta-involution tools for generalized Hurwitz and Baragar-Umeda equations."""

from .core import (
    AlreadySquarefree,
    BUEquation,
    EquationError,
    GHEquation,
    NotASolution,
    bu_residual,
    eval_residual,
    height,
    validate_bu,
    validate_equation,
)
from .enumeration import classify_coefficients, count_A, enumerate_fundamental, tree_expand
from .vieta import apply_involution, apply_word, is_fundamental, reduce
from .baragar_umeda import bu_classify, bu_enumerate_fundamental

__version__ = "0.1.0"
