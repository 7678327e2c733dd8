"""Structure theory and subword-complexity classification for morphic sequences."""

from .classify import ComplexityClass, ComplexityVerdict, Params, classify
from .complexity import ComplexityTable, cross_check, factor_counts, fit_exponent
from .normalize import normalize
from .orders import INF, letter_profiles
from .words import MorphicSystem, generate_prefix, make_system, parse_system

__all__ = [
    "INF",
    "ComplexityClass",
    "ComplexityTable",
    "ComplexityVerdict",
    "MorphicSystem",
    "Params",
    "classify",
    "cross_check",
    "factor_counts",
    "fit_exponent",
    "generate_prefix",
    "letter_profiles",
    "make_system",
    "normalize",
    "parse_system",
]
