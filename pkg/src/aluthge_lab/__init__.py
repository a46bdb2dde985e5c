"""Generalized Aluthge transforms of complex matrices over operator means."""

__version__ = "0.1.0"

from .dynamics import (
    IterationTrace,
    arithmetic_iterate_closed_form,
    check_kernel_condition,
    iterate,
    phase_gap,
    predict_arithmetic_limit,
)
from .estimators import AluthgeIteration, AluthgeTransformer, NumericalRange
from .linalg import (
    PolarParts,
    SpectralData,
    frobenius_norm,
    hermitian_eig,
    normality_defect,
    polar_decompose,
    spectral_norm,
)
from .matrix_io import read_matrix, write_matrix
from .means import (
    OperatorMean,
    RepresentingMeasure,
    check_mean_axioms,
    dominance_check,
    make_mean,
    parse_mean,
    perspective_matrix,
)
from .numrange import numerical_range, range_included
from .shiftlab import (
    WeightSequence,
    build_oscillating_weights,
    first_weight_closed_form,
    iterate_weights,
    step_weights,
)
from .transform import aluthge_closed_form, aluthge_quadrature_oracle, aluthge_transform

__all__ = [
    "AluthgeIteration",
    "AluthgeTransformer",
    "IterationTrace",
    "NumericalRange",
    "OperatorMean",
    "PolarParts",
    "RepresentingMeasure",
    "SpectralData",
    "WeightSequence",
    "aluthge_closed_form",
    "aluthge_quadrature_oracle",
    "aluthge_transform",
    "arithmetic_iterate_closed_form",
    "build_oscillating_weights",
    "check_kernel_condition",
    "check_mean_axioms",
    "dominance_check",
    "first_weight_closed_form",
    "frobenius_norm",
    "hermitian_eig",
    "iterate",
    "iterate_weights",
    "make_mean",
    "normality_defect",
    "numerical_range",
    "parse_mean",
    "perspective_matrix",
    "phase_gap",
    "polar_decompose",
    "predict_arithmetic_limit",
    "range_included",
    "read_matrix",
    "spectral_norm",
    "step_weights",
    "write_matrix",
]
