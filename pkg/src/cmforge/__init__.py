"""cmforge: computational objects of complex multiplication.

Class groups of imaginary quadratic orders, exact q-expansions and
high-precision values of modular functions, transformation polynomials,
ring class polynomials, Weber division values, and the verification suites
tying them together.
"""

from .classpoly import ClassPolynomial, class_polynomial, required_precision, s_R
from .errors import (
    CMForgeError,
    ClassNumberNotOne,
    ConductorDivisor,
    NonSquarefree,
    NoSquareRoot,
    PoleAtLatticePoint,
    RecognitionFailure,
    ReductionFailure,
    SquareLevel,
    UnsupportedLevel,
)
from .modforms import CMPoint, ModMatrix, eta_multiplier, eta_value, j_value
from .polynomials import BiPolynomial, IntPolynomial
from .qseries import CycInt, QSeries, delta_series, eta_series, j_series
from .quadratic import ClassGroup, Discriminant, Form, class_number, reduced_forms
from .transform import PrimMatrix, modular_polynomial_J, phi_polynomial, psi

__version__ = "0.1.0"

__all__ = [
    "BiPolynomial",
    "ClassGroup",
    "ClassNumberNotOne",
    "ClassPolynomial",
    "CMForgeError",
    "CMPoint",
    "ConductorDivisor",
    "CycInt",
    "Discriminant",
    "Form",
    "IntPolynomial",
    "ModMatrix",
    "NonSquarefree",
    "NoSquareRoot",
    "PoleAtLatticePoint",
    "PrimMatrix",
    "QSeries",
    "RecognitionFailure",
    "ReductionFailure",
    "SquareLevel",
    "UnsupportedLevel",
    "class_number",
    "class_polynomial",
    "delta_series",
    "eta_multiplier",
    "eta_series",
    "eta_value",
    "j_series",
    "j_value",
    "modular_polynomial_J",
    "phi_polynomial",
    "psi",
    "reduced_forms",
    "required_precision",
    "s_R",
]
