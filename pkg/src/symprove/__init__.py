"""Groebner-basis verification of symplecticity for partitioned Runge-Kutta methods."""

from .groebner import GroebnerBasis, IdealSpec, buchberger, ideal_member, normal_form
from .prk import CoefficientSet, Kind, PRKSpec, random_symplectic_coefficients
from .prover import ProofCertificate, ProofOptions, prove
from .ring import QQ, MonomialOrder, Polynomial, RationalFunctionField, SymbolTable
from .text import parse_polynomial, render_polynomial

__all__ = [
    "CoefficientSet",
    "GroebnerBasis",
    "IdealSpec",
    "Kind",
    "MonomialOrder",
    "PRKSpec",
    "Polynomial",
    "ProofCertificate",
    "ProofOptions",
    "QQ",
    "RationalFunctionField",
    "SymbolTable",
    "buchberger",
    "ideal_member",
    "normal_form",
    "parse_polynomial",
    "prove",
    "random_symplectic_coefficients",
    "render_polynomial",
]

__version__ = "0.1.0"
