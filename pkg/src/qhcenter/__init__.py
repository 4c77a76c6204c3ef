"""Symbolic-numeric analysis of quasi-homogeneous planar vector fields.

Classifies the origin as a global center, stable/unstable focus, or
non-monodromic point, and decides axis/orbital reversibility and analytic
integrability, by exact rational computation cross-checked against an
independent ODE oracle.
"""

__version__ = "0.1.0"

from .classify import Label, Verdict, classify, residue_f0
from .fields import Decomposition, QHField, decompose, infer_types
from .integrability import IntegrabilityResult, analyze_integrability
from .monodromy import is_monodromic
from .polycore import BiPoly, TypeVector, UniPoly
from .reversibility import ReversibilityWitness, is_reversible

__all__ = [
    "BiPoly",
    "Decomposition",
    "IntegrabilityResult",
    "Label",
    "QHField",
    "ReversibilityWitness",
    "TypeVector",
    "UniPoly",
    "Verdict",
    "analyze_integrability",
    "classify",
    "decompose",
    "infer_types",
    "is_monodromic",
    "is_reversible",
    "residue_f0",
]
