"""Curvature loci of regular and corank-1 3-manifolds, from their nets of quadrics."""

from .classifier import (
    LocusClassification,
    SingularLocusReport,
    TableViolation,
    classify_regular,
    classify_singular,
    generic_census,
    kind_from_evidence,
)
from .determinantal import ConstraintQuadric, CubicSystem, cubic_system, delta, substantiality
from .net_model import NetOfQuadrics, QuadraticTernaryForm, SingularJet, abc_family, orbit, orbit_table
from .variety import ProjectiveLineSolution, VarietyDecomposition, decompose, local_multiplicity

__all__ = [
    "ConstraintQuadric",
    "CubicSystem",
    "LocusClassification",
    "NetOfQuadrics",
    "ProjectiveLineSolution",
    "QuadraticTernaryForm",
    "SingularJet",
    "SingularLocusReport",
    "TableViolation",
    "VarietyDecomposition",
    "abc_family",
    "classify_regular",
    "classify_singular",
    "cubic_system",
    "decompose",
    "delta",
    "generic_census",
    "kind_from_evidence",
    "local_multiplicity",
    "orbit",
    "orbit_table",
    "substantiality",
]
