"""Noether symmetries, quasi-invariance and nonsmooth extremal classification."""

from noether_kit.classifier import (
    AnalysisReport,
    ConditionVerdict,
    Status,
    analyze,
    check_dubois_reymond,
    check_euler_lagrange,
    check_weierstrass,
    verify_conservation,
)
from noether_kit.config import AnalysisConfig, SamplePlan
from noether_kit.errors import NoetherKitError
from noether_kit.symmetry import (
    InvarianceStatus,
    TransformationFamily,
    build_family,
    check_classical_invariance,
    check_quasi_invariance,
    classical_noether_quantity,
    noether_quantity,
    quasi_invariance_residual,
)
from noether_kit.trajectory import PiecewiseTrajectory, build_trajectory
from noether_kit.variational import LagrangianSystem, build_system

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisReport",
    "ConditionVerdict",
    "InvarianceStatus",
    "LagrangianSystem",
    "NoetherKitError",
    "PiecewiseTrajectory",
    "SamplePlan",
    "Status",
    "TransformationFamily",
    "analyze",
    "build_family",
    "build_system",
    "build_trajectory",
    "check_classical_invariance",
    "check_dubois_reymond",
    "check_euler_lagrange",
    "check_quasi_invariance",
    "check_weierstrass",
    "classical_noether_quantity",
    "noether_quantity",
    "quasi_invariance_residual",
    "verify_conservation",
]
