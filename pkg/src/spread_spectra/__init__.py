"""Point spectra of bilateral weighted shift models with certified verdicts."""

from .analysis import (
    Budget,
    GridSpec,
    MembershipVerdict,
    Status,
    boundary_condition,
    classify_membership,
    classify_model,
    eigen_profile,
    geometric_mean_limits,
    grid_classify,
    model_region,
)
from .matrixlab import eig_dense, finite_lab_run, residual_report, truncate_model
from .model import PRESETS, Model, ScenarioSpec, build_model
from .scenario import Scenario, parse_scenario, serialize_scenario

__all__ = [
    "Budget",
    "GridSpec",
    "MembershipVerdict",
    "Model",
    "PRESETS",
    "Scenario",
    "ScenarioSpec",
    "Status",
    "boundary_condition",
    "build_model",
    "classify_membership",
    "classify_model",
    "eig_dense",
    "eigen_profile",
    "finite_lab_run",
    "geometric_mean_limits",
    "grid_classify",
    "model_region",
    "parse_scenario",
    "residual_report",
    "serialize_scenario",
    "truncate_model",
]
