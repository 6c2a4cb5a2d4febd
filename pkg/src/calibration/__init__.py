"""Fit the abstention cost factor to listening-test preferences."""

from src.calibration.objective import (
    LossBreakdown,
    PreparedPreference,
    delta_ras,
    loss_from_deltas,
    prepare_preferences,
    preference_loss,
    sigmoid,
)
from src.calibration.optimize import (
    CalibrationResult,
    GoldenResult,
    calibration_grid,
    fit_alpha,
    golden_section_minimize,
)
from src.calibration.synthetic import generate_preferences

__all__ = [
    "CalibrationResult",
    "GoldenResult",
    "LossBreakdown",
    "PreparedPreference",
    "calibration_grid",
    "delta_ras",
    "fit_alpha",
    "generate_preferences",
    "golden_section_minimize",
    "loss_from_deltas",
    "prepare_preferences",
    "preference_loss",
    "sigmoid",
]
