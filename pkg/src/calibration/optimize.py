"""Fit alpha by minimizing the preference loss over (0, 1)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from src.config import (
    CALIBRATION_GRID_START,
    CALIBRATION_GRID_STEP,
    CALIBRATION_GRID_STOP,
    CALIBRATION_MAX_ITERATIONS,
    CALIBRATION_TOLERANCE,
    DEFAULT_LAMBDA,
    FLAT_LOSS_TOLERANCE,
)
from src.calibration.objective import (
    LossBreakdown,
    PreferenceLike,
    PreparedPreference,
    check_lambda,
    delta_vector,
    loss_from_deltas,
    prepare_preferences,
    vote_matrix,
)
from src.corpus.tokenizer import DEFAULT_NORMALIZER, TextNormalizer

logger = logging.getLogger(__name__)

INV_PHI = 2.0 / (1.0 + math.sqrt(5.0))


# ---------------------------------------------------------------------------
# Golden-section search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoldenResult:
    argmin: float
    minimum: float
    iterations: int
    converged: bool


def golden_section_minimize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = CALIBRATION_TOLERANCE,
    max_iterations: int = CALIBRATION_MAX_ITERATIONS,
) -> GoldenResult:
    """Minimize f on [lo, hi] assuming it is unimodal there.

    The bracket endpoints are compared against the interior result at the
    end, so a minimum sitting on an endpoint is returned as that endpoint.
    """
    lo0, hi0 = lo, hi
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    iteration = 0
    while iteration < max_iterations and abs(hi - lo) > tol:
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        iteration += 1

    x_mid = 0.5 * (lo + hi)
    best_x, best_f = x_mid, f(x_mid)
    for x in (lo0, hi0):
        fx = f(x)
        if fx < best_f:
            best_x, best_f = x, fx
    converged = abs(hi - lo) <= tol and not (math.isnan(f1) or math.isnan(f2))
    return GoldenResult(argmin=best_x, minimum=best_f, iterations=iteration, converged=converged)


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

@dataclass
class CalibrationResult:
    alpha_star: float
    total_loss: float
    pref_loss: float
    tie_loss: float
    mean_delta_ras: float
    tie_rate: float
    loss_curve: list[tuple[float, float]] = field(default_factory=list)
    lam: float = DEFAULT_LAMBDA
    n_records: int = 0
    n_votes: int = 0
    at_boundary: bool = False
    flat: bool = False
    agreement: Optional[float] = None   # share of decisive items whose dR sign matches the vote majority

    def to_dict(self, rounder: Callable[[Optional[float]], Optional[float]] = lambda v: v) -> dict:
        return {
            "alpha_star": rounder(self.alpha_star),
            "lambda": rounder(self.lam),
            "total_loss": rounder(self.total_loss),
            "pref_loss": rounder(self.pref_loss),
            "tie_loss": rounder(self.tie_loss),
            "mean_delta_ras": rounder(self.mean_delta_ras),
            "tie_rate": rounder(self.tie_rate),
            "agreement": rounder(self.agreement),
            "n_records": self.n_records,
            "n_votes": self.n_votes,
            "at_boundary": self.at_boundary,
            "flat": self.flat,
            "loss_curve": [{"alpha": rounder(a), "loss": rounder(l)} for a, l in self.loss_curve],
        }


def calibration_grid() -> np.ndarray:
    n = int(round((CALIBRATION_GRID_STOP - CALIBRATION_GRID_START) / CALIBRATION_GRID_STEP))
    return np.round(CALIBRATION_GRID_START + CALIBRATION_GRID_STEP * np.arange(n + 1), 10)


def _agreement(deltas: np.ndarray, votes: np.ndarray) -> Optional[float]:
    majority = np.sign(votes[:, 1] - votes[:, 0])
    decisive = majority != 0
    if not decisive.any():
        return None
    return float(np.mean(np.sign(deltas[decisive]) == majority[decisive]))


def fit_alpha(
    records: Sequence[PreferenceLike],
    lam: float = DEFAULT_LAMBDA,
    normalizer: TextNormalizer = DEFAULT_NORMALIZER,
) -> CalibrationResult:
    """Coarse grid over alpha, then golden-section refinement around the best point."""
    lam = check_lambda(lam)
    prepared: list[PreparedPreference] = prepare_preferences(records, normalizer)
    votes = vote_matrix(prepared)

    def evaluate(alpha: float) -> tuple[LossBreakdown, np.ndarray]:
        deltas = delta_vector(prepared, alpha)
        return loss_from_deltas(deltas, votes, lam), deltas

    grid = calibration_grid()
    curve: list[tuple[float, float]] = []
    max_abs_delta = 0.0
    for a in grid:
        loss, deltas = evaluate(float(a))
        if not math.isfinite(loss.total):
            raise ArithmeticError(f"non-finite loss at alpha={a}")
        curve.append((float(a), loss.total))
        max_abs_delta = max(max_abs_delta, float(np.max(np.abs(deltas))))

    losses = np.array([l for _, l in curve])
    best = int(np.argmin(losses))
    flat = max_abs_delta <= FLAT_LOSS_TOLERANCE

    if flat:
        logger.warning("Every delta RAS is zero across the grid; alpha is not identifiable")
        alpha_star = float(grid[best])
    else:
        lo = float(grid[max(best - 1, 0)])
        hi = float(grid[min(best + 1, len(grid) - 1)])
        refined = golden_section_minimize(lambda a: evaluate(a)[0].total, lo, hi)
        alpha_star = refined.argmin if refined.minimum <= losses[best] else float(grid[best])
        logger.debug(
            "Golden refinement on [%.2f, %.2f]: %d iterations, converged=%s",
            lo, hi, refined.iterations, refined.converged,
        )

    at_boundary = (
        abs(alpha_star - grid[0]) <= CALIBRATION_TOLERANCE
        or abs(alpha_star - grid[-1]) <= CALIBRATION_TOLERANCE
    )
    if at_boundary and not flat:
        logger.warning("alpha* = %.4f lies on the search boundary", alpha_star)

    final, deltas = evaluate(alpha_star)
    n_votes = int(votes.sum())
    result = CalibrationResult(
        alpha_star=alpha_star,
        total_loss=final.total,
        pref_loss=final.pref,
        tie_loss=final.tie,
        mean_delta_ras=float(np.mean(deltas)),
        tie_rate=float(votes[:, 2].sum()) / n_votes,
        loss_curve=curve,
        lam=lam,
        n_records=len(prepared),
        n_votes=n_votes,
        at_boundary=bool(at_boundary),
        flat=flat,
        agreement=_agreement(deltas, votes),
    )
    logger.info(
        "alpha*=%.4f over %d records (loss %.6f, mean dR %.4f)",
        result.alpha_star, result.n_records, result.total_loss, result.mean_delta_ras,
    )
    return result
