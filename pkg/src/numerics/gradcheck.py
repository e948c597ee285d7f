from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

DEFAULT_STEP = 1e-5


@dataclass
class GradientReport:
    max_relative_error: float
    tolerance: float
    checked: int
    # coordinates where one-sided differences disagree: treated as kinks and excluded
    flagged: List[int] = field(default_factory=list)
    worst_index: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-5) -> np.ndarray:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / denom


def _compare(
    evaluate: Callable[[int, float], float],
    analytic: np.ndarray,
    size: int,
    tolerance: float,
    h: float,
    indices: np.ndarray,
) -> GradientReport:
    analytic = np.asarray(analytic, dtype=np.float64).ravel()
    errors, flagged, checked = [], [], []
    for i in indices:
        f0 = evaluate(i, 0.0)
        fp = evaluate(i, h)
        fm = evaluate(i, -h)
        numeric = (fp - fm) / (2.0 * h)
        forward = (fp - f0) / h
        backward = (f0 - fm) / h
        scale = max(abs(forward), abs(backward), 1.0)
        if abs(forward - backward) > max(1e-3 * scale, 1e3 * h * scale):
            flagged.append(int(i))
            continue
        errors.append(float(relative_error(analytic[i], numeric)))
        checked.append(int(i))
    if not errors:
        return GradientReport(0.0, tolerance, 0, flagged)
    worst = int(np.argmax(errors))
    return GradientReport(max(errors), tolerance, len(errors), flagged, checked[worst])


def _pick(size: int, max_coords: Optional[int], rng: Optional[np.random.Generator]) -> np.ndarray:
    if max_coords is None or size <= max_coords:
        return np.arange(size)
    rng = rng or np.random.default_rng(0)
    return np.sort(rng.choice(size, size=max_coords, replace=False))


def gradient_check(
    function: Callable[[np.ndarray], float],
    point: np.ndarray,
    analytic: np.ndarray,
    tolerance: float = 1e-6,
    h: float = DEFAULT_STEP,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradientReport:
    """Compare an analytic gradient of a scalar function to central differences at `point`"""
    base = np.array(point, dtype=np.float64)
    flat = base.ravel()

    def evaluate(i: int, delta: float) -> float:
        x = flat.copy()
        x[i] += delta
        return float(function(x.reshape(base.shape)))

    return _compare(evaluate, analytic, flat.size, tolerance, h, _pick(flat.size, max_coords, rng))


def parameter_gradient_check(
    loss: Callable[[], float],
    parameter: np.ndarray,
    analytic: np.ndarray,
    tolerance: float = 1e-6,
    h: float = DEFAULT_STEP,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradientReport:
    """Same check for a parameter array that `loss` reads in place"""
    flat = parameter.reshape(-1)

    def evaluate(i: int, delta: float) -> float:
        original = flat[i]
        flat[i] = original + delta
        try:
            return float(loss())
        finally:
            flat[i] = original

    return _compare(evaluate, np.array(analytic, copy=True), flat.size, tolerance, h, _pick(flat.size, max_coords, rng))
