from collections import namedtuple
from .exceptions import FitError
import logging
import numpy as np

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4

FitResult = namedtuple(
    "FitResult",
    ["exponent", "prefactor", "fit_range", "residual", "excluded"],
)
FitResult.__doc__ = """Power law d = prefactor * x**exponent fitted on log-log axes.

``residual`` is the 2-norm of the log-space residuals; ``excluded`` lists the in-range
x values dropped because their d was not positive.
"""


def power_law(x, prefactor, exponent):
    return prefactor * np.power(x, exponent)


def fit_power_law(points, fit_range=None):
    """Least-squares line through (log x, log d) for the points with x inside ``fit_range``."""
    data = np.asarray(points, dtype=float).reshape(-1, 2)
    x, d = data[:, 0], data[:, 1]
    if fit_range is None:
        fit_range = (float(x.min()), float(x.max()))
    low, high = fit_range
    inside = (x >= low) & (x <= high)
    usable = inside & (d > 0) & (x > 0)
    excluded = [float(v) for v in x[inside & ~usable]]
    if excluded:
        logger.warning(
            "Excluding %d point(s) with nonpositive values from the power-law fit: x=%s"
            % (len(excluded), excluded)
        )
    if usable.sum() < MIN_FIT_POINTS:
        raise FitError(
            "A power-law fit needs at least %d positive points in [%g, %g], found %d"
            % (MIN_FIT_POINTS, low, high, usable.sum())
        )

    log_x, log_d = np.log(x[usable]), np.log(d[usable])
    design = np.column_stack([log_x, np.ones_like(log_x)])
    (slope, intercept), _, _, _ = np.linalg.lstsq(design, log_d, rcond=None)
    residual = float(np.linalg.norm(design @ np.array([slope, intercept]) - log_d))
    if not np.isfinite(residual):
        raise FitError("Power-law fit produced a non-finite residual")

    result = FitResult(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        fit_range=(float(low), float(high)),
        residual=residual,
        excluded=excluded,
    )
    logger.info(
        "Power-law fit on [%g, %g]: exponent %.4f, prefactor %.4g, residual %.3g"
        % (low, high, result.exponent, result.prefactor, residual)
    )
    return result


__all__ = ["FitResult", "fit_power_law", "power_law"]
