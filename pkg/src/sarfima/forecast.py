"""One-step-ahead prediction with constant-width and volatility-adaptive bands.

The predictor inverts the model into its AR(infinity) form.  With
w_0 = 1, w_1, w_2, ... the autoregressive weights of

    short-AR(z) (1-z)^d (1-z^s)^D / short-MA(z),

the one-step forecast of the centered series is
xhat_t = -sum_{j>=1} w_j (x_{t-j} - mu), truncated at the available
history, and the innovation estimate is eps_t = (x_t - mu) - xhat_t.
Interval forecasts come in two flavours: a constant-width band using the
innovation variance, and (when the model has a variance recursion) a band
whose width tracks the one-step-ahead conditional variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .estimate import garch_variances
from .exceptions import DataError
from .fracdiff import apply_filter, ar_expansion
from .model import SarfimaGarchModel, polynomial_roots_check


@dataclass(frozen=True)
class ForecastSeries:
    """One-step predictions aligned with the input series.

    ``predictions[t]`` uses observations strictly before ``t``; entry 0 is
    the unconditional mean.  Bands are symmetric around the prediction;
    the adaptive pair is ``None`` when the model carries no variance
    recursion.
    """

    predictions: np.ndarray
    innovations: np.ndarray
    conditional_variances: np.ndarray | None
    lower: np.ndarray
    upper: np.ndarray
    lower_adaptive: np.ndarray | None
    upper_adaptive: np.ndarray | None
    level: float

    def __post_init__(self):
        for name in ("predictions", "innovations", "conditional_variances",
                     "lower", "upper", "lower_adaptive", "upper_adaptive"):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def one_step_forecasts(x: np.ndarray, model: SarfimaGarchModel,
                       level: float = 0.95) -> ForecastSeries:
    """Compute one-step-ahead forecasts for every index of ``x``.

    Requires an invertible MA side (the AR weights are its power-series
    reciprocal); the memory orders themselves only shape the weights and
    may sit outside the stationary region, as estimated orders sometimes
    do.  The variance recursion, when present, is seeded at its
    unconditional level and driven by the estimated innovations, so the
    band width at ``t`` depends only on data before ``t``.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 1:
        raise DataError("empty series")
    if not 0.0 < level < 1.0:
        raise DataError(f"level must lie in (0, 1), got {level}")
    sarma = model.sarma
    if not (polynomial_roots_check(sarma.theta, 1)
            and polynomial_roots_check(sarma.Theta, model.s)):
        raise DataError("MA side is not invertible; AR weights diverge")

    mem = model.memory
    w = ar_expansion(mem.d, mem.D, model.s, sarma, n)
    xc = x - model.mu
    # keep the prediction free of x_t even in floating point: filter with
    # the lag-0 weight removed, so pred_t touches only strictly-past values
    tail = w.copy()
    tail[0] = 0.0
    past = apply_filter(xc, tail)      # sum_{j>=1} w_j xc_{t-j}
    pred = model.mu - past
    eps = xc + past                    # w_0 = 1

    z = float(norm.ppf(0.5 + level / 2.0))
    sd_const = float(np.sqrt(sarma.sigma2_eps))
    lower = pred - z * sd_const
    upper = pred + z * sd_const

    h = lo_a = up_a = None
    if model.garch is not None:
        h0 = model.garch.unconditional_variance
        if not np.isfinite(h0):
            h0 = float(eps @ eps) / n
        h = garch_variances(eps, model.garch, h0=h0)
        band = z * np.sqrt(h)
        lo_a, up_a = pred - band, pred + band

    return ForecastSeries(predictions=pred, innovations=eps,
                          conditional_variances=h, lower=lower, upper=upper,
                          lower_adaptive=lo_a, upper_adaptive=up_a, level=level)


@dataclass(frozen=True)
class ForecastEvaluation:
    """Out-of-sample accuracy and band-coverage summary.

    ``cphfi`` is the percentage of actuals inside the constant-width
    (homoscedastic) band; ``cpgfi`` the percentage inside the
    volatility-adaptive band, ``None`` when the model has no variance
    recursion.
    """

    n_eval: int
    mpe: float
    mape: float
    rmse: float
    cphfi: float
    cpgfi: float | None
    level: float


def evaluate_forecasts(x: np.ndarray, fc: ForecastSeries, holdout: int) -> ForecastEvaluation:
    """Score the last ``holdout`` one-step forecasts against the actuals.

    Percentage errors are relative to the actual values (mean percentage
    error keeps its sign; the absolute version does not), so the series
    must stay away from zero for these to be meaningful.  Coverage is the
    percentage of actuals inside the respective band.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if fc.predictions.size != n:
        raise DataError("forecast/actual length mismatch")
    if not 0 < holdout <= n:
        raise DataError(f"holdout must lie in [1, {n}]")
    sl = slice(n - holdout, n)
    a = x[sl]
    p = fc.predictions[sl]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = (a - p) / a
    mpe = 100.0 * float(np.mean(rel))
    mape = 100.0 * float(np.mean(np.abs(rel)))
    rmse = float(np.sqrt(np.mean((a - p) ** 2)))
    cover = 100.0 * float(np.mean((a >= fc.lower[sl]) & (a <= fc.upper[sl])))
    cover_a = None
    if fc.lower_adaptive is not None:
        cover_a = 100.0 * float(
            np.mean((a >= fc.lower_adaptive[sl]) & (a <= fc.upper_adaptive[sl]))
        )
    return ForecastEvaluation(n_eval=holdout, mpe=mpe, mape=mape, rmse=rmse,
                              cphfi=cover, cpgfi=cover_a, level=fc.level)
