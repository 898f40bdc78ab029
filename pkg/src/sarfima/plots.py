"""Figure rendering for fit and forecast reports.

All functions write a PNG to the given path and return that path; nothing
is shown interactively (the Agg backend is forced so the CLI works
headless).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from scipy.stats import norm  # noqa: E402

from .forecast import ForecastSeries  # noqa: E402
from .spectral import periodogram, sample_acf, sample_pacf  # noqa: E402

_DPI = 120


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def fig_series(values, path, index=None, title="series") -> Path:
    fig, ax = plt.subplots(figsize=(9, 3))
    x = index if index is not None else np.arange(len(values))
    ax.plot(x, values, lw=0.6, color="tab:blue")
    ax.set_title(title)
    ax.set_xlabel("t" if index is None else "date")
    return _save(fig, path)


def _stem_with_bounds(ax, vals, n, start_lag):
    lags = np.arange(start_lag, start_lag + len(vals))
    ax.vlines(lags, 0, vals, color="tab:blue", lw=1.2)
    bound = 1.96 / np.sqrt(n)
    ax.axhline(0, color="black", lw=0.8)
    ax.axhline(bound, color="tab:red", ls="--", lw=0.8)
    ax.axhline(-bound, color="tab:red", ls="--", lw=0.8)
    ax.set_xlabel("lag")


def fig_acf(x, path, n_lags=40, title="sample autocorrelations") -> Path:
    x = np.asarray(x, dtype=float)
    n_lags = min(n_lags, x.size - 1)
    rho = sample_acf(x, n_lags)[1:]
    fig, ax = plt.subplots(figsize=(6, 3))
    _stem_with_bounds(ax, rho, x.size, 1)
    ax.set_title(title)
    ax.set_ylabel("ACF")
    return _save(fig, path)


def fig_pacf(x, path, n_lags=40, title="sample partial autocorrelations") -> Path:
    x = np.asarray(x, dtype=float)
    n_lags = min(n_lags, x.size - 1)
    pacf = sample_pacf(x, n_lags)
    fig, ax = plt.subplots(figsize=(6, 3))
    _stem_with_bounds(ax, pacf, x.size, 1)
    ax.set_title(title)
    ax.set_ylabel("PACF")
    return _save(fig, path)


def fig_periodogram(x, path, s=None, title="periodogram") -> Path:
    """Log-scale periodogram; seasonal harmonics marked when ``s`` given."""
    pg = periodogram(np.asarray(x, dtype=float))
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.semilogy(pg.frequencies, pg.ordinates, lw=0.5, color="tab:blue")
    if s and s > 1:
        for k in range(1, s // 2 + 1):
            ax.axvline(2 * np.pi * k / s, color="tab:orange", ls=":", lw=1.0)
    ax.set_xlabel("frequency (rad)")
    ax.set_ylabel("I(w)")
    ax.set_title(title)
    return _save(fig, path)


def fig_residual_hist(resid, path, title="standardized residuals") -> Path:
    """Histogram with the matching-moment normal density overlaid."""
    r = np.asarray(resid, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(r, bins=40, density=True, color="tab:blue", alpha=0.7)
    grid = np.linspace(r.min(), r.max(), 300)
    ax.plot(grid, norm.pdf(grid, r.mean(), r.std()), color="tab:red", lw=1.2)
    ax.set_title(title)
    return _save(fig, path)


def fig_volatility(h, path, title="conditional standard deviation") -> Path:
    fig, ax = plt.subplots(figsize=(9, 3))
    ax.plot(np.sqrt(np.asarray(h, dtype=float)), lw=0.6, color="tab:purple")
    ax.set_xlabel("t")
    ax.set_ylabel("sqrt(h)")
    ax.set_title(title)
    return _save(fig, path)


def fig_forecast(actual, fc: ForecastSeries, holdout, path,
                 index=None, title="one-step forecasts") -> Path:
    """Holdout window: actuals, predictions and both interval flavours."""
    actual = np.asarray(actual, dtype=float)
    n = actual.size
    sl = slice(max(n - holdout, 0), n)
    x = np.arange(n)[sl] if index is None else np.asarray(index)[sl]
    fig, ax = plt.subplots(figsize=(9, 3.5))
    ax.fill_between(x, fc.lower[sl], fc.upper[sl], color="tab:blue", alpha=0.15,
                    label="constant band")
    if fc.lower_adaptive is not None:
        ax.fill_between(x, fc.lower_adaptive[sl], fc.upper_adaptive[sl],
                        color="tab:red", alpha=0.15, label="adaptive band")
    ax.plot(x, actual[sl], lw=0.8, color="black", label="actual")
    ax.plot(x, fc.predictions[sl], lw=0.8, color="tab:blue", label="prediction")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(title)
    return _save(fig, path)


def render_fit_figures(report, values, outdir, index=None) -> list:
    """Standard diagnostic panel for a pipeline fit; returns written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    s = report.s
    paths = [
        fig_series(values, outdir / "series.png", index=index),
        fig_acf(values, outdir / "acf.png"),
        fig_pacf(values, outdir / "pacf.png"),
        fig_periodogram(values, outdir / "periodogram.png", s=s),
        fig_acf(report.filtered, outdir / "filtered_acf.png",
                title="ACF after fractional filtering"),
        fig_pacf(report.filtered, outdir / "filtered_pacf.png",
                 title="PACF after fractional filtering"),
        fig_acf(report.residuals**2, outdir / "squared_residual_acf.png",
                title="ACF of squared residuals"),
    ]
    if report.garch is not None:
        paths.append(fig_volatility(report.conditional_variances,
                                    outdir / "volatility.png"))
    paths.append(fig_residual_hist(report.std_residuals,
                                   outdir / "residual_hist.png"))
    return paths
