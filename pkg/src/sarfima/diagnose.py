"""Residual diagnostics: moments, whiteness and normality tests.

All tests return a :class:`TestResult` carrying the statistic, its null
distribution's degrees of freedom and the p-value, so callers can format
or threshold them uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .exceptions import DataError
from .spectral import sample_acf


@dataclass(frozen=True)
class TestResult:
    """A scalar hypothesis test: statistic, chi-squared df, p-value."""

    name: str
    statistic: float
    p_value: float
    df: int
    n_lags: int | None = None

    def __str__(self):
        return f"{self.name}: stat={self.statistic:.4f}, df={self.df}, p={self.p_value:.4g}"


@dataclass(frozen=True)
class MomentsSummary:
    """First four sample moments (kurtosis reported in excess of 3)."""

    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    n: int


def moments_summary(x: np.ndarray) -> MomentsSummary:
    """Sample mean, variance (divide-by-n), skewness and excess kurtosis."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4:
        raise DataError("need at least four observations for moment diagnostics")
    mean = float(x.mean())
    c = x - mean
    m2 = float(np.mean(c**2))
    if m2 <= 0:
        raise DataError("series is constant; higher moments undefined")
    m3 = float(np.mean(c**3))
    m4 = float(np.mean(c**4))
    return MomentsSummary(
        mean=mean,
        variance=m2,
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
        n=n,
    )


def _portmanteau(x: np.ndarray, n_lags: int, weighted: bool, name: str, df: int | None):
    x = np.asarray(x, dtype=float)
    n = x.size
    if n_lags < 1:
        raise DataError("n_lags must be >= 1")
    if n <= n_lags + 1:
        raise DataError(f"series too short ({n}) for {n_lags} autocorrelation lags")
    rho = sample_acf(x, n_lags)[1:]
    if weighted:
        stat = n * (n + 2.0) * float(np.sum(rho**2 / (n - np.arange(1, n_lags + 1))))
    else:
        stat = n * float(np.sum(rho**2))
    dof = n_lags if df is None else df
    if dof < 1:
        raise DataError(f"degrees of freedom must be >= 1, got {dof}")
    return TestResult(name=name, statistic=stat, p_value=float(chi2.sf(stat, dof)),
                      df=dof, n_lags=n_lags)


def ljung_box(x: np.ndarray, n_lags: int = 8, df: int | None = None) -> TestResult:
    """Small-sample-weighted portmanteau test for residual autocorrelation.

    Q = n (n+2) sum_{k=1}^{L} rho_k^2 / (n-k), chi-squared with ``df``
    degrees of freedom (default L; pass L minus the number of fitted ARMA
    coefficients to account for estimation).
    """
    return _portmanteau(x, n_lags, True, "ljung-box", df)


def box_pierce(x: np.ndarray, n_lags: int = 8, df: int | None = None) -> TestResult:
    """Unweighted portmanteau test: Q = n sum rho_k^2, chi-squared(df)."""
    return _portmanteau(x, n_lags, False, "box-pierce", df)


def jarque_bera_stat(skewness: float, excess_kurtosis: float, n: int) -> float:
    """The normality statistic from pre-computed moments: (n/6)(S^2 + K^2/4)."""
    return n / 6.0 * (skewness**2 + excess_kurtosis**2 / 4.0)


def jarque_bera(x: np.ndarray) -> TestResult:
    """Moment-based normality test; chi-squared with 2 df under the null."""
    m = moments_summary(x)
    stat = jarque_bera_stat(m.skewness, m.excess_kurtosis, m.n)
    return TestResult(name="jarque-bera", statistic=float(stat),
                      p_value=float(chi2.sf(stat, 2)), df=2)


@dataclass(frozen=True)
class DiagnosticsReport:
    """Moments plus the standard whiteness/normality battery.

    ``acf_of_squares`` holds the first ``n_lags`` autocorrelations of the
    squared residuals — the quick visual check for remaining conditional
    heteroscedasticity.
    """

    moments: MomentsSummary
    ljung_box: TestResult
    box_pierce: TestResult
    jarque_bera: TestResult
    acf_of_squares: np.ndarray
    n_lags: int


def residual_diagnostics(resid: np.ndarray, n_lags: int = 8,
                         df: int | None = None) -> DiagnosticsReport:
    """Run the full battery on (ideally standardized) residuals."""
    resid = np.asarray(resid, dtype=float)
    sq = resid**2
    if np.ptp(sq) == 0:  # squares constant (e.g. alternating +/-c): ACF undefined
        acf_sq = np.zeros(n_lags)
    else:
        acf_sq = sample_acf(sq, n_lags)[1:]
    return DiagnosticsReport(
        moments=moments_summary(resid),
        ljung_box=ljung_box(resid, n_lags, df),
        box_pierce=box_pierce(resid, n_lags, df),
        jarque_bera=jarque_bera(resid),
        acf_of_squares=acf_sq,
        n_lags=n_lags,
    )
