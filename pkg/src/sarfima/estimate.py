"""Two-stage estimation: memory orders first, then short-memory and variance parts.

Stage one regresses the log periodogram on log spectral slopes near the
pole frequencies to estimate the fractional orders (d at the origin, D at
the seasonal harmonics).  Stage two filters the centered series with the
estimated fractional operator, fits the seasonal ARMA by conditional sum
of squares, and — when the squared residuals show conditional
heteroscedasticity — fits a GARCH recursion to them by Gaussian
quasi-maximum likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter, lfiltic
from scipy.stats import chi2

from .diagnose import DiagnosticsReport, TestResult, residual_diagnostics
from .exceptions import ConvergenceError, DataError, EstimationError
from .fracdiff import apply_filter, psi_star
from .model import (
    GarchParams,
    MemoryVector,
    SarfimaGarchModel,
    SarmaParams,
    TimeSeries,
    polynomial_roots_check,
    validate_model,
)
from .spectral import periodogram

#: log-periodogram regression pools ordinates near zero and near each
#: seasonal harmonic by default; the near-zero-only variant is kept for
#: comparison but its two regressors are nearly collinear there.
DEFAULT_GPH_SCHEME = "zero-plus-seasonal"

_PENALTY = 1e12


def bandwidth(n: int, s: int, alpha: float) -> int:
    """Number of ordinates per pole used in the log-periodogram regression.

    M = floor( ((n - s)/2 - 1)^alpha / s ).  Larger exponents use more of
    the spectrum (lower variance, more bias from the short-memory part).
    """
    if not 0.0 < alpha <= 1.0:
        raise DataError(f"alpha must lie in (0, 1], got {alpha}")
    if n <= s + 2:
        raise DataError(f"series too short for bandwidth rule: n={n}, s={s}")
    base = (n - s) / 2.0 - 1.0
    m = int(math.floor(base**alpha / s))
    if m < 2:
        raise DataError(f"bandwidth too small (M={m}) for n={n}, s={s}, alpha={alpha}")
    return m


@dataclass(frozen=True)
class GphEstimate:
    """Log-periodogram regression output for the two memory orders."""

    d: float
    D: float
    se_d: float
    se_D: float
    intercept: float
    M: int
    scheme: str
    n_ordinates: int
    alpha: float | None = None

    def memory(self, s: int) -> MemoryVector:
        return MemoryVector(self.d, self.D, s)


def _gph_ordinates(n: int, s: int, M: int, scheme: str) -> np.ndarray:
    """Fourier indices entering the regression, deduplicated and in-grid."""
    top = (n - 1) // 2
    if M > top:
        raise EstimationError(f"bandwidth M={M} exceeds the periodogram grid ({top})")
    blocks = [np.arange(1, M + 1)]
    if scheme == "near-zero":
        pass
    elif scheme == "zero-plus-seasonal":
        for k in range(1, s // 2 + 1):
            pole = (n * k) // s
            if 2 * k == s:
                # harmonic sits at the top of the grid: take ordinates below it
                lo = max(min(pole, top) - M, 0)
                block = np.arange(lo + 1, min(pole, top) + 1)
            else:
                block = np.arange(pole + 1, pole + M + 1)
            if block.size == 0 or block[-1] > top or block[0] < 1:
                raise EstimationError(
                    f"bandwidth M={M} pushes harmonic {k} ordinates off the grid"
                )
            blocks.append(block)
    else:
        raise DataError(f"unknown ordinate scheme: {scheme!r}")
    return np.unique(np.concatenate(blocks))


def gph_seasonal(
    x: np.ndarray,
    s: int,
    alpha: float = 0.78,
    M: int | None = None,
    scheme: str = DEFAULT_GPH_SCHEME,
) -> GphEstimate:
    """Estimate (d, D) by regressing the log periodogram on spectral slopes.

    At the selected ordinates the log spectral density is, up to the
    smooth short-memory part, linear in

        -log(2 sin(w/2))^2        with slope d, and
        -log(2 sin(s w/2))^2      with slope D,

    so an OLS fit of log I(w_j) on those two regressors plus an intercept
    estimates the memory orders directly.  Standard errors use the
    asymptotic log-periodogram error variance pi^2/6.

    Parameters
    ----------
    x : array_like
        Raw series; demeaned internally.
    s : int
        Season length.
    alpha : float
        Bandwidth exponent for :func:`bandwidth` (ignored when ``M`` given).
    M : int, optional
        Ordinates per pole, overriding the bandwidth rule.
    scheme : str
        "zero-plus-seasonal" (default) pools ordinates above zero and each
        seasonal harmonic; "near-zero" uses only the ordinates above zero,
        where the two regressors are nearly collinear — estimates there are
        erratic and mainly useful for diagnostics.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    alpha_used: float | None = None
    if M is None:
        M = bandwidth(n, s, alpha)
        alpha_used = float(alpha)
    if M < 3:
        raise EstimationError(f"need at least 3 ordinates per pole, got M={M}")
    pg = periodogram(x)
    js = _gph_ordinates(n, s, M, scheme)
    w = 2.0 * np.pi * js / n
    with np.errstate(divide="ignore"):
        y = np.log(pg.ordinates[js - 1])
        xd = -np.log((2.0 * np.sin(w / 2.0)) ** 2)
        xD = -np.log((2.0 * np.sin(s * w / 2.0)) ** 2)
    keep = np.isfinite(y) & np.isfinite(xd) & np.isfinite(xD)
    y, xd, xD = y[keep], xd[keep], xD[keep]
    if y.size < 4:
        raise EstimationError("too few usable ordinates for the memory regression")
    X = np.column_stack([np.ones_like(y), xD, xd])
    XtX = X.T @ X
    try:
        coef = np.linalg.solve(XtX, X.T @ y)
        cov = (np.pi**2 / 6.0) * np.linalg.inv(XtX)
    except np.linalg.LinAlgError as exc:
        raise EstimationError(
            "memory regression design is singular",
            condition_number=float(np.linalg.cond(XtX)),
        ) from exc
    se = np.sqrt(np.abs(np.diag(cov)))
    return GphEstimate(
        d=float(coef[2]),
        D=float(coef[1]),
        se_d=float(se[2]),
        se_D=float(se[1]),
        intercept=float(coef[0]),
        M=int(M),
        scheme=scheme,
        n_ordinates=int(y.size),
        alpha=alpha_used,
    )


# ---------------------------------------------------------------------------
# conditional sum of squares for the seasonal ARMA


def _unpack_sarma(params: np.ndarray, orders: tuple) -> SarmaParams:
    p, q, P, Q = orders
    i = 0
    phi = tuple(params[i : i + p]); i += p
    theta = tuple(params[i : i + q]); i += q
    Phi = tuple(params[i : i + P]); i += P
    Theta = tuple(params[i : i + Q])
    return SarmaParams(phi=phi, theta=theta, Phi=Phi, Theta=Theta)


def _sarma_valid(sp: SarmaParams, s: int) -> bool:
    return (
        polynomial_roots_check(sp.phi, 1)
        and polynomial_roots_check(sp.Phi, s)
        and polynomial_roots_check(sp.theta, 1)
        and polynomial_roots_check(sp.Theta, s)
    )


def sarma_innovations(u: np.ndarray, sp: SarmaParams, s: int) -> np.ndarray:
    """Residuals of the ARMA recursion with zero pre-sample values."""
    return lfilter(sp.ar_poly(s), sp.ma_poly(s), np.asarray(u, dtype=float))


@dataclass
class SarmaFit:
    """Conditional-sum-of-squares fit of the short-memory part."""

    params: SarmaParams
    orders: tuple
    s: int
    css: float
    loglik: float
    se: dict
    residuals: np.ndarray
    converged: bool
    n_iter: int
    messages: list = field(default_factory=list)


def _param_names(orders: tuple) -> list:
    p, q, P, Q = orders
    names = [f"phi{i+1}" for i in range(p)]
    names += [f"theta{i+1}" for i in range(q)]
    names += [f"Phi{i+1}" for i in range(P)]
    names += [f"Theta{i+1}" for i in range(Q)]
    return names


def _numerical_hessian(f, x: np.ndarray, rel_step: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian; f is scalar-valued."""
    x = np.asarray(x, dtype=float)
    k = x.size
    h = rel_step * np.maximum(np.abs(x), 1e-2)
    H = np.empty((k, k))
    f0 = f(x)
    for i in range(k):
        ei = np.zeros(k); ei[i] = h[i]
        H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / h[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k); ej[j] = h[j]
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return H


def _se_from_hessian(f, x: np.ndarray, names: list, messages: list, scale: float = 1.0) -> dict:
    """Invert a numerical Hessian into standard errors; NaN on failure."""
    se = {name: float("nan") for name in names}
    if x.size == 0:
        return se
    try:
        H = _numerical_hessian(f, x)
        cov = np.linalg.inv(H) * scale
        diag = np.diag(cov)
        if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
            raise np.linalg.LinAlgError("non-positive curvature")
        for name, v in zip(names, diag):
            se[name] = float(np.sqrt(v))
    except np.linalg.LinAlgError:
        messages.append("standard errors unavailable (Hessian not positive definite)")
    return se


def fit_sarma(u: np.ndarray, orders: tuple, s: int) -> SarmaFit:
    """Fit a (p, q)x(P, Q)_s ARMA to a stationary series by CSS.

    Minimizes the sum of squared one-step innovations (zero pre-sample
    convention) over the causal-invertible region via Nelder-Mead from the
    white-noise origin; parameter points outside the region are repelled
    by a penalty.  Standard errors come from the curvature of the profile
    Gaussian log-likelihood (n/2) log(CSS/n).

    Raises :class:`ConvergenceError` (carrying the best point seen) if the
    optimizer exhausts its iteration budget.
    """
    u = np.asarray(u, dtype=float)
    n = u.size
    if len(orders) != 4:
        raise DataError(f"orders must be (p, q, P, Q), got {orders}")
    p, q, P, Q = orders
    k = p + q + P + Q
    if min(orders) < 0:
        raise DataError(f"negative ARMA order in {orders}")
    if n <= 2 * (k + 1):
        raise DataError(f"series too short to fit {orders} ARMA: n={n}")

    def css(params):
        sp = _unpack_sarma(params, orders)
        if not _sarma_valid(sp, s):
            return _PENALTY * (1.0 + float(params @ params))
        eps = sarma_innovations(u, sp, s)
        out = float(eps @ eps)
        return out if np.isfinite(out) else _PENALTY

    messages = []
    if k == 0:
        best = np.empty(0)
        n_iter = 0
    else:
        res = minimize(css, np.zeros(k), method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 4000})
        best, n_iter = res.x, int(res.nit)
        if not res.success:
            raise ConvergenceError(
                "CSS optimizer exhausted its iteration budget",
                best_params=_unpack_sarma(res.x, orders),
                trace=str(res.message),
            )

    sp0 = _unpack_sarma(best, orders)
    eps = sarma_innovations(u, sp0, s)
    css_val = float(eps @ eps)
    sigma2 = css_val / n
    if sigma2 <= 0 or not np.isfinite(sigma2):
        raise EstimationError("degenerate innovation variance in CSS fit")
    sp = SarmaParams(phi=sp0.phi, theta=sp0.theta, Phi=sp0.Phi, Theta=sp0.Theta,
                     sigma2_eps=sigma2)
    loglik = -0.5 * n * (np.log(2.0 * np.pi * sigma2) + 1.0)
    names = _param_names(orders)
    se = _se_from_hessian(lambda v: 0.5 * n * np.log(css(v) / n), best, names, messages)
    return SarmaFit(params=sp, orders=orders, s=s, css=css_val, loglik=loglik,
                    se=se, residuals=eps, converged=True, n_iter=n_iter,
                    messages=messages)


# ---------------------------------------------------------------------------
# GARCH quasi-maximum likelihood


def garch_variances(eps: np.ndarray, gp: GarchParams, h0: float | None = None) -> np.ndarray:
    """Conditional variances along an innovation path.

    Pre-sample squared innovations and variances are pinned to ``h0``
    (default: the sample second moment of ``eps``).  The pure-beta part of
    the recursion is run through an IIR filter, so the whole path is
    computed without a Python loop.
    """
    eps = np.asarray(eps, dtype=float)
    n = eps.size
    r, m = gp.orders
    if h0 is None:
        h0 = float(eps @ eps) / n
    e2 = np.concatenate([np.full(m, h0), eps**2])
    rhs = np.full(n, gp.alpha0)
    if m:
        rhs += lfilter(np.r_[0.0, gp.alpha], [1.0], e2)[m:]
    if not r:
        return rhs
    a = np.r_[1.0, -np.asarray(gp.beta)]
    zi = lfiltic([1.0], a, np.full(r, h0))
    h, _ = lfilter([1.0], a, rhs, zi=zi)
    return h


def garch_loglik(eps: np.ndarray, gp: GarchParams, h0: float | None = None) -> float:
    """Gaussian log-likelihood of innovations under the variance recursion."""
    eps = np.asarray(eps, dtype=float)
    h = garch_variances(eps, gp, h0)
    if np.any(h <= 0) or not np.all(np.isfinite(h)):
        return -np.inf
    return float(-0.5 * np.sum(np.log(2.0 * np.pi * h) + eps**2 / h))


@dataclass
class GarchFit:
    """Quasi-maximum-likelihood fit of the conditional variance recursion."""

    params: GarchParams
    orders: tuple
    loglik: float
    se: dict
    conditional_variances: np.ndarray
    converged: bool
    n_iter: int
    messages: list = field(default_factory=list)


def fit_garch(eps: np.ndarray, orders: tuple = (1, 1)) -> GarchFit:
    """Fit GARCH(r, m) to zero-mean innovations by Gaussian QMLE.

    ``orders = (r, m)``: r lags of past variances, m lags of past squared
    innovations.  Positivity is enforced by optimizing log-coefficients;
    the stationarity sum is left free and only flagged afterwards if it
    reaches one.  Standard errors come from the numerical curvature of the
    log-likelihood in the original coefficients.
    """
    eps = np.asarray(eps, dtype=float)
    n = eps.size
    r, m = orders
    if r < 0 or m < 0 or m == 0:
        raise DataError(f"invalid GARCH orders {orders}; need m >= 1")
    if n < 20 * (r + m + 1):
        raise DataError(f"series too short to fit GARCH{orders}: n={n}")
    v = float(eps @ eps) / n
    if v <= 0:
        raise DataError("innovations are identically zero")

    def unpack(logp):
        c = np.exp(np.clip(logp, -40.0, 40.0))
        return GarchParams(alpha0=c[0], alpha=tuple(c[1 : 1 + m]), beta=tuple(c[1 + m :]))

    def nll(logp):
        ll = garch_loglik(eps, unpack(logp), h0=v)
        return -ll if np.isfinite(ll) else _PENALTY

    a_start = np.full(m, 0.05 / m)
    b_start = np.full(r, 0.90 / r) if r else np.empty(0)
    start = np.log(np.concatenate([[0.1 * v], a_start, b_start]))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        res = minimize(nll, start, method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-8, "maxiter": 6000})
    if not res.success:
        raise ConvergenceError(
            "QMLE optimizer exhausted its iteration budget",
            best_params=unpack(res.x),
            trace=str(res.message),
        )
    gp = unpack(res.x)
    messages = []
    if gp.persistence >= 1.0:
        messages.append(f"GARCH stationarity sum >= 1 (got {gp.persistence:.4g})")

    names = ["alpha0"] + [f"alpha{i+1}" for i in range(m)] + [f"beta{j+1}" for j in range(r)]
    coeffs = np.concatenate([[gp.alpha0], gp.alpha, gp.beta])

    def nll_orig(c):
        if np.any(c <= 0):
            return _PENALTY
        gpc = GarchParams(alpha0=c[0], alpha=tuple(c[1 : 1 + m]), beta=tuple(c[1 + m :]))
        ll = garch_loglik(eps, gpc, h0=v)
        return -ll if np.isfinite(ll) else _PENALTY

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        se = _se_from_hessian(nll_orig, coeffs, names, messages)
        h = garch_variances(eps, gp, h0=v)
        ll = garch_loglik(eps, gp, h0=v)
    return GarchFit(params=gp, orders=tuple(orders), loglik=float(ll), se=se,
                    conditional_variances=h, converged=True,
                    n_iter=int(res.nit), messages=messages)


def arch_lm_test(resid: np.ndarray, n_lags: int = 7) -> TestResult:
    """Lagrange-multiplier test for autoregressive conditional heteroscedasticity.

    Regresses squared residuals on their own first ``n_lags`` lags; the
    statistic (number of regression observations) x R^2 is chi-squared
    with ``n_lags`` degrees of freedom under homoscedasticity.
    """
    e2 = np.asarray(resid, dtype=float) ** 2
    n = e2.size
    if n_lags < 1:
        raise DataError("n_lags must be >= 1")
    if n <= 2 * n_lags + 1:
        raise DataError(f"too few residuals ({n}) for {n_lags} lags")
    y = e2[n_lags:]
    X = np.column_stack([np.ones(n - n_lags)] +
                        [e2[n_lags - k : n - k] for k in range(1, n_lags + 1)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    fitted = X @ coef
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 0.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    stat = (n - n_lags) * r2
    return TestResult(name="arch-lm", statistic=float(stat),
                      p_value=float(chi2.sf(stat, n_lags)), df=n_lags, n_lags=n_lags)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for the two-stage fit.

    ``burn_in`` is the number of leading *filtered* values dropped before
    the ARMA stage (early filter outputs use very short histories and are
    biased); ``None`` means max(50, 2s).
    """

    alpha: float = 0.78
    M: int | None = None
    gph_scheme: str = DEFAULT_GPH_SCHEME
    sarma_orders: tuple = (0, 1, 0, 1)
    garch_orders: tuple = (1, 1)
    arch_lm_lags: int = 7
    arch_lm_level: float = 0.05
    fit_variance: str = "auto"  # "auto" | "always" | "never"
    burn_in: int | None = None
    diagnostic_lags: int = 8

    def resolve_burn_in(self, s: int) -> int:
        return max(50, 2 * s) if self.burn_in is None else int(self.burn_in)


@dataclass
class FitReport:
    """Everything the two-stage pipeline produced.

    ``filtered`` covers the full sample; ``residuals``,
    ``conditional_variances`` and ``std_residuals`` start after the
    ``burn_in`` leading filtered values that were discarded before the
    ARMA stage.  For a homoscedastic fit the variance path is the constant
    innovation-variance estimate.
    """

    model: SarfimaGarchModel
    gph: GphEstimate
    sarma: SarmaFit
    garch: GarchFit | None
    arch_lm: TestResult
    residuals: np.ndarray
    std_residuals: np.ndarray
    filtered: np.ndarray
    conditional_variances: np.ndarray
    diagnostics: DiagnosticsReport
    violations: list
    burn_in: int
    n: int
    s: int

    @property
    def is_valid(self) -> bool:
        return not self.violations


def fit_pipeline(ts: TimeSeries, config: PipelineConfig | None = None) -> FitReport:
    """Run the full two-stage estimation on a series.

    1. memory orders from the log-periodogram regression;
    2. fractional filtering of the centered series;
    3. discard of the leading ``burn_in`` filtered values;
    4. CSS fit of the seasonal ARMA on the remaining filtered series;
    5. ARCH-LM on the ARMA residuals and, if it rejects (or
       ``fit_variance="always"``), a GARCH QMLE fit.

    The returned model is descriptive: if the estimates land outside the
    stationary-invertible region, the model is still built and every
    violated condition is listed in ``violations``.
    """
    if config is None:
        config = PipelineConfig()
    ts.require_estimable()
    x = ts.values
    s = ts.season_length
    mu = float(x.mean())

    gph = gph_seasonal(x, s, alpha=config.alpha, M=config.M, scheme=config.gph_scheme)
    filtered = apply_filter(x - mu, psi_star(gph.d, gph.D, s, x.size))
    burn = config.resolve_burn_in(s)
    if not 0 <= burn < filtered.size - 10:
        raise DataError(f"burn-in {burn} leaves too little of n={filtered.size}")
    sarma = fit_sarma(filtered[burn:], config.sarma_orders, s)
    lm = arch_lm_test(sarma.residuals, config.arch_lm_lags)

    garch = None
    if config.fit_variance == "always" or (
        config.fit_variance == "auto" and lm.p_value < config.arch_lm_level
    ):
        garch = fit_garch(sarma.residuals, config.garch_orders)
    elif config.fit_variance not in ("auto", "never"):
        raise DataError(f"unknown fit_variance mode: {config.fit_variance!r}")

    model = SarfimaGarchModel(
        mu=mu,
        memory=MemoryVector(gph.d, gph.D, s),
        sarma=sarma.params,
        garch=garch.params if garch is not None else None,
        check=False,
    )
    violations = validate_model(model)
    if garch is not None:
        violations += [m for m in garch.messages if "stationarity" in m
                       and not any("stationarity" in v for v in violations)]
    if garch is not None:
        h = garch.conditional_variances
    else:
        h = np.full(sarma.residuals.size, sarma.params.sigma2_eps)
    std_resid = sarma.residuals / np.sqrt(h)
    return FitReport(
        model=model,
        gph=gph,
        sarma=sarma,
        garch=garch,
        arch_lm=lm,
        residuals=sarma.residuals,
        std_residuals=std_resid,
        filtered=filtered,
        conditional_variances=h,
        diagnostics=residual_diagnostics(std_resid, n_lags=config.diagnostic_lags),
        violations=violations,
        burn_in=burn,
        n=x.size,
        s=s,
    )
