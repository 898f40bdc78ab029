"""Monte Carlo studies: estimator calibration, test size, band coverage.

Each study draws independent replication streams by spawning children off
one ``numpy.random.SeedSequence``, so results are reproducible from a
single master seed and replications never share state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnose import jarque_bera, ljung_box
from .estimate import (
    DEFAULT_GPH_SCHEME,
    PipelineConfig,
    arch_lm_test,
    fit_garch,
    fit_pipeline,
    gph_seasonal,
)
from .exceptions import DataError
from .forecast import evaluate_forecasts, one_step_forecasts
from .model import (
    GarchParams,
    MemoryVector,
    SarfimaGarchModel,
    SarmaParams,
    TimeSeries,
)
from .simulate import garch_path, simulate, standardized_innovations


def _streams(seed, reps: int):
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in ss.spawn(reps)]


@dataclass(frozen=True)
class GphStudy:
    """Replicated memory-order estimates for a known generating process."""

    d_true: float
    D_true: float
    n: int
    reps: int
    scheme: str
    d_estimates: np.ndarray
    D_estimates: np.ndarray

    def __post_init__(self):
        for name in ("d_estimates", "D_estimates"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def mean_d(self) -> float:
        return float(self.d_estimates.mean())

    @property
    def mean_D(self) -> float:
        return float(self.D_estimates.mean())

    @property
    def mc_se_d(self) -> float:
        return float(self.d_estimates.std(ddof=1) / np.sqrt(self.reps))

    @property
    def mc_se_D(self) -> float:
        return float(self.D_estimates.std(ddof=1) / np.sqrt(self.reps))


def gph_study(d: float, D: float, s: int, n: int, reps: int, alpha: float = 0.78,
              scheme: str = DEFAULT_GPH_SCHEME, seed=None) -> GphStudy:
    """Simulate pure fractional noise and re-estimate (d, D) ``reps`` times."""
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(d, D, s))
    ds = np.empty(reps)
    Ds = np.empty(reps)
    for i, rng in enumerate(_streams(seed, reps)):
        path = simulate(model, n, seed=rng).values
        est = gph_seasonal(path, s, alpha=alpha, scheme=scheme)
        ds[i] = est.d
        Ds[i] = est.D
    return GphStudy(d_true=d, D_true=D, n=n, reps=reps, scheme=scheme,
                    d_estimates=ds, D_estimates=Ds)


@dataclass(frozen=True)
class GarchStudy:
    """Replicated QMLE fits of a known variance recursion."""

    true: GarchParams
    n: int
    reps: int
    estimates: tuple  # of GarchParams

    def fraction_within(self, index: int, tol: float) -> float:
        """Share of replications with |coef_hat - coef| < tol.

        ``index`` walks the flattened coefficient vector
        (alpha0, alpha..., beta...).
        """
        truth = np.concatenate([[self.true.alpha0], self.true.alpha, self.true.beta])
        hits = [
            abs(np.concatenate([[e.alpha0], e.alpha, e.beta])[index] - truth[index]) < tol
            for e in self.estimates
        ]
        return float(np.mean(hits))


def garch_study(true: GarchParams, n: int, reps: int, burn_in: int = 1000,
                seed=None) -> GarchStudy:
    """Simulate innovation paths from ``true`` and refit by QMLE each time."""
    if true.persistence >= 1.0:
        raise DataError("study requires a stationary variance recursion")
    orders = true.orders
    fits = []
    for rng in _streams(seed, reps):
        z = standardized_innovations(n + burn_in, rng)
        eps, _ = garch_path(true, z)
        fits.append(fit_garch(eps[burn_in:], orders).params)
    return GarchStudy(true=true, n=n, reps=reps, estimates=tuple(fits))


@dataclass(frozen=True)
class SizeStudy:
    """Empirical rejection rate of a level-``level`` test under its null."""

    test: str
    n: int
    reps: int
    level: float
    rejections: int

    @property
    def rate(self) -> float:
        return self.rejections / self.reps

    @property
    def mc_se(self) -> float:
        return float(np.sqrt(self.level * (1.0 - self.level) / self.reps))


_SIZE_TESTS = {
    "arch-lm": lambda x, lags: arch_lm_test(x, lags),
    "ljung-box": lambda x, lags: ljung_box(x, lags),
    "jarque-bera": lambda x, lags: jarque_bera(x),
}


def test_size_study(test: str, n: int, reps: int, level: float = 0.05,
                    n_lags: int = 8, seed=None) -> SizeStudy:
    """Rejection rate of a diagnostic test on iid Gaussian noise."""
    if test not in _SIZE_TESTS:
        raise DataError(f"unknown test {test!r}; choose from {sorted(_SIZE_TESTS)}")
    fn = _SIZE_TESTS[test]
    rejections = 0
    for rng in _streams(seed, reps):
        res = fn(rng.standard_normal(n), n_lags)
        rejections += res.p_value < level
    return SizeStudy(test=test, n=n, reps=reps, level=level, rejections=int(rejections))


@dataclass(frozen=True)
class CoverageStudy:
    """End-to-end band coverage across simulate/fit/forecast replications."""

    n_learn: int
    n_holdout: int
    reps: int
    level: float
    cphfi: np.ndarray
    cpgfi: np.ndarray
    mape: np.ndarray

    def __post_init__(self):
        for name in ("cphfi", "cpgfi", "mape"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def median_cphfi(self) -> float:
        return float(np.median(self.cphfi))

    @property
    def median_cpgfi(self) -> float:
        return float(np.median(self.cpgfi))


def coverage_study(model: SarfimaGarchModel, n_learn: int, n_holdout: int,
                   reps: int, level: float = 0.95,
                   config: PipelineConfig | None = None, seed=None) -> CoverageStudy:
    """Simulate, refit on the learning window, forecast the holdout, score bands.

    The generating model must carry a variance recursion so both band
    flavours exist.  Each replication fits the full two-stage pipeline
    from scratch — coverage reflects estimation error, not just band
    shape.
    """
    if model.garch is None:
        raise DataError("coverage study needs a model with a variance recursion")
    if config is None:
        config = PipelineConfig(
            sarma_orders=(len(model.sarma.phi), len(model.sarma.theta),
                          len(model.sarma.Phi), len(model.sarma.Theta)),
            garch_orders=model.garch.orders,
            fit_variance="always",
        )
    n = n_learn + n_holdout
    cov = np.empty(reps)
    cov_a = np.empty(reps)
    mape = np.empty(reps)
    for i, rng in enumerate(_streams(seed, reps)):
        path = simulate(model, n, seed=rng).values
        report = fit_pipeline(TimeSeries(path[:n_learn], season_length=model.s), config)
        fc = one_step_forecasts(path, report.model, level=level)
        ev = evaluate_forecasts(path, fc, n_holdout)
        cov[i] = ev.cphfi
        cov_a[i] = ev.cpgfi
        mape[i] = ev.mape
    return CoverageStudy(n_learn=n_learn, n_holdout=n_holdout, reps=reps, level=level,
                         cphfi=cov, cpgfi=cov_a, mape=mape)
