"""Seasonal fractionally integrated time series with GARCH innovations.

Fit, diagnose, simulate and forecast series whose autocorrelations decay
hyperbolically both at the origin and at seasonal lags, with optional
conditional heteroscedasticity in the innovations.  The usual flow:

>>> from sarfima import TimeSeries, fit_pipeline, one_step_forecasts
>>> ts = TimeSeries(values, season_length=7)
>>> report = fit_pipeline(ts)
>>> fc = one_step_forecasts(values, report.model)
"""

__version__ = "0.1.0"

from .diagnose import (
    DiagnosticsReport,
    MomentsSummary,
    TestResult,
    box_pierce,
    jarque_bera,
    jarque_bera_stat,
    ljung_box,
    moments_summary,
    residual_diagnostics,
)
from .estimate import (
    FitReport,
    GarchFit,
    GphEstimate,
    PipelineConfig,
    SarmaFit,
    arch_lm_test,
    bandwidth,
    fit_garch,
    fit_pipeline,
    fit_sarma,
    garch_loglik,
    garch_variances,
    gph_seasonal,
)
from .exceptions import (
    ConvergenceError,
    DataError,
    EstimationError,
    ModelInvariantError,
    NumericalError,
    SarfimaError,
)
from .forecast import (
    ForecastEvaluation,
    ForecastSeries,
    evaluate_forecasts,
    one_step_forecasts,
)
from .fracdiff import (
    FilterCoefficients,
    apply_filter,
    ar_expansion,
    fractional_filter,
    ma_expansion,
    pi_coefficients,
    power_series_div,
    psi_star,
)
from .model import (
    GarchParams,
    MemoryVector,
    SarfimaGarchModel,
    SarmaParams,
    TimeSeries,
    expand_poly,
    polynomial_roots_check,
    validate_model,
)
from .montecarlo import (
    CoverageStudy,
    GarchStudy,
    GphStudy,
    SizeStudy,
    coverage_study,
    garch_study,
    gph_study,
    test_size_study,
)
from .simulate import SimulationResult, simulate
from .spectral import (
    PeriodogramSet,
    parseval_check,
    periodogram,
    sample_acf,
    sample_pacf,
    spectral_density,
)

__all__ = [
    "__version__",
    # model
    "TimeSeries", "MemoryVector", "SarmaParams", "GarchParams",
    "SarfimaGarchModel", "validate_model", "polynomial_roots_check",
    "expand_poly",
    # filters
    "pi_coefficients", "psi_star", "fractional_filter", "FilterCoefficients",
    "apply_filter", "ar_expansion", "ma_expansion", "power_series_div",
    # spectral
    "periodogram", "PeriodogramSet", "parseval_check", "sample_acf",
    "sample_pacf", "spectral_density",
    # estimation
    "bandwidth", "gph_seasonal", "GphEstimate", "fit_sarma", "SarmaFit",
    "fit_garch", "GarchFit", "garch_variances", "garch_loglik",
    "arch_lm_test", "fit_pipeline", "PipelineConfig", "FitReport",
    # diagnostics
    "TestResult", "MomentsSummary", "moments_summary", "ljung_box",
    "box_pierce", "jarque_bera", "jarque_bera_stat", "residual_diagnostics",
    "DiagnosticsReport",
    # forecasting
    "one_step_forecasts", "ForecastSeries", "evaluate_forecasts",
    "ForecastEvaluation",
    # simulation
    "simulate", "SimulationResult",
    # studies
    "gph_study", "GphStudy", "garch_study", "GarchStudy",
    "test_size_study", "SizeStudy", "coverage_study", "CoverageStudy",
    # errors
    "SarfimaError", "DataError", "ModelInvariantError", "EstimationError",
    "ConvergenceError", "NumericalError",
]
