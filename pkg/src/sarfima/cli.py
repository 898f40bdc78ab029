"""Command-line interface.

Subcommands
-----------
fit        two-stage estimation on a CSV series, with diagnostics
forecast   one-step-ahead forecasts/bands from a saved fit
simulate   generate a path from given parameters (or a saved fit)
diagnose   run the residual test battery on a column of numbers
spectrum   periodogram and correlogram tables for a series
calibrate  sweep the bandwidth exponent and tabulate memory estimates

Every subcommand writes its tables (TSV/JSON) and, unless
``--no-figures`` is given, PNG figures into ``--output-dir``.  Primary
outputs are deterministic; the ``run_meta.json`` sidecar records the
command, versions and timestamp.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnose import residual_diagnostics
from .estimate import (
    DEFAULT_GPH_SCHEME,
    PipelineConfig,
    bandwidth,
    fit_pipeline,
    gph_seasonal,
)
from .exceptions import DataError, EstimationError, NumericalError, SarfimaError
from .forecast import evaluate_forecasts, one_step_forecasts
from .model import GarchParams, MemoryVector, SarfimaGarchModel, SarmaParams
from .reports import (
    diagnostics_to_dict,
    evaluation_to_dict,
    fit_report_to_dict,
    load_model_json,
    parameter_table,
    read_series_csv,
    write_forecast_tsv,
    write_json,
    write_run_meta,
    write_series_csv,
    write_tsv,
)
from .simulate import simulate
from .spectral import periodogram, sample_acf, sample_pacf


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; we reserve 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _floats(text: str) -> tuple:
    if not text.strip():
        return ()
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _ints(text: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sarfima",
                     description="Seasonal long-memory modelling with GARCH innovations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, figures=True):
        p.add_argument("--output-dir", default=".", help="directory for artifacts")
        if figures:
            p.add_argument("--figures", default=True,
                           action=argparse.BooleanOptionalAction,
                           help="render PNG figures alongside the tables")

    p = sub.add_parser("fit", help="estimate the full model from a CSV series")
    p.add_argument("data", help="CSV with a header and a value column")
    p.add_argument("--season", type=int, default=7, help="observations per cycle")
    p.add_argument("--value-column", default=None)
    p.add_argument("--alpha", type=float, default=0.78,
                   help="bandwidth exponent for the memory regression")
    p.add_argument("--bandwidth", type=int, default=None, dest="M",
                   help="ordinates per pole (overrides --alpha)")
    p.add_argument("--scheme", default=DEFAULT_GPH_SCHEME,
                   choices=("zero-plus-seasonal", "near-zero"))
    p.add_argument("--orders", type=_ints, default=(0, 1, 0, 1),
                   metavar="p,q,P,Q", help="seasonal ARMA orders")
    p.add_argument("--garch-orders", type=_ints, default=(1, 1), metavar="r,m")
    p.add_argument("--variance", default="auto", choices=("auto", "always", "never"),
                   help="when to fit the variance recursion")
    p.add_argument("--burn-in", type=int, default=None,
                   help="filtered values to discard before the ARMA stage "
                        "(default max(50, 2s))")
    p.add_argument("--lags", type=int, default=8, help="portmanteau lag count")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("forecast", help="one-step forecasts from a saved fit")
    p.add_argument("data", help="CSV with learning + evaluation observations")
    p.add_argument("--model", required=True, help="fit.json (or bare model JSON)")
    p.add_argument("--holdout", type=int, required=True,
                   help="evaluate on this many final observations")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--value-column", default=None)
    common(p)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("simulate", help="draw a path from the model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--model", default=None, help="take parameters from this fit JSON")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--D", type=float, default=0.0)
    p.add_argument("--season", type=int, default=1)
    p.add_argument("--phi", type=_floats, default=())
    p.add_argument("--theta", type=_floats, default=())
    p.add_argument("--Phi", type=_floats, default=())
    p.add_argument("--Theta", type=_floats, default=())
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--garch-alpha0", type=float, default=None)
    p.add_argument("--garch-alpha", type=_floats, default=())
    p.add_argument("--garch-beta", type=_floats, default=())
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--dist", default="gaussian", choices=("gaussian", "t"))
    p.add_argument("--df", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="simulated.csv", help="output CSV name")
    common(p, figures=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diagnose", help="whiteness/normality battery on a column")
    p.add_argument("data", help="CSV of residuals (or any numeric column)")
    p.add_argument("--value-column", default=None)
    p.add_argument("--lags", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("spectrum", help="periodogram and correlogram tables")
    p.add_argument("data")
    p.add_argument("--season", type=int, default=1)
    p.add_argument("--value-column", default=None)
    p.add_argument("--max-lag", type=int, default=40,
                   help="lags in the ACF/PACF tables (clipped to n-1)")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("calibrate", help="memory estimates across bandwidth exponents")
    p.add_argument("data")
    p.add_argument("--season", type=int, default=7)
    p.add_argument("--value-column", default=None)
    p.add_argument("--alphas", type=_floats, default=tuple(
        round(0.76 + 0.02 * i, 2) for i in range(12)))
    p.add_argument("--scheme", default=DEFAULT_GPH_SCHEME,
                   choices=("zero-plus-seasonal", "near-zero"))
    common(p)
    p.set_defaults(func=cmd_calibrate)

    return parser


# ---------------------------------------------------------------------------
# subcommand bodies


def cmd_fit(args) -> int:
    out = _outdir(args)
    ts = read_series_csv(args.data, season_length=args.season,
                         value_column=args.value_column)
    if len(args.orders) != 4:
        raise DataError("--orders needs four integers p,q,P,Q")
    if len(args.garch_orders) != 2:
        raise DataError("--garch-orders needs two integers r,m")
    config = PipelineConfig(alpha=args.alpha, M=args.M, gph_scheme=args.scheme,
                            sarma_orders=tuple(args.orders),
                            garch_orders=tuple(args.garch_orders),
                            arch_lm_lags=max(args.lags, 1),
                            fit_variance=args.variance,
                            burn_in=args.burn_in,
                            diagnostic_lags=max(args.lags, 1))
    report = fit_pipeline(ts, config)

    write_json(out / "fit.json", fit_report_to_dict(report, config))
    (out / "parameters.txt").write_text(parameter_table(report))
    burn = report.burn_in
    t_col = list(range(burn, report.n))
    if ts.index is not None:
        t_col = [d.isoformat() for d in ts.index[burn:]]
    write_tsv(out / "residuals.tsv",
              ["t" if ts.index is None else "date", "value", "filtered",
               "residual", "conditional_variance", "std_residual"],
              [t_col, list(ts.values[burn:]), list(report.filtered[burn:]),
               list(report.residuals), list(report.conditional_variances),
               list(report.std_residuals)])
    diag = report.diagnostics
    write_json(out / "diagnostics.json", diagnostics_to_dict(diag))
    if args.figures:
        from .plots import render_fit_figures

        render_fit_figures(report, ts.values, out / "figures", index=ts.index)
    write_run_meta(out, sys.argv[1:])

    print(parameter_table(report), end="")
    print(f"\nARCH-LM(lags={report.arch_lm.n_lags}): p={report.arch_lm.p_value:.4g}")
    for t in (diag.ljung_box, diag.box_pierce, diag.jarque_bera):
        print(str(t))
    if report.violations:
        print("warning: " + "; ".join(report.violations), file=sys.stderr)
    print(f"artifacts written to {out}")
    return 0


def cmd_forecast(args) -> int:
    out = _outdir(args)
    model = load_model_json(args.model)
    ts = read_series_csv(args.data, season_length=model.s,
                         value_column=args.value_column)
    if not 0 < args.holdout < len(ts):
        raise DataError(f"--holdout must lie in [1, {len(ts) - 1}]")
    fc = one_step_forecasts(ts.values, model, level=args.level)
    ev = evaluate_forecasts(ts.values, fc, args.holdout)
    write_forecast_tsv(out / "forecast.tsv", ts.values, fc, index=ts.index)
    write_json(out / "evaluation.json", evaluation_to_dict(ev))
    if args.figures:
        from .plots import fig_forecast

        (out / "figures").mkdir(parents=True, exist_ok=True)
        fig_forecast(ts.values, fc, args.holdout, out / "figures" / "forecast.png",
                     index=ts.index)
    write_run_meta(out, sys.argv[1:])

    print(f"holdout n={ev.n_eval}  MPE={ev.mpe:.2f}%  MAPE={ev.mape:.2f}%  "
          f"RMSE={ev.rmse:.3f}")
    line = f"band coverage at level {ev.level:g}: constant {ev.cphfi:.2f}%"
    if ev.cpgfi is not None:
        line += f", adaptive {ev.cpgfi:.2f}%"
    print(line)
    print(f"artifacts written to {out}")
    return 0


def cmd_simulate(args) -> int:
    out = _outdir(args)
    if args.model is not None:
        model = load_model_json(args.model)
    else:
        garch = None
        if args.garch_alpha0 is not None:
            garch = GarchParams(alpha0=args.garch_alpha0, alpha=args.garch_alpha,
                                beta=args.garch_beta)
        model = SarfimaGarchModel(
            mu=args.mu,
            memory=MemoryVector(args.d, args.D, args.season),
            sarma=SarmaParams(phi=args.phi, theta=args.theta, Phi=args.Phi,
                              Theta=args.Theta, sigma2_eps=args.sigma2),
            garch=garch,
        )
    sim = simulate(model, args.n, burn_in=args.burn_in, seed=args.seed,
                   dist=args.dist, df=args.df)
    path = write_series_csv(out / args.out, sim.values)
    write_run_meta(out, sys.argv[1:], seed=args.seed)
    print(f"wrote {sim.values.size} observations to {path}")
    return 0


def cmd_diagnose(args) -> int:
    out = _outdir(args)
    ts = read_series_csv(args.data, value_column=args.value_column)
    diag = residual_diagnostics(ts.values, n_lags=max(args.lags, 1))
    write_json(out / "diagnostics.json", diagnostics_to_dict(diag))
    if args.figures:
        from .plots import fig_acf, fig_pacf, fig_residual_hist

        fdir = out / "figures"
        fdir.mkdir(parents=True, exist_ok=True)
        fig_acf(ts.values, fdir / "acf.png")
        fig_pacf(ts.values, fdir / "pacf.png")
        fig_acf(ts.values**2, fdir / "squared_acf.png", title="ACF of squares")
        fig_residual_hist(ts.values, fdir / "histogram.png")
    write_run_meta(out, sys.argv[1:])

    m = diag.moments
    print(f"n={m.n}  mean={m.mean:.4f}  var={m.variance:.4f}  "
          f"skew={m.skewness:.4f}  ex.kurt={m.excess_kurtosis:.4f}")
    for t in (diag.ljung_box, diag.box_pierce, diag.jarque_bera):
        print(str(t))
    print(f"artifacts written to {out}")
    return 0


def cmd_spectrum(args) -> int:
    out = _outdir(args)
    ts = read_series_csv(args.data, season_length=args.season,
                         value_column=args.value_column)
    pg = periodogram(ts.values)
    write_tsv(out / "periodogram.tsv", ["frequency", "ordinate"],
              [list(pg.frequencies), list(pg.ordinates)])
    lags = min(max(args.max_lag, 1), len(ts) - 1)
    lag_col = list(range(1, lags + 1))
    write_tsv(out / "acf.tsv", ["lag", "acf"],
              [lag_col, list(sample_acf(ts.values, lags)[1:])])
    write_tsv(out / "pacf.tsv", ["lag", "pacf"],
              [lag_col, list(sample_pacf(ts.values, lags))])
    if args.figures:
        from .plots import fig_acf, fig_pacf, fig_periodogram

        fdir = out / "figures"
        fdir.mkdir(parents=True, exist_ok=True)
        fig_periodogram(ts.values, fdir / "periodogram.png", s=args.season)
        fig_acf(ts.values, fdir / "acf.png", n_lags=lags)
        fig_pacf(ts.values, fdir / "pacf.png", n_lags=lags)
    write_run_meta(out, sys.argv[1:])
    print(f"{pg.frequencies.size} ordinates written to {out / 'periodogram.tsv'}")
    return 0


def cmd_calibrate(args) -> int:
    out = _outdir(args)
    ts = read_series_csv(args.data, season_length=args.season,
                         value_column=args.value_column)
    rows = []
    for a in args.alphas:
        m = bandwidth(len(ts), args.season, a)
        est = gph_seasonal(ts.values, args.season, M=m, scheme=args.scheme)
        rows.append((a, m, est.d, est.se_d, est.D, est.se_D))
    cols = [list(c) for c in zip(*rows)]
    write_tsv(out / "calibration.tsv",
              ["alpha", "M", "d", "se_d", "D", "se_D"], cols)
    write_run_meta(out, sys.argv[1:])
    print(f"{'alpha':>6} {'M':>5} {'d':>9} {'se_d':>8} {'D':>9} {'se_D':>8}")
    for a, m, d, sd, D, sD in rows:
        print(f"{a:6.2f} {m:5d} {d:9.4f} {sd:8.4f} {D:9.4f} {sD:8.4f}")
    print(f"artifacts written to {out}")
    return 0


def _fail(exc: Exception, code: int) -> int:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc),
                         "exit_code": code}}
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        return _fail(exc, 2)
    except (EstimationError, NumericalError, np.linalg.LinAlgError,
            FloatingPointError) as exc:
        return _fail(exc, 3)
    except SarfimaError as exc:
        return _fail(exc, 2)


if __name__ == "__main__":
    sys.exit(main())
