"""Reading series from CSV and writing fit/forecast artifacts.

Primary outputs (tables, JSON reports) are deterministic: identical
inputs produce byte-identical files.  Anything environment-dependent
(timestamps, versions, the command line) goes into a separate
``run_meta.json`` sidecar.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnose import DiagnosticsReport, TestResult
from .estimate import FitReport
from .exceptions import DataError
from .forecast import ForecastEvaluation, ForecastSeries
from .model import (
    GarchParams,
    MemoryVector,
    SarfimaGarchModel,
    SarmaParams,
    TimeSeries,
)


def _fmt(x: float) -> str:
    """Stable, compact float formatting for delimited output."""
    return f"{x:.10g}"


def read_series_csv(path, season_length: int = 1, value_column: str | None = None,
                    date_column: str | None = None) -> TimeSeries:
    """Load a series from a delimited file with a header row.

    The value column is picked in this order: the ``value_column``
    argument, a column literally named "value", or the only non-date
    column.  A "date" column (or ``date_column``), when present, must hold
    ISO-8601 dates and be strictly increasing.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise DataError(f"{path}: need a header row and at least one observation")
    header = [h.strip().lower() for h in rows[0]]

    if date_column is None and "date" in header:
        date_column = "date"
    date_idx = header.index(date_column.lower()) if date_column else None
    if value_column is not None:
        if value_column.lower() not in header:
            raise DataError(f"{path}: no column named {value_column!r}",
                            column=value_column)
        val_idx = header.index(value_column.lower())
    elif "value" in header:
        val_idx = header.index("value")
    else:
        candidates = [i for i in range(len(header)) if i != date_idx]
        if len(candidates) != 1:
            raise DataError(
                f"{path}: cannot decide among columns {rows[0]}; pass value_column"
            )
        val_idx = candidates[0]

    values = []
    dates = [] if date_idx is not None else None
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) <= max(val_idx, date_idx or 0):
            raise DataError(f"{path}: row {lineno} has too few columns", row=lineno)
        cell = row[val_idx].strip()
        try:
            values.append(float(cell))
        except ValueError:
            raise DataError(f"{path}: row {lineno}: {cell!r} is not a number",
                            row=lineno, column=header[val_idx]) from None
        if dates is not None:
            try:
                dates.append(_dt.date.fromisoformat(row[date_idx].strip()))
            except ValueError:
                raise DataError(f"{path}: row {lineno}: bad date {row[date_idx]!r}",
                                row=lineno, column=header[date_idx]) from None
    return TimeSeries(values, season_length=season_length,
                      index=tuple(dates) if dates else None)


def write_series_csv(path, values, index=None) -> Path:
    """Write a series as CSV (optional ISO date column + value column)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        if index is not None:
            w.writerow(["date", "value"])
            for d, v in zip(index, values):
                w.writerow([d.isoformat(), _fmt(v)])
        else:
            w.writerow(["value"])
            for v in values:
                w.writerow([_fmt(v)])
    return path


# ---------------------------------------------------------------------------
# model / report serialization


def model_to_dict(model: SarfimaGarchModel) -> dict:
    out = {
        "mu": model.mu,
        "memory": {"d": model.memory.d, "D": model.memory.D, "s": model.memory.s},
        "sarma": {
            "phi": list(model.sarma.phi),
            "theta": list(model.sarma.theta),
            "Phi": list(model.sarma.Phi),
            "Theta": list(model.sarma.Theta),
            "sigma2_eps": model.sarma.sigma2_eps,
        },
        "garch": None,
    }
    if model.garch is not None:
        out["garch"] = {
            "alpha0": model.garch.alpha0,
            "alpha": list(model.garch.alpha),
            "beta": list(model.garch.beta),
        }
    return out


def model_from_dict(d: dict) -> SarfimaGarchModel:
    """Inverse of :func:`model_to_dict`; never re-validates (descriptive load)."""
    try:
        mem = MemoryVector(d["memory"]["d"], d["memory"]["D"], d["memory"]["s"])
        sa = d.get("sarma", {})
        sarma = SarmaParams(
            phi=tuple(sa.get("phi", ())), theta=tuple(sa.get("theta", ())),
            Phi=tuple(sa.get("Phi", ())), Theta=tuple(sa.get("Theta", ())),
            sigma2_eps=sa.get("sigma2_eps", 1.0),
        )
        garch = None
        if d.get("garch"):
            g = d["garch"]
            garch = GarchParams(alpha0=g["alpha0"], alpha=tuple(g.get("alpha", ())),
                                beta=tuple(g.get("beta", ())))
        return SarfimaGarchModel(mu=d["mu"], memory=mem, sarma=sarma, garch=garch,
                                 check=False)
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed model description: missing {exc}") from exc


def _test_dict(t: TestResult) -> dict:
    return {"statistic": t.statistic, "p_value": t.p_value, "df": t.df,
            "n_lags": t.n_lags}


def fit_report_to_dict(report: FitReport, config=None) -> dict:
    """JSON-able summary of a pipeline fit (no bulk arrays).

    ``config``, when given, is embedded verbatim for provenance so a report
    records exactly how it was produced.
    """
    gph = report.gph
    out = {
        "model": model_to_dict(report.model),
        "n": report.n,
        "s": report.s,
        "burn_in": report.burn_in,
        "memory_regression": {
            "d": gph.d, "D": gph.D, "se_d": gph.se_d, "se_D": gph.se_D,
            "intercept": gph.intercept, "M": gph.M, "scheme": gph.scheme,
            "n_ordinates": gph.n_ordinates, "alpha": gph.alpha,
        },
        "sarma": {
            "orders": list(report.sarma.orders),
            "css": report.sarma.css,
            "loglik": report.sarma.loglik,
            "se": report.sarma.se,
            "converged": report.sarma.converged,
            "messages": report.sarma.messages,
        },
        "arch_lm": _test_dict(report.arch_lm),
        "garch": None,
        "diagnostics": diagnostics_to_dict(report.diagnostics),
        "violations": report.violations,
    }
    if config is not None:
        out["config"] = {
            "alpha": config.alpha, "M": config.M, "gph_scheme": config.gph_scheme,
            "sarma_orders": list(config.sarma_orders),
            "garch_orders": list(config.garch_orders),
            "arch_lm_lags": config.arch_lm_lags,
            "arch_lm_level": config.arch_lm_level,
            "fit_variance": config.fit_variance,
            "burn_in": config.burn_in,
            "diagnostic_lags": config.diagnostic_lags,
        }
    if report.garch is not None:
        out["garch"] = {
            "orders": list(report.garch.orders),
            "loglik": report.garch.loglik,
            "se": report.garch.se,
            "converged": report.garch.converged,
            "messages": report.garch.messages,
        }
    return out


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def load_model_json(path) -> SarfimaGarchModel:
    """Read a model back from a fit report (or bare model) JSON file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from exc
    if "model" in payload:
        payload = payload["model"]
    return model_from_dict(payload)


# ---------------------------------------------------------------------------
# tables


def parameter_table(report: FitReport) -> str:
    """Fixed-width estimate/standard-error table covering every fitted parameter."""
    rows = [("parameter", "estimate", "std_error")]
    gph = report.gph
    rows.append(("d", _fmt(gph.d), _fmt(gph.se_d)))
    rows.append(("D", _fmt(gph.D), _fmt(gph.se_D)))
    sarma = report.sarma
    names = [f"phi{i+1}" for i in range(len(sarma.params.phi))]
    names += [f"theta{i+1}" for i in range(len(sarma.params.theta))]
    names += [f"Phi{i+1}" for i in range(len(sarma.params.Phi))]
    names += [f"Theta{i+1}" for i in range(len(sarma.params.Theta))]
    values = list(sarma.params.phi) + list(sarma.params.theta) \
        + list(sarma.params.Phi) + list(sarma.params.Theta)
    for name, v in zip(names, values):
        rows.append((name, _fmt(v), _fmt(sarma.se.get(name, float("nan")))))
    rows.append(("sigma2_eps", _fmt(sarma.params.sigma2_eps), ""))
    if report.garch is not None:
        g = report.garch
        coeffs = [("alpha0", g.params.alpha0)]
        coeffs += [(f"alpha{i+1}", a) for i, a in enumerate(g.params.alpha)]
        coeffs += [(f"beta{j+1}", b) for j, b in enumerate(g.params.beta)]
        for name, v in coeffs:
            rows.append((name, _fmt(v), _fmt(g.se.get(name, float("nan")))))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
             for r in rows]
    return "\n".join(lines) + "\n"


def write_tsv(path, header: list, columns: list) -> Path:
    """Write aligned columns (floats formatted, other cells str()'d) as TSV."""
    path = Path(path)
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise DataError("TSV columns have unequal lengths")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(header)
        for i in range(n):
            w.writerow([
                _fmt(col[i]) if isinstance(col[i], (float, np.floating)) else str(col[i])
                for col in columns
            ])
    return path


def write_forecast_tsv(path, actual, fc: ForecastSeries, index=None) -> Path:
    """One row per time point: actual, prediction, bands (both flavours)."""
    actual = np.asarray(actual, dtype=float)
    header = ["t", "actual", "prediction", "lower", "upper"]
    t_col: list = list(range(actual.size))
    if index is not None:
        header[0] = "date"
        t_col = [d.isoformat() for d in index]
    cols = [t_col, list(actual), list(fc.predictions), list(fc.lower), list(fc.upper)]
    if fc.lower_adaptive is not None:
        header += ["lower_adaptive", "upper_adaptive"]
        cols += [list(fc.lower_adaptive), list(fc.upper_adaptive)]
    return write_tsv(path, header, cols)


def evaluation_to_dict(ev: ForecastEvaluation) -> dict:
    return {
        "n_eval": ev.n_eval, "level": ev.level, "mpe": ev.mpe, "mape": ev.mape,
        "rmse": ev.rmse, "cphfi": ev.cphfi, "cpgfi": ev.cpgfi,
    }


def diagnostics_to_dict(rep: DiagnosticsReport) -> dict:
    m = rep.moments
    return {
        "moments": {"mean": m.mean, "variance": m.variance, "skewness": m.skewness,
                    "excess_kurtosis": m.excess_kurtosis, "n": m.n},
        "ljung_box": _test_dict(rep.ljung_box),
        "box_pierce": _test_dict(rep.box_pierce),
        "jarque_bera": _test_dict(rep.jarque_bera),
        "acf_of_squares": [float(v) for v in rep.acf_of_squares],
    }


def write_run_meta(outdir, argv: list, seed=None) -> Path:
    """Environment sidecar: the one file allowed to differ between runs."""
    payload = {
        "command": argv,
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "package_version": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "rng": "numpy default_rng (PCG64); replication streams via SeedSequence.spawn",
        "seed": seed,
    }
    return write_json(Path(outdir) / "run_meta.json", payload)
