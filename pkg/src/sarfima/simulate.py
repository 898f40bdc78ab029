"""Path simulation for the full model.

Generation runs the definition forward: draw standardized innovations,
pass them through the conditional-variance recursion, colour them with the
short-memory ARMA filter, then integrate with the inverse fractional
filter (negated memory orders) truncated at the realized sample length.
A burn-in prefix is generated and discarded so the short-memory filters
and the variance recursion forget their zero/unconditional starts.

Randomness comes from :func:`numpy.random.default_rng` (PCG64).  Passing
the same integer seed reproduces the path bit-for-bit on a given numpy
version; Monte Carlo drivers split seeds via ``SeedSequence.spawn`` so
replications are independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .exceptions import DataError
from .fracdiff import apply_filter, psi_star
from .model import SarfimaGarchModel


def default_burn_in(s: int) -> int:
    """Long enough for the variance recursion and fractional tail to settle."""
    return max(1000, 20 * s)


@dataclass(frozen=True)
class SimulationResult:
    """A simulated path with its innovation/variance trajectories (burn-in removed)."""

    values: np.ndarray
    innovations: np.ndarray
    conditional_variances: np.ndarray
    burn_in: int

    def __post_init__(self):
        for name in ("values", "innovations", "conditional_variances"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def standardized_innovations(n: int, rng: np.random.Generator, dist: str = "gaussian",
                             df: float | None = None) -> np.ndarray:
    """Draw iid innovations with unit variance ("gaussian" or "t" with df > 2)."""
    if dist == "gaussian":
        return rng.standard_normal(n)
    if dist == "t":
        if df is None or df <= 2:
            raise DataError("t innovations need df > 2 for a finite variance")
        return rng.standard_t(df, n) * np.sqrt((df - 2.0) / df)
    raise DataError(f"unknown innovation distribution: {dist!r}")


def garch_path(garch, z: np.ndarray) -> tuple:
    """Run the variance recursion over standardized innovations.

    Pre-sample squared innovations and variances are pinned at the
    unconditional variance, which the recursion then forgets
    geometrically.  Returns (innovations, conditional variances).
    """
    r, m = garch.orders
    h0 = garch.unconditional_variance
    if not np.isfinite(h0):
        raise DataError("variance recursion is not stationary; cannot seed simulation")
    n = z.size
    k = max(r, m)
    h = np.full(n + k, h0)
    e2 = np.full(n + k, h0)
    eps = np.empty(n)
    alpha = np.asarray(garch.alpha)[::-1]  # aligned for slice dot-products
    beta = np.asarray(garch.beta)[::-1]
    a0 = garch.alpha0
    for t in range(n):
        i = t + k
        ht = a0
        if m:
            ht += alpha @ e2[i - m : i]
        if r:
            ht += beta @ h[i - r : i]
        h[i] = ht
        eps[t] = np.sqrt(ht) * z[t]
        e2[i] = eps[t] ** 2
    return eps, h[k:]


def simulate(model: SarfimaGarchModel, n: int, burn_in: int | None = None,
             seed=None, dist: str = "gaussian", df: float | None = None) -> SimulationResult:
    """Generate ``n`` observations from the model.

    Parameters
    ----------
    model : SarfimaGarchModel
        Must satisfy all invariants (stationary, invertible, positive
        variance recursion).
    n : int
        Path length after discarding burn-in.
    burn_in : int, optional
        Discarded prefix length; defaults to ``max(1000, 20 s)``.
    seed : int, numpy.random.Generator, or None
        Reproducibility handle.
    dist, df
        Innovation family: "gaussian" (default) or "t" with ``df > 2``
        (rescaled to unit variance).
    """
    if n < 1:
        raise DataError("n must be >= 1")
    problems = []
    if not model.memory.is_stationary_invertible:
        problems.append("memory orders outside the stationary-invertible region")
    if model.garch is not None and model.garch.persistence >= 1.0:
        problems.append("variance recursion not stationary")
    if problems:
        raise DataError("cannot simulate: " + "; ".join(problems))

    s = model.s
    if burn_in is None:
        burn_in = default_burn_in(s)
    total = n + burn_in
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    z = standardized_innovations(total, rng, dist, df)
    if model.garch is not None:
        eps, h = garch_path(model.garch, z)
    else:
        sig2 = model.sarma.sigma2_eps
        eps = np.sqrt(sig2) * z
        h = np.full(total, sig2)

    # short-memory colouring: phi-side(B) u = theta-side(B) eps, zero initial state
    arp = model.sarma.ar_poly(s)
    map_ = model.sarma.ma_poly(s)
    u = lfilter(map_, arp, eps)

    # fractional integration: x = (1-B)^{-d} (1-B^s)^{-D} u, truncated expansion
    mem = model.memory
    x = apply_filter(u, psi_star(-mem.d, -mem.D, s, total)) + model.mu

    return SimulationResult(x[burn_in:], eps[burn_in:], h[burn_in:], burn_in)
