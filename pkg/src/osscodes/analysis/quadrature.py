"""Adaptive quadrature of positive integrands supplied as log-densities."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from ..errors import QuadratureNonConvergence

TAIL_DROP_NATS = 60.0


@dataclass(frozen=True)
class QuadratureConfig:
    relative_tolerance: float = 1e-10
    absolute_floor: float = 1e-300
    max_subdivisions: int = 500

    def __post_init__(self):
        if not 0 < self.relative_tolerance < 1e-4:
            raise ValueError("relative_tolerance must lie in (0, 1e-4)")


DEFAULT_QUAD = QuadratureConfig()


def integrate_log(
    log_f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    quad: QuadratureConfig = DEFAULT_QUAD,
    grid: int = 4001,
) -> float:
    """Integrate ``exp(log_f)`` over ``[lo, hi]``.

    The peak is located on a grid, the range is trimmed to where the
    integrand is within :data:`TAIL_DROP_NATS` of it, and the scaled
    integrand ``exp(log_f - peak)`` goes to QUADPACK's adaptive
    Gauss-Kronrod rule with the peak as a breakpoint.
    """
    xs = np.linspace(lo, hi, grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.asarray(log_f(xs), dtype=float)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    i_max = int(np.argmax(vals))
    peak = vals[i_max]
    if not np.isfinite(peak):
        return 0.0
    keep = np.nonzero(vals >= peak - TAIL_DROP_NATS)[0]
    a = xs[max(keep[0] - 1, 0)]
    b = xs[min(keep[-1] + 1, grid - 1)]
    mid = xs[i_max]

    def f(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = float(log_f(np.array([x]))[0]) - peak
        return math.exp(v) if v > -745 else 0.0

    pieces = [p for p in (a, mid, b) if a <= p <= b]
    pieces = sorted(set(pieces))
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for p0, p1 in zip(pieces, pieces[1:]):
            try:
                val, e = integrate.quad(
                    f, p0, p1, epsabs=0.0, epsrel=quad.relative_tolerance, limit=quad.max_subdivisions
                )
            except integrate.IntegrationWarning as exc:
                raise QuadratureNonConvergence(str(exc)) from exc
            total += val
            err += e
    if err > max(10 * quad.relative_tolerance * total, quad.absolute_floor):
        raise QuadratureNonConvergence(f"estimated error {err:.3e} on value {total:.3e}")
    return total * math.exp(peak)
