"""Gaussian tail function, its inverse and the order-1/2 Marcum Q-function."""
from __future__ import annotations

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri

from ..errors import DomainError


def q_func(x):
    """Gaussian tail ``Q(x) = P(Z > x)``; accurate in the far right tail."""
    out = ndtr(-np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def log_q(x):
    out = log_ndtr(-np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def q_func_inv(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise DomainError(f"Q^-1 needs p in (0, 1), got {p}")
    out = -ndtri(p_arr)
    return float(out) if np.ndim(out) == 0 else out


def marcum_q_half(a, b):
    """``Q_{1/2}(a, b) = Q(b - a) + Q(b + a)``: survival of ``|Z + a|`` at ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("Marcum Q arguments must be non-negative")
    out = ndtr(a - b) + ndtr(-b - a)
    return float(out) if np.ndim(out) == 0 else out


def log_marcum_q_half(a, b):
    return np.logaddexp(log_ndtr(np.asarray(a) - b), log_ndtr(-np.asarray(b) - a))
