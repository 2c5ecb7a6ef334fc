"""Block error rate of single- and two-layer OSS codes on the AWGN channel.

The integrals are evaluated for the error probability itself rather than
as ``1 - P(success)``, so results stay accurate down to ~1e-12 and below.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import erf, erfc, log_ndtr

from ..errors import DomainError
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_log
from .special import log_marcum_q_half, q_func

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _log_neg_expm1(x):
    """``log(1 - exp(x))`` for ``x <= 0``."""
    x = np.asarray(x, dtype=float)
    return np.where(x > -0.693, np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


def bler_single_layer_exact(n: int, k: int, sigma: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Exact BLER of a single-layer code with ``A={1}`` under ordered-statistics decoding.

    An error occurs when the largest of the ``N-K`` noise-only samples
    exceeds the smallest of the ``K`` signal samples. With ``y = sigma t``
    and ``s = 1/sigma``::

        P(E) = (N-K) int phi(t) Phi(t)^(N-K-1) [1 - Q(t - s)^K] dt
    """
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= K < N, got K={k}, N={n}")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    s = 1.0 / sigma
    m = n - k

    def log_f(t):
        out = math.log(m) - 0.5 * t * t - _LOG_SQRT_2PI + _log_neg_expm1(k * log_ndtr(s - t))
        if m > 1:
            out = out + (m - 1) * log_ndtr(t)
        return out

    width = 12.0 + math.sqrt(2.0 * math.log(n))
    return min(1.0, integrate_log(log_f, -width, s + width, quad))


def _log_abs_normal_cdf(u):
    """``log(2 Phi(u) - 1)``, the CDF of ``|Z|``."""
    u = np.asarray(u, dtype=float)
    r = u / math.sqrt(2.0)
    with np.errstate(divide="ignore"):
        return np.where(u < 1.0, np.log(erf(r)), np.log1p(-erfc(r)))


def bler_two_layer_bound(n: int, k: int, sigma: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Upper bound on the BLER of the symmetric ``{+1}/{-1}`` two-layer code.

    It is the exact error rate of a decoder that first keeps the ``2K``
    largest ``|y_n|`` and then reads signs, assuming the two stages fail
    independently. The support stage integrates over ``u = sqrt(y)/sigma``,
    which removes the ``y^(-1/2)`` endpoint singularity::

        E1 = (N-2K) int_0^inf 2 phi(u) (2 Phi(u)-1)^(N-2K-1) [1 - Q_half(s, u)^(2K)] du
        E2 = 1 - (1 - Q(s))^(2K)
        P  = E1 + E2 - E1 E2
    """
    if not 1 <= k or not 2 * k < n:
        raise DomainError(f"need 1 <= K and 2K < N, got K={k}, N={n}")
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    s = 1.0 / sigma
    m = n - 2 * k

    def log_f(u):
        out = (
            math.log(m) + math.log(2.0) - 0.5 * u * u - _LOG_SQRT_2PI
            + _log_neg_expm1(2 * k * log_marcum_q_half(s, u))
        )
        if m > 1:
            out = out + (m - 1) * _log_abs_normal_cdf(u)
        return out

    width = 12.0 + math.sqrt(2.0 * math.log(n))
    e1 = integrate_log(log_f, 0.0, s + width, quad)
    e2 = -math.expm1(2 * k * float(log_ndtr(s)))
    return min(1.0, e1 + e2 - e1 * e2)


def achievability_bound(n: int, k: int, ebn0_linear: float, delta: float) -> float:
    """Closed-form Chernoff/Bernoulli upper bound on the ordered-statistics BLER.

    ``1/sigma^2 = (2/K) log2 C(N, K) Eb/N0``; the bound is
    ``K e^{-delta^2/2sigma^2} + (N-K) e^{-(1-delta)^2/2sigma^2} - K(N-K) e^{-(delta^2+(1-delta)^2)/2sigma^2}``.
    It may exceed one.
    """
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if not ebn0_linear > 0 or k < 1 or n <= k:
        raise DomainError("need Eb/N0 > 0 and 1 <= K < N")
    log2_binom = math.log2(math.comb(n, k))
    inv_2var = log2_binom * ebn0_linear / k
    t1 = math.exp(math.log(k) - delta * delta * inv_2var)
    t2 = math.exp(math.log(n - k) - (1.0 - delta) ** 2 * inv_2var)
    t3 = math.exp(math.log(k) + math.log(n - k) - (delta * delta + (1.0 - delta) ** 2) * inv_2var)
    return t1 + t2 - t3


def sign_stage_error(k: int, sigma: float) -> float:
    return 1.0 - (1.0 - q_func(1.0 / sigma)) ** (2 * k)
