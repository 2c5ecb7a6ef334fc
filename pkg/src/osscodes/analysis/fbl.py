"""Normal approximation of the maximal coding rate at finite blocklength."""
from __future__ import annotations

import math

from ..errors import DomainError
from .special import q_func_inv

LOG2E = math.log2(math.e)


def awgn_capacity(snr: float) -> float:
    """Real AWGN capacity in bits per channel use."""
    return 0.5 * math.log2(1.0 + snr)


def awgn_dispersion(snr: float) -> float:
    """Real AWGN channel dispersion in bits^2 per channel use."""
    return snr * (snr + 2.0) / (2.0 * (snr + 1.0) ** 2) * LOG2E**2


def normal_approx_rate(snr: float, n: int, epsilon: float) -> float:
    """``C - sqrt(V/N) Q^-1(eps) + log2(N) / (2N)``."""
    if not snr > 0 or n < 1:
        raise DomainError("need snr > 0 and N >= 1")
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    return (
        awgn_capacity(snr)
        - math.sqrt(awgn_dispersion(snr) / n) * q_func_inv(epsilon)
        + math.log2(n) / (2.0 * n)
    )
