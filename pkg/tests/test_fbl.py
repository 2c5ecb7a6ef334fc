import math

import numpy as np
import pytest

from osscodes.analysis import awgn_capacity, awgn_dispersion, normal_approx_rate, q_func_inv
from osscodes.errors import DomainError


def test_half_epsilon():
    snr = 10 ** -0.3
    for n in (16, 256, 4096):
        assert normal_approx_rate(snr, n, 0.5) == pytest.approx(
            awgn_capacity(snr) + math.log2(n) / (2 * n), rel=1e-14
        )


def test_benchmark_point():
    snr, n, eps = 10 ** -0.3, 256, 1e-3
    c = 0.5 * math.log2(1 + snr)
    v = snr * (snr + 2) / (2 * (snr + 1) ** 2) * math.log2(math.e) ** 2
    expect = c - math.sqrt(v / n) * q_func_inv(eps) + math.log2(n) / (2 * n)
    assert normal_approx_rate(snr, n, eps) == pytest.approx(expect, rel=1e-14)
    assert 0 < expect < c
    assert awgn_dispersion(snr) == pytest.approx(v, rel=1e-14)


def test_increases_toward_capacity():
    snr = 10 ** -0.3
    ns = 2 ** np.arange(5, 21)
    rates = [normal_approx_rate(snr, int(n), 1e-3) for n in ns]
    assert np.all(np.diff(rates) > 0)
    assert rates[-1] < awgn_capacity(snr)
    assert awgn_capacity(snr) - normal_approx_rate(snr, 10**12, 1e-3) < 1e-4


def test_domain():
    with pytest.raises(DomainError):
        normal_approx_rate(1.0, 64, 1.0)
    with pytest.raises(DomainError):
        normal_approx_rate(-1.0, 64, 0.1)
