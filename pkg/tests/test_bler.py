import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest, norm

from osscodes.analysis import (
    QuadratureConfig,
    achievability_bound,
    bler_single_layer_exact,
    bler_two_layer_bound,
    q_func,
)
from osscodes.channel import sigma_from_ebn0
from osscodes.decoder import ordered_statistics_decode_batch, two_stage_magnitude_decode_batch
from osscodes.encoder import encode_batch, random_bits
from osscodes.errors import DomainError
from osscodes.spec import single_layer, two_layer_pm, validate_spec


def single_layer_literal(n, k, sigma):
    """1 - P(success), with the success integral over the raw observation y."""
    phi = lambda y, m: norm.pdf(y, loc=m, scale=sigma)
    cdf = lambda y, m: norm.cdf(y, loc=m, scale=sigma)
    f = lambda y: (n - k) * phi(y, 0) * cdf(y, 0) ** (n - k - 1) * norm.sf(y, loc=1, scale=sigma) ** k
    return 1.0 - quad(f, -np.inf, np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)[0]


def two_layer_literal(n, k, sigma):
    """Support-stage error over y = |v|^2 with the scaled chi-square density, plus the sign stage."""
    m = n - 2 * k

    def f(y):
        r = math.sqrt(y)
        dens = math.exp(-y / (2 * sigma**2)) / (sigma * math.sqrt(2 * math.pi * y))
        cdf_noise = math.erf(r / (sigma * math.sqrt(2)))
        tail_sig = q_func((r - 1) / sigma) + q_func((r + 1) / sigma)
        return m * dens * cdf_noise ** (m - 1) * (1 - tail_sig ** (2 * k))

    opts = dict(epsabs=1e-14, epsrel=1e-11, limit=500)
    e1 = quad(f, 0, 1, **opts)[0] + quad(f, 1, np.inf, **opts)[0]
    e2 = 1 - (1 - q_func(1 / sigma)) ** (2 * k)
    return e1 + e2 - e1 * e2


@pytest.mark.parametrize("n,k,sigma", [(16, 1, 0.4), (64, 1, 0.3), (32, 3, 0.35), (8, 2, 0.6)])
def test_single_layer_matches_literal(n, k, sigma):
    assert bler_single_layer_exact(n, k, sigma) == pytest.approx(single_layer_literal(n, k, sigma), rel=1e-7)


def test_n2_closed_form():
    for sigma in (0.2, 0.5, 1.0, 3.0):
        assert bler_single_layer_exact(2, 1, sigma) == pytest.approx(q_func(1 / (sigma * math.sqrt(2))), rel=1e-12)


def test_deep_tail_reaches_below_1e12():
    p = bler_single_layer_exact(2, 1, 0.1)
    assert p == pytest.approx(q_func(1 / (0.1 * math.sqrt(2))), rel=1e-9)
    assert p < 1e-12


def test_single_layer_monotone():
    sig = np.linspace(0.15, 2.0, 25)
    vals = [bler_single_layer_exact(32, 1, s) for s in sig]
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] <= 1.0
    # at fixed Eb/N0 a longer code is better
    per_n = [bler_single_layer_exact(n, 1, sigma_from_ebn0(single_layer(n), 6.0)) for n in (8, 16, 64, 256)]
    assert np.all(np.diff(per_n) < 0)


def test_single_layer_mc_at_6db():
    spec = single_layer(16)
    vs = validate_spec(spec)
    sigma = sigma_from_ebn0(spec, 6.0)
    rng = np.random.default_rng(17)
    bits = random_bits(vs, rng, 100_000)
    c, _, _ = encode_batch(vs, bits)
    y = c + sigma * rng.standard_normal(c.shape)
    errors = np.any(ordered_statistics_decode_batch(vs, y).bits != bits, axis=1)
    p = errors.mean()
    se = math.sqrt(p * (1 - p) / errors.size)
    assert abs(p - bler_single_layer_exact(16, 1, sigma)) <= 3 * se


@pytest.mark.parametrize("n,k,sigma", [(32, 1, 0.35), (128, 1, 0.3), (20, 2, 0.45)])
def test_two_layer_matches_literal(n, k, sigma):
    assert bler_two_layer_bound(n, k, sigma) == pytest.approx(two_layer_literal(n, k, sigma), rel=1e-6)


def test_two_layer_noiseless_limit():
    assert bler_two_layer_bound(32, 1, 0.05) < 1e-20


@pytest.mark.parametrize("decoder", [ordered_statistics_decode_batch, two_stage_magnitude_decode_batch])
def test_two_layer_bound_dominates_mc(decoder):
    spec = two_layer_pm(32)
    vs = validate_spec(spec)
    rng = np.random.default_rng(8)
    for db in (3.0, 5.0):
        sigma = sigma_from_ebn0(spec, db)
        bits = random_bits(vs, rng, 100_000)
        c, _, _ = encode_batch(vs, bits)
        y = c + sigma * rng.standard_normal(c.shape)
        errors = np.any(decoder(vs, y).bits != bits, axis=1)
        p = errors.mean()
        se = math.sqrt(p * (1 - p) / errors.size)
        assert p <= bler_two_layer_bound(32, 1, sigma) + 3 * se


def test_domain_errors():
    with pytest.raises(DomainError):
        bler_single_layer_exact(4, 4, 1.0)
    with pytest.raises(DomainError):
        bler_two_layer_bound(4, 2, 1.0)
    with pytest.raises(DomainError):
        achievability_bound(64, 1, 1.0, 0.0)


def test_quadrature_config_defaults():
    q = QuadratureConfig()
    assert q.relative_tolerance == 1e-10 and q.absolute_floor == 1e-300


def test_order_statistic_kernel():
    # the largest of N noise samples has CDF Phi(x)^N
    n, reps = 31, 100_000
    rng = np.random.default_rng(123)
    mx = rng.standard_normal((reps, n)).max(axis=1)
    stat = kstest(mx, lambda x: norm.cdf(x) ** n).statistic
    assert stat <= 0.01


def test_achievability_formula_and_limits():
    n, k, eb, d = 64, 1, 10 ** 0.2, 0.3
    inv = 2 * math.log2(math.comb(n, k)) * eb / k  # 1 / sigma^2
    expect = (
        k * math.exp(-d * d * inv / 2)
        + (n - k) * math.exp(-((1 - d) ** 2) * inv / 2)
        - k * (n - k) * math.exp(-(d * d + (1 - d) ** 2) * inv / 2)
    )
    assert achievability_bound(n, k, eb, d) == pytest.approx(expect, rel=1e-13)
    assert achievability_bound(n, 1, eb, 1e-9) >= 1.0
    assert achievability_bound(n, 2, eb, 1e-9) >= 1.0


def test_achievability_dominates_mc():
    spec = single_layer(64)
    vs = validate_spec(spec)
    eb_db = 8.0
    sigma = sigma_from_ebn0(spec, eb_db)
    rng = np.random.default_rng(4)
    bits = random_bits(vs, rng, 50_000)
    c, _, _ = encode_batch(vs, bits)
    y = c + sigma * rng.standard_normal(c.shape)
    p = np.any(ordered_statistics_decode_batch(vs, y).bits != bits, axis=1).mean()
    best = min(achievability_bound(64, 1, 10 ** (eb_db / 10), d) for d in np.linspace(0.05, 0.95, 19))
    assert p <= best
