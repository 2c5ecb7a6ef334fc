import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from osscodes.analysis import log_q, marcum_q_half, q_func, q_func_inv
from osscodes.errors import DomainError


def q_reference(x):
    with mpmath.workdps(50):
        return mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2


def folded_survival(a, b):
    """P(|Z + a| > b) by integrating the two-sided normal density outside [-b, b]."""
    pdf = lambda t: math.exp(-0.5 * (t - a) ** 2) / math.sqrt(2 * math.pi)
    inside = quad(pdf, -b, b, epsabs=1e-14, epsrel=1e-13)[0] if b > 0 else 0.0
    return 1.0 - inside


def test_q_basic():
    assert q_func(0.0) == 0.5
    assert q_func(-np.inf) == 1.0
    assert q_func(np.inf) == 0.0


def test_q3_against_defining_integral():
    ref = quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), 3, np.inf, epsabs=0, epsrel=1e-13)[0]
    assert q_func(3.0) == pytest.approx(ref, rel=1e-11)
    assert q_func(3.0) == pytest.approx(1.3499e-3, rel=1e-4)


@pytest.mark.parametrize("x", range(1, 9))
def test_q_high_precision(x):
    ref = q_reference(x)
    assert abs(q_func(float(x)) - float(ref)) / float(ref) <= 1e-12


def test_log_q_far_tail():
    assert log_q(40.0) == pytest.approx(float(mpmath.log(q_reference(40))), rel=1e-12)


def test_q_inverse():
    for p in (1e-9, 1e-3, 0.25, 0.5, 0.9):
        assert q_func(q_func_inv(p)) == pytest.approx(p, rel=1e-12)
    assert q_func_inv(0.5) == 0.0
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            q_func_inv(bad)


def test_marcum_edges():
    for a in (0.0, 0.5, 3.0):
        assert marcum_q_half(a, 0.0) == 1.0
    for b in (0.1, 1.0, 4.0):
        assert marcum_q_half(0.0, b) == pytest.approx(2 * q_func(b), rel=1e-15)
    with pytest.raises(DomainError):
        marcum_q_half(-1.0, 1.0)


def test_marcum_quadrature_point():
    assert abs(marcum_q_half(2.0, 1.0) - folded_survival(2.0, 1.0)) <= 1e-12


def test_marcum_grid_matches_quadrature():
    grid = np.linspace(0.0, 5.0, 50)
    a, b = np.meshgrid(grid, grid, indexing="ij")
    got = marcum_q_half(a, b)
    ref = np.vectorize(folded_survival)(a, b)
    assert np.max(np.abs(got - ref)) <= 1e-9
