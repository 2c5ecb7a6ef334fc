import numpy as np
import pytest

from osscodes.dictionary import Dictionary, apply_dictionary, invert_dictionary
from osscodes.errors import DimensionMismatch, HadamardOrderInvalid


def test_identity():
    x = np.array([0.0, 1.0, -2.0])
    np.testing.assert_array_equal(apply_dictionary(Dictionary.identity(), x), x)


def test_hadamard_two():
    out = apply_dictionary(Dictionary.hadamard(2), np.array([1.0, 0.0]))
    np.testing.assert_allclose(out, [2**-0.5, 2**-0.5], atol=1e-15)


def test_hadamard_order_must_be_power_of_two():
    with pytest.raises(HadamardOrderInvalid):
        apply_dictionary(Dictionary("hadamard"), np.zeros(6))
    with pytest.raises(DimensionMismatch):
        apply_dictionary(Dictionary.hadamard(8), np.zeros(4))


@pytest.mark.parametrize("kind", ["hadamard", "explicit", "identity"])
def test_isometry_and_inverse(kind, rng):
    n = 16
    if kind == "explicit":
        d = Dictionary.explicit(np.linalg.qr(rng.standard_normal((n, n)))[0])
    else:
        d = Dictionary(kind)
    x = rng.standard_normal((5, n))
    c = apply_dictionary(d, x)
    np.testing.assert_allclose(np.linalg.norm(c, axis=1), np.linalg.norm(x, axis=1), rtol=0, atol=1e-10)
    np.testing.assert_allclose(invert_dictionary(d, c), x, atol=1e-10)


def test_inversion_keeps_noise_white(rng):
    n = 32
    d = Dictionary.explicit(np.linalg.qr(rng.standard_normal((n, n)))[0])
    sigma = 0.7
    v = sigma * rng.standard_normal((40000, n))
    w = invert_dictionary(d, v)
    cov = np.cov(w, rowvar=False)
    assert np.max(np.abs(np.diag(cov) - sigma**2)) < 0.03
    off = cov - np.diag(np.diag(cov))
    assert np.max(np.abs(off)) < 0.03
