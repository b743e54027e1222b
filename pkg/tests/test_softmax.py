import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drsubmax.softmax import SoftmaxParams, increment_bound, smax, smax_grad


def test_params_validation():
    with pytest.raises(ValueError):
        SoftmaxParams(eta=0.0, m=3)
    with pytest.raises(ValueError):
        SoftmaxParams(eta=-1.0, m=3)
    with pytest.raises(ValueError):
        SoftmaxParams(eta=0.1, m=0)


def test_single_row_is_exact():
    # with m = 1 the softmax is just the entry itself
    p = SoftmaxParams(eta=0.01, m=1)
    assert smax(np.array([0.37]), p) == pytest.approx(0.37)
    assert smax_grad(np.array([0.37]), p)[0] == pytest.approx(1.0)


@given(st.integers(1, 8), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_sandwich(m, eta, seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-3, 3, size=m)
    p = SoftmaxParams(eta=eta, m=m)
    s = smax(z, p)
    assert z.max() <= s + 1e-9
    assert s <= eta * np.log(m) + z.max() + 1e-9


@given(st.integers(1, 8), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_grad_is_distribution(m, eta, seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-3, 3, size=m)
    g = smax_grad(z, SoftmaxParams(eta=eta, m=m))
    assert g.min() >= 0
    assert g.sum() == pytest.approx(1.0, abs=1e-12)


def test_grad_matches_finite_differences():
    rng = np.random.default_rng(7)
    p = SoftmaxParams(eta=0.2, m=5)
    z = rng.uniform(0, 1, size=5)
    g = smax_grad(z, p)
    h = 1e-6
    for j in range(5):
        e = np.zeros(5)
        e[j] = h
        fd = (smax(z + e, p) - smax(z - e, p)) / (2 * h)
        assert g[j] == pytest.approx(fd, abs=1e-6)


def test_no_overflow_for_tiny_eta():
    p = SoftmaxParams(eta=1e-6, m=3)
    z = np.array([100.0, 0.0, -100.0])
    assert smax(z, p) == pytest.approx(100.0)
    g = smax_grad(z, p)
    assert g[0] == pytest.approx(1.0)


def test_increment_bound_dominates_true_increase():
    rng = np.random.default_rng(3)
    for _ in range(200):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        eta = float(rng.uniform(0.05, 0.5))
        A = rng.uniform(0, 1, size=(m, n))
        x = rng.uniform(0.01, 1.0, size=n)
        d = x * rng.uniform(0, 0.3, size=n)
        scale = float(np.abs(A @ d).max()) / eta
        if scale > 0.5:
            d *= 0.4 / scale
        p = SoftmaxParams(eta=eta, m=m)
        assert smax(A @ (x + d), p) <= increment_bound(x, d, A, p) + 1e-9


def test_increment_bound_rejects_large_steps():
    p = SoftmaxParams(eta=0.01, m=1)
    A = np.array([[1.0]])
    with pytest.raises(ValueError, match="hypothesis"):
        increment_bound(np.array([1.0]), np.array([1.0]), A, p)


def test_increment_bound_zero_coordinate_stays_zero():
    # pinv convention: a zero x entry contributes no correction term, and a
    # zero step there keeps the bound finite
    p = SoftmaxParams(eta=0.5, m=1)
    A = np.array([[1.0, 1.0]])
    x = np.array([0.0, 0.5])
    d = np.array([0.0, 0.1])
    b = increment_bound(x, d, A, p)
    assert np.isfinite(b)
    assert smax(A @ (x + d), p) <= b + 1e-9


def test_input_validation():
    p = SoftmaxParams(eta=0.1, m=2)
    with pytest.raises(ValueError):
        smax(np.array([1.0]), p)
    with pytest.raises(ValueError):
        smax(np.array([np.inf, 0.0]), p)
    with pytest.raises(ValueError):
        increment_bound(np.array([-0.1, 0.1]), np.array([0.0, 0.0]),
                        np.array([[1.0, 1.0], [1.0, 1.0]]), p)
