import numpy as np
import pytest

from drsubmax.bruteforce import finite_diff_grad, multilinear_enumeration
from drsubmax.objective import ObjectiveSpec


def cover_example():
    # universe {0, 1} with weights (1, 2); element 1 covers both items
    return ObjectiveSpec.coverage([1.0, 2.0], [[0], [0, 1], [1]])


def test_linear_eval_and_grad():
    obj = ObjectiveSpec.linear([2.0, 3.0])
    assert obj.eval([0.5, 0.5]) == pytest.approx(2.5)
    np.testing.assert_allclose(obj.grad([0.2, 0.9]), [2.0, 3.0])


def test_coverage_closed_form():
    obj = cover_example()
    x = np.array([0.5, 0.5, 0.0])
    # item 0: 1 - 0.5*0.5 = 0.75; item 1: 1 - 0.5*1 = 0.5
    assert obj.eval(x) == pytest.approx(1.0 * 0.75 + 2.0 * 0.5)


def test_directed_cut_closed_form():
    obj = ObjectiveSpec.directed_cut(3, [(0, 1, 1.0), (1, 2, 2.0)])
    x = np.array([0.5, 0.4, 0.1])
    assert obj.eval(x) == pytest.approx(0.5 * 0.6 + 2.0 * 0.4 * 0.9)
    assert not obj.monotone


def test_directed_cut_rejects_bad_arcs():
    with pytest.raises(ValueError):
        ObjectiveSpec.directed_cut(2, [(0, 0, 1.0)])
    with pytest.raises(ValueError):
        ObjectiveSpec.directed_cut(2, [(0, 1, -1.0)])
    with pytest.raises(ValueError):
        ObjectiveSpec.directed_cut(2, [(0, 5, 1.0)])


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        ObjectiveSpec.linear([1.0, -2.0])
    with pytest.raises(ValueError):
        ObjectiveSpec.coverage([-1.0], [[0]])


def test_clamping_above_one():
    obj = cover_example()
    full = obj.eval(np.ones(3))
    assert obj.eval(np.array([1.7, 2.0, 1.0])) == pytest.approx(full)
    g = obj.grad(np.array([1.7, 0.5, 0.3]))
    assert g[0] == 0.0  # clamped coordinate


def test_negative_input_rejected():
    obj = cover_example()
    with pytest.raises(ValueError):
        obj.eval(np.array([-0.1, 0.5, 0.5]))
    with pytest.raises(ValueError):
        obj.grad(np.array([-0.1, 0.5, 0.5]))


def test_grads_match_finite_differences():
    rng = np.random.default_rng(11)
    objs = [ObjectiveSpec.linear([1.0, 2.0, 0.5]),
            cover_example(),
            ObjectiveSpec.directed_cut(3, [(0, 1, 1.0), (1, 2, 0.5),
                                           (2, 0, 2.0)])]
    for obj in objs:
        for _ in range(25):
            x = rng.uniform(0.1, 0.9, size=obj.n)
            g = obj.grad(x)
            fd = finite_diff_grad(obj, x, 1e-5)
            np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-7)


def test_eval_many_matches_eval():
    obj = cover_example()
    rng = np.random.default_rng(4)
    X = rng.uniform(0, 1, size=(20, 3))
    many = obj.eval_many(X)
    for row, v in zip(X, many):
        assert obj.eval(row) == pytest.approx(v)


def test_eval_equals_multilinear_enumeration():
    # closed forms are multilinear, so enumeration must agree exactly
    objs = [cover_example(),
            ObjectiveSpec.directed_cut(3, [(0, 1, 1.0), (2, 1, 0.5)])]
    rng = np.random.default_rng(9)
    for obj in objs:
        for _ in range(10):
            x = rng.uniform(0, 1, size=obj.n)
            assert obj.eval(x) == pytest.approx(multilinear_enumeration(obj, x))


def test_sampled_is_reproducible_and_close():
    cover = cover_example()
    obj = ObjectiveSpec.sampled(3, cover.set_value, monotone=True,
                                samples=4000, seed=5)
    x = np.array([0.3, 0.6, 0.2])
    v1, v2 = obj.eval(x), obj.eval(x)
    assert v1 == v2  # fixed seed per call
    exact = cover.eval(x)
    assert abs(v1 - exact) < 0.1
    g = obj.grad(x)
    np.testing.assert_allclose(g, cover.grad(x), atol=0.15)


def test_singleton_and_set_value():
    obj = cover_example()
    np.testing.assert_allclose(obj.singleton_values(), [1.0, 3.0, 2.0])
    assert obj.set_value([0, 2]) == pytest.approx(3.0)
    assert obj.set_value([]) == pytest.approx(0.0)
