import numpy as np
import pytest

from drsubmax import (MatroidSolverConfig, ObjectiveSpec, PolymatroidInstance,
                      brute_force_matroid_opt, solve_matroid_monotone,
                      solve_matroid_nonmonotone)
from drsubmax.report import CONVERGED, GUESS_REJECTED

EPS = 0.05
# expected bound at eps=0.05: each epoch targets eps*((1-10*eps)*M - current),
# so a converged run ends above (1 - 1/e)*(1 - 10*eps)*M up to initialization slop
LOWER = (1 - np.exp(-1.0)) * (1 - 10 * EPS) * 0.95


def test_coverage_uniform_example():
    obj = ObjectiveSpec.coverage([1, 1, 1, 1], [[0], [1], [2], [3]])
    pm = PolymatroidInstance.uniform(4, 2)
    opt = brute_force_matroid_opt(obj, pm)
    assert opt.value == pytest.approx(2.0)
    r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=opt.value))
    assert r.termination == CONVERGED
    assert r.feasible
    assert r.value >= LOWER * opt.value


def test_linear_uniform_exact_optimum():
    obj = ObjectiveSpec.linear([3.0, 1.0, 2.0])
    pm = PolymatroidInstance.uniform(3, 2)
    opt = brute_force_matroid_opt(obj, pm)
    assert opt.value == pytest.approx(5.0)  # two largest weights
    r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=5.0))
    assert r.feasible
    assert r.value >= LOWER * 5.0


def test_solution_always_feasible():
    rng = np.random.default_rng(21)
    for _ in range(5):
        n = 6
        covers = [[int(rng.integers(0, 4))] for _ in range(n)]
        obj = ObjectiveSpec.coverage(rng.uniform(0.5, 2.0, size=4), covers)
        pm = PolymatroidInstance.partition(n, [[0, 1, 2], [3, 4, 5]], [2, 1])
        M = brute_force_matroid_opt(obj, pm).value
        r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=M))
        assert pm.membership(r.solution, 1.0)
        assert r.feasible


def test_oversized_guess_rejected_with_feasible_partial():
    obj = ObjectiveSpec.coverage([1, 1], [[0], [1]])
    pm = PolymatroidInstance.uniform(2, 1)
    r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=500.0))
    assert r.termination == GUESS_REJECTED
    assert pm.membership(r.solution, 1.0)


def test_nonmonotone_cycle_example():
    obj = ObjectiveSpec.directed_cut(
        4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
    pm = PolymatroidInstance.uniform(4, 2)
    opt = brute_force_matroid_opt(obj, pm)
    assert opt.value == pytest.approx(2.0)  # alternate vertices
    r = solve_matroid_nonmonotone(obj, pm,
                                  MatroidSolverConfig(eps=EPS, M=opt.value))
    assert r.feasible
    assert r.value > 0


def test_nonmonotone_handles_monotone_objective():
    obj = ObjectiveSpec.coverage([1, 1, 1], [[0], [1], [2]])
    pm = PolymatroidInstance.uniform(3, 2)
    opt = brute_force_matroid_opt(obj, pm)
    r = solve_matroid_nonmonotone(obj, pm,
                                  MatroidSolverConfig(eps=EPS, M=opt.value))
    assert r.feasible
    # weaker 1/e-style bound applies, generously slackened for eps=0.05
    assert r.value > 0.1 * opt.value


def test_monotone_solver_rejects_nonmonotone_objective():
    obj = ObjectiveSpec.directed_cut(2, [(0, 1, 1.0)])
    pm = PolymatroidInstance.uniform(2, 1)
    with pytest.raises(ValueError):
        solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=1.0))


def test_config_validation():
    with pytest.raises(ValueError):
        MatroidSolverConfig(eps=0.5, M=1.0)
    with pytest.raises(ValueError):
        MatroidSolverConfig(eps=0.05, M=0.0)


def test_rounds_track_iterations():
    obj = ObjectiveSpec.coverage([1, 1], [[0], [1]])
    pm = PolymatroidInstance.uniform(2, 2)
    r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=2.0))
    # one singleton batch, one per-epoch baseline query, one per iteration
    assert r.adaptive_rounds == 1 + r.epochs + r.inner_iterations


def test_zero_capacity_coordinates_stay_zero():
    obj = ObjectiveSpec.coverage([1, 1], [[0], [1]])
    pm = PolymatroidInstance.partition(2, [[0], [1]], [1, 0])
    r = solve_matroid_monotone(obj, pm, MatroidSolverConfig(eps=EPS, M=1.0))
    assert r.solution[1] == 0.0
    assert r.feasible
