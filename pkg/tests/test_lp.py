import itertools

import numpy as np
import pytest

import tribip
from tribip import LpCounter, RelaxationSolver, solve_weighted_lp
from tribip.lp import is_integral

from conftest import brute_force_feasible_points


def test_hand_lp():
    # two items, profits cols (10,1,1) and (1,10,1), unit weights, W=1:
    # w=(1,0,0) minimises -10*x1 - 1*x2 subject to x1+x2 <= 1
    p = tribip.knapsack_problem([[10, 1], [1, 10], [1, 1]], [1, 1], 1)
    res = solve_weighted_lp(p, [1, 0, 0])
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.0, 0.0])
    assert res.value == pytest.approx(-10.0, abs=1e-9)


def test_zero_objective():
    p = tribip.knapsack_problem([[0, 0], [0, 0], [0, 0]], [1, 1], 1)
    res = solve_weighted_lp(p, [1, 1, 1])
    assert res.status == "optimal"
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_assignment_lp_integral():
    # totally unimodular rows: every optimal basic solution is integral
    for tasks in (2, 3, 4):
        p = tribip.generate_assignment(tasks, seed=tasks)
        for w in ([1, 0, 0], [0.2, 0.3, 0.5], [1, 1, 1]):
            res = solve_weighted_lp(p, w)
            assert res.status == "optimal"
            assert is_integral(res.x, tol=1e-6)


def test_lp_counter():
    p = tribip.generate_knapsack(5, seed=0)
    counter = LpCounter()
    solver = RelaxationSolver(p)
    solver.solve_weighted([1, 1, 1], counter=counter)
    solver.solve_weighted([1, 2, 3], counter=counter)
    assert counter.count == 2


def test_deterministic_resolve():
    p = tribip.generate_knapsack(12, seed=9)
    a = solve_weighted_lp(p, [0.5, 0.3, 0.2])
    b = solve_weighted_lp(p, [0.5, 0.3, 0.2])
    assert a.value == b.value
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations


def test_lower_bound_property():
    # LP optimum never exceeds the best feasible binary value
    rng = np.random.default_rng(2)
    for seed in range(4):
        p = tribip.generate_knapsack(10, seed=seed)
        feasible = brute_force_feasible_points(p)
        c_float = p.C.astype(float)
        for _ in range(5):
            w = rng.dirichlet([1, 1, 1])
            res = solve_weighted_lp(p, w)
            best_int = min(float(w @ np.array(y)) for _, y in feasible)
            assert res.value <= best_int + 1e-6


def test_infeasible_relaxation():
    # x1 + x2 >= 3 cannot hold with x in [0,1]^2
    p = tribip.general_problem(
        objectives=[[1, 0], [0, 1], [1, 1]],
        senses=("min", "min", "min"),
        a=[[1, 1]],
        row_sense=(">=",),
        b=[3],
    )
    res = solve_weighted_lp(p, [1, 1, 1])
    assert res.status == "infeasible"


def test_equality_rows_phase1():
    # x1 + x2 = 1 with minimisation picks the cheaper end
    p = tribip.general_problem(
        objectives=[[2, 5], [2, 5], [2, 5]],
        senses=("min", "min", "min"),
        a=[[1, 1]],
        row_sense=("=",),
        b=[1],
    )
    res = solve_weighted_lp(p, [1, 1, 1])
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.0, 0.0])
    assert res.value == pytest.approx(6.0, abs=1e-9)


def test_ge_rows():
    # covering row: x1 + x2 >= 1, prefer the cheap variable
    p = tribip.general_problem(
        objectives=[[1, 10], [1, 10], [1, 10]],
        senses=("min", "min", "min"),
        a=[[1, 1]],
        row_sense=(">=",),
        b=[1],
    )
    res = solve_weighted_lp(p, [1, 1, 1])
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.0, 0.0])


def test_warm_start_matches_cold():
    p = tribip.generate_knapsack(20, seed=4)
    solver = RelaxationSolver(p)
    rng = np.random.default_rng(0)
    for _ in range(25):
        w = rng.dirichlet([1, 1, 1])
        warm = solver.solve_weighted(w, warm=True)
        cold = solve_weighted_lp(p, w)
        assert warm.status == cold.status == "optimal"
        assert warm.value == pytest.approx(cold.value, abs=1e-7)


def test_warm_start_assignment_matches_cold():
    p = tribip.generate_assignment(4, seed=11)
    solver = RelaxationSolver(p)
    rng = np.random.default_rng(1)
    for _ in range(15):
        w = rng.dirichlet([1, 1, 1])
        warm = solver.solve_weighted(w, warm=True)
        cold = solve_weighted_lp(p, w)
        assert warm.value == pytest.approx(cold.value, abs=1e-7)
        assert is_integral(warm.x, tol=1e-6)


def test_basic_solution_is_vertex():
    # a knapsack LP vertex has at most one fractional component
    rng = np.random.default_rng(3)
    for seed in range(5):
        p = tribip.generate_knapsack(15, seed=seed)
        w = rng.dirichlet([1, 1, 1])
        res = solve_weighted_lp(p, w)
        frac = np.sum(np.abs(res.x - np.round(res.x)) > 1e-7)
        assert frac <= 1


def test_weight_validation():
    p = tribip.generate_knapsack(4, seed=0)
    with pytest.raises(tribip.ValidationError):
        solve_weighted_lp(p, [0, 0, 0])
    with pytest.raises(tribip.ValidationError):
        solve_weighted_lp(p, [1, -1, 1])
