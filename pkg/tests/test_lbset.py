import itertools

import numpy as np
import pytest

import tribip
from tribip import InfeasibleProblemError, compute_lb_set
from tribip.lp import is_integral


def test_symmetric_three_items():
    # unit weights, W=1: the only LP vertices are the origin and the three
    # single-item picks, so the LB set is exactly the three profit points
    p = tribip.knapsack_problem([[10, 1, 1], [1, 10, 1], [1, 1, 10]], [1, 1, 1], 1)
    lb = compute_lb_set(p)
    assert [pt.y for pt in lb.points] == [
        (-10.0, -1.0, -1.0), (-1.0, -10.0, -1.0), (-1.0, -1.0, -10.0)]


def test_dominating_item_single_point():
    # item 1 beats item 2 in every objective and W admits one item
    p = tribip.knapsack_problem([[10, 1], [10, 1], [10, 1]], [1, 1], 1)
    lb = compute_lb_set(p)
    assert [pt.y for pt in lb.points] == [(-10.0, -10.0, -10.0)]


def test_zero_capacity():
    p = tribip.knapsack_problem([[10, 1], [10, 1], [10, 1]], [1, 1], 0)
    lb = compute_lb_set(p)
    assert [pt.y for pt in lb.points] == [(0.0, 0.0, 0.0)]


def test_infeasible_relaxation_raises():
    p = tribip.general_problem(
        objectives=[[1, 0], [0, 1], [1, 1]],
        senses=("min", "min", "min"),
        a=[[1, 1]],
        row_sense=(">=",),
        b=[3],
    )
    with pytest.raises(InfeasibleProblemError):
        compute_lb_set(p)


def test_deterministic():
    p = tribip.generate_knapsack(12, seed=3)
    a = compute_lb_set(p)
    b = compute_lb_set(p)
    assert [pt.y for pt in a.points] == [pt.y for pt in b.points]
    assert [pt.w for pt in a.points] == [pt.w for pt in b.points]
    assert a.lp_count == b.lp_count


def test_points_pairwise_nondominated_and_distinct():
    for seed in range(3):
        p = tribip.generate_knapsack(10, seed=seed)
        lb = compute_lb_set(p)
        ys = [np.array(pt.y) for pt in lb.points]
        for i, a in enumerate(ys):
            for j, b in enumerate(ys):
                if i == j:
                    continue
                assert np.max(np.abs(a - b)) > 1e-6
                assert not (np.all(a <= b + 1e-6) and np.any(a < b - 1e-6))


def test_each_point_optimal_for_its_weight():
    p = tribip.generate_knapsack(10, seed=5)
    lb = compute_lb_set(p)
    for pt in lb.points:
        res = tribip.solve_weighted_lp(p, pt.w)
        w = np.array(pt.w)
        assert float(w @ pt.y) == pytest.approx(res.value, abs=1e-6)


def test_weighted_value_coverage():
    # for any sampled weight, the best LB point matches the LP optimum:
    # the enumeration found every extreme supported point
    rng = np.random.default_rng(0)
    for seed in range(4):
        p = tribip.generate_knapsack(9, seed=seed)
        lb = compute_lb_set(p)
        ys = np.array([pt.y for pt in lb.points])
        for _ in range(40):
            w = rng.dirichlet([1, 1, 1])
            res = tribip.solve_weighted_lp(p, w)
            best = float(np.min(ys @ w))
            assert best == pytest.approx(res.value, abs=1e-6 * max(1, abs(best)))


def test_assignment_points_integral():
    for tasks in (3, 4, 5):
        p = tribip.generate_assignment(tasks, seed=tasks)
        lb = compute_lb_set(p)
        for pt in lb.points:
            assert is_integral(pt.x, tol=1e-6)


def test_lb_values_bound_integer_front():
    # every LB point lies weakly below the exact front in its weight
    p = tribip.generate_knapsack(8, seed=2)
    lb = compute_lb_set(p)
    ref = tribip.exact_front(p)
    for pt in lb.points:
        w = np.array(pt.w)
        lp_val = float(w @ pt.y)
        int_val = float(np.min(ref.points @ w))
        assert lp_val <= int_val + 1e-6


def test_probes_collected():
    p = tribip.generate_knapsack(6, seed=1)
    lb = compute_lb_set(p, collect_probes=True)
    assert lb.probes is not None
    assert len(lb.probes) == lb.lp_count
    assert all(len(w) == 3 for w, _ in lb.probes)


def test_lp_count_positive():
    p = tribip.generate_knapsack(6, seed=0)
    lb = compute_lb_set(p)
    assert lb.lp_count >= 3                     # at least the seed LPs
