import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stolarsky.discrepancy import hemisphere_discrepancy_sq
from stolarsky.energy import discrete_energy
from stolarsky.kernels import EuclideanPow, GeodesicPow, WedgeSquare
from stolarsky.optimize import (
    OptimizerConfig,
    add_antipodal_pair,
    check_odd_maximizer_structure,
    circle_gap_criterion,
    geodesic_distance_sum,
    maximize_distance_sum,
    symmetry_defect,
    verify_hemisphere_balance,
)
from stolarsky.sphere import geodesic_distance, sample_uniform

from conftest import north, symmetric_set

FAST = OptimizerConfig(max_steps=3000, restarts=4, seed=0)


def circle(angles_deg):
    a = np.deg2rad(np.asarray(angles_deg, dtype=float))
    return np.column_stack([np.cos(a), np.sin(a)])


@pytest.mark.parametrize("d", [1, 2, 3])
def test_two_points_become_antipodal(d):
    res = maximize_distance_sum(2, d, GeodesicPow(1.0), FAST)
    assert res.value == pytest.approx(0.5, abs=1e-6)
    X = res.points.points
    assert geodesic_distance(X[0], -X[1]) < 1e-6


def test_three_points_on_circle():
    res = maximize_distance_sum(3, 1, GeodesicPow(1.0), FAST)
    assert res.value == pytest.approx(4 / 9, abs=1e-6)
    angles = np.arctan2(res.points.points[:, 1], res.points.points[:, 0])
    assert circle_gap_criterion(angles)


def test_four_points_euclidean_square():
    res = maximize_distance_sum(4, 1, EuclideanPow(1.0), FAST)
    assert res.value == pytest.approx((np.sqrt(2) + 1) / 2, abs=1e-6)


def test_even_maximizer_is_symmetric():
    res = maximize_distance_sum(8, 2, GeodesicPow(1.0), FAST)
    assert res.value == pytest.approx(0.5, abs=1e-6)
    assert symmetry_defect(res.points) < 1e-3
    assert hemisphere_discrepancy_sq(res.points) == pytest.approx(0.0, abs=1e-6)


def test_optimizer_is_deterministic_and_validated():
    a = maximize_distance_sum(5, 2, GeodesicPow(1.0), OptimizerConfig(max_steps=300, restarts=2, seed=3))
    b = maximize_distance_sum(5, 2, GeodesicPow(1.0), OptimizerConfig(max_steps=300, restarts=2, seed=3))
    assert np.array_equal(a.points.points, b.points.points) and a.value == b.value
    assert a.trace[0][1] <= a.value
    assert all(v1 <= v2 for (_, v1), (_, v2) in zip(a.trace, a.trace[1:]))
    with pytest.raises(TypeError):
        maximize_distance_sum(4, 2, WedgeSquare(), FAST)
    with pytest.raises(ValueError):
        maximize_distance_sum(1, 2, GeodesicPow(1.0), FAST)
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(step_size=-1.0)


def test_hemisphere_balance_examples():
    p = north(2)
    assert verify_hemisphere_balance(np.stack([p, -p]), 500, 1) == 0
    acute = circle([0, 100, 220])
    assert circle_gap_criterion(np.deg2rad([0, 100, 220]))
    assert verify_hemisphere_balance(acute, 2000, 2) <= 1
    rng = np.random.default_rng(0)
    cluster = p + 0.05 * rng.standard_normal((4, 3))
    cluster /= np.linalg.norm(cluster, axis=1, keepdims=True)
    assert verify_hemisphere_balance(cluster, 200, 3) >= 2
    with pytest.raises(ValueError):
        verify_hemisphere_balance(cluster, 0, 3)


def test_circle_gap_criterion():
    assert circle_gap_criterion(2 * np.pi * np.arange(5) / 5)
    assert not circle_gap_criterion(np.deg2rad([0, 10, 20]))
    # obtuse triangle fails, acute passes
    assert not circle_gap_criterion(np.deg2rad([0, 60, 120]))
    assert circle_gap_criterion(np.deg2rad([0, 120, 240]))


def test_symmetry_defect_examples():
    assert symmetry_defect(symmetric_set(5, 3, 1)) == pytest.approx(0.0, abs=1e-7)
    p, q = north(2), np.array([0.6, 0.0, 0.8])
    assert symmetry_defect(np.stack([p, q])) == pytest.approx(geodesic_distance(q, -p), abs=1e-12)
    # odd set: the leftover point is charged its distance to the nearest antipode
    Z = np.vstack([symmetric_set(2, 2, 4), q])
    expect = min(geodesic_distance(q, -z) for z in Z[:4])
    assert symmetry_defect(Z) == pytest.approx(expect, abs=1e-12)


def test_symmetry_defect_is_bottleneck_over_pairings():
    # brute force over all perfect matchings of 6 points
    from itertools import permutations

    Z = sample_uniform(2, 6, 17).points
    best = np.inf
    for perm in permutations(range(6)):
        pairs = [(perm[i], perm[i + 1]) for i in range(0, 6, 2)]
        best = min(best, max(geodesic_distance(Z[i], -Z[j]) for i, j in pairs))
    assert symmetry_defect(Z) == pytest.approx(best, abs=1e-12)


@given(st.integers(0, 10**6), st.integers(1, 10), st.integers(1, 3))
def test_antipodal_pair_augmentation_identity(seed, n, d):
    Z = sample_uniform(d, n, seed)
    p = sample_uniform(d, 1, seed + 1).points[0]
    lhs = geodesic_distance_sum(add_antipodal_pair(Z, p))
    assert lhs == pytest.approx(geodesic_distance_sum(Z) + 2 * n + 2, abs=1e-12 * (n + 2) ** 2)


def test_odd_maximizer_structure():
    p, q = north(2), np.array([0.0, 0.6, 0.8])
    rep = check_odd_maximizer_structure(np.stack([p, -p, q]), 500, 1)
    assert rep.value_gap == pytest.approx(0.0, abs=1e-12) and rep.balance_ok
    ang = 2 * np.pi * np.arange(5) / 5
    pent = np.column_stack([np.cos(ang), np.sin(ang), np.zeros(5)])
    rep = check_odd_maximizer_structure(pent, 1000, 2)
    assert rep.value_gap == pytest.approx(0.0, abs=1e-9)
    assert rep.balance_ok and rep.coplanarity_residual < 1e-12
    rep = check_odd_maximizer_structure(sample_uniform(2, 5, 9), 1000, 3)
    assert rep.value_gap > 0
    with pytest.raises(ValueError):
        check_odd_maximizer_structure(symmetric_set(2, 2, 0))


def test_odd_optimizer_output_structure():
    res = maximize_distance_sum(5, 2, GeodesicPow(1.0), FAST)
    rep = check_odd_maximizer_structure(res.points, 2000, 4, pair_tol=1e-3)
    assert rep.value_gap == pytest.approx(0.0, abs=1e-6)
    assert rep.balance_ok
    assert rep.coplanarity_residual < 1e-3
