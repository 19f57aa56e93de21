"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary. Seeds are fixed: configurations use seeds 0-4, Monte Carlo
streams use 1000 + i.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py``.
"""
import sys
import time

import numpy as np
import pytest
from scipy import integrate

from stolarsky.discrepancy import (
    Cap,
    Hemisphere,
    Slice,
    Wedge,
    cap_discrepancy_sq,
    hemisphere_discrepancy_sq,
    mc_discrepancy_sq,
    slice_discrepancy_sq,
    wedge_discrepancy_sq,
)
from stolarsky.energy import continuous_energy_sigma, discrete_energy, mean_euclidean_distance, measure_energy_extremes, vd
from stolarsky.gegenbauer import (
    expand_kernel,
    f_discrepancy_sq,
    funk_hecke_residual,
    generalized_stolarsky_gap,
    is_positive_definite,
    sqrt_kernel,
)
from stolarsky.kernels import EuclideanPow, GeodesicPow
from stolarsky.optimize import (
    OptimizerConfig,
    add_antipodal_pair,
    geodesic_distance_sum,
    maximize_distance_sum,
    symmetry_defect,
    verify_hemisphere_balance,
)
from stolarsky.sphere import (
    WeightedMeasure,
    cap_intersection_measure,
    cap_measure,
    constant_Cd,
    fibonacci_points,
    sample_uniform,
)

from conftest import north, symmetric_set

SAMPLES = 200_000
CONFIG_SEEDS = range(5)


def mc_seed(i):
    return 1000 + i


def signed_measure(d, n, seed):
    rng = np.random.default_rng(seed)
    X = sample_uniform(d, n, seed).points
    w = rng.standard_normal(n)
    w[0] += 1.0 - w.sum()
    return WeightedMeasure(X, w)


def hemisphere_kernel(t):
    return 0.5 - np.arccos(np.clip(t, -1, 1)) / (2 * np.pi)


def test_criterion_01_cap_identity(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for i in CONFIG_SEEDS:
        Z = sample_uniform(2, 20, i)
        closed = cap_discrepancy_sq(Z)
        est = mc_discrepancy_sq(Z, Cap, SAMPLES, mc_seed(i))
        worst = max(worst, est.zscore(closed))
        ok &= est.agrees_with(closed, 3.0)
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    record_criterion(1, ok, f"cap identity, 5 configs N=20 d=2: max z={worst:.2f} (<=3), {elapsed:.1f}s (<30s)")
    assert ok


def test_criterion_02_hemisphere_identity(record_criterion):
    sym = symmetric_set(4, 2, 0)
    closed = hemisphere_discrepancy_sq(sym)
    est = mc_discrepancy_sq(sym, Hemisphere, SAMPLES, mc_seed(0))
    ok_sym = abs(closed) <= 1e-12 and abs(est.value) <= 3 * est.std_error
    delta = hemisphere_discrepancy_sq(north(2)[None])
    ok_delta = delta == 0.25
    mu = signed_measure(2, 8, 5)
    closed_mu = hemisphere_discrepancy_sq(mu)
    est_mu = mc_discrepancy_sq(mu, Hemisphere, SAMPLES, mc_seed(5))
    ok_signed = est_mu.agrees_with(closed_mu, 3.0)
    ok = ok_sym and ok_delta and ok_signed
    record_criterion(2, ok, f"hemisphere: symmetric closed={closed:.1e} mc={est.value:.1e}; "
                            f"delta_p={delta}; signed z={est_mu.zscore(closed_mu):.2f}")
    assert ok


def test_criterion_03_wedge_slice(record_criterion):
    p = north(2)
    pair = np.stack([p, -p])
    w_closed, s_closed = wedge_discrepancy_sq(pair), slice_discrepancy_sq(pair)
    w_est = mc_discrepancy_sq(pair, Wedge, SAMPLES, mc_seed(0))
    s_est = mc_discrepancy_sq(pair, Slice, SAMPLES, mc_seed(1))
    ok = (abs(w_closed - 2 / np.pi**2) <= 1e-12 and abs(s_closed - 1 / (2 * np.pi**2)) <= 1e-12
          and w_est.agrees_with(2 / np.pi**2) and s_est.agrees_with(1 / (2 * np.pi**2)))
    record_criterion(3, ok, f"wedge/slice {{p,-p}}: closed errors {abs(w_closed - 2 / np.pi**2):.1e}, "
                            f"{abs(s_closed - 1 / (2 * np.pi**2)):.1e}; "
                            f"z={w_est.zscore(2 / np.pi**2):.2f}, {s_est.zscore(1 / (2 * np.pi**2)):.2f}")
    assert ok


def test_criterion_04_cap_intersection_oracles(record_criterion):
    dims = (1, 2, 3, 5)
    pair_err = 0.0
    for k in range(10):
        d = dims[k % len(dims)]
        x, y = sample_uniform(d, 2, 100 + k).points
        alpha = np.arccos(np.clip(x @ y, -1, 1))
        h = np.cos(alpha / 2)
        val, _ = integrate.quad(lambda t: cap_intersection_measure(x, y, t), -1, 1,
                                points=[-h, 0.0, h], epsabs=1e-10, limit=200)
        pair_err = max(pair_err, abs(val - (1 - constant_Cd(d) * np.linalg.norm(x - y))))
    sq_err = 0.0
    for d in dims:
        val, _ = integrate.quad(lambda t: cap_measure(t, d) ** 2, -1, 1, epsabs=1e-13, limit=200)
        sq_err = max(sq_err, abs(val - (1 - constant_Cd(d) * mean_euclidean_distance(d))))
    ok = pair_err <= 1e-6 and sq_err <= 1e-6
    record_criterion(4, ok, f"intersection integral, 10 pairs: max err {pair_err:.1e}; "
                            f"squared-cap identity d in {dims}: max err {sq_err:.1e} (<=1e-6)")
    assert ok


def test_criterion_05_constants(record_criterion):
    errs = {
        "C_1": abs(constant_Cd(1) - 1 / np.pi),
        "C_2": abs(constant_Cd(2) - 0.25),
        "V_1": abs(vd(1) - 1 / 3),
        "V_2": abs(vd(2) - (0.5 - 2 / np.pi**2)),
    }
    rel200 = abs(constant_Cd(200) * np.sqrt(400 * np.pi) - 1)
    v400 = abs(vd(400) - 0.25)
    quad = max(abs(continuous_energy_sigma(GeodesicPow(2.0), d, "quad") - vd(d)) for d in range(1, 7))
    ok = max(errs.values()) <= 1e-12 and rel200 <= 0.02 and v400 <= 1e-3 and quad <= 1e-8
    record_criterion(5, ok, f"constants: exact errs <= {max(errs.values()):.1e}; C_200 rel {rel200:.1e}; "
                            f"|V_400-1/4|={v400:.1e}; quadrature vs V_d {quad:.1e}")
    assert ok


def test_criterion_06_maximizers(record_criterion):
    cfg = OptimizerConfig(max_steps=3000, restarts=4, seed=0)
    two = [maximize_distance_sum(2, d, GeodesicPow(1.0), cfg).value for d in (1, 2, 3)]
    three = maximize_distance_sum(3, 1, GeodesicPow(1.0), cfg).value
    ok_values = max(abs(v - 0.5) for v in two) <= 1e-6 and abs(three - 4 / 9) <= 1e-6
    defects = [symmetry_defect(maximize_distance_sum(n, 2, GeodesicPow(1.0), cfg).points) for n in (4, 6, 8)]
    ok_sym = max(defects) < 1e-3
    aug = 0.0
    for i in CONFIG_SEEDS:
        Z = sample_uniform(2, 7 + i, i)
        p = sample_uniform(2, 1, 50 + i).points[0]
        aug = max(aug, abs(geodesic_distance_sum(add_antipodal_pair(Z, p))
                           - geodesic_distance_sum(Z) - 2 * len(Z) - 2))
    ok_aug = aug <= 1e-12
    ang5 = 2 * np.pi * np.arange(5) / 5
    tri = np.deg2rad([0, 100, 220])
    constructed = [
        symmetric_set(4, 2, 1),
        np.column_stack([np.cos(ang5), np.sin(ang5), np.zeros(5)]),
        np.column_stack([np.cos(tri), np.sin(tri)]),
        np.stack([north(2), -north(2), np.array([0.0, 0.6, 0.8])]),
    ]
    imbalance = max(verify_hemisphere_balance(Z, 10_000, 7) for Z in constructed)
    ok_bal = imbalance <= 1
    ok = ok_values and ok_sym and ok_aug and ok_bal
    record_criterion(6, ok, f"maximizers: n=2 max err {max(abs(v - 0.5) for v in two):.1e}, "
                            f"n=3 err {abs(three - 4 / 9):.1e}; symmetry defects {max(defects):.1e}; "
                            f"augmentation err {aug:.1e}; max imbalance {imbalance}")
    assert ok


def test_criterion_07_phase_diagram(record_criterion):
    s_half, pair_half = measure_energy_extremes(0.5, 2)
    s_one, pair_one = measure_energy_extremes(1.0, 2)
    s_two, pair_two = measure_energy_extremes(2.0, 2)
    ok = (s_half > 0.5 == pair_half
          and abs(s_one - 0.5) <= 1e-8 and abs(pair_one - 0.5) <= 1e-8
          and abs(s_two - vd(2)) <= 1e-12 and s_two < 0.5 == pair_two)
    record_criterion(7, ok, f"geodesic phase diagram on S^2: I_sigma(0.5)={s_half:.6f} > 1/2; "
                            f"I_sigma(1)={s_one:.12f}; I_sigma(2)={s_two:.6f} < 1/2")
    assert ok


def test_criterion_08_generalized_identity(record_criterion):
    kernels = {"t^2": lambda t: t * t, "(1+t)/2": lambda t: (1 + t) / 2, "hemisphere": hemisphere_kernel}
    worst_z, worst_gap = 0.0, np.inf
    ok = True
    for name, F in kernels.items():
        Fexp = expand_kernel(F, 0.5, 64)
        fexp = sqrt_kernel(Fexp)
        for i in CONFIG_SEEDS:
            mu = signed_measure(2, 10, i) if i == 4 else sample_uniform(2, 10, i)
            gap = generalized_stolarsky_gap(mu, Fexp)
            est = f_discrepancy_sq(mu, fexp, SAMPLES, mc_seed(i))
            worst_z = max(worst_z, est.zscore(gap))
            worst_gap = min(worst_gap, gap)
            ok &= est.agrees_with(gap, 3.0) and gap >= -1e-10
    record_criterion(8, ok, f"generalized identity, 3 kernels x 5 measures: max z={worst_z:.2f}; "
                            f"min gap {worst_gap:.2e} (>= -1e-10)")
    assert ok


def test_criterion_09_pd_and_funk_hecke(record_criterion):
    verdicts = {
        "t": (lambda t: t, True),
        "-t": (lambda t: -t, False),
        "t^2": (lambda t: t * t, True),
        "1": (lambda t: np.ones_like(t), True),
        "(1+t)/2": (lambda t: (1 + t) / 2, True),
    }
    # coefficient oracle: closed-form multipliers on S^2
    oracle = {"t": [0, 1 / 3], "-t": [0, -1 / 3], "t^2": [1 / 3, 0, 2 / 15], "1": [1], "(1+t)/2": [0.5, 1 / 6]}
    ok_pd = True
    for name, (F, pd) in verdicts.items():
        exp = expand_kernel(F, 0.5, 16)
        want = np.zeros(17)
        want[: len(oracle[name])] = oracle[name]
        ok_pd &= np.allclose(exp.coeffs, want, atol=1e-10)
        ok_pd &= is_positive_definite(exp, 0.5).is_pd is pd and bool(min(want) >= 0) is pd
    fh = funk_hecke_residual(expand_kernel(lambda t: t, 0.5, 4), 1, 2, SAMPLES, mc_seed(0))
    ok_fh = abs(fh.coefficient - 1 / 3) <= 3 * fh.coefficient_se
    pd_kernels = [F for F, pd in verdicts.values() if pd] + [hemisphere_kernel]
    expansions = [expand_kernel(F, 0.5, 64) for F in pd_kernels]
    min_gap = np.inf
    for s in range(200):
        mu = signed_measure(2, 3 + s % 10, s) if s % 2 else sample_uniform(2, 1 + s % 15, s)
        for Fexp in expansions:
            min_gap = min(min_gap, generalized_stolarsky_gap(mu, Fexp))
    ok_min = min_gap >= -1e-10
    ok = ok_pd and ok_fh and ok_min
    record_criterion(9, ok, f"PD verdicts {'correct' if ok_pd else 'WRONG'}; Funk-Hecke coefficient "
                            f"{fh.coefficient:.5f} +/- {fh.coefficient_se:.1e} (1/3); "
                            f"min gap over 200 measures x {len(expansions)} kernels {min_gap:.1e}")
    assert ok


def test_criterion_10_scaling(record_criterion):
    start = time.perf_counter()
    ns = np.array([100, 200, 400, 800, 1600])
    D = np.sqrt([cap_discrepancy_sq(fibonacci_points(int(n))) for n in ns])
    slope = np.polyfit(np.log(ns), np.log(D), 1)[0]
    elapsed = time.perf_counter() - start
    ok = -0.85 <= slope <= -0.65 and elapsed < 120
    record_criterion(10, ok, f"Fibonacci cap discrepancy slope {slope:.4f} in [-0.85, -0.65]; {elapsed:.1f}s (<120s)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
