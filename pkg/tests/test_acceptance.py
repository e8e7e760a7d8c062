"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Tolerances are pinned here, not configurable: identity suites at
1e-10, signed-quadrature calibration at 1e-6, audit limits at 2%, solver
benchmarks at their stated budgets, and the stability witness at its window
ratios.  Runtime budgets are asserted where stated.
"""

import time

import numpy as np
from numpy.testing import assert_allclose
from scipy.special import rgamma

from fracstab import (
    FractionalOrder,
    InitialData,
    MLParams,
    PolynomialMap,
    SystemSpec,
    audit,
    build_constants,
    classify,
    contraction_distances,
    eval_asymptotic,
    eval_series,
    evaluate,
    iterate_perron,
    kernel_integral_signed,
    kernel_integral_sup,
    ml_values,
    sector_test,
    solve_pc,
    solve_voc,
)
from fracstab.matrix_ml import decompose, gamma_scale
from fracstab.stability import ASYMPTOTICALLY_STABLE, INCONCLUSIVE

E_HALF_AT_1 = 0.39662936531808808449  # E_{1.5,1}(-1), mpmath 60-digit series


def _report(n, text):
    print(f"\nACCEPTANCE {n} PASS: {text}")


def test_criterion_1_ml_identity_suite():
    start = time.time()
    rng = np.random.default_rng(20240801)
    radius = 5.0 * np.sqrt(rng.uniform(0.0, 1.0, 200))
    angle = rng.uniform(0.0, 2.0 * np.pi, 200)
    z = radius * np.exp(1j * angle)
    p11 = MLParams(1.0, 1.0)
    worst_exp = max(abs(evaluate(p11, zi, 1e-12).value - np.exp(zi)) for zi in z)
    assert worst_exp <= 1e-10

    p21 = MLParams(2.0, 1.0)
    worst_cos = max(
        abs(evaluate(p21, -(t**2), 1e-12).value - np.cos(t))
        for t in np.linspace(0.0, 10.0, 101)
    )
    assert worst_cos <= 1e-10

    for alpha, beta in ((1.5, 1.0), (1.1, 2.0), (1.9, 0.5), (1.5, 1.5)):
        r = evaluate(MLParams(alpha, beta), 0.0)
        assert_allclose(r.value, rgamma(beta), rtol=2e-16, atol=0.0)

    elapsed = time.time() - start
    assert elapsed < 5.0
    _report(1, f"exp residual {worst_exp:.2e}, cos residual {worst_cos:.2e}, "
               f"E(0)=1/Gamma(beta) exact, {elapsed:.2f}s < 5s")


def test_criterion_2_regime_overlap():
    total = within = within10 = 0
    for alpha in (1.1, 1.5, 1.9):
        for beta in (1.0, alpha, 2.0):
            p = MLParams(alpha, beta)
            for r in np.linspace(6.0, 24.0, 25):
                s = eval_series(p, -r, 1e-12)
                a = eval_asymptotic(p, -r, 5)
                diff = abs(s.value - a.value)
                budget = s.abs_error_estimate + a.abs_error_estimate
                total += 1
                within += diff <= budget
                within10 += diff <= 10.0 * budget
    assert within / total >= 0.95
    assert within10 == total
    _report(2, f"{within}/{total} within combined estimates "
               f"({100.0 * within / total:.1f}% >= 95%), all within 10x")


def test_criterion_3_kernel_decay_suite():
    # (i) strict decay along doubling times
    p1, p2 = MLParams(1.5, 1.0), MLParams(1.5, 2.0)
    for lam in (-1.0, np.exp(1j * 0.8 * np.pi)):
        e1 = [abs(evaluate(p1, lam * t**1.5).value) for t in (10, 20, 40, 80, 160)]
        te2 = [t * abs(evaluate(p2, lam * t**1.5).value) for t in (10, 20, 40, 80, 160)]
        assert all(b < a for a, b in zip(e1, e1[1:])), lam
        assert all(b < a for a, b in zip(te2, te2[1:])), lam

    # (ii) scaled kernel product finite and grid-stable on [5, 1e4]
    for lam in (-1.0, np.exp(1j * 0.8 * np.pi)):
        sups = []
        for pts in (1600, 3200):
            t = np.logspace(np.log10(5.0), 4.0, pts)
            v, _, _ = ml_values(1.5, 1.5, lam * t**1.5, r_switch=76.0, num_terms=14)
            sups.append(float((t**0.5 * np.abs(v) * t**2.5).max()))
        assert np.isfinite(sups).all()
        assert abs(sups[1] - sups[0]) / sups[0] <= 0.05, lam

    # (iii) signed-quadrature calibration and C reproducibility
    order = FractionalOrder(1.5)
    signed = kernel_integral_signed(order, -1.0, t_max=200.0)
    assert abs(signed - 1.0) <= 1e-6
    c200 = kernel_integral_sup(order, -1.0, t_max=200.0)
    c400 = kernel_integral_sup(order, -1.0, t_max=400.0)
    assert abs(c200 - c400) / c200 < 5e-4
    _report(3, f"decay strict, sup stable, signed integral = {signed.real:.9f} "
               f"(1 +/- 1e-6), C = {c200:.4f} vs {c400:.4f}")


def test_criterion_4_flaw_audit_reproduction():
    start = time.time()
    rep = audit(1.5, 1.0, t_max=1e3)
    limits = {1.0: 1.0 / (2 * np.sqrt(np.pi)),
              1.5: 3.0 / (4 * np.sqrt(np.pi)),
              2.0: 1.0 / np.sqrt(np.pi)}
    endpoints = {}
    for case in rep.beta_cases:
        prod_end = case.abs_ml[-1] * case.times[-1] ** case.p
        limit = limits[case.beta]
        assert abs(prod_end - limit) / limit <= 0.02, case.beta
        endpoints[case.beta] = prod_end
        mask = case.times >= 20.0
        assert (case.abs_ml[mask] > case.comparator[mask]).all(), case.beta

    case1 = rep.beta_cases[0]
    i20 = int(np.argmin(np.abs(case1.times - 20.0)))
    margin = case1.abs_ml[i20] / case1.comparator[i20]
    assert margin > 1e5
    elapsed = time.time() - start
    assert elapsed < 30.0
    _report(4, "products at t=1e3: "
            + ", ".join(f"beta={b:g}: {v:.4f}" for b, v in endpoints.items())
            + f"; margin at t=20 is {margin:.2e} > 1e5; {elapsed:.1f}s < 30s")


def test_criterion_5_solver_cross_validation():
    spec = SystemSpec(np.array([[-1.0]]), PolynomialMap.zero(1), FractionalOrder(1.5))
    init = InitialData([1.0], [0.0])
    traj = solve_pc(spec, init, 2**-10, 1.0)
    err = abs(traj.states[-1, 0] - E_HALF_AT_1)
    assert err <= 5e-4

    errs = []
    hs = [2**-k for k in range(6, 12)]
    for h in hs:
        errs.append(abs(solve_pc(spec, init, h, 1.0).states[-1, 0] - E_HALF_AT_1))
    order = float((np.diff(np.log(errs)) / np.diff(np.log(hs))).mean())
    assert order >= 1.5

    f = PolynomialMap(1, [[(1.0, (2,))]])
    spec_n = SystemSpec(np.array([[-1.0]]), f, FractionalOrder(1.5))
    init_n = InitialData([0.1], [0.0])
    tp = solve_pc(spec_n, init_n, 2**-8, 20.0)
    tv = solve_voc(spec_n, init_n, 2**-8, 20.0)
    dist = float(np.abs(tp.states - tv.states).max())
    assert dist <= 1e-3
    _report(5, f"oracle error {err:.2e} <= 5e-4, observed order {order:.2f} >= 1.5, "
               f"pc-voc distance {dist:.2e} <= 1e-3")


def _witness_suite():
    return [
        ("scalar", np.array([[-1.0]]), PolynomialMap(1, [[(1.0, (2,))]])),
        ("coupled", np.array([[0.0, 1.0], [-2.0, -3.0]]),
         PolynomialMap(2, [[(1.0, (0, 2))], [(1.0, (1, 1))]])),
        ("jordan", np.array([[-1.0, 1.0], [0.0, -1.0]]),
         PolynomialMap(2, [[(1.0, (0, 2))], []])),
    ]


def test_criterion_6_stability_witness_suite():
    start = time.time()
    T = 100.0
    h = 1.0 / 16.0
    lines = []
    for alpha in (1.25, 1.5, 1.75):
        for name, A, f in _witness_suite():
            spec = SystemSpec(A, f, FractionalOrder(alpha))
            assert classify(A, spec.order).overall == ASYMPTOTICALLY_STABLE
            pc = build_constants(spec)
            assert pc.q < 1.0 and pc.delta > 0.0

            Dg = gamma_scale(decompose(A), pc.gamma)
            d = spec.dim
            for direction in (np.ones(d), np.eye(d)[0]):
                y0 = 0.95 * pc.delta * direction / np.abs(direction).max()
                x0 = (Dg.transform @ y0).real
                x1 = np.zeros(d)
                traj = solve_pc(spec, InitialData(x0, x1), h, T)
                y = np.abs(traj.states @ Dg.transform_inv.T)
                assert y.max() <= pc.epsilon * (1.0 + 1e-6), (name, alpha)

                norms = np.abs(traj.states).max(axis=1)
                early = norms[traj.times <= T / 8.0].max()
                late = norms[traj.times >= T / 2.0].max()
                assert late <= 0.2 * early, (name, alpha, late, early)
                # trajectory norm at T below its value at T/4
                i_t = np.argmin(np.abs(traj.times - T))
                i_q = np.argmin(np.abs(traj.times - T / 4.0))
                assert norms[i_t] < norms[i_q]
            lines.append(f"{name}@{alpha}: q={pc.q:.3f} delta={pc.delta:.2e}")
    elapsed = time.time() - start
    assert elapsed < 180.0
    _report(6, "; ".join(lines) + f"; all in-ball and decaying; {elapsed:.0f}s < 180s")


def test_criterion_7_contraction_witness():
    f = PolynomialMap(1, [[(1.0, (2,))]])
    spec = SystemSpec(np.array([[-1.0]]), f, FractionalOrder(1.5))
    pc = build_constants(spec)
    init = InitialData([0.9 * pc.delta], [0.0])
    dists = contraction_distances(spec, init, pc, 2**-6, 20.0, 12)
    live = (dists[:-1] > 1e-15) & (dists[1:] > 0)
    ratios = dists[1:][live] / dists[:-1][live]
    assert (ratios <= pc.q + 0.05).all()

    traj = iterate_perron(spec, init, pc, 2**-6, 20.0, 25)
    ref = solve_pc(spec, init, 2**-6, 20.0)
    dist = float(np.abs(traj.states - ref.states).max())
    assert dist <= 5e-3
    _report(7, f"max ratio {ratios.max():.4f} <= q + 0.05 = {pc.q + 0.05:.4f}, "
               f"fixed point vs pc solver {dist:.2e} <= 5e-3")


def test_criterion_8_boundary_honesty():
    # eigenvalues -1 +/- i constructed exactly: |arg| = 3 pi/4 = alpha pi/2
    rep = classify([[0.0, 1.0], [-2.0, -2.0]], FractionalOrder(1.5))
    assert rep.overall == INCONCLUSIVE
    assert rep.overall != ASYMPTOTICALLY_STABLE
    for lam in (-1 + 1j, -1 - 1j):
        margin, verdict = sector_test(lam, FractionalOrder(1.5))
        assert verdict == "boundary"
        assert abs(margin) <= 1e-9
    _report(8, "exact-boundary spectrum classified inconclusive, never stable")
