"""The ten acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import numpy as np
import pytest

from osmodes.dispersion import (DispersionResult, blasius_dispersion_check, find_critical_A,
                                solve_eigenvalue, trace_branch)
from osmodes.oracle import assemble_pencil, nearest_eigenvalue
from osmodes.profile import ShearProfile
from osmodes.specialfn import gamma
from osmodes.verification import (check_airy_at_zero, check_airy_solvers, check_airy_wronskian,
                                  check_langer, check_rayleigh, contraction_ratio,
                                  fast_wall_ratio, rayleigh_boundary_residual)

BETAS = (0.18, 0.20, 0.22)
SWEEP_R = (1e6, 1e7, 1e8)


def record(log, n, ok, detail):
    log.append((n, bool(ok), detail))
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    expo = ShearProfile("exponential")
    return {b: trace_branch(expo, SWEEP_R, b, 1.0, workers=3) for b in BETAS}


@pytest.fixture(scope="module")
def oracle_root():
    expo = ShearProfile("exponential")
    return solve_eigenvalue(expo, 0.1, 1e5)


@pytest.fixture(scope="module")
def lower_branch():
    expo = ShearProfile("exponential")
    return {R: find_critical_A(expo, R, 0.25) for R in (1e7, 1e8)}


def test_criterion_01_airy_identities(acceptance_log):
    w, z = check_airy_wronskian(), check_airy_at_zero()
    record(acceptance_log, 1, w.passed and z.passed,
           f"Wronskian defect {w.value:.1e}, Ai(k,0) error {z.value:.1e} (limit 1e-10)")


def test_criterion_02_langer_identity(acceptance_log):
    c = check_langer()
    record(acceptance_log, 2, c.passed, f"worst relative defect {c.value:.1e} over 5 frames (limit 1e-9)")


def test_criterion_03_rayleigh(acceptance_log):
    res, wr = check_rayleigh()
    alphas = (0.04, 0.02, 0.01, 0.005)
    r = [rayleigh_boundary_residual(a) for a in alphas]
    ratios = [r[i] / r[i + 1] for i in range(len(r) - 1)]
    ok = res.passed and wr.passed and min(ratios) >= 2.0
    record(acceptance_log, 3, ok,
           f"residual {res.value:.1e}, Wronskian {wr.value:.1e}, "
           f"boundary remainder halving ratios {', '.join(f'{x:.2f}' for x in ratios)} (need >= 2)")


def test_criterion_04_airy_solvers(acceptance_log):
    checks = check_airy_solvers()
    r1, d1 = contraction_ratio(1e6)
    r2, d2 = contraction_ratio(8e6)
    factor = r1 / r2
    ok = all(c.passed for c in checks) and abs(factor - 2.0) <= 0.4
    record(acceptance_log, 4, ok,
           f"recovery {max(c.value for c in checks):.1e} (limit 1e-6), contraction "
           f"{r1:.3e} -> {r2:.3e}, factor {factor:.3f} (|delta| ratio {abs(d1) / abs(d2):.3f}; 2.0 +- 0.4)")


def test_criterion_05_mode_residuals(acceptance_log, sweep, oracle_root):
    results = [oracle_root] + [r for row in sweep.values() for r in row if isinstance(r, DispersionResult)]
    worst = max(r.max_residual for r in results)
    record(acceptance_log, 5, worst <= 1e-7,
           f"worst Orr residual {worst:.1e} over all iterates of {len(results)} roots (limit 1e-7)")


def test_criterion_06_fast_ratio(acceptance_log):
    blas = ShearProfile("blasius")
    errs = []
    for n in (10, 20, 40):
        r, fr = fast_wall_ratio(blas, 0.01, 1e9, n)
        y = abs(fr.z_c / fr.delta)
        pred = -np.exp(1j * np.pi / 4) * abs(fr.delta) * y ** -0.5
        errs.append(abs(r / pred - 1))
    slopes = np.diff(np.log(errs)) / np.log(2)
    r0, fr0 = fast_wall_ratio(blas, 0.01, 1e9, 0)
    pred0 = 3 ** (1 / 3) * gamma(4 / 3) * abs(fr0.delta) * np.exp(5j * np.pi / 6)
    err0 = abs(r0 / pred0 - 1)
    large_ok = all(e < 1 for e in errs) and np.all(np.abs(slopes + 1.5) <= 0.25)
    record(acceptance_log, 6, large_ok and err0 <= 0.01,
           f"large z_c/delta errors {', '.join(f'{e:.2e}' for e in errs)}, slopes "
           f"{', '.join(f'{s:.2f}' for s in slopes)} (target -1.5); z_c = 0 mismatch {err0:.1%} (limit 1%)")


def test_criterion_07_instability_zone(acceptance_log, sweep):
    lines, ok = [], True
    for b in BETAS:
        row = sweep[b]
        conv = [r for r in row if isinstance(r, DispersionResult)]
        g = np.array([r.growth_product for r in conv])
        pos = all(r.c.imag > 0 for r in conv)
        width = g.max() / g.min() if len(g) and g.min() > 0 else np.inf
        ok &= pos and width <= 3 and len(conv) == len(row)
        lines.append(f"beta={b}: {'/'.join(f'{x:.3f}' for x in g)} width x{width:.2f}")
    record(acceptance_log, 7, ok, "; ".join(lines) + " (limit x3)")


def test_criterion_08_lower_branch(acceptance_log, lower_branch):
    expo = ShearProfile("exponential")
    lo, hi = lower_branch[1e7], lower_branch[1e8]
    width = (lo.bracket[1] - lo.bracket[0]) / lo.A_c
    drift = abs(hi.A_c - lo.A_c) / lo.A_c
    prods = []
    for R, cr in lower_branch.items():
        A = 1.5 * cr.A_c
        res = solve_eigenvalue(expo, A * R ** -0.25, R)
        prods.append(res.c.imag * A * R ** 0.25)
    prod_ok = all(1 / 3 <= p <= 3 for p in prods)
    ok = width <= 1e-3 and drift < 0.05 and prod_ok
    record(acceptance_log, 8, ok,
           f"A_c = {lo.A_c:.5f} (R=1e7, bracket {width:.1e}), {hi.A_c:.5f} (R=1e8), drift {drift:.2%} "
           f"(limit 5%); Im c A R^1/4 at 1.5 A_c: {', '.join(f'{p:.3f}' for p in prods)} (within x3 of 1)")


def test_criterion_09_blasius_contrast(acceptance_log):
    out = blasius_dispersion_check()
    rr = out["ratio_of_ratios"]
    ratios = ", ".join(f"{row['ratio']:.4f}" for row in out["rows"])
    record(acceptance_log, 9, abs(rr - 4.0) <= 1.5,
           f"Blasius/exponential remainder ratios {ratios}, "
           f"ratio of ratios {rr:.3f} (4 +- 1.5)")


def test_criterion_10_oracle(acceptance_log, oracle_root):
    expo = ShearProfile("exponential")
    c = oracle_root.c
    cs = []
    for N in (400, 600):
        pen = assemble_pencil(expo, 0.1, 1e5, N)
        cs.append(nearest_eigenvalue(pen, c)[0])
    rel = abs(cs[0] - c) / abs(c)
    refine = abs(cs[1] - cs[0])
    ok = rel <= 1e-3 and cs[0].imag > 0 and refine < 1e-6
    record(acceptance_log, 10, ok,
           f"constructed {c:.10f}, collocation {cs[0]:.10f}, relative difference {rel:.1e} (limit 1e-3), "
           f"N 400 -> 600 change {refine:.1e} (limit 1e-6)")
