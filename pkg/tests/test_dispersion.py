import json

import numpy as np
import pytest

from osmodes.dispersion import (DispersionResult, Evaluation, evaluate, growth_scaling,
                                initial_guess, muller, solve_eigenvalue, surrogate_value,
                                trace_branch)
from osmodes.errors import BasinEscape, NoConvergence
from osmodes.langer import CriticalLayerFrame
from osmodes.oracle import oracle_eigenvalue


def _poly(roots):
    def f(x):
        v = np.prod([x - r for r in roots])
        return Evaluation(x, v, 1.0, v)
    return f


def test_muller_polynomial():
    roots = [0.3 + 0.1j, -1.0, 2.0 - 1j]
    v, k = muller(_poly(roots), 0.2, 0.25, 0.2 + 0.05j, lambda e: abs(e.F) < 1e-14)
    assert abs(v.c - roots[0]) < 1e-12


def test_muller_guard():
    def guard(c):
        if abs(c) > 0.5:
            raise BasinEscape("left")
    with pytest.raises(BasinEscape):
        muller(_poly([3.0]), 0.1, 0.2, 0.1j, lambda e: abs(e.F) < 1e-14, guard=guard)


def test_muller_iteration_cap():
    with pytest.raises(NoConvergence):
        muller(_poly([0.3 + 0.1j]), 5.0, 6.0, 5 + 1j, lambda e: False, maxiter=3)


def test_initial_guess(expo):
    a = 0.01
    c0 = initial_guess(a, 1e6, expo)
    assert c0.real == pytest.approx(1 - np.exp(-a))
    assert c0.imag == pytest.approx((a * 1e6 * np.exp(-a)) ** (-1 / 3))


def test_initial_guess_tends_to_wall_speed(expo):
    assert abs(initial_guess(1e-6, 1e30, expo) - expo.U0) < 1e-5


def test_surrogate_root(expo):
    R = 1e6
    alpha = R ** -0.2
    res = solve_eigenvalue(expo, alpha, R, mode="surrogate")
    fr = CriticalLayerFrame(expo, alpha, R, res.c)
    assert abs(surrogate_value(fr).F) < 1e-10
    assert res.scale == 1.0 and res.mode == "surrogate"


def test_unknown_mode(expo):
    with pytest.raises(ValueError):
        evaluate(expo, 0.1, 1e5, 0.1 + 0.01j, mode="other")


def test_nonfinite_trial(expo):
    with pytest.raises(NoConvergence):
        evaluate(expo, 0.1, 1e5, complex(np.nan, 0))


@pytest.fixture(scope="module")
def root(expo):
    return solve_eigenvalue(expo, 0.1, 1e5)


def test_full_root_against_collocation(expo, root):
    c, _, _ = oracle_eigenvalue(expo, 0.1, 1e5, root.c, N=300)
    assert abs(c - root.c) < 1e-8
    assert root.F_abs < 1e-10 * root.scale
    assert root.max_residual < 1e-7
    assert 1 <= root.trace_condition < 1e6


def test_result_serialises(root):
    d = json.loads(json.dumps(root.to_dict()))
    assert d["c"] == [root.c.real, root.c.imag]
    assert d["growth_product"] == pytest.approx(root.alpha * root.c.imag * np.sqrt(root.R))


def test_growth_scaling_marks_failures(root):
    out = growth_scaling([root, NoConvergence("x")])
    assert out[0] == root.growth_product and np.isnan(out[1])


def test_trace_branch_order_independent_of_workers(expo):
    Rs = [1e6, 1e7, 1e5]
    one = trace_branch(expo, Rs, 0.2, 1.0, mode="surrogate", workers=1)
    two = trace_branch(expo, Rs, 0.2, 1.0, mode="surrogate", workers=2)
    assert [r.R for r in one] == Rs
    assert [r.c for r in one] == [r.c for r in two]


def test_result_is_frozen(root):
    with pytest.raises(Exception):
        root.c = 0
    assert isinstance(root, DispersionResult)
