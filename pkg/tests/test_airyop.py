import numpy as np
import pytest

from osmodes.airyop import AiryKernel
from osmodes.errors import ConfigError
from osmodes.langer import CriticalLayerFrame, MasterGrid
from osmodes.rayleigh import sup
from osmodes.verification import check_airy_solvers, contraction_ratio, gaussian_derivatives


@pytest.fixture(scope="module")
def kernel(expo):
    fr = CriticalLayerFrame(expo, 0.05, 1e6, complex(expo(0.3)) + 0.002j)
    return AiryKernel(MasterGrid(fr))


def test_manufactured_recovery():
    for c in check_airy_solvers():
        assert c.passed, c


def test_airy_operator_of_solution(kernel):
    z = kernel.mg.nodes
    g = gaussian_derivatives(z, 0.5, 0.1)[0] + 0j
    B = kernel.solve_exact(g)
    assert sup(kernel.airy(B) - g) < 1e-9 * sup(g)


def test_zero_source(kernel):
    z = kernel.mg.nodes
    assert sup(kernel.solve_exact(np.zeros(z.size, complex))) == 0


def test_linearity(kernel):
    z = kernel.mg.nodes
    f = gaussian_derivatives(z, 0.5, 0.1)[0] + 0j
    g = gaussian_derivatives(z, 0.8, 0.2)[0] + 0j
    a, b = 0.7 - 0.2j, -1.3
    lhs = kernel.solve(a * f + b * g)
    rhs = a * kernel.solve(f) + b * kernel.solve(g)
    assert sup(lhs - rhs) <= 1e-12 * sup(rhs)


def test_source_outside_fast_window(kernel):
    z = kernel.mg.nodes
    g = np.ones(z.size, complex)
    with pytest.raises(ConfigError):
        kernel.solve(g)


def test_singular_source_needs_four_derivatives(kernel):
    with pytest.raises(ConfigError):
        kernel.smooth_singular_source(np.zeros((3, kernel.mg.size)))


def test_contraction_shrinks_with_delta():
    r1, d1 = contraction_ratio(1e6)
    r2, d2 = contraction_ratio(8e6)
    assert r1 < 0.05 and r2 < r1
