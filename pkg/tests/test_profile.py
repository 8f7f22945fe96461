import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osmodes.errors import OutsideAnalyticityStrip
from osmodes.profile import ShearProfile


def test_exponential_values(expo):
    z = np.array([0.0, 0.5, 2.0])
    assert np.allclose(expo(z), 1 - np.exp(-z))
    assert np.allclose(expo(z, 1), np.exp(-z))
    assert np.allclose(expo(z, 2), -np.exp(-z))
    assert expo.U0_prime == 1.0


@pytest.mark.parametrize("kind", ["exponential", "tanh", "blasius"])
@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_derivatives_by_differences(kind, order):
    p = ShearProfile(kind)
    z = np.array([0.3, 1.1, 2.7])
    h = 1e-4
    fd = (p(z + h, order) - p(z - h, order)) / (2 * h)
    assert np.allclose(fd, p(z, order + 1), atol=1e-6)


@pytest.mark.parametrize("kind", ["exponential", "tanh", "blasius"])
def test_boundary_values(kind):
    p = ShearProfile(kind)
    assert abs(p(0.0)) < 1e-12
    assert abs(p(p.z_max) - 1) < 1e-12
    assert p.U0_prime > 0


def test_blasius_wall_shear(blasius):
    # f'' (0) for f''' + f f''/2 = 0, the classical 0.332057...
    assert blasius.U0_prime == pytest.approx(0.332057336, rel=1e-7)
    assert abs(blasius(0.0, 2)) < 1e-12
    assert abs(blasius(0.0, 3)) < 1e-12


def test_scale_parameter():
    p = ShearProfile("exponential", (2.0,))
    assert p(2.0) == pytest.approx(1 - np.exp(-1))
    with pytest.raises(ValueError):
        ShearProfile("exponential", (-1.0,))


def test_unknown_kind():
    with pytest.raises(ValueError):
        ShearProfile("parabolic")


def test_strip(blasius):
    with pytest.raises(OutsideAnalyticityStrip):
        blasius(1 + 0.5j)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.9), st.floats(-0.02, 0.02))
def test_critical_point_roundtrip(re_c, im_c):
    p = ShearProfile("exponential")
    c = complex(re_c, im_c)
    zc = p.critical_point(c)
    assert abs(complex(p(zc)) - c) < 1e-12


def test_critical_point_at_wall(expo):
    assert expo.critical_point(0.0) == 0
