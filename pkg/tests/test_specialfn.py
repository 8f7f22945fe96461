import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from osmodes.errors import DomainError
from osmodes.specialfn import ai, ai_at_zero, c_ai, c_ai_at_zero, ci, gamma, wronskian, zeta
from osmodes.verification import wronskian_defect

POINTS = np.array([0.3, 1.5 + 0.7j, -2 + 1j, 3.0, 5 - 4j, -0.5 - 0.2j, 9 + 2j, 14 + 1j])


def mp_ai(k, z):
    """Independent values from mpmath: primitives anchored at +infinity."""
    z = mp.mpc(z)
    if k == -1:
        return complex(mp.airyai(z, 1))
    if k == 0:
        return complex(mp.airyai(z))
    if k == 1:
        return complex(mp.airyai(z, -1) - mp.mpf(1) / 3)
    return complex(mp.airyai(z, -2) - z / 3 + mp.mpf(3) ** (-mp.mpf(4) / 3) / mp.gamma(mp.mpf(4) / 3))


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_ai_matches_mpmath(k):
    got = ai(k, POINTS)
    ref = np.array([mp_ai(k, z) for z in POINTS])
    assert np.allclose(got, ref, rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_scaled_mantissa_consistent(k):
    z = POINTS[:6]
    assert np.allclose(ai(k, z, scaled=True) * np.exp(-zeta(z)), ai(k, z), rtol=1e-12)
    assert np.allclose(ci(k, z, scaled=True) * np.exp(zeta(z)), ci(k, z), rtol=1e-12)


def test_ai_and_derivative_match_scipy():
    z = POINTS[:6]
    a, ap, _, _ = special.airy(z)
    assert np.allclose(ai(0, z), a, rtol=1e-13)
    assert np.allclose(ai(-1, z), ap, rtol=1e-13)


@pytest.mark.parametrize("k", [-1, 0, 1, 2])
def test_ai_at_zero(k):
    assert abs(complex(ai(k, np.array([0j]))[0]) - ai_at_zero(k)) < 1e-13


def test_ci_is_rotated_ai():
    z = POINTS[:5]
    w = np.exp(2j * np.pi / 3) * z
    ref = 2 * np.pi * np.exp(1j * np.pi / 6) * np.array([complex(mp.airyai(x)) for x in w])
    assert np.allclose(ci(0, z), ref, rtol=1e-12)


def test_ci_decays_along_its_ray():
    t = np.array([2.0, 4.0, 8.0])
    z = -np.exp(1j * np.pi / 6) * t
    assert np.all(np.diff(np.abs(ci(0, z))) < 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 8), st.floats(-np.pi, np.pi))
def test_wronskian_is_one(r, th):
    z = np.array([r * np.exp(1j * th)])
    assert wronskian_defect(z)[0] < 1e-10


def test_wronskian_near_origin_absolute():
    z = np.array([0.0, 0.5j, -1.0, 1 + 1j])
    assert np.allclose(wronskian(z), 1.0, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 10), st.floats(-2.0, 2.0))
def test_primitive_relation(r, th):
    """d/dz Ai(k, z) = Ai(k - 1, z), checked by a centred difference."""
    z = r * np.exp(1j * th)
    h = 1e-5
    for k in (1, 2):
        d = (ai(k, np.array([z + h]), scaled=True) * np.exp(-zeta(z + h))
             - ai(k, np.array([z - h]), scaled=True) * np.exp(-zeta(z - h))) / (2 * h)
        ref = ai(k - 1, np.array([z]))
        assert abs(d[0] - ref[0]) <= 1e-6 * max(1.0, abs(ref[0]))


def test_c_ai_at_zero_matches_gamma_formula():
    ref = -(3.0 ** (-1.0 / 3.0)) / gamma(4.0 / 3.0)
    assert c_ai_at_zero() == pytest.approx(ref, rel=1e-14)
    assert complex(c_ai(np.array([0j]))[0]) == pytest.approx(ref, rel=1e-13)


def test_c_ai_large_argument():
    y = np.array([400.0, 900.0])
    assert np.allclose(c_ai(y) * np.sqrt(y), -1.0, atol=5e-3)


def test_gamma_domain():
    assert gamma(0.5) == pytest.approx(np.sqrt(np.pi))
    with pytest.raises(DomainError):
        gamma(-1.0)


def test_bad_order():
    with pytest.raises(ValueError):
        ai(3, np.array([1.0]))
