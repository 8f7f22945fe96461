import numpy as np
import pytest

from osmodes.errors import ConfigError
from osmodes.langer import CriticalLayerFrame, MasterGrid
from osmodes.verification import langer_defect, sample_frames


@pytest.mark.parametrize("fr", sample_frames(), ids=lambda f: f"{f.profile.kind}-R{f.R:.0e}")
def test_langer_identity(fr):
    assert langer_defect(fr) < 1e-9


def test_eta_vanishes_at_critical_point(frame):
    # eta is analytic, so its Taylor data at z_c show eta(z_c) = 0, eta'(z_c) = 1
    z = np.array([0.0, 0.5, 1.0])
    L = frame.langer(z, orders=1)
    d = frame.profile(z) - frame.c
    assert np.allclose(d, frame.Uc_prime * L[0] * L[1] ** 2, rtol=1e-9)


def test_delta_scale(frame):
    mag = (frame.alpha * frame.R * abs(frame.Uc_prime)) ** (-1 / 3)
    assert abs(frame.delta) == pytest.approx(mag, rel=0.02)
    assert np.angle(frame.delta * (frame.Uc_prime / abs(frame.Uc_prime)) ** (1 / 3)) == pytest.approx(-np.pi / 6, abs=1e-9)


def test_bad_parameters(expo):
    with pytest.raises(ConfigError):
        CriticalLayerFrame(expo, -0.1, 1e5, 0.1 + 0.01j)
    with pytest.raises(ConfigError):
        CriticalLayerFrame(expo, 0.1, 0.0, 0.1 + 0.01j)


def test_master_grid_layout(mgrid, frame):
    z = mgrid.nodes
    assert z[0] > 0 and z[-1] < mgrid.z_max
    assert np.all(np.diff(z) > 0)
    assert mgrid.grid.edges[0] == 0.0 and mgrid.grid.edges[-1] == mgrid.z_max
    assert mgrid.z_fast >= mgrid.fast_support
    # panels resolve the critical layer
    h = np.diff(mgrid.grid.edges)
    mid = 0.5 * (mgrid.grid.edges[1:] + mgrid.grid.edges[:-1])
    assert np.all(h[mid < mgrid.z_fast] <= 2 * abs(frame.delta) / 0.5)
