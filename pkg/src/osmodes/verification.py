"""Self-checks run by ``osmodes verify``.

Each check returns a Check(name, passed, value, limit); ``value`` is the
measured defect and ``limit`` the threshold it is compared with.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermval

from .airyop import AiryKernel
from .langer import CriticalLayerFrame, MasterGrid
from .modes import ModeBuilder
from .profile import ShearProfile
from .rayleigh import RayleighSolver, sup
from .specialfn import ai, ci, gamma, wronskian


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    limit: float


def _check(name, value, limit):
    return Check(name, bool(value <= limit), float(value), float(limit))


def complex_grid(n=400, radius=8.0, seed=0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * th)


def gaussian_derivatives(z, z0, w, orders=5):
    """exp(-((z - z0)/w)^2) and its derivatives through Hermite polynomials."""
    u = (z - z0) / w
    out = []
    for n in range(orders):
        c = np.zeros(n + 1)
        c[n] = 1.0
        out.append((-1 / w) ** n * hermval(u, c) * np.exp(-u * u))
    return np.array(out)


def wronskian_defect(z):
    """|W - 1| relative to the size of the two products that form W.

    Off the decaying sectors both products grow like exp(2|zeta|) and the
    absolute defect is set by their cancellation, not by the functions.
    """
    a, ap = ai(0, z, scaled=True), ai(-1, z, scaled=True)
    c, cp = ci(0, z, scaled=True), ci(-1, z, scaled=True)
    size = np.maximum(1.0, np.maximum(np.abs(a * cp), np.abs(ap * c)))
    return np.abs(wronskian(z) - 1) / size


def check_airy_wronskian():
    return _check("airy wronskian", float(np.max(wronskian_defect(complex_grid()))), 1e-10)


def check_airy_at_zero():
    worst = 0.0
    for k in (-1, 0, 1, 2):
        ref = (-1) ** k * 3.0 ** (-(k + 2) / 3) / gamma((k + 2) / 3)
        worst = max(worst, abs(complex(ai(k, np.array([0j]))[0]) - ref))
    return _check("airy values at zero", worst, 1e-10)


def sample_frames():
    exp = ShearProfile("exponential")
    blas = ShearProfile("blasius")
    return [CriticalLayerFrame(exp, 0.1, 1e5, 0.1288 + 0.0009j),
            CriticalLayerFrame(exp, 0.0631, 1e6, 0.0767 + 0.0057j),
            CriticalLayerFrame(exp, 0.0251, 1e8, 0.0273 + 0.0037j),
            CriticalLayerFrame(exp, 0.0178, 1e7, 0.0200 - 0.0019j),
            CriticalLayerFrame(blas, 0.1, 1e5, 0.2222 - 0.0069j)]


def langer_defect(frame, n=50):
    z = np.linspace(0.0, 3.0, n)
    L = frame.langer(z, orders=1)
    d = frame.profile(z) - frame.c
    lhs = d / L[1] ** 2
    rhs = frame.Uc_prime * L[0]
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), np.abs(lhs))))


def check_langer():
    return _check("langer identity", max(langer_defect(f) for f in sample_frames()), 1e-9)


def check_rayleigh(frame=None):
    frame = frame or sample_frames()[1]
    mg = MasterGrid(frame)
    rs = RayleighSolver(mg)
    m = rs.mode_minus()
    res = sup(rs.ray(m)) / sup(m[0])
    p = rs.mode_plus(m)
    W = m[0] * p[1] - m[1] * p[0]
    wdef = sup(W - frame.alpha) / frame.alpha
    return [_check("rayleigh residual", res, 1e-8), _check("rayleigh wronskian", wdef, 1e-6)]


def rayleigh_boundary_residual(alpha, profile=None, R=1e6, sign=-1.0):
    """|phi_Ray,-(0) - [U0 - c + alpha (U+ - U0)^2 s phi_2(0)]| with z_c = alpha.

    phi_2 is the unit-Wronskian second solution, for which phi_2(0) is close
    to -1/U'_c.  ``sign`` = -1 reads the expansion with phi_2(0) near +1/U'_c;
    ``sign`` = +1 uses the unit-Wronskian function as it stands.
    """
    prof = profile or ShearProfile("exponential")
    c = complex(prof(alpha)) + 1e-3j * alpha
    rs = RayleighSolver(MasterGrid(CriticalLayerFrame(prof, alpha, R, c)))
    m = rs.mode_minus()
    jump = (prof.U_plus - prof.U0) ** 2
    return abs(m[0][0] - (prof.U0 - c + alpha * jump * sign * rs.phi2[0][0]))


def contraction_ratio(R, alpha=0.05, z_c=0.3, im_c=0.002, steps=12):
    """Asymptotic per-step contraction of the modified Airy error operator.

    Repeated application to a Gaussian isolates the dominant part of the
    operator; the ratio of successive sup norms after ``steps`` applications
    estimates its contraction factor.
    """
    exp = ShearProfile("exponential")
    frame = CriticalLayerFrame(exp, alpha, R, complex(exp(z_c)) + 1j * im_c)
    ak = AiryKernel(MasterGrid(frame))
    w = gaussian_derivatives(ak.mg.nodes, 0.6, 0.1)[0] + 0j
    ratio = None
    for _ in range(steps):
        nxt = ak.modified_err(w)
        ratio = sup(nxt) / sup(w)
        w = nxt / sup(nxt)
    return ratio, frame.delta


def check_airy_solvers(frame=None):
    if frame is None:
        exp = ShearProfile("exponential")
        frame = CriticalLayerFrame(exp, 0.05, 1e6, complex(exp(0.3)) + 0.002j)
    mg = MasterGrid(frame)
    ak = AiryKernel(mg)
    z, eps, a = mg.nodes, frame.epsilon, frame.alpha
    d = mg.U[0] - frame.c
    b = gaussian_derivatives(z, 0.6, 0.1)
    B = ak.solve_exact(eps * b[4] - (d + 2 * eps * a * a) * b[2])
    M = ak.modified_solve_exact(eps * b[2] - d * b[0])
    return [_check("airy solver recovery", sup(B[0] - b[0]) / sup(b[0]), 1e-6),
            _check("modified airy recovery", sup(M[0] - b[0]) / sup(b[0]), 1e-6)]


def fast_wall_ratio(profile, alpha, R, n_delta, im_c=1e-9):
    """phi_3(0)/phi_3'(0) with the critical point at n_delta |delta| from the wall.

    Returns (ratio, frame).  n_delta = 0 puts c at U_0 + i im_c^2.
    """
    d = abs((alpha * R * profile.U0_prime) ** (-1.0 / 3.0))
    c = complex(profile(n_delta * d).real) + 1j * im_c if n_delta > 0 else profile.U0 + 1j * im_c**2
    frame = CriticalLayerFrame(profile, alpha, R, c)
    wall = ModeBuilder(frame).fast_mode().wall
    return wall[0] / wall[1], frame


def check_modes(frame=None):
    frame = frame or sample_frames()[0]
    mb = ModeBuilder(frame)
    return [_check(f"{m.name} mode residual", m.relative_residual, 1e-7)
            for m in (mb.slow_mode(), mb.fast_mode())]


def run_all():
    checks = [check_airy_wronskian(), check_airy_at_zero(), check_langer()]
    checks += check_rayleigh()
    checks += check_airy_solvers()
    checks += check_modes()
    return checks
