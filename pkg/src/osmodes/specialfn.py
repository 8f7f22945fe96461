"""Airy functions, their primitives and the decaying companion Ci.

Values are available either directly or in scaled form.  The scaled form
returns a mantissa ``m`` such that the value equals ``m * exp(-zeta)`` for the
Ai family and ``m * exp(+zeta)`` for the Ci family, where
``zeta = (2/3) z**1.5`` on the principal branch.  Working with mantissas keeps
products such as ``Ai(X) * Ci(Z)`` finite when ``|z|`` is large.

``k`` indexes the primitive order: ``k = -1`` is the derivative, ``k = 0`` the
function, ``k = 1, 2`` the first and second primitives anchored at +infinity
(for Ai) or at -infinity along the direction ``exp(i pi/6)`` (for Ci).
"""

import math

import numpy as np
from scipy import special

from .errors import DivisionNearZero, DomainError

OMEGA = np.exp(2j * np.pi / 3)
# Ci(z) = CI_NORM * Ai(OMEGA z) decays along -exp(i pi/6) and has unit Wronskian with Ai.
CI_NORM = 2 * np.pi * np.exp(1j * np.pi / 6)

_SMALL = 1.5  # Maclaurin radius for the first primitive
_LARGE = 12.5  # asymptotic radius for the primitives
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_RAY_PANELS = 8


def zeta(z):
    """Exponent (2/3) z^{3/2} on the principal branch."""
    z = np.asarray(z, dtype=complex)
    return (2.0 / 3.0) * z * np.sqrt(z)


def ai_at_zero(k):
    """Ai(k, 0) = (-1)^k 3^{-(k+2)/3} / Gamma((k+2)/3)."""
    return (-1) ** k * 3.0 ** (-(k + 2) / 3) / gamma((k + 2) / 3)


def _airye(z):
    ai, aip, _, _ = special.airye(z)
    return ai, aip


def _ai1_maclaurin(z):
    # integrate the Taylor series of Ai term by term, anchored so Ai(1,0) = -1/3
    a = [ai_at_zero(0), ai_at_zero(-1), 0.0]
    while len(a) < 90:
        n = len(a) - 3
        a.append(a[n] / ((n + 3) * (n + 2)))
    total = np.zeros_like(z)
    power = z.copy()
    for n, coef in enumerate(a):
        total = total + coef * power / (n + 1)
        power = power * z
    return total - 1.0 / 3.0


def _ibp_series(z, m0, ai_m, aip_m):
    """Scaled integral of Ai(t) t^{-m0} from z to infinity by repeated parts."""
    total = np.zeros_like(z)
    weight = np.ones(z.shape)
    last = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    m = m0
    # the weights overflow late in the loop; those terms are already masked out
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(60):
            term = weight * (-aip_m * z ** (-(m + 1)) - (m + 1) * ai_m * z ** (-(m + 2)))
            size = np.abs(term)
            active &= size < last
            total = np.where(active, total + term, total)
            last = np.where(active, size, last)
            weight = weight * (m + 1) * (m + 2)
            m += 3
    return total


def _ray_integral(z, start, stop):
    """Scaled integral of Ai along the straight ray through z.

    Integrates Ai(t) dt from ``start * z/|z|`` to ``stop * z/|z|`` and returns it
    multiplied by exp(zeta(z)).  Panels are equispaced in t^{3/2} so that the
    exponent changes evenly across them.
    """
    r = np.abs(z)
    u = z / r
    s0, s1 = start ** 1.5, stop ** 1.5
    edges = s0[:, None] + (s1 - s0)[:, None] * np.linspace(0, 1, _RAY_PANELS + 1)[None, :]
    t_edges = edges ** (2.0 / 3.0)
    a, b = t_edges[:, :-1], t_edges[:, 1:]
    t = 0.5 * (a + b)[..., None] + 0.5 * (b - a)[..., None] * _GL_NODES
    w = 0.5 * (b - a)[..., None] * _GL_WEIGHTS
    pts = t * u[:, None, None]
    eai, _ = _airye(pts)
    expo = zeta(z)[:, None, None] - zeta(pts)
    vals = eai * np.exp(expo) * w
    return vals.sum(axis=(1, 2)) * u


def _ai1_scaled(z):
    """Mantissa of Ai(1, z) relative to exp(-zeta(z))."""
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    out = np.empty_like(z)
    r = np.abs(z)
    theta = np.abs(np.angle(z))
    zz = zeta(z)

    small = r <= _SMALL
    if small.any():
        out[small] = _ai1_maclaurin(z[small]) * np.exp(zz[small])

    large = ~small & (r >= _LARGE)
    near = large & (theta <= 2 * np.pi / 3)
    if near.any():
        ai, aip = _airye(z[near])
        out[near] = -_ibp_series(z[near], 0, ai, aip)
    far = large & (theta > 2 * np.pi / 3)
    if far.any():
        zf = z[far]
        m1 = _ai1_scaled(OMEGA * zf)
        m2 = _ai1_scaled(OMEGA**2 * zf)
        e = zeta(zf)
        out[far] = (-np.exp(e) - m1 * np.exp(e - zeta(OMEGA * zf))
                    - m2 * np.exp(e - zeta(OMEGA**2 * zf)))

    mid = ~small & ~large
    decaying = mid & (theta < np.pi / 3)
    if decaying.any():
        zd = z[decaying]
        rd = np.abs(zd)
        zfar = _LARGE * zd / rd
        ai, aip = _airye(zfar)
        anchor = -_ibp_series(zfar, 0, ai, aip) * np.exp(zeta(zd) - zeta(zfar))
        out[decaying] = anchor - _ray_integral(zd, rd, np.full_like(rd, _LARGE))
    growing = mid & (theta >= np.pi / 3)
    if growing.any():
        zg = z[growing]
        rg = np.abs(zg)
        out[growing] = -np.exp(zeta(zg)) / 3.0 + _ray_integral(zg, np.zeros_like(rg), rg)
    return out.reshape(shape)


def _ai2_scaled(z):
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    out = np.empty_like(z)
    r = np.abs(z)
    theta = np.abs(np.angle(z))
    near = (r >= _LARGE) & (theta <= 2 * np.pi / 3)
    if near.any():
        ai, aip = _airye(z[near])
        out[near] = ai / z[near] - 2 * z[near] * _ibp_series(z[near], 3, ai, aip)
    far = (r >= _LARGE) & (theta > 2 * np.pi / 3)
    if far.any():
        zf = z[far]
        e = zeta(zf)
        m1 = _ai2_scaled(OMEGA * zf)
        m2 = _ai2_scaled(OMEGA**2 * zf)
        out[far] = (-zf * np.exp(e) - OMEGA**2 * m1 * np.exp(e - zeta(OMEGA * zf))
                    - OMEGA * m2 * np.exp(e - zeta(OMEGA**2 * zf)))
    rest = r < _LARGE
    if rest.any():
        zr = z[rest]
        _, aip = _airye(zr)
        out[rest] = zr * _ai1_scaled(zr) - aip
    return out.reshape(shape)


def ai(k, z, scaled=False):
    """Ai(k, z) for k in {-1, 0, 1, 2}.

    With ``scaled=True`` the mantissa relative to exp(-zeta(z)) is returned.
    """
    z = np.asarray(z, dtype=complex)
    if k == 0:
        m = _airye(z)[0]
    elif k == -1:
        m = _airye(z)[1]
    elif k == 1:
        m = _ai1_scaled(z)
    elif k == 2:
        m = _ai2_scaled(z)
    else:
        raise ValueError(f"unsupported primitive order {k}")
    if scaled:
        return m
    return m * np.exp(-zeta(z))


def ci(k, z, scaled=False):
    """Ci(k, z) = CI_NORM * OMEGA^{-k} * Ai(k, OMEGA z).

    With ``scaled=True`` the mantissa relative to exp(+zeta(z)) is returned.
    """
    z = np.asarray(z, dtype=complex)
    w = OMEGA * z
    m = CI_NORM * OMEGA ** (-k) * ai(k, w, scaled=True)
    if scaled:
        return m * np.exp(-zeta(w) - zeta(z))
    return m * np.exp(-zeta(w))


def wronskian(z):
    """Ai(z) Ci'(z) - Ai'(z) Ci(z); identically one."""
    a, ap = ai(0, z, scaled=True), ai(-1, z, scaled=True)
    c, cp = ci(0, z, scaled=True), ci(-1, z, scaled=True)
    return a * cp - ap * c


def gamma(x):
    """Gamma function for real x > 0."""
    if x <= 0:
        raise DomainError("gamma is only provided for positive arguments")
    return math.gamma(x)


def c_ai(y, tiny=1e-300):
    """Ratio Ai(2, y) / Ai(1, y), evaluated on mantissas."""
    y = np.asarray(y, dtype=complex)
    den = ai(1, y, scaled=True)
    if np.any(np.abs(den) < tiny):
        raise DivisionNearZero("Ai(1, y) vanishes at a requested point")
    return ai(2, y, scaled=True) / den


def c_ai_at_zero():
    """C_Ai(0) = Ai(2, 0)/Ai(1, 0) = -3^{-1/3}/Gamma(4/3).

    The closed form -3^{1/3} Gamma(4/3) sometimes quoted for this value is its
    reciprocal up to sign and does not agree with the values of Ai(k, 0).
    """
    return ai_at_zero(2) / ai_at_zero(1)
