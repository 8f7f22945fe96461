"""Critical-layer frame and the Langer map.

The Langer variable solves (eta')^2 eta = w with w = (U - c)/U'(z_c) and
eta(z_c) = 0.  Near z_c it is evaluated from its power series (obtained from
Taylor coefficients of U by a Cauchy integral), further away from
eta^{3/2} = eta_m^{3/2} + (3/2) int_{z_m}^z w^{1/2} with the square-root
branch carried by continuity from the series at the matching point z_m.
"""

import numpy as np
from numpy.polynomial import legendre

from .errors import BranchAmbiguity, ConfigError
from .grid import PanelGrid, graded_edges
from .specialfn import zeta

SERIES_TERMS = 40
_FFT_POINTS = 128
_GL_T, _GL_W = legendre.leggauss(16)


def series_power(a, gamma):
    """Coefficients of A(t)^gamma for a power series A with A(0) = 1."""
    n = len(a)
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0
    for m in range(1, n):
        k = np.arange(1, m + 1)
        out[m] = np.sum((gamma * k - (m - k)) * a[k] * out[m - k]) / m
    return out


def taylor_coefficients(func, center, radius, n):
    """First n Taylor coefficients of ``func`` about ``center`` by a Cauchy integral."""
    theta = 2 * np.pi * np.arange(_FFT_POINTS) / _FFT_POINTS
    vals = func(center + radius * np.exp(1j * theta))
    coef = np.fft.fft(vals) / _FFT_POINTS
    return coef[:n] / radius ** np.arange(n)


def _horner(coef, t, deriv=0):
    total = np.zeros_like(t)
    n = len(coef)
    for k in range(n - 1, deriv - 1, -1):
        fall = 1.0
        for j in range(deriv):
            fall *= k - j
        total = total * t + coef[k] * fall
    return total


class CriticalLayerFrame:
    """(alpha, R, c) together with the critical point, delta and the Langer map."""

    def __init__(self, profile, alpha, R, c):
        if alpha <= 0 or R <= 0:
            raise ConfigError("alpha and R must be positive")
        self.profile = profile
        self.alpha = float(alpha)
        self.R = float(R)
        self.c = complex(c)
        self.epsilon = 1.0 / (1j * self.alpha * self.R)
        self.z_c = profile.critical_point(self.c)
        self.Uc_prime = complex(profile(self.z_c, 1))
        self.Uc_dprime = complex(profile(self.z_c, 2))
        self.delta = np.exp(-1j * np.pi / 6) * (self.alpha * self.R * self.Uc_prime) ** (-1.0 / 3.0)
        self._build_series()

    # -- series about z_c -------------------------------------------------
    def _build_series(self):
        p = self.profile
        rho = 0.9 * (p.margin - abs(self.z_c.imag))
        if rho <= 0:
            raise BranchAmbiguity("critical point lies outside the analyticity strip")
        a = taylor_coefficients(lambda z: p(z), self.z_c, rho, SERIES_TERMS + 2)
        self.U_taylor = a
        w = a / self.Uc_prime
        h = w[1:SERIES_TERMS + 1]
        g = series_power(h, 0.5)
        B = 1.5 * g / (np.arange(SERIES_TERMS) + 1.5)
        E = series_power(B, 2.0 / 3.0)
        self._eta_coef = np.concatenate(([0.0], E))
        self._B = B
        self.series_radius = 0.5 * rho
        if abs(self.z_c.imag) >= 0.5 * self.series_radius:
            raise BranchAmbiguity("|Im z_c| too large for the matching construction")
        self._anchors = {}
        for side in (1, -1):
            dx = np.sqrt((0.8 * self.series_radius) ** 2 - self.z_c.imag ** 2)
            zm = self.z_c.real + side * dx
            t = np.array([zm - self.z_c])
            eta = _horner(self._eta_coef, t)[0]
            deta = _horner(self._eta_coef, t, 1)[0]
            P = (t * np.sqrt(t) * _horner(B, t))[0]
            root = (P / eta) * deta  # continuous branch of w^{1/2}
            wm = complex(p(zm)) - self.c
            sigma = 1.0 if side > 0 else -1.0
            kappa = root / np.sqrt(sigma * wm / self.Uc_prime)
            self._anchors[side] = (zm, eta, P, kappa, sigma)

    def _sqrt_w(self, x, kappa, sigma):
        w = (self.profile(x) - self.c) / self.Uc_prime
        if np.any((sigma * w).real <= 0):
            raise BranchAmbiguity("square-root track of (U - c)/U'_c lost continuity")
        return kappa * np.sqrt(sigma * w)

    def _P_real(self, z, side):
        zm, eta_m, P_m, kappa, sigma = self._anchors[side]
        if z.size == 0:
            return z
        far = np.max(np.abs(z - zm))
        d0 = abs(zm - self.z_c.real)
        steps = [d0]
        while steps[-1] - d0 < far:
            steps.append(steps[-1] + min(0.5 * steps[-1], 0.5))
        brk = self.z_c.real + side * np.array(steps)
        pts = np.unique(np.concatenate((brk[np.abs(brk - zm) <= far], z, [zm])))
        a, b = pts[:-1], pts[1:]
        x = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * _GL_T
        vals = self._sqrt_w(x, kappa, sigma)
        seg = (vals * _GL_W).sum(axis=1) * 0.5 * (b - a)
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        cum -= cum[np.searchsorted(pts, zm)]
        return P_m + 1.5 * cum[np.searchsorted(pts, z)]

    def _P_complex(self, z, side):
        zm, eta_m, P_m, kappa, sigma = self._anchors[side]
        K = 40
        s = (np.arange(K + 1) / K) ** 2
        a, b = s[:-1], s[1:]
        u = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * _GL_T
        wgt = 0.5 * (b - a)[:, None] * _GL_W
        x = zm + (z - zm)[:, None, None] * u[None]
        vals = self._sqrt_w(x, kappa, sigma)
        return P_m + 1.5 * (z - zm) * (vals * wgt).sum(axis=(1, 2))

    # -- public evaluation ------------------------------------------------
    def langer(self, z, orders=4):
        """Array of shape (orders + 1,) + z.shape holding eta and its derivatives."""
        z = np.asarray(z)
        shape = z.shape
        zf = z.ravel()
        out = np.zeros((orders + 1, zf.size), dtype=complex)
        t = zf - self.z_c
        near = np.abs(t) < self.series_radius
        for k in range(orders + 1):
            out[k, near] = _horner(self._eta_coef, t[near].astype(complex), k)
        real = np.isrealobj(z) or np.all(np.imag(zf) == 0)
        for side in (1, -1):
            sel = ~near & ((np.real(zf) >= self.z_c.real) if side > 0 else (np.real(zf) < self.z_c.real))
            if not sel.any():
                continue
            zs = zf[sel]
            P = self._P_real(np.real(zs), side) if real else self._P_complex(zs.astype(complex), side)
            zm, eta_m, P_m, _, _ = self._anchors[side]
            eta = eta_m * (P / P_m) ** (2.0 / 3.0)
            root = self._sqrt_w(zs, *self._anchors[side][3:])
            out[:, sel] = self._outer_derivatives(zs, eta, P, root, orders)
        return out.reshape((orders + 1,) + shape)

    def _outer_derivatives(self, z, eta, P, root, orders):
        Uc1 = self.Uc_prime
        w1 = self.profile(z, 1) / Uc1
        d1 = root * eta / P  # eta' = w^{1/2} / eta^{1/2} with eta^{1/2} = P / eta
        res = [eta, d1]
        if orders >= 2:
            d2 = (w1 - d1**3) / (2 * d1 * eta)
            res.append(d2)
        if orders >= 3:
            w2 = self.profile(z, 2) / Uc1
            d3 = (w2 - 2 * d2**2 * eta - 5 * d1**2 * d2) / (2 * d1 * eta)
            res.append(d3)
        if orders >= 4:
            w3 = self.profile(z, 3) / Uc1
            d4 = (w3 - 6 * eta * d2 * d3 - 12 * d1 * d2**2 - 7 * d1**2 * d3) / (2 * d1 * eta)
            res.append(d4)
        return np.array(res[:orders + 1])

    def eta(self, z):
        return self.langer(z, orders=0)[0]

    def zdot(self, z):
        """dz/deta = 1/eta'."""
        return 1.0 / self.langer(z, orders=1)[1]

    def fast_variable(self, z):
        return self.eta(z) / self.delta


class MasterGrid:
    """Panel grid on [0, z_max] adapted to one frame, with Langer fields cached.

    Panels are no wider than ``slow_width``, no wider than ``crit_ratio`` times
    the distance to z_c, and inside the fast window [0, z_fast] no wider than
    ``fast_phase / |d zeta(Z)/dz|`` so the Airy exponent changes by a bounded
    amount per panel.  The fast window ends where Re zeta(Z) has grown by
    ``fast_margin`` past its value at ``fast_support``.
    """

    def __init__(self, frame, fast_support=2.0, fast_margin=40.0, slow_width=0.5,
                 crit_ratio=0.4, fast_phase=4.0, z_max=None):
        self.frame = frame
        prof = frame.profile
        self.z_max = float(z_max if z_max is not None else prof.z_max)
        self.fast_support = fast_support
        delta = frame.delta

        hi = min(self.z_max, fast_support + 2.0)
        while True:
            aux = np.linspace(0.0, hi, 4001)
            L = frame.langer(aux, orders=1)
            Z = L[0] / delta
            ze = zeta(Z).real
            dzeta = np.abs(np.sqrt(Z) * L[1] / delta)
            base = np.interp(fast_support, aux, ze)
            done = np.nonzero((aux >= fast_support) & (ze - base >= fast_margin))[0]
            if done.size or hi >= self.z_max:
                break
            hi = min(self.z_max, 2 * hi)
        self.z_fast = float(aux[done[0]]) if done.size else self.z_max
        fast_w = np.minimum(fast_phase / np.maximum(dzeta, 1e-300), 2 * abs(delta) / np.abs(L[1]))

        zc = frame.z_c

        def width(x, fast=True):
            w = np.minimum(slow_width, crit_ratio * np.abs(x - zc))
            if fast:
                w = np.minimum(w, np.interp(x, aux, fast_w))
            return w

        e1 = graded_edges(0.0, self.z_fast, width)
        if self.z_fast < self.z_max:
            e2 = graded_edges(self.z_fast, self.z_max, lambda x: width(x, fast=False))
            edges = np.concatenate((e1, e2[1:]))
        else:
            edges = e1
        self.grid = PanelGrid(edges)
        g = self.grid
        self.n_fast = int(np.searchsorted(edges, self.z_fast - 1e-14)) * g.order

        pts = np.concatenate((g.nodes, g.edges))
        L = frame.langer(pts, orders=4)
        n = g.size
        self.eta = L[:, :n]
        self.eta_edges = L[:, n:]
        self.Z = self.eta[0] / delta
        self.Z_edges = self.eta_edges[0] / delta
        self.U = np.array([prof(g.nodes, k) for k in range(5)])

    @property
    def nodes(self):
        return self.grid.nodes

    @property
    def size(self):
        return self.grid.size
