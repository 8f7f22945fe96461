"""Rayleigh operator, its Green-function inverse and the exact Rayleigh modes.

Ray_alpha(phi) = (U - c)(phi'' - alpha^2 phi) - U'' phi.  The alpha = 0
solutions are phi10 = U - c and phi20 = (U - c) int_{1/2}^z (U - c)^{-2};
the double pole and the log singularity of the integrand at z_c are
subtracted analytically, so the quadrature only sees a holomorphic remainder.

Functions on the master grid are handled as derivative stacks: arrays of
shape (k, n) holding f, f', ... at the nodes.
"""

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .errors import NoConvergence, NotContracting
from .langer import _horner
from .langer import series_power

BASE_POINT = 0.5


def sup(f):
    return float(np.max(np.abs(f))) if np.size(f) else 0.0


def neumann(f, step, tol=1e-13, maxiter=60, grow_limit=0.9):
    """Sum f + step(f) + step(step(f)) + ... .

    Raises NotContracting when two consecutive terms fail to shrink by
    ``grow_limit`` and NoConvergence when ``maxiter`` terms are not enough.
    Returns (sum, number of terms, last ratio).
    """
    total = np.array(f, dtype=complex)
    term = total
    prev = sup(term)
    bad = 0
    ratio = 0.0
    for k in range(1, maxiter + 1):
        term = step(term)
        size = sup(term)
        ratio = size / prev if prev > 0 else 0.0
        total = total + term
        if size <= tol * max(sup(total), 1e-300):
            return total, k, ratio
        bad = bad + 1 if ratio > grow_limit else 0
        if bad >= 2:
            raise NotContracting(f"Neumann series ratio {ratio:.3g} after {k} terms")
        prev = size
    raise NoConvergence(f"Neumann series not converged after {maxiter} terms")


def solve_identity_plus(apply_k, f, tol=1e-13, maxiter=60):
    """Solve h + K h = f, by the Neumann series or, failing that, GMRES."""
    try:
        h, _, _ = neumann(f, lambda t: -apply_k(t), tol=tol, maxiter=maxiter)
        return h
    except (NotContracting, NoConvergence):
        pass
    n = f.size
    op = LinearOperator((n, n), matvec=lambda v: v + apply_k(v), dtype=complex)
    h, info = gmres(op, f, rtol=tol, atol=0.0, restart=80, maxiter=20)
    if info != 0:
        raise NoConvergence("GMRES fallback did not converge")
    return h


class RayleighSolver:
    """Green-function inverse of Ray_alpha on a master grid."""

    def __init__(self, mgrid):
        self.mg = mgrid
        fr = mgrid.frame
        self.alpha = fr.alpha
        g = mgrid.grid
        z = g.nodes
        U = mgrid.U
        self.d = U[0] - fr.c
        self.U = U
        self.expm = np.exp(-self.alpha * z)
        self.expp = np.exp(self.alpha * z)
        self.phi1 = np.array([self.d, U[1], U[2]])
        self.phi2 = self._phi2()

    def _phi2(self):
        fr = self.mg.frame
        g = self.mg.grid
        z = g.nodes
        zc, U1c, U2c = fr.z_c, fr.Uc_prime, fr.Uc_dprime
        t = z - zc
        d, Up = self.d, self.U[1]
        A = fr.U_taylor[1:] / U1c
        inv2 = series_power(A, -2.0)
        inv1 = series_power(A, -1.0)
        h_coef = inv2[2:] / U1c**2
        r_coef = (inv1[1:] - np.arange(2, len(A) + 1) * A[1:]) / U1c
        near = np.abs(t) < fr.series_radius
        h = np.empty_like(d)
        r = np.empty_like(d)
        h[near] = _horner(h_coef, t[near])
        r[near] = _horner(r_coef, t[near])
        tf = t[~near]
        h[~near] = 1 / d[~near] ** 2 - 1 / (U1c**2 * tf**2) + U2c / (U1c**3 * tf)
        r[~near] = 1 / d[~near] - Up[~near] / (U1c**2 * tf)
        H = g.cumint(h)
        H = H - g.interp(H, BASE_POINT)[0]
        tb = BASE_POINT - zc
        Kb = -1 / (U1c**2 * tb) - U2c / U1c**3 * np.log(tb)
        lg = -U2c / U1c**3 * np.log(t) + H - Kb
        S = -1 / (U1c**2 * t) + lg
        phi = d * S
        dphi = r + Up * lg
        return np.array([phi, dphi, self.U[2] * phi / d])

    # -- basic operator -----------------------------------------------------
    def ray(self, stack):
        """Ray_alpha applied to a stack (f, f', f'')."""
        return self.d * (stack[2] - self.alpha**2 * stack[0]) - self.U[2] * stack[0]

    def _pq(self, f):
        g = self.mg.grid
        P = g.cumint(self.expp * self.phi2[0] * f / self.d)
        Q = g.cumint_right(self.expp * f)
        return P, Q

    def solve(self, f):
        """RS_alpha(f): stack (u, u', u'') with Ray(u) = f + err(f)."""
        a = self.alpha
        P, Q = self._pq(f)
        p1, p2 = self.phi1, self.phi2
        u = -self.expm * (p1[0] * P + p2[0] * Q)
        du = -self.expm * ((p1[1] - a * p1[0]) * P + (p2[1] - a * p2[0]) * Q)
        d2u = (-self.expm * ((p1[2] - 2 * a * p1[1] + a * a * p1[0]) * P
                             + (p2[2] - 2 * a * p2[1] + a * a * p2[0]) * Q) + f / self.d)
        return np.array([u, du, d2u])

    def err(self, f):
        """Ray_alpha(RS_alpha(f)) - f."""
        P, Q = self._pq(f)
        return 2 * self.alpha * self.d * self.expm * (self.phi1[1] * P + self.phi2[1] * Q)

    def solve_exact(self, f, tol=1e-13):
        """RS_{alpha,inf}(f): stack u with Ray(u) = f up to the series tolerance."""
        h = solve_identity_plus(self.err, np.asarray(f, dtype=complex), tol=tol)
        return self.solve(h)

    # -- exact modes --------------------------------------------------------
    def mode_minus(self):
        """Decaying Rayleigh solution e^{-alpha z}(U - c) + corrections, as a stack."""
        a = self.alpha
        d, U = self.d, self.U
        e = self.expm
        psi0 = np.array([e * d, e * (U[1] - a * d), e * (U[2] - 2 * a * U[1] + a * a * d)])
        e0 = -2 * a * d * U[1] * e
        return psi0 + self.solve_exact(-e0)

    def mode_plus(self, minus=None):
        """Growing solution alpha phi_- int_{1/2}^z phi_-^{-2}, as a stack (f, f')."""
        m = self.mode_minus() if minus is None else minus
        g = self.mg.grid
        integ = g.cumint(m[0] ** -2)
        integ = integ - g.interp(integ, BASE_POINT)[0]
        a = self.alpha
        return np.array([a * m[0] * integ, a * m[1] * integ + a / m[0]])
