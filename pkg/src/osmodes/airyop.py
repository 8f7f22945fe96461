"""Airy-side inverses in the critical layer.

Two operators are inverted on the fast window [0, z_fast] of a master grid:

* the modified Airy operator  A_a(phi) = eps phi'' - (U - c) phi,
* the primitive Airy operator Airy(phi) = eps phi'''' - (U - c + 2 eps alpha^2) phi''.

Both inverses are Green functions built from Ai(Z) and Ci(Z), Z = eta/delta,
which solve the Airy equation in the Langer variable.  Their defect is a
small error operator; summing the resulting Neumann series gives the exact
inverses.  All products Ai(X) Ci(Z) are formed from mantissas so that the
exponentials exp(+-zeta) cancel analytically.

The Wronskian of (Ai, Ci) is one, so the kernels carry K = -delta/eps; with
this constant the jump of eps d/dz across the diagonal is exactly one.
"""

import numpy as np

from .errors import ConfigError
from .grid import PanelGrid
from .rayleigh import solve_identity_plus, sup
from .specialfn import ai, ci, zeta

SUPPORT_TOL = 1e-10


class AiryKernel:
    """Critical-layer Green functions on the fast window of a master grid."""

    def __init__(self, mgrid):
        self.mg = mgrid
        fr = mgrid.frame
        self.delta = fr.delta
        self.eps = fr.epsilon
        self.alpha = fr.alpha
        self.K = -self.delta / self.eps
        nf = mgrid.n_fast
        self.nf = nf
        g = mgrid.grid
        self.sub = PanelGrid(g.edges[: nf // g.order + 1], order=g.order)
        self.z = g.nodes[:nf]
        self.eta = mgrid.eta[:, :nf]
        self.Z = mgrid.Z[:nf]
        self.zn = zeta(self.Z)
        self.ze = zeta(mgrid.Z_edges[: nf // g.order + 1])
        e1, e2, e3 = self.eta[1], self.eta[2], self.eta[3]
        self.s = e1 ** -0.5
        self.s1 = -0.5 * e1 ** -1.5 * e2
        self.s2 = 0.75 * e1 ** -2.5 * e2**2 - 0.5 * e1 ** -1.5 * e3
        self.xdot = 1.0 / e1
        self.mA, self.mAp = ai(0, self.Z, True), ai(-1, self.Z, True)
        self.mC, self.mCp = ci(0, self.Z, True), ci(-1, self.Z, True)
        self.d = mgrid.U[0][:nf] - fr.c
        self._tilde = None

    # -- helpers -------------------------------------------------------------
    def _window(self, f):
        f = np.asarray(f, dtype=complex)
        if f.shape[-1] == self.nf:
            return f
        tail = sup(f[self.nf:])
        if tail > SUPPORT_TOL * max(sup(f), 1e-300):
            raise ConfigError("Airy-side source is not confined to the fast window")
        return f[: self.nf]

    def _pad(self, arr):
        out = np.zeros(arr.shape[:-1] + (self.mg.size,), dtype=complex)
        out[..., : self.nf] = arr
        return out

    def _left(self, g):
        """Mantissa of int_0^z Ci(X) g(x) dx relative to exp(zeta(Z))."""
        return self.sub.scaled_cumint(self.mC * g, self.zn, self.ze)

    def _right(self, g):
        """Mantissa of int_z^inf Ai(X) g(x) dx relative to exp(-zeta(Z))."""
        return self.sub.scaled_cumint_right(self.mA * g, self.zn, self.ze)

    @property
    def tilde(self):
        """Scaled primitives of s Ai(Z), s Ci(Z) and the combinations a1, a2."""
        if self._tilde is None:
            sub, zn, ze, dl = self.sub, self.zn, self.ze, self.delta
            c1 = sub.scaled_cumint(self.s * self.mC, zn, ze) / dl
            c2 = sub.scaled_cumint(c1, zn, ze) / dl
            a1 = -sub.scaled_cumint_right(self.s * self.mA, zn, ze) / dl
            a2 = -sub.scaled_cumint_right(a1, zn, ze) / dl
            self._tilde = dict(c1=c1, c2=c2, a1=a1, a2=a2,
                               aa1=self.mC * a1 - self.mA * c1,
                               aa2=self.mC * a2 - self.mA * c2)
        return self._tilde

    # -- modified Airy operator -------------------------------------------------
    def modified_solve(self, f):
        """Green-function inverse of A_a; returns (phi, phi', err) on the full grid."""
        f = self._window(f)
        L = self._left(self.xdot * f)
        R = self._right(self.xdot * f)
        F = self.mA * L + self.mC * R
        Fp = self.mAp * L + self.mCp * R
        phi = self.K * F
        dphi = self.K * self.eta[1] / self.delta * Fp
        err = -self.eta[2] * Fp
        return self._pad(np.array([phi, dphi])), self._pad(err)

    def modified_err(self, f):
        return self.modified_solve(f)[1]

    def modified_solve_exact(self, f, tol=1e-13):
        """A_a^{-1} summed to convergence: (phi, phi', phi'') with A_a(phi) = f."""
        fw = self._window(f)
        h = solve_identity_plus(lambda v: self.modified_solve(v)[1][: self.nf], fw, tol=tol)
        st, _ = self.modified_solve(h)
        d2 = (self.d * st[0, : self.nf] + fw) / self.eps
        return np.concatenate((st, self._pad(d2)[None]))

    # -- primitive Airy operator --------------------------------------------
    def solve(self, g):
        """AirySolver(g): stack (B, B', B'', B''', B'''') with Airy(B) = g + airy_err(g)."""
        g = self._window(g)
        t = self.tilde
        K, dl, s = self.K, self.delta, self.s
        L = self._left(s * g)
        R = self._right(s * g)
        sub, z = self.sub, self.z
        w1 = s * t["aa1"] * g
        T1 = sub.cumint_right(w1)
        T1x = sub.cumint_right(z * w1)
        T2 = sub.cumint_right(s * t["aa2"] * g)
        B = K * dl**2 * (t["a2"] * L + t["c2"] * R + (z * T1 - T1x) / dl + T2)
        dB = K * dl * (t["a1"] * L + t["c1"] * R + T1)
        F = self.mA * L + self.mC * R
        Fp = self.mAp * L + self.mCp * R
        e1, e2 = self.eta[1], self.eta[2]
        d2B = K * s * F
        d3B = K * (self.s1 * F + s * e1 / dl * Fp)
        d4B = K * (self.s2 * F + (2 * self.s1 * e1 + s * e2) / dl * Fp
                   + s * (e1 / dl) ** 2 * self.Z * F) + g / self.eps
        return self._pad(np.array([B, dB, d2B, d3B, d4B]))

    def _err_from_d2(self, d2B):
        return self.eps * (self.s2 / self.s - 2 * self.alpha**2) * d2B[: self.nf]

    def err(self, g):
        """Airy(AirySolver(g)) - g."""
        return self._pad(self._err_from_d2(self.solve(g)[2]))

    def solve_exact(self, g, tol=1e-13):
        """AirySolver_inf(g): stack with Airy(B) = g up to the series tolerance."""
        gw = self._window(g)
        h = solve_identity_plus(lambda v: self._err_from_d2(self.solve(v)[2]), gw, tol=tol)
        return self.solve(h)

    def smooth_singular_source(self, f_stack, tol=1e-13):
        """AirySolver_inf(eps f'''') for a source given with its derivatives up to order 4."""
        f_stack = np.asarray(f_stack)
        if f_stack.shape[0] < 5:
            raise ConfigError("the singular source needs derivatives up to order four")
        return self.solve_exact(self.eps * f_stack[4], tol=tol)

    def airy(self, stack):
        """Airy operator applied to a stack with derivatives up to order four (full grid)."""
        fr = self.mg.frame
        V = self.mg.U[0] - fr.c + 2 * self.eps * self.alpha**2
        return self.eps * stack[4] - V * stack[2]
