"""Slow and fast Orr-Sommerfeld modes built by alternating Green-function solves.

Orr = Ray_alpha + Diff with Diff(phi) = -eps (d^2 - alpha^2)^2 phi, and also
Orr = -Airy + Reg with Reg(phi) = -(eps alpha^4 + U'' + alpha^2 (U - c)) phi.

One sweep of the iteration takes a defect O = Orr(current mode) that comes
from the regular part, removes it with an exact Rayleigh solve
psi = -RS_inf(O), and then removes the viscous defect D = Diff(psi) with an
exact Airy solve near the wall (cut off by chi) and a smooth outer solve away
from it.  What is left is Reg of the Airy corrections, which is smaller by a
factor that vanishes with delta and alpha.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse.linalg import LinearOperator, gmres

from .airyop import AiryKernel
from .errors import NoConvergence
from .grid import chebyshev, chebyshev_interp
from .langer import MasterGrid
from .rayleigh import RayleighSolver, sup
from .specialfn import ai, zeta

ITER_TOL = 1e-11
ITER_MAX = 40
OUTER_POINTS = 240


def chi(z, orders=0):
    """Smooth cut-off: 1 on [0, 1], 0 on [2, inf), C-infinity in between.

    chi = 1 - s(-g(t)) with t = z - 1, g = 1/t - 1/(1 - t) and s the logistic
    function.  With ``orders`` > 0 the derivatives up to that order are
    returned as a stack, by Faa di Bruno's formula.
    """
    z = np.asarray(z, dtype=float)
    t = z - 1.0
    inside = (t > 0) & (t < 1)
    out = np.zeros((orders + 1,) + z.shape)
    out[0] = np.where(t <= 0, 1.0, 0.0)
    ti = t[inside]
    u, v = 1.0 / ti, 1.0 / (1.0 - ti)
    h = [v - u, u**2 + v**2, 2 * (v**3 - u**3), 6 * (u**4 + v**4), 24 * (v**5 - u**5)]
    with np.errstate(over="ignore"):
        sg = 1.0 / (1.0 + np.exp(-h[0]))
    s1 = sg * (1 - sg)
    ds = [sg, s1, s1 * (1 - 2 * sg), s1 * (1 - 6 * sg + 6 * sg**2),
          s1 * (1 - 2 * sg) * (1 - 12 * sg + 12 * sg**2)]
    comp = [ds[0],
            ds[1] * h[1],
            ds[2] * h[1] ** 2 + ds[1] * h[2],
            ds[3] * h[1] ** 3 + 3 * ds[2] * h[1] * h[2] + ds[1] * h[3],
            (ds[4] * h[1] ** 4 + 6 * ds[3] * h[1] ** 2 * h[2] + 3 * ds[2] * h[2] ** 2
             + 4 * ds[2] * h[1] * h[3] + ds[1] * h[4])]
    out[0][inside] = 1.0 - comp[0]
    for k in range(1, orders + 1):
        out[k][inside] = -comp[k]
    return out if orders else out[0]


@dataclass
class Mode:
    """A constructed mode on the master grid.

    ``stack`` holds phi, phi', phi'' at the nodes; ``residual`` is the
    Orr-Sommerfeld defect assembled from the solver identities and
    ``scale`` the size of the Rayleigh terms used to normalise it.
    """

    name: str
    stack: np.ndarray
    residual: np.ndarray
    scale: float
    sweeps: int
    wall: np.ndarray = field(default=None)

    @property
    def relative_residual(self):
        return sup(self.residual) / self.scale

    @property
    def log_derivative(self):
        return self.wall[1] / self.wall[0]


class ModeBuilder:
    """Shared solvers for the two modes of one (alpha, R, c) frame."""

    def __init__(self, frame, mgrid=None, tol=ITER_TOL, maxiter=ITER_MAX):
        self.frame = frame
        self.mg = mgrid if mgrid is not None else MasterGrid(frame)
        self.rs = RayleighSolver(self.mg)
        self.ak = AiryKernel(self.mg)
        self.tol = tol
        self.maxiter = maxiter
        fr, U = frame, self.mg.U
        a, eps = fr.alpha, fr.epsilon
        self.eps, self.alpha = eps, a
        self.d = U[0] - fr.c
        self.V = self.d + 2 * eps * a * a
        self.r = np.array([eps * a**4 + U[2] + a * a * self.d, U[3] + a * a * U[1], U[4] + a * a * U[2]])
        self.X = chi(self.mg.nodes, 4)
        self.chi = self.X[0]
        self.ramp = (self.mg.nodes > 1.0) & (self.mg.nodes < 2.0)

    # -- operator pieces ------------------------------------------------------
    def reg(self, f):
        """Reg and its first two derivatives for a stack (f, f', f'')."""
        r = self.r
        return -np.array([r[0] * f[0], r[1] * f[0] + r[0] * f[1],
                          r[2] * f[0] + 2 * r[1] * f[1] + r[0] * f[2]])

    def _quotient(self, rho, O=None):
        """q = (U'' rho - O)/(U - c) and two derivatives, so that rho'' = alpha^2 rho + q."""
        U, d = self.mg.U, self.d
        n = U[2] * rho[0]
        n1 = U[3] * rho[0] + U[2] * rho[1]
        n2 = U[4] * rho[0] + 2 * U[3] * rho[1] + U[2] * rho[2]
        if O is not None:
            n, n1, n2 = n - O[0], n1 - O[1], n2 - O[2]
        d1, d2 = U[1], U[2]
        q = n / d
        q1 = n1 / d - n * d1 / d**2
        q2 = n2 / d - 2 * n1 * d1 / d**2 - n * d2 / d**2 + 2 * n * d1**2 / d**3
        return q, q1, q2

    def diff_of_rayleigh(self, rho, O=None):
        """Diff(rho) for rho with Ray(rho) = -O, from the Rayleigh equation."""
        q, _, q2 = self._quotient(rho, O)
        return -self.eps * (q2 - self.alpha**2 * q)

    def _outer_system(self):
        if getattr(self, "_outer", None) is None:
            zmax = self.mg.z_max
            x, D = chebyshev(OUTER_POINTS, 1.0, zmax)
            prof, c = self.frame.profile, self.frame.c
            V = prof(x) - c + 2 * self.eps * self.alpha**2
            M = self.eps * (D @ D) - np.diag(V)
            M[0] = 0.0
            M[-1] = 0.0
            M[0, 0] = M[-1, -1] = 1.0
            self._outer = (x, D, V, lu_factor(M))
        return self._outer

    def outer_solve(self, src):
        """J with Airy(J) = src for a smooth source supported in [1, z_max].

        J'' = Phi solves eps Phi'' - V Phi = src.  The source vanishes to all
        orders at z = 1 and is negligible at z_max, so the outer solution has
        no boundary layers and Phi = 0 at both ends selects it; the problem is
        solved by Chebyshev collocation, which is well conditioned because
        Re V > 0 there.  J is the double primitive of Phi from +inf.
        Returns the stack (J, J', J'') and the collocation defect.
        """
        g, z = self.mg.grid, self.mg.nodes
        x, D, V, lu = self._outer_system()
        zmax = self.mg.z_max
        f = g.interp(src, x)
        rhs = f.copy()
        rhs[0] = rhs[-1] = 0.0
        phi = lu_solve(lu, rhs)
        defect_c = self.eps * (D @ (D @ phi)) - V * phi - f
        right = z >= 1.0
        zr = z[right]
        ip = chebyshev_interp(phi, 1.0, zmax, zr)
        full = np.zeros(z.size, dtype=complex)
        full[right] = ip
        c0 = g.cumint_right(full)
        c1 = g.cumint_right(z * full)
        out = np.array([c1 - z * c0, -c0, full])
        defect = np.zeros(z.size, dtype=complex)
        defect[right] = chebyshev_interp(defect_c, 1.0, zmax, zr)
        return out, defect

    def rayleigh_scale(self, stack):
        U, a = self.mg.U, self.alpha
        return sup(np.abs(self.d) * (np.abs(stack[2]) + a * a * np.abs(stack[0])) + np.abs(U[2] * stack[0]))

    # -- iteration -------------------------------------------------------------
    def _viscous_step(self, rho, O, total, defect):
        """Remove the viscous defect Diff(rho) of a Rayleigh solution (Ray(rho) = -O).

        Near the wall the correction is B = -chi rho + AS_inf(S).  Because
        Airy(-rho) = Diff(rho) + Ray(rho) - Reg(rho), the source
        S = [chi, Airy](rho) + chi (Reg(rho) - Ray(rho)) involves rho only up
        to its second derivative inside the critical layer, whereas
        chi Diff(rho) grows like (z - z_c)^-3 there.  Away from the wall
        (1 - chi) Diff(rho) goes to the outer solve.
        Returns the next regular defect Reg(B + J).
        """
        a, eps = self.alpha, self.eps
        q, q1, q2 = self._quotient(rho, O)
        D = -eps * (q2 - a * a * q)
        X, ramp = self.X, self.ramp
        # third and fourth derivatives of rho, needed only where chi varies
        r3 = np.zeros_like(rho[0])
        r4 = np.zeros_like(rho[0])
        r3[ramp] = a * a * rho[1][ramp] + q1[ramp]
        r4[ramp] = a * a * rho[2][ramp] + q2[ramp]
        comm = (eps * (4 * X[1] * r3 + 6 * X[2] * rho[2] + 4 * X[3] * rho[1] + X[4] * rho[0])
                - self.V * (2 * X[1] * rho[1] + X[2] * rho[0]))
        S = comm + X[0] * (self.reg(rho)[0] - self.rs.ray(rho))
        Bt = self.ak.solve_exact(S)
        cut = np.array([X[0] * rho[0], X[1] * rho[0] + X[0] * rho[1],
                        X[2] * rho[0] + 2 * X[1] * rho[1] + X[0] * rho[2]])
        B = Bt[:3] - cut
        J, jdef = self.outer_solve((1 - X[0]) * D)
        total += B + J
        defect -= (self.ak.airy(Bt) - S) + jdef
        return self.reg(B + J)

    def _correction(self, O):
        """One sweep for a defect stack O: (psi + B + J, solver defects, next defect)."""
        psi = -self.rs.solve_exact(O[0])
        total = psi.copy()
        defect = self.rs.ray(psi) + O[0]
        nxt = self._viscous_step(psi, O, total, defect)
        return total, defect, nxt

    def _sweep(self, O, total, defect, scale):
        """Drive the regular defect O to zero; Neumann sweeps, GMRES if they stall."""
        start_total, start_defect, O1 = total.copy(), defect.copy(), O
        sweeps, bad, prev = 0, 0, sup(O[0])
        while sup(O[0]) > self.tol * scale:
            if sweeps >= self.maxiter or bad >= 2:
                total[:] = start_total
                defect[:] = start_defect
                return self._solve_linear(O1, total, defect, scale)
            corr, dfc, O = self._correction(O)
            total += corr
            defect += dfc
            sweeps += 1
            size = sup(O[0])
            bad = bad + 1 if size > 0.9 * prev else 0
            prev = size
        defect += O[0]
        return sweeps

    def _solve_linear(self, O1, total, defect, scale):
        """Sum all sweeps at once: (I - T) S = O1 with T one sweep of the iteration."""
        n = O1.shape[1]
        w = np.array([sup(O1[k]) or 1.0 for k in range(3)])
        count = [0]

        def matvec(x):
            count[0] += 1
            S = x.reshape(3, n) * w[:, None]
            _, _, nxt = self._correction(S)
            return ((S - nxt) / w[:, None]).ravel()

        op = LinearOperator((3 * n, 3 * n), matvec=matvec, dtype=complex)
        b = (O1 / w[:, None]).ravel()
        x, info = gmres(op, b, rtol=1e-13, atol=0.0, restart=60, maxiter=4)
        S = x.reshape(3, n) * w[:, None]
        corr, dfc, nxt = self._correction(S)
        total += corr
        defect += dfc + (O1 - S + nxt)[0]
        if sup(O1[0] - S[0] + nxt[0]) > 1e3 * self.tol * scale:
            raise NoConvergence(f"mode iteration stalled (GMRES info {info})")
        return count[0]

    def _finish(self, name, total, defect, sweeps):
        g = self.mg.grid
        wall = np.array([g.interp(total[0], 0.0)[0], g.interp(total[1], 0.0)[0]])
        return Mode(name, total, defect, self.rayleigh_scale(total), sweeps, wall)

    def slow_mode(self):
        """phi_1: exact Rayleigh mode plus viscous corrections."""
        ray = self.rs.mode_minus()
        total = ray.copy()
        defect = self.rs.ray(ray).astype(complex)
        scale = self.rayleigh_scale(ray)
        O = self._viscous_step(ray, None, total, defect)
        sweeps = 1 + self._sweep(O, total, defect, scale)
        return self._finish("slow", total, defect, sweeps)

    def fast_stack(self):
        """phi_30 = Ai(2, Z)/Ai(2, Z(0)) with derivatives 0..4 and its Airy image."""
        ak, mg = self.ak, self.mg
        dl = self.frame.delta
        Z, zn = ak.Z, ak.zn
        Z0 = mg.Z_edges[0]
        m2, m1 = ai(2, Z, True), ai(1, Z, True)
        m0, mp = ak.mA, ak.mAp
        scale = np.exp(zeta(Z0) - zn) / ai(2, np.array([Z0]), True)[0]
        A1, A2, A3, A4 = (scale * m for m in (m1, m0, mp, Z * m0))
        A0 = scale * m2
        e = ak.eta
        z1, z2, z3, z4 = e[1] / dl, e[2] / dl, e[3] / dl, e[4] / dl
        f1 = A1 * z1
        f2 = A2 * z1**2 + A1 * z2
        f3 = A3 * z1**3 + 3 * A2 * z1 * z2 + A1 * z3
        rest = 6 * A3 * z1**2 * z2 + 3 * A2 * z2**2 + 4 * A2 * z1 * z3 + A1 * z4
        f4 = A4 * z1**4 + rest
        eps, a = self.eps, self.alpha
        airy = eps * rest - ak.d * A1 * z2 - 2 * eps * a * a * f2
        stack = ak._pad(np.array([A0, f1, f2, f3, f4]))
        return stack, ak._pad(airy)

    def fast_mode(self):
        """phi_3: Airy primitive boundary-layer mode with its corrections."""
        phi, image = self.fast_stack()
        corr = -self.ak.solve_exact(image)
        total = phi[:3] + corr[:3]
        defect = -(image + self.ak.airy(corr))
        O = self.reg(total)
        scale = self.rayleigh_scale(phi[:3])
        sweeps = self._sweep(O, total, defect, scale)
        return self._finish("fast", total, defect, sweeps)
