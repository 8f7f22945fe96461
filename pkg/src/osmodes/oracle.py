"""Independent check: Chebyshev collocation of the Orr-Sommerfeld problem.

With psi = (D^2 - alpha^2) phi the equation becomes the first-order-in-c
pencil

    psi - (D^2 - alpha^2) phi = 0
    -eps (D^2 - alpha^2) psi + U psi - U'' phi = c psi

on [0, z_max], mapped algebraically from the Chebyshev interval so that
half of the points sit within ``z_half`` of the wall.  The wall rows impose
phi = phi' = 0.  At z_max the rows impose the far-field behaviour of the
decaying solutions, phi' + alpha phi = 0 and psi = 0, which is exact for
U = U_+ up to the exponentially small fast component.
"""

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import IllConditioned, NoConvergence, SingularShift
from .grid import chebyshev

DEFAULT_N = 400
MAX_N = 2000
COND_LIMIT = 1e13
SHIFT_NUDGE = 1e-8j


class Pencil:
    """Matrices of A v = c B v plus the collocation points; unpacks as (A, B)."""

    def __init__(self, A, B, z, D1, alpha):
        self.A, self.B, self.z, self.D1, self.alpha = A, B, z, D1, alpha
        self.n = len(z)

    def __iter__(self):
        return iter((self.A, self.B))

    def split(self, v):
        """(phi, psi) parts of a pencil vector."""
        return v[:self.n], v[self.n:]


def mapped_grid(N, z_max, z_half=1.0):
    """Points z = l s / (1 - s + l/L) with s in [0, 1] (z[0] = 0) and d/dz."""
    if not 0 < 2 * z_half < z_max:
        raise ValueError("z_half must lie in (0, z_max/2)")
    s, Ds = chebyshev(N, 0.0, 1.0)
    s, Ds = s[::-1], Ds[::-1, ::-1]
    L = z_max
    l = z_half * L / (L - 2 * z_half)
    z = l * s / (1 - s + l / L)
    dzds = l * (1 + l / L) / (1 - s + l / L) ** 2
    return z, Ds / dzds[:, None]


def assemble_pencil(profile, alpha, R, N=DEFAULT_N, z_max=None, z_half=1.0):
    if N > MAX_N:
        raise ValueError(f"N must not exceed {MAX_N}")
    z_max = float(z_max if z_max is not None else profile.z_max)
    z, D1 = mapped_grid(N, z_max, z_half)
    D2 = D1 @ D1
    n = N + 1
    I = np.eye(n)
    lap = D2 - alpha**2 * I

    # condition of the Dirichlet-bordered second-derivative operator
    probe = lap.copy()
    probe[0], probe[-1] = I[0], I[-1]
    cond = np.linalg.cond(probe)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditioned(f"differentiation condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}")

    U = profile(z).real
    U2 = profile(z, 2).real
    eps = 1.0 / (1j * alpha * R)
    A = np.zeros((2 * n, 2 * n), dtype=complex)
    B = np.zeros_like(A)
    A[:n, :n] = -lap
    A[:n, n:] = I
    A[n:, :n] = -np.diag(U2)
    A[n:, n:] = -eps * lap + np.diag(U)
    B[n:, n:] = I

    # wall: phi(0) = 0 in a phi row, phi'(0) = 0 in a psi row
    A[0] = 0.0
    A[0, 0] = 1.0
    A[n] = 0.0
    B[n] = 0.0
    A[n, :n] = D1[0]
    # far field: phi' + alpha phi = 0, psi = 0
    A[N] = 0.0
    A[N, :n] = D1[N] + alpha * I[N]
    A[n + N] = 0.0
    B[n + N] = 0.0
    A[n + N, n + N] = 1.0
    return Pencil(A, B, z, D1, alpha)


def _factor(M):
    lu, piv = lu_factor(M, check_finite=True)
    d = np.abs(np.diag(lu))
    if d.min() <= 1e-14 * d.max():
        raise SingularShift("shift coincides with an eigenvalue of the discrete pencil")
    return lu, piv


def nearest_eigenvalue(pencil, shift, tol=1e-10, maxiter=200):
    """Shift-inverted power iteration on (A - shift B)^-1 B.

    Returns (c, v) with v normalised to unit 2-norm.  The eigenvalue is the
    Rayleigh-type quotient (Bv, Av)/(Bv, Bv) and the iteration stops when it
    moves by less than ``tol``.
    """
    A, B = pencil.A, pencil.B
    shift = complex(shift)
    try:
        fac = _factor(A - shift * B)
    except SingularShift:
        shift += SHIFT_NUDGE
        fac = _factor(A - shift * B)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(A.shape[0]) + 1j * rng.standard_normal(A.shape[0])
    v /= np.linalg.norm(v)
    lam = None
    for _ in range(maxiter):
        w = lu_solve(fac, B @ v)
        v = w / np.linalg.norm(w)
        Bv = B @ v
        new = np.vdot(Bv, A @ v) / np.vdot(Bv, Bv)
        if lam is not None and abs(new - lam) < tol:
            return complex(new), v
        lam = new
    raise NoConvergence(f"shift-invert iteration did not settle in {maxiter} steps")


def pencil_residual(pencil, c, v):
    return np.linalg.norm(pencil.A @ v - c * (pencil.B @ v)) / np.linalg.norm(v)


def oracle_eigenvalue(profile, alpha, R, shift, N=DEFAULT_N, z_max=None, z_half=1.0):
    pen = assemble_pencil(profile, alpha, R, N, z_max, z_half)
    c, v = nearest_eigenvalue(pen, shift)
    return c, v, pen
