"""Shear profiles U(z) that can be evaluated at complex z near the real axis."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import NoConvergence, OutsideAnalyticityStrip

KINDS = ("exponential", "tanh", "blasius")
_ALIASES = {"exp": "exponential", "exponential": "exponential", "tanh": "tanh", "blasius": "blasius"}

BLASIUS_ZMAX = 15.0
_BLASIUS_STEP = 0.05
_TAYLOR_TERMS = 24


def _blasius_rhs(_, y):
    return [y[1], y[2], -0.5 * y[0] * y[2]]


def _blasius_shoot(s):
    sol = solve_ivp(_blasius_rhs, (0.0, BLASIUS_ZMAX), [0.0, 0.0, s],
                    method="DOP853", rtol=1e-13, atol=1e-14)
    return sol.y[1, -1] - 1.0


@lru_cache(maxsize=1)
def blasius_table():
    """Nodes and (f, f', f'') of the Blasius solution f''' + f f''/2 = 0."""
    s = brentq(_blasius_shoot, 0.2, 0.5, xtol=1e-15)
    nodes = np.arange(0.0, BLASIUS_ZMAX + 0.5 * _BLASIUS_STEP, _BLASIUS_STEP)
    sol = solve_ivp(_blasius_rhs, (0.0, BLASIUS_ZMAX), [0.0, 0.0, s], method="DOP853",
                    rtol=1e-13, atol=1e-14, t_eval=nodes)
    return nodes, sol.y.T.copy(), s


def _blasius_taylor(f0):
    """Taylor coefficients of f around a node from the values (f, f', f'')."""
    a = np.zeros((_TAYLOR_TERMS + 6,) + f0.shape[1:], dtype=complex)
    a[0], a[1], a[2] = f0[0], f0[1], f0[2] / 2
    for n in range(a.shape[0] - 3):
        conv = sum(a[k] * (n - k + 2) * (n - k + 1) * a[n - k + 2] for k in range(n + 1))
        a[n + 3] = -0.5 * conv / ((n + 3) * (n + 2) * (n + 1))
    return a


@dataclass(frozen=True)
class ShearProfile:
    """Monotone boundary-layer profile with U(0) = 0 and U -> 1.

    ``params`` is a tuple of reals; the built-in kinds use the first entry as a
    length scale (default 1).
    """

    kind: str = "exponential"
    params: tuple = ()
    U_plus: float = field(init=False, default=1.0)
    U0: float = field(init=False, default=0.0)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.scale <= 0:
            raise ValueError("profile length scale must be positive")

    @property
    def scale(self):
        return self.params[0] if self.params else 1.0

    @property
    def margin(self):
        """Half-width of the strip around the real axis where U is evaluated."""
        return 0.2 * self.scale if self.kind == "blasius" else 0.5 * self.scale

    @property
    def eta0(self):
        """Exponential decay rate of U - U_+."""
        return {"exponential": 1.0, "tanh": 2.0, "blasius": 1.0}[self.kind] / self.scale

    @property
    def z_max(self):
        """Truncation point where |U - U_+| and its derivatives are below 1e-14."""
        if self.kind == "blasius":
            return BLASIUS_ZMAX * self.scale
        return 14 * np.log(10) / self.eta0 + 1.0

    @property
    def U0_prime(self):
        return float(self(0.0, 1).real)

    def __call__(self, z, order=0):
        return self.eval(z, order)

    def eval(self, z, order=0):
        """order-th derivative of U at (possibly complex) z."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z.imag) > self.margin + 1e-12):
            raise OutsideAnalyticityStrip(
                f"|Im z| exceeds the analyticity margin {self.margin} of the {self.kind} profile")
        L = self.scale
        x = z / L
        if self.kind == "exponential":
            v = np.exp(-x)
            out = 1 - v if order == 0 else -((-1) ** order) * v
        elif self.kind == "tanh":
            out = _tanh_derivative(x, order)
        else:
            out = _blasius_derivative(x, order)
        return out / L**order

    def critical_point(self, c, tol=1e-13, maxiter=50):
        """Solve U(z_c) = c by Newton's method from the real seed U(x) = Re c."""
        c = complex(c)
        if abs(c - self.U0) < 1e-15:
            return 0j
        x = _real_seed(self, c.real)
        z = complex(x)
        for _ in range(maxiter):
            step = (complex(self(z)) - c) / complex(self(z, 1))
            z -= step
            if abs(complex(self(z)) - c) <= tol:
                return z
        raise NoConvergence(f"critical point for c={c} did not converge")


def _real_seed(profile, target):
    if target <= profile.U0:
        return 0.0
    hi = 1.0
    while profile(hi).real < target and hi < 1e3:
        hi *= 2
    if profile(hi).real < target:
        return hi
    return brentq(lambda x: profile(x).real - target, 0.0, hi, xtol=1e-15)


def _tanh_derivative(x, order):
    t = np.tanh(x)
    s = 1 - t * t
    if order == 0:
        return t
    if order == 1:
        return s
    if order == 2:
        return -2 * t * s
    if order == 3:
        return s * (6 * t * t - 2)
    if order == 4:
        return s * (16 * t - 24 * t**3)
    raise ValueError("order must be in 0..4")


def _blasius_derivative(x, order):
    if not 0 <= order <= 4:
        raise ValueError("order must be in 0..4")
    nodes, vals, _ = blasius_table()
    out = np.zeros_like(x)
    far = x.real >= BLASIUS_ZMAX
    if order == 0:
        out[far] = 1.0
    near = ~far
    if near.any():
        xn = x[near]
        idx = np.clip(np.rint(xn.real / _BLASIUS_STEP).astype(int), 0, len(nodes) - 1)
        h = xn - nodes[idx]
        a = _blasius_taylor(vals[idx].T)
        # U^{(order)} = f^{(order+1)}
        d = order + 1
        total = np.zeros_like(h)
        for n in range(a.shape[0] - 1, d - 1, -1):
            fall = np.prod(np.arange(n - d + 1, n + 1))
            total = total * h + a[n] * fall
        out[near] = total
    return out
