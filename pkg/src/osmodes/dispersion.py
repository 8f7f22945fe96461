"""Dispersion relation, eigenvalue solves and marginal-stability sweeps.

The full dispersion function is the mismatch of boundary log-derivatives

    F(c) = phi_1'(0)/phi_1(0) - phi_3'(0)/phi_3(0),

each evaluation rebuilding the critical-layer frame and both modes at the
trial c.  The surrogate replaces both ratios by their leading terms,

    Fs(c) = U_0 - c + alpha (U_+ - U_0)^2 / U_0' - delta C_Ai(eta(0)/delta).
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from .errors import (BasinEscape, DegenerateTrace, NoConvergence, NoSignChange,
                     NumericalFailure)
from .langer import CriticalLayerFrame, MasterGrid
from .modes import ModeBuilder
from .rayleigh import RayleighSolver
from .specialfn import c_ai

ROOT_TOL = 1e-10
ROOT_MAXITER = 40
TINY_TRACE = 1e-280


@dataclass(frozen=True)
class DispersionResult:
    alpha: float
    R: float
    c: complex
    F_abs: float
    scale: float
    iterations: int
    mode: str = "full"
    traces: tuple = ()
    residuals: tuple = ()
    trace_condition: float = float("nan")
    max_residual: float = float("nan")
    A: float = None
    beta: float = None

    @property
    def growth_product(self):
        return self.alpha * self.c.imag * math.sqrt(self.R)

    def to_dict(self):
        d = asdict(self)
        d["c"] = [self.c.real, self.c.imag]
        d["traces"] = [[t.real, t.imag] for t in self.traces]
        d["residuals"] = list(self.residuals)
        d["growth_product"] = self.growth_product
        return d


@dataclass
class Evaluation:
    """One evaluation of the dispersion function at a trial c."""

    c: complex
    F: complex
    scale: float
    G: complex = None
    traces: tuple = ()
    residuals: tuple = ()
    trace_condition: float = float("nan")
    frame: object = field(default=None, repr=False)


def _frame(profile, alpha, R, c):
    return CriticalLayerFrame(profile, alpha, R, c)


def dispersion_value(frame, grid_options=None):
    """Full F(c) at the frame's (alpha, R, c) with the scale |phi_3'(0)/phi_3(0)|."""
    mg = MasterGrid(frame, **(grid_options or {}))
    mb = ModeBuilder(frame, mg)
    slow, fast = mb.slow_mode(), mb.fast_mode()
    s0, s1 = slow.wall
    f0, f1 = fast.wall
    if abs(s0) < TINY_TRACE or abs(f0) < TINY_TRACE:
        raise DegenerateTrace("a boundary value of the slow or fast mode underflows")
    ratio3 = f1 / f0
    M = np.array([[s0, f0], [s1, f1]])
    # columns normalised so the condition number measures only their angle
    M = M / np.linalg.norm(M, axis=0)
    G = s0 / s1 - f0 / f1
    return Evaluation(frame.c, s1 / s0 - ratio3, abs(ratio3), G, (s0, s1, f0, f1),
                      (slow.relative_residual, fast.relative_residual), np.linalg.cond(M), frame)


def surrogate_value(frame):
    """Leading-order dispersion function Fs(c); its scale is 1 (Fs is measured in units of c)."""
    p, a, c = frame.profile, frame.alpha, frame.c
    jump = p.U_plus - p.U0
    Y0 = complex(frame.eta(np.array([0.0]))[0]) / frame.delta
    F = p.U0 - c + a * jump**2 / p.U0_prime - frame.delta * complex(c_ai(Y0))
    return Evaluation(c, F, 1.0, F, frame=frame)


def evaluate(profile, alpha, R, c, mode="full", grid_options=None):
    if mode not in ("full", "surrogate"):
        raise ValueError(f"unknown dispersion mode {mode!r}")
    if not np.isfinite(c):
        raise NoConvergence("non-finite trial eigenvalue")
    fr = _frame(profile, alpha, R, c)
    e = surrogate_value(fr) if mode == "surrogate" else dispersion_value(fr, grid_options)
    if not (np.isfinite(e.F) and np.isfinite(e.G)):
        raise NoConvergence(f"dispersion function is not finite at c = {c}")
    return e


def initial_guess(alpha, R, profile):
    """c_0 = U(z_c0) + i|delta| with z_c0 = alpha (U_+ - U_0)^2 / U_0'^2."""
    U1 = profile.U0_prime
    zc0 = alpha * (profile.U_plus - profile.U0) ** 2 / U1**2
    Uc1 = float(profile(zc0, 1).real)
    delta = (alpha * R * Uc1) ** (-1.0 / 3.0)
    return complex(profile(zc0).real) + 1j * delta


def muller(func, x0, x1, x2, done, maxiter=ROOT_MAXITER, guard=None):
    """Muller iteration on three complex points, secant step when the parabola degenerates.

    ``func`` returns an object whose attribute G is the function whose zero
    is sought; ``done(value)`` decides
    convergence and ``guard(x)`` may raise to stop an escaping iterate.
    A trial point whose evaluation fails is pulled halfway back to the
    previous iterate (at most 6 times).
    Returns (value, iterations).
    """

    def safe(x, base):
        for _ in range(6):
            if guard is not None:
                guard(x)
            try:
                return x, func(x)
            except NumericalFailure:
                x = base + 0.5 * (x - base)
        raise NoConvergence("dispersion function could not be evaluated near the iterate")

    pts = [x0, x1, x2]
    vals = [func(x) for x in pts]
    for v in vals:
        if done(v):
            return v, 0
    for k in range(1, maxiter + 1):
        (a0, a1, a2), (f0, f1, f2) = pts, [v.G for v in vals]
        h1, h2 = a1 - a0, a2 - a1
        d1, d2 = (f1 - f0) / h1, (f2 - f1) / h2
        A = (d2 - d1) / (h2 + h1)
        B = A * h2 + d2
        disc = np.sqrt(B * B - 4 * A * f2)
        den = B + disc if abs(B + disc) >= abs(B - disc) else B - disc
        if abs(den) > 0 and np.isfinite(den):
            step = -2 * f2 / den
        elif d2 != 0:
            step = -f2 / d2
        else:
            raise NoConvergence("flat dispersion function")
        if not np.isfinite(step) or a2 + step == a2:
            raise NoConvergence(f"Muller iteration stagnated at c = {a2} (|F| = {abs(vals[-1].F):.3e})")
        x, v = safe(a2 + step, a2)
        pts = [a1, a2, x]
        vals = [vals[1], vals[2], v]
        if done(v):
            return v, k
    raise NoConvergence(f"root not found in {maxiter} iterations (|G| = {abs(vals[-1].G):.3e})")


def solve_eigenvalue(profile, alpha, R, c0=None, mode="full", tol=ROOT_TOL,
                     maxiter=ROOT_MAXITER, grid_options=None, A=None, beta=None):
    """Root of the (full or surrogate) dispersion function near c0.

    The iteration runs on the reciprocal form G = phi_1/phi_1' - phi_3/phi_3'
    at the wall, which is close to linear in c (the log-derivative of phi_1
    has a pole next to the root).  Convergence is still judged on
    |F| < tol * scale(F).
    """
    if c0 is None:
        c0 = initial_guess(alpha, R, profile)
    c0 = complex(c0)
    dmag = (alpha * R * profile.U0_prime) ** (-1.0 / 3.0)
    radius = 10 * (alpha + dmag)

    def guard(c):
        if abs(c - profile.U0) > radius:
            raise BasinEscape(f"iterate c = {c} left the disc |c - U_0| <= {radius:.3g}")

    history = []

    def func(c):
        e = evaluate(profile, alpha, R, c, mode, grid_options)
        history.append(e)
        return e

    h = 1e-3 * abs(c0)
    v, its = muller(func, c0 - h, c0 + h, c0 + 1j * h,
                    lambda e: abs(e.F) < tol * e.scale, maxiter, guard)
    # at a root the trace columns are parallel by construction, so the
    # independence of the two modes is judged at the starting point
    worst = max((max(e.residuals) for e in history if e.residuals), default=float("nan"))
    return DispersionResult(alpha, R, v.c, abs(v.F), v.scale, its, mode, v.traces,
                            v.residuals, history[0].trace_condition, worst, A, beta)


def _solve_point(profile, beta, A, R, mode, grid_options, c0):
    alpha = A * R ** (-beta)
    try:
        return solve_eigenvalue(profile, alpha, R, c0, mode, grid_options=grid_options, A=A, beta=beta)
    except NumericalFailure as exc:
        return exc


def trace_branch(profile, R_list, beta, A, mode="full", workers=1, grid_options=None):
    """Eigenvalues along alpha = A R^-beta; failed points come back as the raised exception.

    Results are returned in the order of ``R_list`` whatever the worker count.
    """
    R_list = [float(R) for R in R_list]
    job = partial(_solve_point, profile, beta, A, mode=mode, grid_options=grid_options, c0=None)
    if workers > 1 and len(R_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(job, R_list))
    return [job(R) for R in R_list]


def growth_scaling(results):
    """alpha Im c sqrt(R) for each converged result (NaN for failed points)."""
    return [r.growth_product if isinstance(r, DispersionResult) else float("nan") for r in results]


@dataclass
class CriticalA:
    A_c: float
    bracket: tuple
    R: float
    beta: float
    evaluations: list
    zc_over_delta: complex = None


def find_critical_A(profile, R, beta=0.25, lo=0.1, hi=20.0, rtol=1e-3, scan=None,
                    mode="full", grid_options=None):
    """Lower-branch constant: smallest A where Im c(A R^-beta, R) turns positive.

    A coarse scan over ``scan`` (log-spaced from lo to hi by default) finds the
    first sign change; bisection in log A then shrinks the bracket to
    relative width ``rtol``.  Each solve starts from the root at the nearest
    A already solved, moved by the change of the leading-order guess.
    """
    if scan is None:
        scan = np.geomspace(lo, hi, 12)
    solved = []

    def imc(A):
        alpha = A * R ** (-beta)
        guess = None
        if solved:
            Ab, rb = min(solved, key=lambda t: abs(math.log(t[0] / A)))
            guess = rb.c + (initial_guess(alpha, R, profile) - initial_guess(rb.alpha, R, profile)).real
        try:
            res = solve_eigenvalue(profile, alpha, R, guess, mode, grid_options=grid_options,
                                   A=A, beta=beta)
        except NumericalFailure:
            if guess is None:
                raise
            res = solve_eigenvalue(profile, alpha, R, None, mode, grid_options=grid_options,
                                   A=A, beta=beta)
        solved.append((A, res))
        return res.c.imag

    a, b = None, None
    prev_A, prev_s = None, None
    for A in scan:
        s = imc(float(A))
        if prev_s is not None and prev_s < 0 < s:
            a, b = prev_A, float(A)
            break
        prev_A, prev_s = float(A), s
    if a is None:
        raise NoSignChange(f"Im c does not change from negative to positive on A in [{scan[0]}, {scan[-1]}]")
    while (b - a) > rtol * a:
        m = math.sqrt(a * b)
        if imc(m) < 0:
            a = m
        else:
            b = m
    A_c = math.sqrt(a * b)
    res = min(solved, key=lambda t: abs(t[0] - A_c))[1]
    fr = _frame(profile, res.alpha, R, res.c)
    return CriticalA(A_c, (a, b), R, beta, [r for _, r in sorted(solved, key=lambda t: t[0])],
                     fr.z_c / fr.delta)


def slow_remainder(profile, alpha, R=1e8, im_c=1e-10):
    """Imaginary remainder of the leading slow-mode boundary ratio.

    Evaluated on the inviscid slow mode phi_Ray,- at c = U(z_c0) + i im_c,
    so only the critical-layer logarithm contributes:
    Im[U_0' phi(0)/phi'(0)] + Im c (1 + 2 alpha (U_+ - U_0)/U_0').
    """
    U1, jump = profile.U0_prime, profile.U_plus - profile.U0
    zc0 = alpha * jump**2 / U1**2
    c = complex(profile(zc0).real) + 1j * im_c
    mg = MasterGrid(_frame(profile, alpha, R, c))
    phi = RayleighSolver(mg).mode_minus()
    g = mg.grid
    ratio = U1 * g.interp(phi[0], 0.0)[0] / g.interp(phi[1], 0.0)[0]
    return ratio.imag + im_c * (1 + 2 * alpha * jump / U1)


def blasius_dispersion_check(alphas=(0.02, 0.04), R=1e8, im_c=1e-10):
    """Slow-mode remainders for the Blasius and exponential profiles at matched alpha."""
    from .profile import ShearProfile

    blas, expo = ShearProfile("blasius"), ShearProfile("exponential")
    rows = []
    for a in alphas:
        rb = slow_remainder(blas, a, R, im_c)
        re = slow_remainder(expo, a, R, im_c)
        rows.append({"alpha": a, "blasius": rb, "exponential": re, "ratio": rb / re})
    out = {"rows": rows}
    if len(rows) >= 2:
        out["ratio_of_ratios"] = rows[-1]["ratio"] / rows[0]["ratio"]
        out["expected"] = (rows[-1]["alpha"] / rows[0]["alpha"]) ** 2
    return out
