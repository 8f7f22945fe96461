"""scikit-learn style wrapper around the eigenvalue solver."""

import numpy as np
from sklearn.base import BaseEstimator

from .dispersion import solve_eigenvalue
from .errors import NumericalFailure
from .profile import ShearProfile


class OrrSommerfeldEigenSolver(BaseEstimator):
    """Unstable eigenvalue c(alpha, R) of a boundary-layer profile.

    Rows of X are (alpha, R).  ``fit`` solves at the given points and keeps
    the roots; ``predict`` solves at new points, starting each Muller
    iteration from the fitted root with the closest (log alpha, log R).
    Points where the solver fails give NaN unless ``raise_on_failure``.
    """

    def __init__(self, profile="exponential", profile_params=(), mode="full", tol=1e-10,
                 maxiter=40, raise_on_failure=False):
        self.profile = profile
        self.profile_params = profile_params
        self.mode = mode
        self.tol = tol
        self.maxiter = maxiter
        self.raise_on_failure = raise_on_failure

    def _profile(self):
        return ShearProfile(self.profile, tuple(self.profile_params))

    @staticmethod
    def _check_X(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != 2 or np.any(X <= 0):
            raise ValueError("X must have rows (alpha, R) with positive entries")
        return X

    def _solve(self, prof, alpha, R, c0):
        try:
            return solve_eigenvalue(prof, alpha, R, c0, self.mode, self.tol, self.maxiter)
        except NumericalFailure:
            if self.raise_on_failure:
                raise
            return None

    def fit(self, X, y=None):
        X = self._check_X(X)
        prof = self._profile()
        self.results_ = [self._solve(prof, a, R, None) for a, R in X]
        self.X_fit_ = X
        self.eigenvalues_ = np.array([r.c if r else np.nan + 0j for r in self.results_])
        return self

    def _warm_start(self, alpha, R):
        ok = np.isfinite(self.eigenvalues_)
        if not ok.any():
            return None
        logs = np.log(self.X_fit_[ok])
        j = np.argmin(np.sum((logs - np.log([alpha, R])) ** 2, axis=1))
        a0, c0 = self.X_fit_[ok][j, 0], self.eigenvalues_[ok][j]
        return c0.real * alpha / a0 + 1j * c0.imag

    def predict(self, X):
        if not hasattr(self, "eigenvalues_"):
            raise AttributeError("call fit before predict")
        X = self._check_X(X)
        prof = self._profile()
        out = []
        for a, R in X:
            r = self._solve(prof, a, R, self._warm_start(a, R))
            out.append(r.c if r else np.nan + 0j)
        return np.array(out)

    def growth_rate(self, X):
        """alpha Im c for the predicted eigenvalues."""
        X = self._check_X(X)
        return X[:, 0] * self.predict(X).imag
