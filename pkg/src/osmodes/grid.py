"""Composite Gauss-Legendre panel grids on a real interval.

Functions live as complex values at the panel nodes.  The grid supplies
per-panel spectral differentiation, cumulative integrals from either end,
barycentric interpolation, and cumulative integrals against an exponential
weight exp(+-(zeta(x) - zeta(z))) that never forms the large exponentials.
"""

import numpy as np
from numpy.polynomial import legendre

PANEL_ORDER = 16


def _reference(p):
    t, w = legendre.leggauss(p)
    bw = np.array([1.0 / np.prod(t[j] - np.delete(t, j)) for j in range(p)])
    bw /= np.abs(bw).max()
    diff = np.zeros((p, p))
    for i in range(p):
        for j in range(p):
            if i != j:
                diff[i, j] = bw[j] / bw[i] / (t[i] - t[j])
        diff[i, i] = -diff[i].sum()
    vander = legendre.legvander(t, p - 1)
    inv = np.linalg.inv(vander)
    prim = np.zeros((p, p))
    for k in range(p):
        coef = np.zeros(p)
        coef[k] = 1.0
        prim[:, k] = legendre.legval(t, legendre.legint(coef, lbnd=-1))
    integ = prim @ inv
    ends = legendre.legvander(np.array([-1.0, 1.0]), p - 1) @ inv
    return t, w, bw, diff, integ, ends


class PanelGrid:
    """Gauss-Legendre nodes on the panels delimited by ``edges``."""

    def __init__(self, edges, order=PANEL_ORDER):
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("panel edges must be strictly increasing")
        self.edges = edges
        self.order = order
        t, w, bw, diff, integ, ends = _reference(order)
        self._t, self._bw = t, bw
        self._diff, self._integ, self._ends = diff, integ, ends
        self.half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        self.x = mid[:, None] + self.half[:, None] * t
        self.w = self.half[:, None] * w
        self.nodes = self.x.ravel()
        self.weights = self.w.ravel()

    @property
    def n_panels(self):
        return len(self.half)

    @property
    def size(self):
        return self.nodes.size

    def _panels(self, f):
        return np.asarray(f).reshape(self.n_panels, self.order)

    def diff(self, f, k=1):
        g = self._panels(f).astype(complex)
        for _ in range(k):
            g = (g @ self._diff.T) / self.half[:, None]
        return g.ravel()

    def integrate(self, f):
        return np.sum(self.weights * np.asarray(f))

    def cumint(self, f):
        """Integral from the left end of the grid to each node."""
        g = self._panels(f)
        inner = (g @ self._integ.T) * self.half[:, None]
        totals = (g * self.w).sum(axis=1)
        offsets = np.concatenate(([0.0], np.cumsum(totals)[:-1]))
        return (inner + offsets[:, None]).ravel()

    def cumint_right(self, f):
        """Integral from each node to the right end of the grid."""
        return self.integrate(f) - self.cumint(f)

    def edge_values(self, f):
        """Values at the panel edges, taken from the panel to the left (right for the first edge)."""
        g = self._panels(f)
        right = g @ self._ends[1]
        left0 = g[0] @ self._ends[0]
        return np.concatenate(([left0], right))

    def interp(self, f, z):
        """Barycentric interpolation of node values at real points ``z``."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        j = np.clip(np.searchsorted(self.edges, z, side="right") - 1, 0, self.n_panels - 1)
        t = (z - 0.5 * (self.edges[j] + self.edges[j + 1])) / self.half[j]
        g = self._panels(f)[j]
        d = t[:, None] - self._t[None, :]
        exact = d == 0
        d[exact] = 1.0
        q = self._bw / d
        out = (q * g).sum(axis=1) / q.sum(axis=1)
        hit = exact.any(axis=1)
        if hit.any():
            out[hit] = g[hit][exact[hit]]
        return out

    def scaled_cumint(self, g, zeta_nodes, zeta_edges):
        """L(z) = int_a^z exp(zeta(x) - zeta(z)) g(x) dx at every node.

        ``zeta`` must have non-decreasing real part across the grid, which is
        the case for the decaying Airy exponent along the Langer map.
        """
        g = self._panels(g)
        zn = self._panels(zeta_nodes)
        ze = np.asarray(zeta_edges)
        ref = ze[1:]
        inner = ((g * np.exp(zn - ref[:, None])) @ self._integ.T) * self.half[:, None]
        inner = inner * np.exp(ref[:, None] - zn)
        totals = (g * np.exp(zn - ref[:, None]) * self.w).sum(axis=1)
        carry = np.empty(self.n_panels, dtype=complex)
        acc = 0j
        for j in range(self.n_panels):
            carry[j] = acc
            acc = acc * np.exp(ze[j] - ze[j + 1]) + totals[j]
        out = inner + carry[:, None] * np.exp(ze[:-1, None] - zn)
        return out.ravel()

    def scaled_cumint_right(self, g, zeta_nodes, zeta_edges):
        """R(z) = int_z^b exp(zeta(z) - zeta(x)) g(x) dx at every node."""
        g = self._panels(g)
        zn = self._panels(zeta_nodes)
        ze = np.asarray(zeta_edges)
        ref = ze[:-1]
        weighted = g * np.exp(ref[:, None] - zn)
        totals = (weighted * self.w).sum(axis=1)
        inner = totals[:, None] - (weighted @ self._integ.T) * self.half[:, None]
        inner = inner * np.exp(zn - ref[:, None])
        carry = np.empty(self.n_panels, dtype=complex)
        acc = 0j
        for j in range(self.n_panels - 1, -1, -1):
            carry[j] = acc
            acc = acc * np.exp(ze[j] - ze[j + 1]) + totals[j]
        out = inner + carry[:, None] * np.exp(zn - ze[1:, None])
        return out.ravel()


def graded_edges(a, b, width, min_width=1e-12, max_panels=200000):
    """March from a to b with local panel width ``width(x)`` (vectorised callable).

    A remainder shorter than 0.3 of the last step is merged into it, so the
    final panel may be up to 1.3 times the local width.
    """
    edges = [a]
    x = a
    while x < b:
        h = float(width(np.array([x]))[0])
        h = min(h, float(width(np.array([min(x + h, b)]))[0]))
        h = max(h, min_width)
        x = min(x + h, b)
        if b - x < 0.3 * h:
            x = b
        edges.append(x)
        if len(edges) > max_panels:
            raise RuntimeError("panel budget exceeded")
    return np.array(edges)


def chebyshev(n, a=-1.0, b=1.0):
    """Chebyshev-Lobatto points on [a, b] (descending) and the differentiation matrix."""
    k = np.arange(n + 1)
    x = np.cos(np.pi * k / n)
    c = np.where((k == 0) | (k == n), 2.0, 1.0) * (-1.0) ** k
    X = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (X + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    scale = 2.0 / (b - a)
    return a + (b - a) * (x + 1) / 2, D * scale


def chebyshev_interp(values, a, b, z):
    """Barycentric interpolation from Chebyshev-Lobatto values on [a, b] to points z."""
    n = len(values) - 1
    k = np.arange(n + 1)
    x = np.cos(np.pi * k / n)
    w = np.where((k == 0) | (k == n), 0.5, 1.0) * (-1.0) ** k
    t = 2 * (np.asarray(z, dtype=float) - a) / (b - a) - 1
    d = t[:, None] - x[None, :]
    exact = d == 0
    d[exact] = 1.0
    q = w / d
    out = (q * values).sum(axis=1) / q.sum(axis=1)
    hit = exact.any(axis=1)
    if hit.any():
        out[hit] = np.asarray(values)[np.argmax(exact[hit], axis=1)]
    return out
