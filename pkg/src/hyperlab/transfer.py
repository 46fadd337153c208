"""Ulam discretization of the transfer operator of U_gamma and invariant
density computation.

Bin-to-bin transition fractions are computed analytically from the branch
inverses t = gamma/(y + j) (no sampling).  The infinitely many branches
accumulating at 0 are summed in closed form through digamma differences, so
every row is stochastic to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, polygamma

MEMORY_BUDGET_BYTES = 2 << 30


class UlamError(RuntimeError):
    pass


@dataclass(frozen=True)
class UlamOperator:
    gamma: float
    n_bins: int
    matrix: np.ndarray  # row-stochastic (n_bins, n_bins)


@dataclass(frozen=True)
class InvariantDensity:
    gamma: float
    edges: np.ndarray   # n_bins + 1 edges on [0, 1]
    values: np.ndarray  # nonnegative density per bin, integral 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, t, side="right") - 1,
                      0, len(self.values) - 1)
        out = self.values[idx]
        return np.where((t >= self.edges[0]) & (t < self.edges[-1]), out, 0.0)

    def bin_masses(self) -> np.ndarray:
        return self.values * np.diff(self.edges)


def build_ulam(gamma: float, n_bins: int) -> UlamOperator:
    """Row-stochastic Ulam matrix for U_gamma on uniform bins of [0, 1)."""
    if n_bins < 2:
        raise UlamError("need at least 2 bins")
    if 8 * n_bins * n_bins > MEMORY_BUDGET_BYTES:
        raise UlamError(f"n_bins={n_bins} exceeds the matrix memory budget")
    edges = np.arange(n_bins + 1) / n_bins
    P = np.zeros((n_bins, n_bins))
    for i in range(n_bins):
        a, b = edges[i], edges[i + 1]
        width = b - a
        row = P[i]
        # explicit branches overlapping (a, b); branch j occupies
        # t in (gamma/(j+1), gamma/j], branch 0 is t > gamma (gamma/t < 1)
        j_lo = 0 if (gamma < b) else int(np.floor(gamma / b))
        j_hi_t = gamma / a if a > 0.0 else np.inf
        # branches fully inside (0, b) are summed in closed form below
        j_full = int(np.ceil(gamma / b)) if a == 0.0 else None
        j_hi = (j_full - 1) if a == 0.0 else int(np.ceil(j_hi_t))
        for j in range(max(j_lo, 0), j_hi + 1):
            t_hi = gamma / j if j >= 1 else 1.0
            t_lo = gamma / (j + 1)
            t1, t2 = max(t_lo, a), min(t_hi, b)
            if t1 >= t2:
                continue
            # preimages of the target edges under this branch (descending)
            t_edges = gamma / (edges + j) if j >= 1 else \
                np.concatenate([[np.inf], gamma / (edges[1:] + j)])
            t_edges = np.clip(t_edges, t1, t2)
            row += (t_edges[:-1] - t_edges[1:]) / width
        if j_full is not None:
            start = max(j_full, 1)
            psi = digamma(start + edges)
            row += gamma * (psi[1:] - psi[:-1]) / width
    sums = P.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > 1e-10:
        raise UlamError("branch bookkeeping lost mass")
    P /= sums[:, None]
    return UlamOperator(gamma, n_bins, P)


def invariant_density(op: UlamOperator, tol: float = 1e-12,
                      max_iter: int = 100_000) -> InvariantDensity:
    """Leading left fixed vector of the Ulam matrix by power iteration."""
    n = op.n_bins
    v = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(max_iter):
        w = v @ op.matrix
        w /= np.sum(np.abs(w))
        residual = float(np.sum(np.abs(w - v)))
        v = w
        if residual <= tol:
            break
    else:
        raise UlamError(f"power iteration did not reach tol={tol:g}; "
                        f"last residual {residual:g}")
    edges = np.arange(n + 1) / n
    values = np.maximum(v, 0.0) * n  # masses -> density
    values /= np.sum(values * np.diff(edges))
    return InvariantDensity(op.gamma, edges, values)


def invariance_residual(density: InvariantDensity, grid_n: int,
                        gamma: float | None = None,
                        j_cut: int | None = None) -> float:
    """Sup-norm residual of rho(t) = sum_j rho(gamma/(t+j)) gamma/(t+j)^2
    on a midpoint grid of [0, 1); exact polygamma tail beyond j_cut."""
    g = density.gamma if gamma is None else gamma
    t = (np.arange(grid_n) + 0.5) / grid_n
    n_bins = len(density.values)
    if j_cut is None:
        # beyond j_cut all arguments fall in the first bin
        j_cut = int(np.ceil(g * n_bins)) + 8
    image = np.zeros(grid_n)
    chunk = max(1, (1 << 22) // grid_n)
    for j0 in range(1, j_cut + 1, chunk):
        js = np.arange(j0, min(j0 + chunk, j_cut + 1), dtype=float)
        denom = t[None, :] + js[:, None]
        arg = g / denom
        image += np.sum(density(arg) * g / denom**2, axis=0)
    v0 = density.values[0]
    image += v0 * g * polygamma(1, t + j_cut + 1)
    return float(np.max(np.abs(density(t) - image)))
