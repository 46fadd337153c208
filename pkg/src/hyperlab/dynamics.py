"""Gauss-type interval maps U_gamma(x) = frac(gamma/x) on [0,1), orbit
iteration, branch inverses, and Lebesgue-coverage estimates for the hitting
sets of [gamma, 1] at even times."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# inputs closer than this to a branch point are nudged into the interior
BRANCH_GUARD = 1e-13


@dataclass(frozen=True)
class GaussMap:
    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def branch_points(self, x_min: float):
        """Branch points gamma/(j+1) above x_min, descending."""
        out = []
        j = 1
        while True:
            b = self.gamma / (j + 1)
            if b < 1.0:
                if b <= x_min:
                    break
                out.append(b)
            j += 1
        return out


def step(m: GaussMap, x: float) -> float:
    """One application of U_gamma; U_gamma(0) = 0 by convention."""
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x={x} outside [0, 1)")
    if x == 0.0:
        return 0.0
    y = m.gamma / x
    # guard against branch misassignment from roundoff at integer y
    n = np.round(y)
    if n != 0 and abs(y - n) < BRANCH_GUARD:
        y = n - BRANCH_GUARD if y < n else n + BRANCH_GUARD
    return float(y - np.floor(y))


def orbit(m: GaussMap, x0: float, n: int):
    """[x0, U(x0), ..., U^n(x0)], length n + 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = [x0]
    x = x0
    for _ in range(n):
        x = step(m, x)
        out.append(x)
    return out


def branch_inverse(m: GaussMap, y: float, j: int):
    """Inverse branch t = gamma/(y+j) when it lands in (0, 1), else None."""
    if not 0.0 <= y < 1.0:
        raise ValueError(f"y={y} outside [0, 1)")
    if j < 1:
        raise ValueError("branch index must be >= 1")
    x = m.gamma / (y + j)
    if not 0.0 < x < 1.0:
        return None
    return float(x)


def coverage_fraction(m: GaussMap, max_even_iterates: int, grid_n: int):
    """Fraction of a midpoint grid whose orbit visits [gamma, 1] at some
    even time <= 2k, for k = 0 .. max_even_iterates.

    Midpoint grids keep the estimate reproducible; the fractions are
    nondecreasing in k by construction.
    """
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1")
    g = m.gamma
    x = (np.arange(grid_n) + 0.5) / grid_n
    hit = (x >= g) & (x <= 1.0)
    fractions = [float(np.count_nonzero(hit)) / grid_n]
    for _ in range(max_even_iterates):
        for _ in range(2):  # one even time = two map applications
            nz = x > 0.0
            y = np.zeros_like(x)
            y[nz] = g / x[nz]
            y[nz] -= np.floor(y[nz])
            x = y
        hit |= (x >= g) & (x <= 1.0)
        fractions.append(float(np.count_nonzero(hit)) / grid_n)
    return fractions
