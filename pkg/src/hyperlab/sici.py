"""Sine/cosine integral tails and the Nielsen (sici) spiral.

Conventions (fixed once, used everywhere in this package):

    si(x) =  integral_x^inf  sin(y)/y dy   =  pi/2 - Si(x),
    ci(x) = -integral_x^inf  cos(y)/y dy   (the standard Ci),

so that ci is negative on (0, x0) with first zero x0 ~ 0.6165.  Small
arguments go through the power series, large ones through the Lentz
continued fraction for E1(ix) = -ci(x) - i si(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209008240243

_CROSSOVER = 4.0


def _series_si_ci(x: float) -> tuple[float, float]:
    # Si by its Maclaurin series, Ci = gamma + log x - Cin
    si_val = 0.0
    term = x
    k = 0
    while True:
        si_val += term / (2 * k + 1)
        k += 1
        term *= -x * x / ((2 * k) * (2 * k + 1))
        if abs(term) < 1e-18:
            break
    cin = 0.0
    term = x * x / 2.0
    k = 1
    while True:
        cin += term / (2 * k)
        k += 1
        term *= -x * x / ((2 * k - 1) * (2 * k))
        if abs(term) < 1e-18:
            break
    ci_val = EULER_GAMMA + np.log(x) - cin
    return np.pi / 2.0 - si_val, ci_val


def _e1_continued_fraction(z: complex, max_iter: int = 500) -> complex:
    """E1(z) by the modified Lentz continued fraction; needs |z| not small."""
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * np.exp(-z)


def sine_integral_tail(x: float) -> float:
    """si(x) = integral_x^inf sin(y)/y dy for x > 0."""
    if x <= 0:
        raise ValueError("x must be positive")
    if x <= _CROSSOVER:
        return _series_si_ci(x)[0]
    return -float(np.imag(_e1_continued_fraction(1j * x)))


def cosine_integral(x: float) -> float:
    """ci(x), with integral_x^inf cos(y)/y dy = -ci(x); x > 0 required."""
    if x <= 0:
        raise ValueError("x must be positive (logarithmic divergence at 0)")
    if x <= _CROSSOVER:
        return _series_si_ci(x)[1]
    return -float(np.real(_e1_continued_fraction(1j * x)))


def exp_integral_tail(w: float) -> complex:
    """integral_1^inf e^{i w t} / t dt = -ci(|w|) + i sgn(w) si(|w|), w != 0."""
    if w == 0.0:
        raise ValueError("diverges at w = 0")
    aw = abs(w)
    return complex(-cosine_integral(aw), np.sign(w) * sine_integral_tail(aw))


@dataclass(frozen=True)
class SpiralPoint:
    x: float
    ci: float
    si: float

    @property
    def modulus(self) -> float:
        return float(np.hypot(self.ci, self.si))


@dataclass(frozen=True)
class SpiralResult:
    points: tuple
    min_modulus: float


def nielsen_spiral(x_grid) -> SpiralResult:
    """Evaluate (ci(x), si(x)) along a positive grid."""
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.size == 0:
        return SpiralResult((), np.inf)
    if np.any(x_grid <= 0) or not np.all(np.isfinite(x_grid)):
        raise ValueError("grid must be positive and finite")
    pts = tuple(SpiralPoint(float(x), cosine_integral(float(x)),
                            sine_integral_tail(float(x))) for x in x_grid)
    return SpiralResult(pts, min(p.modulus for p in pts))
