"""Fourier transforms of hyperbola measures at planar points and on
lattice-crosses.

The planar transform convention is

    ft(mu, xi) = integral exp(i pi [xi1 t - m^2 xi2 / (4 pi^2 t)]) d(pi1 mu)(t),

so that the pairing exp(i 2 pi j t) used in the one-branch experiments is
ft at xi = (2j, 0) (after the alpha = 2, m = 2 pi rescaling).  Oscillatory
infinite tails go through QUADPACK's Fourier-weight integrator; piecewise
constant (Ulam) densities are paired in closed form per bin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import sici as _scipy_sici

from .measures import HyperbolaMeasure, Measure1D, Piece, QuadrantTag
from .sici import cosine_integral, exp_integral_tail, sine_integral_tail


class QuadratureError(RuntimeError):
    """Raised when an oscillatory integral misses its tolerance budget."""

    def __init__(self, message, error_estimate=np.nan):
        super().__init__(message)
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    oscillatory_method: str = "adaptive-subdivision"
    tail_order: int = 4

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tail_order < 1:
            raise ValueError("tail_order must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class LatticeCross:
    """Lattice-cross (alpha Z x {0}) u ({0} x beta Z), optionally offset
    and filtered to a quadrant."""

    alpha: float
    beta: float
    j_range: tuple
    k_range: tuple
    offset: tuple = (0.0, 0.0)
    quadrant_filter: Optional[QuadrantTag] = None

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("spacings must be strictly positive")
        j0, j1 = self.j_range
        k0, k1 = self.k_range
        if j0 > j1 or k0 > k1:
            raise ValueError("index ranges must be nonempty")

    def points(self):
        """Cross points in deterministic order: axis 1 ascending j, then
        axis 2 ascending k.  The origin may appear once per axis."""
        out = []
        ox, oy = self.offset
        for j in range(self.j_range[0], self.j_range[1] + 1):
            out.append((1, j, self.alpha * j + ox, oy))
        for k in range(self.k_range[0], self.k_range[1] + 1):
            out.append((2, k, ox, self.beta * k + oy))
        if self.quadrant_filter is not None:
            out = [p for p in out if self.quadrant_filter.contains(p[2], p[3])]
        return out


# ---------------------------------------------------------------------------
# closed-form bin pairings

def _antideriv_exp_over_t(c: float, t: np.ndarray) -> np.ndarray:
    """Antiderivative of e^{i c / t} on t > 0 (finite limit c*pi/2 at 0+)."""
    if c == 0.0:
        return t.astype(complex)
    sign = np.sign(c)
    ac = abs(c)
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    pos = t > 0
    u = ac / t[pos]
    si_u, ci_u = _scipy_sici(u)
    a = t[pos] * np.exp(1j * u) - 1j * ac * (ci_u + 1j * si_u)
    out[pos] = a if sign > 0 else np.conj(a)
    out[~pos] = ac * np.pi / 2.0  # real limit, same for both signs of c
    return out


def _weighted_osc(g, a, b, freq):
    """integral_a^b g(u) e^{i freq u} du via Clenshaw-Curtis weights; b may
    be inf (then QUADPACK's Fourier extrapolation is used)."""
    if freq < 0:
        v, e = _weighted_osc(lambda u: np.conj(g(u)), a, b, -freq)
        return np.conj(v), e
    vals = []
    errs = 0.0
    kw = {"weight": None, "wvar": freq, "epsabs": 1e-12, "limit": 200}
    if not np.isfinite(b):
        kw["limlst"] = 100
    for part, weight in ((lambda u: np.real(g(u)), "cos"),
                         (lambda u: np.imag(g(u)), "sin"),
                         (lambda u: np.real(g(u)), "sin"),
                         (lambda u: np.imag(g(u)), "cos")):
        kw["weight"] = weight
        v, e = quad(part, a, b, **kw)
        vals.append(v)
        errs += e
    return complex(vals[0] - vals[1], vals[2] + vals[3]), errs


def _binned_pairing(edges: np.ndarray, values: np.ndarray,
                    w: float, c: float):
    """(integral of v(t) e^{i(w t - c/t)} dt, error estimate) for a bin
    table on t >= 0; exact (error 0) when one of w, c vanishes."""
    edges = np.asarray(edges, dtype=float)
    values = np.asarray(values, dtype=complex)
    if c == 0.0:
        if w == 0.0:
            return complex(np.sum(values * np.diff(edges))), 0.0
        prim = np.exp(1j * w * edges) / (1j * w)
        return complex(np.sum(values * np.diff(prim))), 0.0
    if w == 0.0:
        prim = _antideriv_exp_over_t(-c, edges)
        return complex(np.sum(values * np.diff(prim))), 0.0
    # mixed phase: Gauss where the c/t oscillation is tame, otherwise switch
    # to u = 1/t where the fast phase is linear and Clenshaw-Curtis applies
    nodes, wts = np.polynomial.legendre.leggauss(10)
    total = 0.0 + 0.0j
    err = 0.0
    for a, b, v in zip(edges[:-1], edges[1:], values):
        if v == 0.0:
            continue
        dphase = abs(w) * (b - a)
        if a > 0.0:
            dphase += abs(c) * (1.0 / a - 1.0 / b)
        if a > 0.0 and dphase < 200.0:
            nseg = int(max(1, np.ceil(dphase / 0.5)))
            seg = np.linspace(a, b, nseg + 1)
            mid = 0.5 * (seg[:-1] + seg[1:])
            half = 0.5 * np.diff(seg)
            t = mid[:, None] + half[:, None] * nodes[None, :]
            ph = np.exp(1j * (w * t - c / t))
            total += v * np.sum(half[:, None] * wts[None, :] * ph)
            continue

        def g(u, w=w):
            return np.exp(1j * w / u) / u**2
        u_hi = np.inf if a == 0.0 else 1.0 / a
        val, e = _weighted_osc(g, 1.0 / b, u_hi, -c)
        total += v * val
        err += abs(v) * e
    return complex(total), err


# ---------------------------------------------------------------------------
# generic oscillatory quadrature

def _cquad(f, a, b, q: QuadratureSpec):
    re, re_err = quad(lambda t: np.real(f(t)), a, b, limit=q.max_subdivisions,
                      epsabs=q.abs_tol, epsrel=q.rel_tol)
    im, im_err = quad(lambda t: np.imag(f(t)), a, b, limit=q.max_subdivisions,
                      epsabs=q.abs_tol, epsrel=q.rel_tol)
    return complex(re, im), re_err + im_err


def _cquad_fourier_inf(g, a, w, q: QuadratureSpec):
    """integral_a^inf g(t) e^{i w t} dt with g decaying, w != 0 (QAWF)."""
    if w < 0:
        val, err = _cquad_fourier_inf(lambda t: np.conj(g(t)), a, -w, q)
        return np.conj(val), err
    pieces = []
    errs = 0.0
    for part, weight in ((lambda t: np.real(g(t)), "cos"),
                         (lambda t: np.imag(g(t)), "sin"),
                         (lambda t: np.real(g(t)), "sin"),
                         (lambda t: np.imag(g(t)), "cos")):
        val, e = quad(part, a, np.inf, weight=weight, wvar=w,
                      limlst=max(50, q.max_subdivisions),
                      limit=q.max_subdivisions, epsabs=q.abs_tol)
        pieces.append(val)
        errs += e
    re = pieces[0] - pieces[1]
    im = pieces[2] + pieces[3]
    return complex(re, im), errs


def _piece_ft_positive(rho, a, b, w, c, q: QuadratureSpec):
    """integral_a^b rho(t) e^{i(w t - c/t)} dt over [a,b) in (0, inf]."""
    val = 0.0 + 0.0j
    err = 0.0

    def integrand(t):
        return rho(t) * np.exp(1j * (w * t - c / t))

    # near-zero oscillation: substitute s = 1/t and push to a Fourier tail
    if a == 0.0 and c != 0.0:
        d = min(b, 1.0)

        def g(s):
            return rho(1.0 / s) * np.exp(1j * w / s) / s**2
        v, e = _cquad_fourier_inf(g, 1.0 / d, -c, q)
        val += v
        err += e
        a = d
        if a >= b:
            return val, err

    if np.isfinite(b):
        v, e = _cquad(integrand, a, b, q)
        return val + v, err + e

    if w != 0.0:
        if c == 0.0:
            g = rho
        else:
            def g(t):
                return rho(t) * np.exp(-1j * c / t)
        v, e = _cquad_fourier_inf(g, max(a, 1e-300), w, q)
    else:
        v, e = _cquad(integrand, max(a, 1e-300), b, q)
    return val + v, err + e


def _piece_ft(p: Piece, w: float, c: float, q: QuadratureSpec):
    if p.family == "binned":
        return _binned_pairing(p.params["edges"], p.params["values"], w, c)
    if p.family == "binned_inverted":
        # substitute u = s/t:  w' = -c/s, c' = -w s, same bin table
        s = p.params["s"]
        return _binned_pairing(p.params["edges"], p.params["values"],
                               -c / s, -w * s)
    if p.b <= 0.0:
        # reflect to positive support: t -> -t flips both frequencies
        rho = p.density
        return _piece_ft_positive(lambda u: rho(-u), -p.b, -p.a
                                  if np.isfinite(p.a) else np.inf, -w, -c, q)
    return _piece_ft_positive(p.density, p.a, p.b, w, c, q)


def ft_point(mu: HyperbolaMeasure, xi, q: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """Fourier transform of mu at the planar point xi = (xi1, xi2)."""
    xi1, xi2 = float(xi[0]), float(xi[1])
    w = np.pi * xi1
    c = mu.m**2 * xi2 / (4.0 * np.pi)
    total = 0.0 + 0.0j
    err = 0.0
    for x, wt in mu.pi1.atoms:
        total += wt * np.exp(1j * (w * x - c / x))
    for p in mu.pi1.pieces:
        v, e = _piece_ft(p, w, c, q)
        total += v
        err += e
    if err > 100.0 * (q.abs_tol + q.rel_tol * abs(total)) + 1e-8:
        raise QuadratureError(
            f"oscillatory quadrature at xi=({xi1}, {xi2}) achieved error "
            f"estimate {err:.3g} above tolerance", err)
    return complex(total)


@dataclass(frozen=True)
class CrossValue:
    axis: int
    index: int
    xi1: float
    xi2: float
    value: complex
    abs_err_estimate: float


def ft_on_cross(mu: HyperbolaMeasure, cross: LatticeCross,
                q: QuadratureSpec = DEFAULT_QUAD):
    """One ft_point evaluation per cross point, deterministic ordering."""
    out = []
    for axis, idx, x1, x2 in cross.points():
        try:
            val = ft_point(mu, (x1, x2), q)
        except QuadratureError as exc:
            raise QuadratureError(
                f"cross point axis={axis} index={idx} xi=({x1}, {x2}): {exc}",
                exc.error_estimate) from exc
        out.append(CrossValue(axis, idx, x1, x2, val, q.abs_tol))
    return out


def critical_measure_ft(x: float, unit_lower_limit: bool = False) -> complex:
    """Fourier transform (1-e^{i 2 pi x}) * int_0^inf e^{i 2 pi x t} dt/(t+1)
    of the critical annihilator, via the si/ci decomposition.

    The substitution y = 2 pi x t gives lower limit 2 pi |x| in the tail
    integrals (the default); ``unit_lower_limit`` uses lower limit |x|
    instead.  Both conventions are exposed.
    """
    x = float(x)
    if x == 0.0 or float(x).is_integer():
        return 0.0 + 0.0j
    lower = abs(x) if unit_lower_limit else 2.0 * np.pi * abs(x)
    tail = complex(-cosine_integral(lower),
                   np.sign(x) * sine_integral_tail(lower))
    e_val = np.exp(-2j * np.pi * x) * tail
    return complex((1.0 - np.exp(2j * np.pi * x)) * e_val)
