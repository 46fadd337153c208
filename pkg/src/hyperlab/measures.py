"""Complex measures on the real line and on the hyperbola x1*x2 = -m^2/(4 pi^2).

A measure is a finite list of atoms plus a finite list of density pieces on
half-open intervals [a, b).  Densities are stored as evaluable functions
together with a declared total-variation bound; selected density families
carry a ``family`` tag so that downstream code (Fourier pairings,
periodization sums) can switch to closed-form evaluation.

Hyperbola measures are represented through their compression to the first
coordinate axis; the branch map t -> (t, -m^2/(4 pi^2 t)) recovers the
planar measure everywhere except at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad


class MeasureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# density families

def _cauchy1p(scale: complex) -> Callable:
    # scale / (1 + t)
    return lambda t: scale / (1.0 + np.asarray(t, dtype=float))


def _cauchy_inv1p(scale: complex) -> Callable:
    # scale / (t (1 + t))
    def rho(t):
        t = np.asarray(t, dtype=float)
        return scale / (t * (1.0 + t))
    return rho


def _binned(edges: np.ndarray, values: np.ndarray) -> Callable:
    edges = np.asarray(edges, dtype=float)
    values = np.asarray(values)

    def rho(t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, len(values) - 1)
        out = values[idx]
        return np.where((t >= edges[0]) & (t < edges[-1]), out, 0.0 * out)
    return rho


def _binned_inverted(edges: np.ndarray, values: np.ndarray, s: float) -> Callable:
    # pushforward of a binned density under t -> s/t:  rho(x) = w(s/x) * s / x^2
    base = _binned(edges, values)

    def rho(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            u = s / x
            out = base(u) * s / x**2
        return np.where(x != 0.0, out, 0.0 * out)
    return rho


def density_from_family(family: str, params: dict) -> Callable:
    if family == "cauchy1p":
        return _cauchy1p(params["scale"])
    if family == "cauchy_inv1p":
        return _cauchy_inv1p(params["scale"])
    if family == "binned":
        return _binned(np.asarray(params["edges"]), np.asarray(params["values"]))
    if family == "binned_inverted":
        return _binned_inverted(
            np.asarray(params["edges"]), np.asarray(params["values"]), params["s"])
    raise MeasureError(f"unknown density family {family!r}")


@dataclass(frozen=True)
class Piece:
    """Density piece on the half-open interval [a, b); b may be +inf."""

    a: float
    b: float
    density: Callable
    tv_bound: float
    family: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.a < self.b:
            raise MeasureError(f"empty piece support [{self.a}, {self.b})")
        if self.tv_bound < 0:
            raise MeasureError("tv_bound must be nonnegative")

    def tail_bound(self, T: float) -> float:
        """Upper bound on the variation of the piece beyond |t| >= T."""
        if np.isfinite(self.a) and np.isfinite(self.b) \
                and T >= max(abs(self.a), abs(self.b)):
            return 0.0
        if self.family == "cauchy_inv1p":
            # |scale| / (t(1+t)) integrates to |scale|*log(1+1/T) <= |scale|/T
            return abs(self.params["scale"]) / max(T, self.a)
        if self.family == "binned_inverted":
            s = self.params["s"]
            vmax = float(np.max(np.abs(self.params["values"])))
            return vmax * s / max(T, self.a)
        if np.isfinite(self.a) and np.isfinite(self.b):
            return self.tv_bound
        if "tail_c" in self.params:
            # caller-certified majorant |rho(t)| <= tail_c |t|^-tail_p
            c, p = self.params["tail_c"], self.params["tail_p"]
            if p <= 1.0:
                raise MeasureError("tail majorant must be integrable (p > 1)")
            return c * max(T, 1e-300) ** (1.0 - p) / (p - 1.0)
        raise MeasureError("infinite piece without a certified tail majorant")


def piece_from_family(a: float, b: float, family: str, params: dict,
                      tv_bound: float) -> Piece:
    return Piece(a, b, density_from_family(family, params), tv_bound,
                 family=family, params=dict(params))


@dataclass(frozen=True)
class Measure1D:
    """Atoms plus density pieces on the line; supports must not overlap."""

    atoms: tuple = ()
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "pieces", tuple(self.pieces))
        ivs = sorted((p.a, p.b) for p in self.pieces)
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            if a2 < b1:
                raise MeasureError("piece supports overlap")

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.pieces

    def density_at(self, t):
        """Total density at points t (atoms ignored)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for p in self.pieces:
            mask = (t >= p.a) & (t < p.b)
            if np.any(mask):
                out[mask] += p.density(t[mask])
        return out

    def scaled(self, c: complex) -> "Measure1D":
        atoms = tuple((x, c * w) for x, w in self.atoms)
        pieces = []
        for p in self.pieces:
            if p.family in ("cauchy1p", "cauchy_inv1p"):
                params = dict(p.params, scale=c * p.params["scale"])
                pieces.append(piece_from_family(p.a, p.b, p.family, params,
                                                abs(c) * p.tv_bound))
            elif p.family in ("binned", "binned_inverted"):
                params = dict(p.params, values=c * np.asarray(p.params["values"]))
                pieces.append(piece_from_family(p.a, p.b, p.family, params,
                                                abs(c) * p.tv_bound))
            else:
                rho = p.density
                pieces.append(replace(p, density=(lambda t, rho=rho: c * rho(t)),
                                      tv_bound=abs(c) * p.tv_bound))
        return Measure1D(atoms, tuple(pieces))

    def descriptor(self) -> dict:
        """Structured-text serialization; requires all pieces family-tagged."""
        atoms = [[float(x), float(np.real(w)), float(np.imag(w))]
                 for x, w in self.atoms]
        pieces = []
        for p in self.pieces:
            if p.family is None:
                raise MeasureError("piece without a registered family "
                                   "cannot be serialized")
            params = {}
            for k, v in p.params.items():
                if isinstance(v, np.ndarray):
                    if np.iscomplexobj(v):
                        params[k + "_re"] = np.real(v).tolist()
                        params[k + "_im"] = np.imag(v).tolist()
                    else:
                        params[k] = v.tolist()
                elif isinstance(v, complex):
                    params[k + "_re"] = v.real
                    params[k + "_im"] = v.imag
                else:
                    params[k] = v
            pieces.append({"family": p.family, "support": [p.a, p.b],
                           "tv_bound": p.tv_bound, "params": params})
        return {"atoms": atoms, "pieces": pieces}


ZERO = Measure1D()


@dataclass(frozen=True)
class HyperbolaMeasure:
    """Measure on Gamma_m, stored through its first-axis compression."""

    m: float
    pi1: Measure1D

    def __post_init__(self):
        if self.m <= 0:
            raise MeasureError("mass parameter m must be positive")
        for x, _ in self.pi1.atoms:
            if x == 0.0:
                raise MeasureError("atom at 0 is not liftable to the hyperbola")
        for p in self.pi1.pieces:
            if p.a < 0.0 < p.b:
                raise MeasureError("piece support must not contain 0 in its "
                                   "interior")


@dataclass(frozen=True)
class QuadrantTag:
    """Sign condition on (xi1, xi2); one of ++, --, +-, -+."""

    tag: str
    closed: bool = True

    def __post_init__(self):
        if self.tag not in ("++", "--", "+-", "-+"):
            raise MeasureError(f"bad quadrant tag {self.tag!r}")

    def contains(self, xi1: float, xi2: float) -> bool:
        s1 = 1.0 if self.tag[0] == "+" else -1.0
        s2 = 1.0 if self.tag[1] == "+" else -1.0
        if self.closed:
            return s1 * xi1 >= 0.0 and s2 * xi2 >= 0.0
        return s1 * xi1 > 0.0 and s2 * xi2 > 0.0


# ---------------------------------------------------------------------------
# operations

def compress_pi1(mu: HyperbolaMeasure) -> Measure1D:
    """Compression to the x1-axis (identity on the stored representation)."""
    return mu.pi1


def _pushforward_reciprocal(nu: Measure1D, s: float) -> Measure1D:
    """Image of nu under t -> s/t (s != 0), composed symbolically."""
    atoms = []
    for x, w in nu.atoms:
        if x == 0.0:
            raise MeasureError("pushforward under t -> s/t needs no mass at 0")
        atoms.append((s / x, w))
    pieces = []
    for p in nu.pieces:
        if p.a < 0.0 < p.b:
            raise MeasureError("pushforward under t -> s/t needs support "
                               "away from 0")
        def inv_end(x, side):
            # image of an endpoint under t -> s/t; side is the sign of the
            # piece's interior, used to resolve s/0
            if x == 0.0:
                return np.inf * np.sign(s) * side
            if not np.isfinite(x):
                return 0.0
            return s / x
        side = 1.0 if p.a >= 0.0 else -1.0
        a_new, b_new = sorted((inv_end(p.a, side), inv_end(p.b, side)))
        if p.family == "binned" and s > 0 and p.a >= 0.0:
            params = {"edges": np.asarray(p.params["edges"]),
                      "values": np.asarray(p.params["values"]), "s": s}
            pieces.append(piece_from_family(a_new, b_new, "binned_inverted",
                                            params, p.tv_bound))
        elif p.family == "binned_inverted" and s == p.params["s"]:
            # involution: back to the original binned piece
            params = {"edges": np.asarray(p.params["edges"]),
                      "values": np.asarray(p.params["values"])}
            pieces.append(piece_from_family(a_new, b_new, "binned",
                                            params, p.tv_bound))
        else:
            rho = p.density

            def rho_new(x, rho=rho, s=s):
                x = np.asarray(x, dtype=float)
                with np.errstate(divide="ignore", invalid="ignore"):
                    out = rho(s / x) * abs(s) / x**2
                # x = 0 is the image of t = inf, where the density vanishes
                return np.where(x == 0.0, 0.0, out)
            pieces.append(Piece(a_new, b_new, rho_new, p.tv_bound))
    return Measure1D(tuple(atoms), tuple(pieces))


def compress_pi2(mu: HyperbolaMeasure) -> Measure1D:
    """Compression to the x2-axis: pushforward of pi1 under t -> -m^2/(4 pi^2 t)."""
    s = -mu.m**2 / (4.0 * np.pi**2)
    return _pushforward_reciprocal(mu.pi1, s)


def pushforward_inversion(nu: Measure1D, gamma: float) -> Measure1D:
    """Image of nu under the involution t -> gamma/t."""
    if gamma <= 0:
        raise MeasureError("gamma must be positive")
    return _pushforward_reciprocal(nu, gamma)


def total_variation(nu: Measure1D, rel_tol: float = 1e-10) -> float:
    """Sum of |atom weights| plus integrals of |density| over the pieces."""
    tv = sum(abs(w) for _, w in nu.atoms)
    for p in nu.pieces:
        val, err = quad(lambda t: abs(p.density(t)), p.a, p.b, limit=400,
                        epsabs=1e-13, epsrel=rel_tol)
        if err > rel_tol * max(1.0, abs(val)) + 1e-9:
            raise MeasureError(f"quadrature did not converge on piece "
                               f"[{p.a}, {p.b}): error estimate {err:g}")
        tv += val
    return tv


def restrict(nu: Measure1D, a: float, b: float) -> Measure1D:
    """Restriction to [a, b); atoms at the right endpoint are dropped."""
    if not a < b:
        return ZERO
    atoms = tuple((x, w) for x, w in nu.atoms if a <= x < b)
    pieces = []
    for p in nu.pieces:
        lo, hi = max(p.a, a), min(p.b, b)
        if lo < hi:
            pieces.append(replace(p, a=lo, b=hi))
    return Measure1D(atoms, tuple(pieces))
