"""Command-line front end: configuration, experiment dispatch, and
CSV/JSON/SVG emission.

Conventions shared by every command:
  * config = defaults, overridden by an optional flat key=value file
    (--config), overridden by explicit flags; unknown keys are rejected;
  * every CSV/JSON artifact embeds the fully resolved config for
    provenance;
  * floats are formatted with ``repr`` (shortest round-trip), so
    identical configs yield byte-identical artifacts;
  * failures exit nonzero after writing a JSON error record
    {schemaVersion, command, key, message} to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .annihilators import annihilator_report, critical_annihilator, \
    expanded_annihilator, perturbed_equation_residual
from .defect import CandidateBasis, build_constraint_matrix, \
    cosine_similarity, cross_for_gamma, defect_estimate, \
    distorted_cross_residual, sweep_gamma
from .dynamics import GaussMap, coverage_fraction
from .fourier import LatticeCross, QuadratureError, ft_on_cross, ft_point
from .hardy import hardy_defect, hilbert_line, timelike_witness
from .measures import HyperbolaMeasure, Measure1D, MeasureError, \
    Piece, piece_from_family
from .sici import nielsen_spiral
from .transfer import UlamError, build_ulam, invariance_residual, \
    invariant_density

SCHEMA_VERSION = 1

COMMANDS = ("ft-eval", "ft-cross", "invariant-density", "annihilator-check",
            "perturbed-residual", "coverage", "sici-spiral", "hardy-defect",
            "hilbert-check", "timelike-witness", "defect-sweep",
            "distorted-cross")


class UsageError(Exception):
    def __init__(self, key: str, message: str):
        super().__init__(message)
        self.key = key


def _fmt(x) -> str:
    """Shortest round-trip formatting for scalars."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


# ---------------------------------------------------------------------------
# configuration

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hyperlab",
        description="numerical laboratory for Fourier uniqueness on the "
                    "hyperbola x1 x2 = -m^2/(4 pi^2)")
    sub = top.add_subparsers(dest="command", required=True)

    def cmd(name, help_, **keys):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=str, default=None,
                       help="flat key=value config file; flags override")
        p.add_argument("--out", type=str, default=None,
                       help="artifact path (default: stdout)")
        for key, (typ, default, help_k) in keys.items():
            p.add_argument("--" + key, type=typ, default=None,
                           help=f"{help_k} (default {default})")
        p.set_defaults(_defaults={k: v[1] for k, v in keys.items()})
        return p

    cmd("ft-eval", "Fourier transform of a named measure at one point",
        measure=(str, "critical", "measure name: critical or expanded"),
        gamma=(float, 1.0, "gamma for the expanded measure"),
        bins=(int, 512, "Ulam bins behind the expanded density"),
        xi1=(float, 0.0, "first coordinate of xi"),
        xi2=(float, 0.0, "second coordinate of xi"))
    cmd("ft-cross", "Fourier transform on a lattice-cross",
        measure=(str, "critical", "measure name: critical or expanded"),
        gamma=(float, 1.0, "gamma for the expanded measure"),
        bins=(int, 512, "Ulam bins behind the expanded density"),
        alpha=(float, 2.0, "axis-1 spacing"),
        beta=(float, 2.0, "axis-2 spacing"),
        jmax=(int, 5, "axis-1 index range -jmax..jmax"),
        kmax=(int, 5, "axis-2 index range -kmax..kmax"))
    cmd("invariant-density", "Ulam invariant density of U_gamma",
        gamma=(float, 1.0, "map parameter"),
        bins=(int, 4096, "Ulam bins"))
    cmd("annihilator-check", "annihilating-measure residual report",
        gamma=(float, 1.0, "gamma (1 = critical, >1 = expanded)"),
        bins=(int, 4096, "Ulam bins for gamma > 1"),
        gridn=(int, 10000, "residual grid size"))
    cmd("perturbed-residual", "perturbed invariance-equation residual",
        gamma=(float, 1.5, "gamma in (1, 2]"),
        bins=(int, 1024, "Ulam bins"),
        gridn=(int, 2000, "residual grid size"))
    cmd("coverage", "Gauss-map even-time coverage of [gamma, 1]",
        gamma=(float, 0.5, "map parameter"),
        iterates=(int, 20, "maximum even iterate"),
        gridn=(int, 100000, "midpoint grid size"))
    cmd("sici-spiral", "Nielsen spiral (ci(x), si(x))",
        xmin=(float, 0.01, "grid start"),
        xmax=(float, 100.0, "grid end"),
        n=(int, 10000, "grid size"),
        svg=(str, "", "optional SVG path for the spiral polyline"))
    cmd("hardy-defect", "Hardy-space defect of a 2-periodization",
        conjugate=(int, 0, "1 to test the conjugate family"),
        nmax=(int, 64, "coefficient cutoff"),
        gridn=(int, 8192, "periodization grid"))
    cmd("hilbert-check", "Hilbert transform of the Cauchy density",
        xmax=(float, 3.0, "check grid endpoint"),
        n=(int, 7, "check grid size"))
    cmd("timelike-witness", "residue-identity pairings of f_{z0}",
        im=(float, 1.0, "imaginary part of z0"),
        beta=(float, 1.0, "axis-2 spacing"),
        jmax=(int, 10, "largest j"),
        kmax=(int, 10, "largest k"))
    cmd("defect-sweep", "singular-value defect sweep over gamma",
        gammas=(str, "0.6,0.8,1.0,1.2,1.5", "comma-separated gamma grid"),
        tmin=(float, 0.08, "basis band start"),
        tmax=(float, 12.5, "basis band end"),
        bins=(int, 202, "basis bins"),
        jmax=(int, 640, "axis-1 truncation"),
        kmax=(int, 640, "axis-2 truncation"),
        threshold=(float, 1e-2, "relative singular-value threshold"))
    cmd("distorted-cross", "spectral-window test for a shifted half-cross",
        xi1=(float, 0.0, "axis-1 shift of the distorted cross"),
        xi2=(float, 0.0, "axis-2 shift (must be 0)"),
        threshold=(float, 1e-3, "relative singular-value threshold"))
    return top


def parse_config(argv):
    """Resolved (command, config dict): defaults < file < flags."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("", "unrecognized or malformed arguments") \
                from exc
        raise
    defaults = ns._defaults
    cfg = dict(defaults)
    if ns.config is not None:
        for lineno, line in enumerate(_read_lines(ns.config), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"line {lineno}",
                                 f"config line is not key=value: {line!r}")
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            if key == "out":
                ns.out = ns.out if ns.out is not None else raw
                continue
            if key not in defaults:
                raise UsageError(key, f"unknown config key for "
                                      f"{ns.command}: {key!r}")
            try:
                cfg[key] = type(defaults[key])(raw)
            except ValueError as exc:
                raise UsageError(key, f"unparsable value {raw!r}") from exc
    for key in defaults:
        flag_val = getattr(ns, key)
        if flag_val is not None:
            cfg[key] = flag_val
    _validate(ns.command, cfg)
    return ns.command, cfg, ns.out


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.readlines()
    except OSError as exc:
        raise UsageError("config", str(exc)) from exc


def _validate(command, cfg):
    for key in ("gamma", "alpha", "beta", "xmin", "xmax", "tmin", "tmax",
                "threshold", "im"):
        if key in cfg and cfg[key] <= 0:
            raise UsageError(key, f"{key} must be positive")
    for key in ("bins", "gridn", "jmax", "kmax", "n", "nmax", "iterates"):
        if key in cfg and cfg[key] < 1:
            raise UsageError(key, f"{key} must be a positive integer")
    if "measure" in cfg and cfg["measure"] not in ("critical", "expanded"):
        raise UsageError("measure", "measure must be critical or expanded")
    if command == "defect-sweep":
        try:
            gammas = [float(s) for s in cfg["gammas"].split(",")]
        except ValueError as exc:
            raise UsageError("gammas", "gammas must be a comma-separated "
                                       "list of numbers") from exc
        if not gammas or any(g <= 0 for g in gammas):
            raise UsageError("gammas", "gammas must be positive")


# ---------------------------------------------------------------------------
# emission helpers

def _config_lines(command, cfg):
    yield f"# command = {command}"
    yield f"# schemaVersion = {SCHEMA_VERSION}"
    for key in sorted(cfg):
        yield f"# {key} = {_fmt(cfg[key])}"


def _emit_csv(out, command, cfg, header, rows):
    lines = list(_config_lines(command, cfg))
    lines.append(",".join(header))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    _write_text(out, "\n".join(lines) + "\n")


def _emit_json(out, command, cfg, payload):
    record = {"schemaVersion": SCHEMA_VERSION, "command": command,
              "config": {k: cfg[k] for k in sorted(cfg)}}
    record.update(payload)
    _write_text(out, json.dumps(record, indent=2, sort_keys=False) + "\n")


def _write_text(out, text):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def emit_svg_polyline(points, title: str, path: str,
                      width: int = 480, height: int = 480) -> None:
    """Standalone SVG 1.1 (path/line/text only) with axis ticks and the
    polyline through ``points``; byte-stable for identical inputs."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise MeasureError("polyline needs at least 2 points")
    if not all(np.isfinite(x) and np.isfinite(y) for x, y in pts):
        raise MeasureError("polyline coordinates must be finite")
    xs, ys = zip(*pts)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad_x = (x1 - x0) or 1.0
    pad_y = (y1 - y0) or 1.0
    x0, x1 = x0 - 0.05 * pad_x, x1 + 0.05 * pad_x
    y0, y1 = y0 - 0.05 * pad_y, y1 + 0.05 * pad_y
    margin = 40

    def to_px(x, y):
        px = margin + (x - x0) / (x1 - x0) * (width - 2 * margin)
        py = height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)
        return f"{px:.2f}", f"{py:.2f}"

    parts = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'width="{width}" height="{height}">',
             f'<text x="{width // 2}" y="20" text-anchor="middle" '
             f'font-size="14">{title}</text>',
             f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}"'
             f' y2="{height - margin}" stroke="black"/>',
             f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
             f'y2="{height - margin}" stroke="black"/>']
    for i in range(5):
        xt = x0 + (x1 - x0) * i / 4
        yt = y0 + (y1 - y0) * i / 4
        px, _ = to_px(xt, y0)
        _, py = to_px(x0, yt)
        parts.append(f'<line x1="{px}" y1="{height - margin}" x2="{px}" '
                     f'y2="{height - margin + 5}" stroke="black"/>')
        parts.append(f'<text x="{px}" y="{height - margin + 18}" '
                     f'text-anchor="middle" font-size="10">{xt:.3g}</text>')
        parts.append(f'<line x1="{margin - 5}" y1="{py}" x2="{margin}" '
                     f'y2="{py}" stroke="black"/>')
        parts.append(f'<text x="{margin - 8}" y="{py}" text-anchor="end" '
                     f'font-size="10">{yt:.3g}</text>')
    d = "M" + "L".join("{} {}".format(*to_px(x, y)) for x, y in pts)
    parts.append(f'<path d="{d}" fill="none" stroke="navy" '
                 f'stroke-width="1"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# experiment dispatch

def _named_measure(cfg) -> HyperbolaMeasure:
    if cfg["measure"] == "critical":
        nu = critical_annihilator()
    else:
        dens = invariant_density(build_ulam(cfg["gamma"], cfg["bins"]))
        nu = expanded_annihilator(cfg["gamma"], dens)
    return HyperbolaMeasure(2.0 * np.pi, nu)


def _run_ft_eval(cfg, out):
    val = ft_point(_named_measure(cfg), (cfg["xi1"], cfg["xi2"]))
    _emit_json(out, "ft-eval", cfg,
               {"re": val.real, "im": val.imag,
                "convention": "exp(i pi (xi1 t + xi2 x2(t)))"})


def _run_ft_cross(cfg, out):
    cross = LatticeCross(cfg["alpha"], cfg["beta"],
                         (-cfg["jmax"], cfg["jmax"]),
                         (-cfg["kmax"], cfg["kmax"]))
    rows = [(cv.axis, cv.index, cv.xi1, cv.xi2, cv.value.real, cv.value.imag,
             cv.abs_err_estimate)
            for cv in ft_on_cross(_named_measure(cfg), cross)]
    _emit_csv(out, "ft-cross", cfg,
              ("axis", "index", "xi1", "xi2", "re", "im", "absErrEstimate"),
              rows)


def _run_invariant_density(cfg, out):
    dens = invariant_density(build_ulam(cfg["gamma"], cfg["bins"]))
    cfg = dict(cfg, residual=invariance_residual(dens, 2000))
    rows = [(float(a), float(b), float(v)) for a, b, v in
            zip(dens.edges[:-1], dens.edges[1:], dens.values)]
    _emit_csv(out, "invariant-density", cfg,
              ("binLeft", "binRight", "density"), rows)


def _run_annihilator_check(cfg, out):
    dens = None
    if cfg["gamma"] > 1.0:
        dens = invariant_density(build_ulam(cfg["gamma"], cfg["bins"]))
    rep = annihilator_report(cfg["gamma"], dens, cfg["gridn"])
    _emit_json(out, "annihilator-check", cfg, {
        "gamma": rep.gamma,
        "totalMass": [rep.total_mass.real, rep.total_mass.imag],
        "symmetryResidual": rep.symmetry_residual,
        "periodizedResidualSum1": rep.periodized_residual_sum1,
        "periodizedResidualSum2": rep.periodized_residual_sum2,
        "gridN": rep.grid_n})


def _run_perturbed_residual(cfg, out):
    gamma = cfg["gamma"]
    dens = invariant_density(build_ulam(gamma, cfg["bins"]))
    # omega1 = the invariant measure, omega2 = 0: the unperturbed solution
    omega1 = Measure1D(pieces=(piece_from_family(
        0.0, 1.0, "binned", {"edges": dens.edges, "values": dens.values},
        1.0),))
    res = perturbed_equation_residual(omega1, Measure1D(), gamma,
                                      cfg["gridn"])
    _emit_json(out, "perturbed-residual", cfg, {"maxResidual": res})


def _run_coverage(cfg, out):
    fracs = coverage_fraction(GaussMap(cfg["gamma"]), cfg["iterates"],
                              cfg["gridn"])
    rows = [(2 * k, f) for k, f in enumerate(fracs)]
    _emit_csv(out, "coverage", cfg, ("evenTime", "fraction"), rows)


def _run_sici_spiral(cfg, out):
    grid = np.geomspace(cfg["xmin"], cfg["xmax"], cfg["n"])
    res = nielsen_spiral(grid)
    cfg = dict(cfg, minModulus=res.min_modulus)
    rows = [(p.x, p.ci, p.si, p.modulus) for p in res.points]
    _emit_csv(out, "sici-spiral", cfg, ("x", "ci", "si", "modulus"), rows)
    if cfg["svg"]:
        emit_svg_polyline([(p.ci, p.si) for p in res.points],
                          "Nielsen spiral (ci, si)", cfg["svg"])


def _hardy_test_measure(conjugate: bool) -> Measure1D:
    sign = -1.0 if conjugate else 1.0

    def rho(t):
        return 1.0 / (np.asarray(t) + sign * 1j) ** 2

    return Measure1D(pieces=(
        Piece(-np.inf, 0.0, rho, 2.0, params={"tail_c": 1.0, "tail_p": 2.0}),
        Piece(0.0, np.inf, rho, 2.0, params={"tail_c": 1.0, "tail_p": 2.0})))


def _run_hardy_defect(cfg, out):
    f = _hardy_test_measure(bool(cfg["conjugate"]))
    d = hardy_defect(f, cfg["nmax"], cfg["gridn"])
    _emit_json(out, "hardy-defect", cfg, {
        "negMass": d.neg_mass, "nonposMass": d.nonpos_mass,
        "totalMass": d.total_mass, "ratio": d.ratio,
        "nonposRatio": d.nonpos_ratio})


def _run_hilbert_check(cfg, out):
    def cauchy(t):
        return 1.0 / (np.pi * (1.0 + np.asarray(t) ** 2))

    f = Measure1D(pieces=(
        Piece(-np.inf, 0.0, cauchy, 0.5,
              params={"tail_c": 1.0 / np.pi, "tail_p": 2.0}),
        Piece(0.0, np.inf, cauchy, 0.5,
              params={"tail_c": 1.0 / np.pi, "tail_p": 2.0})))
    grid = np.linspace(-cfg["xmax"], cfg["xmax"], cfg["n"])
    res = hilbert_line(f, grid)
    exact = grid / (np.pi * (1.0 + grid**2))
    rows = [(float(x), float(v.real), float(v.imag), float(e))
            for x, v, e in zip(grid, res.values, np.abs(res.values - exact))]
    cfg = dict(cfg, maxError=float(np.max(np.abs(res.values - exact))))
    _emit_csv(out, "hilbert-check", cfg, ("x", "re", "im", "absError"), rows)


def _run_timelike_witness(cfg, out):
    rows = timelike_witness(complex(0.0, cfg["im"]), cfg["beta"],
                            cfg["jmax"], cfg["kmax"])
    table = [(r.kind, r.index, r.value.real, r.value.imag, abs(r.value),
              r.err_estimate) for r in rows]
    _emit_csv(out, "timelike-witness", cfg,
              ("kind", "index", "re", "im", "abs", "errEstimate"), table)


def _run_defect_sweep(cfg, out):
    basis = CandidateBasis(cfg["tmin"], cfg["tmax"], cfg["bins"])
    gammas = [float(s) for s in cfg["gammas"].split(",")]
    rows = sweep_gamma(basis, gammas, cfg["jmax"], cfg["kmax"],
                       cfg["threshold"])
    table = [(r.gamma, r.defect) + r.singular_tail for r in rows]
    _emit_csv(out, "defect-sweep", cfg,
              ("gamma", "defect", "s1", "s2", "s3", "s4", "s5", "s6"),
              table)


def _run_distorted_cross(cfg, out):
    est = distorted_cross_residual((cfg["xi1"], cfg["xi2"]),
                                   threshold=cfg["threshold"])
    sv = est.singular_values
    _emit_json(out, "distorted-cross", cfg, {
        "numericalDefect": est.numerical_defect,
        "sigmaMax": float(sv[0]), "sigmaMin": float(np.min(sv)),
        "singularTail": [float(s) for s in np.sort(sv)[:6]]})


_RUNNERS = {
    "ft-eval": _run_ft_eval,
    "ft-cross": _run_ft_cross,
    "invariant-density": _run_invariant_density,
    "annihilator-check": _run_annihilator_check,
    "perturbed-residual": _run_perturbed_residual,
    "coverage": _run_coverage,
    "sici-spiral": _run_sici_spiral,
    "hardy-defect": _run_hardy_defect,
    "hilbert-check": _run_hilbert_check,
    "timelike-witness": _run_timelike_witness,
    "defect-sweep": _run_defect_sweep,
    "distorted-cross": _run_distorted_cross,
}


def _error_record(command, key, message):
    return json.dumps({"schemaVersion": SCHEMA_VERSION, "command": command,
                       "key": key, "message": message}) + "\n"


def run_experiment(command, cfg, out) -> int:
    try:
        _RUNNERS[command](cfg, out)
        return 0
    except (MeasureError, UlamError, QuadratureError, ValueError) as exc:
        sys.stderr.write(_error_record(command, "", str(exc)))
        return 1


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    command = argv[0] if argv and not argv[0].startswith("-") else ""
    try:
        command, cfg, out = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(_error_record(command, exc.key, str(exc)))
        return 2
    return run_experiment(command, cfg, out)


if __name__ == "__main__":
    sys.exit(main())
