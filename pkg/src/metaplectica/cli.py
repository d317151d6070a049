"""Command-line front end: ``metaplectica <command> [--config FILE] [--out FILE] ...``.

Each command reads an optional JSON config (validated against the schema of
the same name shipped in ``metaplectica/schemas``), runs the corresponding
library routine and writes CSV, JSON or text to ``--out`` or stdout.

Exit codes: 0 success, 1 computation error, 2 invalid config or arguments,
3 ``cover`` on a loop whose system matrix is not the identity.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from importlib import resources
from typing import Optional, Sequence

import jsonschema
import numpy as np

from . import metaplectic as mp
from . import pauli
from . import wavefield as wf
from .errors import MetaplecticaError
from .symplectic import OpticalSystem, RayVector, lens_system, phase_space_angle, trace_ray
from .weyl import AlgebraElement, fock_matrix
from .weyl.parser import parse_expression

log = logging.getLogger("metaplectica.cli")

EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_OPEN_LOOP = 3

GOUY_DEFAULTS = {
    "beam": {"xi0_re": 0.0, "xi0_im": -1.0, "z0": 0.0},
    "grid": {"N": 2**17, "x_min": -24000.0, "x_max": 24000.0},
    "sweep": {"z_start": -2000.0, "z_end": 2000.0, "samples": 201},
}
FRINGE_DEFAULTS = {
    "beam": {"xi0_re": 0.0, "xi0_im": -1.0, "z0": 0.0},
    "grid": {"N": 2**17, "x_min": -2048.0, "x_max": 2048.0},
    "distance": 200.0,
    "period": 1.0,
    "window": 1.0,
    "csv_half_width": 4.0,
}
DEFAULT_GRID = {"N": wf.DEFAULT_N, "x_min": wf.DEFAULT_X_MIN, "x_max": wf.DEFAULT_X_MAX}
PAULI_ANGLES = (0.0, math.pi, 2 * math.pi, 3 * math.pi, 4 * math.pi)


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    """Round-trip float formatting (17 significant digits)."""
    return format(float(x), ".17g")


def load_schema(name: str) -> dict:
    text = resources.files("metaplectica").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def load_config(path: Optional[str], schema: str) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, load_schema(schema))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config {path} invalid at {where}: {exc.message}") from exc
    return cfg


def _merged(defaults: dict, cfg: dict) -> dict:
    out = {}
    for key, val in defaults.items():
        if isinstance(val, dict):
            out[key] = {**val, **cfg.get(key, {})}
        else:
            out[key] = cfg.get(key, val)
    for key, val in cfg.items():
        out.setdefault(key, val)
    return out


def _grid_params(grid: dict, args) -> tuple:
    n = args.grid_n if args.grid_n is not None else grid["N"]
    if n & (n - 1):
        log.warning("grid N = %d is not a power of two", n)
    if n < 16 or n % 2:
        raise ConfigError(f"grid N must be even and >= 16, got {n}")
    if not grid["x_max"] > grid["x_min"]:
        raise ConfigError("grid x_max must exceed x_min")
    return n, float(grid["x_min"]), float(grid["x_max"])


def _beam(cfg: dict) -> wf.GaussianBeam:
    b = cfg["beam"]
    return wf.GaussianBeam(complex(b["xi0_re"], b["xi0_im"]), z0=float(b["z0"]))


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (str, int)) else fmt(v) for v in row])
    return buf.getvalue()


# -- commands ---------------------------------------------------------------------


def cmd_trace(args) -> int:
    cfg = load_config(args.config, "trace")
    system = OpticalSystem.from_json(cfg["system"]) if "system" in cfg else lens_system(1, 4)
    ray = cfg.get("ray", {})
    traj = trace_ray(system, RayVector(ray.get("q", 1.0), ray.get("p", 0.0)))
    rows = []
    for i, r in enumerate(traj):
        rows.append((i, float(r.q), float(r.p), phase_space_angle(traj[: i + 1])))
    _write(args, _csv(["index", "q", "p", "angle_accum"], rows))
    return 0


def _probe(kind: str, n: int, x_min: float, x_max: float) -> wf.WaveGrid:
    if kind == "odd":
        return wf.hermite_gaussian(1, n, x_min, x_max)
    return wf.gaussian(n, x_min, x_max)


def cmd_cover(args) -> int:
    cfg = load_config(args.config, "cover")
    system = OpticalSystem.from_json(cfg["system"]) if "system" in cfg else lens_system(1, 4)
    n, x_min, x_max = _grid_params({**DEFAULT_GRID, **cfg.get("grid", {})}, args)
    probe = _probe(cfg.get("probe", "gaussian"), n, x_min, x_max)
    report = mp.holonomy_report(system, probe, method=cfg.get("method", "spectral"))
    jsonschema.validate(report, load_schema("cover_output"))
    _write(args, json.dumps(report, indent=2) + "\n")
    if not report["loop_closed"]:
        print("error: loop is not closed (system matrix differs from the identity)", file=sys.stderr)
        return EXIT_OPEN_LOOP
    return 0


def _profile(profile: dict, n: int, x_min: float, x_max: float, seed: int) -> wf.WaveGrid:
    kind = profile.get("kind", "gaussian")
    if kind == "hermite":
        return wf.hermite_gaussian(profile.get("order", 0), n, x_min, x_max)
    if kind == "top_hat":
        return wf.top_hat(profile.get("width", 1.0), n, x_min, x_max)
    if kind == "random":
        rng = np.random.default_rng(seed)
        terms = profile.get("terms", 4)
        coeffs = rng.normal(size=terms) + 1j * rng.normal(size=terms)
        out = sum(
            (c * wf.hermite_gaussian(j, n, x_min, x_max) for j, c in enumerate(coeffs)),
            start=wf.WaveGrid(np.zeros(n), (x_max - x_min) / n, x_min),
        )
        return out.normalized()
    return wf.gaussian(
        n, x_min, x_max, profile.get("center", 0.0), profile.get("momentum", 0.0), profile.get("width", 1.0)
    )


def cmd_propagate(args) -> int:
    cfg = load_config(args.config, "propagate")
    n, x_min, x_max = _grid_params({**DEFAULT_GRID, **cfg.get("grid", {})}, args)
    psi = _profile(cfg.get("profile", {}), n, x_min, x_max, args.seed)
    out = wf.fresnel_propagate(psi, cfg.get("f", 1.0), method=cfg.get("method", "spectral"))
    rows = zip(psi.x, psi.samples.real, psi.samples.imag, out.samples.real, out.samples.imag)
    _write(args, _csv(["x", "re_in", "im_in", "re_out", "im_out"], rows))
    return 0


def cmd_gouy(args) -> int:
    cfg = _merged(GOUY_DEFAULTS, load_config(args.config, "gouy"))
    beam = _beam(cfg)
    n, x_min, x_max = _grid_params(cfg["grid"], args)
    sw = cfg["sweep"]
    z = np.linspace(sw["z_start"], sw["z_end"], sw["samples"])
    psi0 = beam.grid(z[0], n, x_min, x_max)
    numeric = wf.gouy_trace_numeric(psi0, z, method=cfg.get("method", "spectral"))
    analytic = wf.gouy_trace_analytic(beam, z)
    rows = zip(z, numeric.theta, analytic.theta)
    _write(args, _csv(["z", "theta_numeric", "theta_analytic"], rows))
    log.info("numeric sweep %.6g, analytic sweep %.6g", numeric.total, analytic.total)
    return 0


def cmd_fringe(args) -> int:
    cfg = _merged(FRINGE_DEFAULTS, load_config(args.config, "fringe"))
    n, x_min, x_max = _grid_params(cfg["grid"], args)
    res = wf.fringe_demo(
        _beam(cfg),
        distance=cfg["distance"],
        period=cfg["period"],
        window=cfg["window"],
        n=n,
        x_min=x_min,
        x_max=x_max,
        method=cfg.get("method", "spectral"),
    )
    keep = np.abs(res.x) <= cfg["csv_half_width"]
    rows = [(x, b, a, res.shift) for x, b, a in zip(res.x[keep], res.before[keep], res.after[keep])]
    _write(args, _csv(["x", "intensity_before", "intensity_after", "shift_estimate"], rows))
    log.info("fringe shift %.6g periods (analytic %.6g)", res.shift, res.expected)
    return 0


def cmd_algebra(args) -> int:
    cfg = load_config(args.config, "algebra").get("algebra", {})
    expression = args.expression if args.expression is not None else cfg.get("expression")
    if expression is None:
        raise ConfigError("no expression given (positional argument or config algebra.expression)")
    fock_n = args.fock if args.fock is not None else cfg.get("fock_n")
    x = parse_expression(expression, exact=args.exact)
    if fock_n is None:
        _write(args, f"{x}\n")
        return 0
    if not isinstance(x, AlgebraElement):
        raise ConfigError("--fock needs an expression in Q, D, E (or a, ad mixed with them)")
    M = fock_matrix(x, fock_n).to_numpy()
    out = {
        "expression": expression,
        "normal_form": str(x),
        "n_max": fock_n,
        "real": [[float(v) for v in row] for row in M.real],
        "imag": [[float(v) for v in row] for row in M.imag],
    }
    jsonschema.validate(out, load_schema("fock_output"))
    _write(args, json.dumps(out) + "\n")
    return 0


def cmd_pauli(args) -> int:
    cfg = load_config(args.config, "pauli")
    p1 = complex(*cfg.get("psi1", (1.0, 0.0)))
    p2 = complex(*cfg.get("psi2", (1.0, 0.0)))
    axis = pauli.PauliElement.blade(cfg.get("axis", "e12"))
    psi1 = pauli.spinor_from_components(p1, 0)
    psi2 = pauli.spinor_from_components(p2, 0)
    lines = ["theta/pi  psi1_rotated  psi2_rotated  intensity_recombined"]
    for theta in PAULI_ANGLES:
        rot = pauli.rotate_spinor(psi2, pauli.rotor(axis, theta))
        c1, c2 = pauli.components_from_spinor(rot)
        inten = pauli.intensity(psi1 + rot)
        lines.append(f"{theta / math.pi:g}  {_cstr(c1)}  {_cstr(c2)}  {fmt(inten)}")
    _write(args, "\n".join(lines) + "\n")
    return 0


def _cstr(z: complex) -> str:
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="JSON config file")
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    common.add_argument("--grid-n", type=int, metavar="N", help="override grid size")
    common.add_argument("--exact", action="store_true", help="exact coefficient arithmetic")

    parser = argparse.ArgumentParser(prog="metaplectica", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("trace", parents=[common], help="ray snapshots and phase-space angle (CSV)")
    sub.add_parser("cover", parents=[common], help="holonomy sign of a closed loop (JSON)")
    sub.add_parser("propagate", parents=[common], help="Fresnel propagation of a profile (CSV)")
    sub.add_parser("gouy", parents=[common], help="Gouy phase through focus (CSV)")
    sub.add_parser("fringe", parents=[common], help="fringe shift across the focus (CSV)")
    alg = sub.add_parser("algebra", parents=[common], help="normal form of an expression")
    alg.add_argument("expression", nargs="?", help="e.g. '[D,Q]' or 'E*D^2*Q^2*E'")
    alg.add_argument("--fock", type=int, metavar="N", help="print the Fock matrix at truncation N as JSON")
    sub.add_parser("pauli-demo", parents=[common], help="2pi / 4pi rotor sign demo")
    return parser


COMMANDS = {
    "trace": cmd_trace,
    "cover": cmd_cover,
    "propagate": cmd_propagate,
    "gouy": cmd_gouy,
    "fringe": cmd_fringe,
    "algebra": cmd_algebra,
    "pauli-demo": cmd_pauli,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("METAPLECTICA_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MetaplecticaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
