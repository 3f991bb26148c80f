"""Command-line front end: figure data, audit report and the material table.

    whichpath gamma --x-max 4 --count 200
    whichpath lambda --metal Au --d-over-z0 0.02:0.3:100 --energies 150eV,1keV,3keV
    whichpath fringes --pgm fringes.pgm -o fringes.csv

Plain numbers are read as eV for energies, um for D and z0, cm for L and
m for the screen distance; an explicit unit suffix overrides that.
Settings resolve as built-in defaults < ``--config`` file < flags.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from . import dephasing, interference, spectral
from .dielectric import LossModel
from .errors import ConfigError, ConvergenceError, WhichPathError
from .materials import (
    EV, ExperimentSetup, MetalParameters, default_table_path, find_metal,
    lindhard_argument, load_material_table,
)

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 2, 3

_ENERGY_UNITS = {"ev": 1.0, "kev": 1e3, "mev": 1e6}
_LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "μm": 1e-6, "nm": 1e-9}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Zμ]*)\s*$")


def parse_quantity(text: str, kind: str) -> float:
    """'150eV' -> joules, '10um' -> metres, bare numbers in the kind's default unit.

    kind is one of 'energy', 'um', 'cm', 'm' or 'plain'.
    """
    m = _QUANTITY.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if kind == "plain":
        if unit:
            raise ConfigError(f"{text!r}: no unit expected")
        return value
    if kind == "energy":
        scale = _ENERGY_UNITS.get((unit or "eV").lower())
        if scale is None:
            if unit == "J":
                return value
            raise ConfigError(f"unknown energy unit in {text!r}")
        return value * scale * EV
    unit = unit or kind
    if unit not in _LENGTH_UNITS:
        raise ConfigError(f"unknown length unit in {text!r}")
    return value * _LENGTH_UNITS[unit]


@dataclass(frozen=True)
class Sweep:
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def parse_sweep(text: str, kind: str) -> Sweep:
    """'start:stop:count[:linear|log]'."""
    parts = str(text).split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"sweep {text!r} must be start:stop:count[:linear|log]")
    start, stop = parse_quantity(parts[0], kind), parse_quantity(parts[1], kind)
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"sweep count {parts[2]!r} is not an integer") from None
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing not in ("linear", "log"):
        raise ConfigError(f"sweep spacing must be linear or log, got {spacing!r}")
    if count < 2:
        raise ConfigError("sweep count must be >= 2")
    if not start < stop:
        raise ConfigError(f"sweep start must be below stop in {text!r}")
    if spacing == "log" and start <= 0:
        raise ConfigError("log sweeps need a positive start")
    return Sweep(start, stop, count, spacing)


def parse_energies(text: str) -> list[tuple[str, float]]:
    labels = [t.strip() for t in str(text).split(",") if t.strip()]
    if not labels:
        raise ConfigError("no energies given")
    return [(lab, parse_quantity(lab, "energy")) for lab in labels]


# --- command option tables ------------------------------------------------
# name -> (default, help). Every value stays a string until the command reads it.
_SETUP_OPTS = {
    "metal": ("Au", "plate metal (name in the material table)"),
    "model": ("lindhard", "loss model: lindhard or hubbard"),
    "temperature": ("293", "plate temperature, K"),
    "L": ("1cm", "plate length (default unit cm)"),
}

COMMANDS: dict[str, dict[str, tuple[str | None, str]]] = {
    "gamma": {
        "x_min": ("0", "smallest D/z0"),
        "x_max": ("4", "largest D/z0"),
        "count": ("200", "number of points"),
        "spacing": ("linear", "linear or log"),
    },
    "mu": {
        "x_min": ("0", "smallest x"),
        "x_max": ("4", "largest x"),
        "count": ("100", "number of curve points"),
        "metals": ("all", "comma-separated metals for the point set, or 'all'"),
    },
    "lambda": {
        **_SETUP_OPTS,
        "d_over_z0": ("0.02:0.3:100", "D/z0 sweep start:stop:count[:log]"),
        "energies": ("150eV,1keV,3keV", "comma-separated electron energies"),
        "z0": ("100um", "height over the plate (default unit um)"),
    },
    "visibility": {
        **_SETUP_OPTS,
        "z0": ("10um:500um:100", "height sweep (default unit um)"),
        "energies": ("150eV,1keV,3keV", "comma-separated electron energies"),
        "D": ("10um", "path separation (default unit um)"),
    },
    "fringes": {
        **_SETUP_OPTS,
        "z0": ("20um:400um:96", "height sweep, one image row per value"),
        "energy": ("150eV", "electron energy"),
        "D": ("10um", "path separation (default unit um)"),
        "screen_distance": ("1m", "distance to the screen (default unit m)"),
        "fringes": ("4", "fringes shown on each side of the centre"),
        "points_per_fringe": ("16", "even number of samples per fringe"),
        "pgm": (None, "also write a P2 grayscale image here"),
    },
    "spectral": {
        "q": ("0.25:20:40", "q z0 sweep"),
        "omega": ("0.05:3:40", "omega z0 / v sweep"),
        "d_over_z0": ("0.1", "D/z0"),
        "width_fraction": ("0.01", "packet widths l_x = l_y = l_z as a fraction of z0"),
        "method": ("saddle", "saddle or exact"),
        "energy": ("150eV", "electron energy"),
        "z0": ("100um", "height over the plate (default unit um)"),
    },
    "audit": {
        **_SETUP_OPTS,
        "energy": ("150eV", "electron energy"),
        "D": ("10um", "path separation (default unit um)"),
        "z0": ("100um", "height over the plate (default unit um)"),
        "sweep_temperature": ("100:400:4", "temperatures for the ratio sweep, K"),
        "sweep_d_over_z0": ("0.02:0.1:5", "D/z0 values for the ratio sweep"),
    },
    "materials": {},
}

_COMMON = {
    "format": ("csv", "csv or json"),
    "rel_tol": ("1e-8", "relative quadrature tolerance"),
    "workers": ("1", "worker processes for sweeps"),
}

_ALL_KEYS = set(_COMMON) | {k for opts in COMMANDS.values() for k in opts}


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """``key = value`` lines; '#' starts a comment. Keys may use - or _."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _ALL_KEYS and key != "materials":
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--show-config", action="store_true",
                        help="print the effective settings and exit")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--materials", default=None,
                        help="material table CSV (default: $WHICHPATH_MATERIALS or bundled)")
    for key, (default, text) in _COMMON.items():
        common.add_argument("--" + key.replace("_", "-"), dest=key, default=None,
                            help=f"{text} [{default}]")

    parser = argparse.ArgumentParser(prog="whichpath", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        for key, (default, text) in opts.items():
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, dest=key, default=None, help=f"{text} [{default}]")
    return parser


def resolve_settings(args: argparse.Namespace) -> dict[str, str | None]:
    opts = {**_COMMON, **COMMANDS[args.command]}
    settings: dict[str, str | None] = {k: d for k, (d, _) in opts.items()}
    settings["materials"] = None
    if args.config:
        for key, value in read_config_file(args.config).items():
            if key in settings:
                settings[key] = value
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


# --- workers ----------------------------------------------------------------

@contextlib.contextmanager
def _executor(workers: int):
    if workers <= 1:
        yield None
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield pool


def _map(executor, fn, items):
    return list(map(fn, items) if executor is None else executor.map(fn, items))


def _gamma_point(x, rel_tol):
    return spectral.gamma_geometry(float(x), rel_tol=min(rel_tol, 1e-10))


def _mu_point(x):
    return dephasing.mu_material(float(x))


def _inverse_length_point(setup, metal, model):
    return dephasing.inverse_decoherence_length(setup, metal, model).inverse_length


def _visibility_point(setup, metal, model):
    return dephasing.inverse_decoherence_length(setup, metal, model).visibility


def _spectral_point(qw, setup, method, rel_tol):
    q, w = qw
    fn = spectral.spectral_reduced_exact if method == "exact" else spectral.spectral_reduced_saddle
    return fn(q, w, setup, rel_tol)


# --- output -------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _table(header, rows, fmt):
    if fmt == "json":
        return _json([dict(zip(header, (float(v) if not isinstance(v, str) else v for v in row)))
                      for row in rows])
    return _csv(header, rows)


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


class _Outputs:
    """Collects output files and writes them atomically at the end."""

    def __init__(self):
        self.files: list[tuple[str | None, str]] = []

    def add(self, path, text):
        self.files.append((path, text))

    def commit(self, stdout):
        written = []
        try:
            for path, text in self.files:
                if path is None:
                    continue
                target = Path(path)
                fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".whichpath-")
                try:
                    os.chmod(tmp, 0o666 & ~_umask())
                    with os.fdopen(fd, "w", newline="") as fh:
                        fh.write(text)
                    os.replace(tmp, target)
                except BaseException:
                    with contextlib.suppress(OSError):
                        os.unlink(tmp)
                    raise
                written.append(target)
        except BaseException:
            for target in written:
                with contextlib.suppress(OSError):
                    target.unlink()
            raise
        for path, text in self.files:
            if path is None:
                stdout.write(text)


# --- commands -------------------------------------------------------------------

def _setup_kwargs(s):
    return {
        "T": parse_quantity(s["temperature"], "plain"),
        "L": parse_quantity(s["L"], "cm"),
    }


def _metal(s) -> MetalParameters:
    return find_metal(s["metal"], load_material_table(s["materials"]))


def _model(s) -> LossModel:
    try:
        return LossModel(s["model"].lower())
    except ValueError:
        raise ConfigError(f"unknown loss model {s['model']!r}") from None


def cmd_gamma(s, out, ex):
    sweep = parse_sweep(f"{s['x_min']}:{s['x_max']}:{s['count']}:{s['spacing']}", "plain")
    xs = sweep.values()
    vals = _map(ex, partial(_gamma_point, rel_tol=float(s["rel_tol"])), xs)
    out.add(s["output"], _table(["x", "gamma"], zip(xs, vals), s["format"]))


def cmd_mu(s, out, ex):
    sweep = parse_sweep(f"{s['x_min']}:{s['x_max']}:{s['count']}", "plain")
    xs = sweep.values()
    mus = _map(ex, _mu_point, xs)
    curve_header = ["x", "mu", "mu_first_order", "mu_second_order"]
    curve = [(x, m, dephasing.mu_asymptotic(x, 1), dephasing.mu_asymptotic(x, 2))
             for x, m in zip(xs, mus)]
    table = load_material_table(s["materials"])
    if s["metals"].strip().lower() != "all":
        table = [find_metal(n.strip(), table) for n in s["metals"].split(",")]
    point_header = ["name", "x", "mu_lindhard", "mu_hubbard"]
    points = [(m.name, lindhard_argument(m), dephasing.material_mu(m, LossModel.LINDHARD),
               dephasing.material_mu(m, LossModel.HUBBARD)) for m in table]
    if s["format"] == "json":
        doc = {"curve": [dict(zip(curve_header, map(float, r))) for r in curve],
               "metals": [{"name": r[0], **dict(zip(point_header[1:], map(float, r[1:])))}
                          for r in points]}
        out.add(s["output"], _json(doc))
        return
    curve_text, point_text = _csv(curve_header, curve), _csv(point_header, points)
    if s["output"] is None:
        out.add(None, curve_text + "\n" + point_text)
    else:
        path = Path(s["output"])
        out.add(str(path), curve_text)
        out.add(str(path.with_name(path.stem + "_metals" + path.suffix)), point_text)


def cmd_lambda(s, out, ex):
    metal, model = _metal(s), _model(s)
    xs = parse_sweep(s["d_over_z0"], "plain").values()
    z0 = parse_quantity(s["z0"], "um")
    energies = parse_energies(s["energies"])
    columns = []
    for _, energy in energies:
        setups = [ExperimentSetup.from_energy(energy, D=float(x) * z0, z0=z0, **_setup_kwargs(s))
                  for x in xs]
        columns.append(_map(ex, partial(_inverse_length_point, metal=metal, model=model), setups))
    header = ["d_over_z0"] + [f"inv_length_{lab}" for lab, _ in energies]
    out.add(s["output"], _table(header, zip(xs, *columns), s["format"]))


def cmd_visibility(s, out, ex):
    metal, model = _metal(s), _model(s)
    z0s = parse_sweep(s["z0"], "um").values()
    D = parse_quantity(s["D"], "um")
    energies = parse_energies(s["energies"])
    columns = []
    for _, energy in energies:
        setups = [ExperimentSetup.from_energy(energy, D=D, z0=float(z), **_setup_kwargs(s))
                  for z in z0s]
        columns.append(_map(ex, partial(_visibility_point, metal=metal, model=model), setups))
    header = ["z0"] + [f"visibility_{lab}" for lab, _ in energies]
    out.add(s["output"], _table(header, zip(z0s, *columns), s["format"]))


def cmd_fringes(s, out, ex):
    metal, model = _metal(s), _model(s)
    z0s = parse_sweep(s["z0"], "um").values()
    setup = ExperimentSetup.from_energy(
        parse_quantity(s["energy"], "energy"),
        D=parse_quantity(s["D"], "um"), z0=float(z0s[-1]),
        screen_distance=parse_quantity(s["screen_distance"], "m"), **_setup_kwargs(s))
    try:
        n_fr, ppf = int(s["fringes"]), int(s["points_per_fringe"])
    except ValueError:
        raise ConfigError("fringes and points_per_fringe must be integers") from None
    x_s = interference.screen_grid(setup, n_fr, ppf)
    fmap = interference.fringe_map(z0s, x_s, setup, metal, model, executor=ex)
    if s["format"] == "json":
        doc = {"z0": fmap.z0.tolist(), "x_s": fmap.x_s.tolist(),
               "intensity": fmap.intensity.tolist(), "visibility": fmap.visibility.tolist()}
        out.add(s["output"], _json(doc))
    else:
        buf = io.StringIO()
        interference.write_fringe_csv(fmap, buf)
        out.add(s["output"], buf.getvalue())
    if s["pgm"]:
        buf = io.StringIO()
        interference.write_pgm(fmap, buf)
        out.add(s["pgm"], buf.getvalue())


def cmd_spectral(s, out, ex):
    z0 = parse_quantity(s["z0"], "um")
    frac = parse_quantity(s["width_fraction"], "plain")
    setup = ExperimentSetup.from_energy(
        parse_quantity(s["energy"], "energy"), z0=z0,
        D=parse_quantity(s["d_over_z0"], "plain") * z0,
        l_x=frac * z0, l_y=frac * z0, l_z=frac * z0)
    method = s["method"]
    if method not in ("saddle", "exact"):
        raise ConfigError(f"method must be saddle or exact, got {method!r}")
    Qs = parse_sweep(s["q"], "plain").values()
    Ws = parse_sweep(s["omega"], "plain").values()
    grid = [(Q / z0, W * setup.velocity / z0) for W in Ws for Q in Qs]
    vals = _map(ex, partial(_spectral_point, setup=setup, method=method,
                            rel_tol=float(s["rel_tol"])), grid)
    rows = [(Q, W, v) for (Q, W), v in zip(((Q, W) for W in Ws for Q in Qs), vals)]
    out.add(s["output"], _table(["q_over_inv_z0", "omega_over_v_z0", "S"], rows, s["format"]))


def cmd_audit(s, out, ex):
    metal, model = _metal(s), _model(s)
    base = dict(D=parse_quantity(s["D"], "um"), z0=parse_quantity(s["z0"], "um"),
                **_setup_kwargs(s))
    energy = parse_quantity(s["energy"], "energy")
    report = dephasing.consistency_audit(ExperimentSetup.from_energy(energy, **base), metal, model)
    sweeps = {"temperature": [], "d_over_z0": []}
    for T in parse_sweep(s["sweep_temperature"], "plain").values():
        r = dephasing.consistency_audit(
            ExperimentSetup.from_energy(energy, **{**base, "T": float(T)}), metal, model)
        sweeps["temperature"].append({"T": float(T), "ratios": r["ratios"]})
    for x in parse_sweep(s["sweep_d_over_z0"], "plain").values():
        r = dephasing.consistency_audit(
            ExperimentSetup.from_energy(energy, **{**base, "D": float(x) * base["z0"]}),
            metal, model)
        sweeps["d_over_z0"].append({"d_over_z0": float(x), "ratios": r["ratios"]})
    report["sweeps"] = sweeps
    out.add(s["output"], _json(report))


def cmd_materials(s, out, ex):
    table = load_material_table(s["materials"])
    header = ["name", "k_F", "k_TF", "epsilon_i", "x", "v_F", "E_F_eV"]
    rows = [(m.name, m.k_F, m.k_TF, m.eps_i, lindhard_argument(m), m.fermi_velocity,
             m.fermi_energy / EV) for m in table]
    out.add(s["output"], _table(header, rows, s["format"]))


HANDLERS = {
    "gamma": cmd_gamma, "mu": cmd_mu, "lambda": cmd_lambda, "visibility": cmd_visibility,
    "fringes": cmd_fringes, "spectral": cmd_spectral, "audit": cmd_audit,
    "materials": cmd_materials,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        settings["output"] = args.output
        if settings["materials"] is None:
            settings["materials"] = str(default_table_path())
        if args.show_config:
            for key in sorted(settings):
                if key != "output":
                    stdout.write(f"{key} = {'' if settings[key] is None else settings[key]}\n")
            return EXIT_OK
        if settings["format"] not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {settings['format']!r}")
        try:
            workers = int(settings["workers"])
            float(settings["rel_tol"])
        except ValueError:
            raise ConfigError("workers must be an integer and rel_tol a number") from None
        out = _Outputs()
        with _executor(workers) as ex:
            HANDLERS[args.command](settings, out, ex)
        out.commit(stdout)
    except ConvergenceError as exc:
        stderr.write(f"whichpath: convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    except (WhichPathError, ValueError, OSError) as exc:
        stderr.write(f"whichpath: error: {exc}\n")
        return EXIT_CONFIG
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
