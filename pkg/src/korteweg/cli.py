"""Command-line driver: ``korteweg <command> --config run.toml``.

A configuration is a small TOML file with a top-level ``command`` and
``omega`` plus the sections ``[material]``, ``[director]`` and one section
named after the command.  ``--override section.key=value`` edits single
values.  Each run writes its artifacts to ``--out`` and prints key=value
metrics on standard output.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import fieldio
from .dispersion import penetration_depth, roots_from_omega_tau, speed_ratio
from .medium import Director, MaterialParams, tau2
from .reflection import (
    InterfaceSpec,
    NoTotalInternalReflection,
    boundary_residual,
    critical_angle,
    incoming_wave,
    reflect_amplitude,
    reflected_field,
    snell_transmit,
    tir_decay_parameter,
)
from .scattering import along_axis_field, mie_expansion, nematic_wavenumber
from .solver import (
    BoundaryCondition,
    CartesianGrid,
    MeshingError,
    SolveError,
    assemble,
    axis_profile,
    default_layer,
    sample_polar,
    scatter_bvp,
    solve,
)
from .specfun import bessel_j_orders, bessel_y_orders
from .timedomain import GaussianPulse, StabilityError, front_radius, run_pulse

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2
COMMANDS = ("dispersion", "reflect", "transmit", "scatter-mie", "scatter-solve", "solve", "pulse", "specfun-check")

NUM, INT, STR, NUMS = "number", "integer", "string", "numbers"

SCHEMA = {
    "": {"command": STR, "omega": NUM},
    "material": {"c0": NUM, "rho0": NUM, "u1": NUM, "u2": NUM},
    "director": {"angle": NUM},
    "dispersion": {"omega": NUMS, "xi": NUM},
    "reflect": {"bc": STR, "zeta_re": NUM, "zeta_im": NUM, "theta": NUMS},
    "transmit": {"n": NUM, "n_t": NUM, "theta": NUMS, "k": NUM},
    "scatter": {
        "psi": NUM, "radius": NUM, "xi": NUMS, "y_inner": NUM, "y_outer": NUM, "samples": INT,
        "resolution": NUM, "layer_wavelengths": NUM, "layer_strength": NUM, "image_pixels": INT,
    },
    "solve": {
        "nodes": INT, "length": NUM, "bc": STR, "zeta_re": NUM, "zeta_im": NUM,
        "source_x": NUM, "source_y": NUM, "source_width": NUM,
    },
    "pulse": {"nodes": INT, "half_width": NUM, "pulse_width": NUM, "t_end": NUM, "times": NUMS, "probe_radius": NUM},
    "specfun": {"jmax": INT, "x_min": NUM, "x_max": NUM, "points": INT},
}

SECTION_OF = {"scatter-mie": "scatter", "scatter-solve": "scatter", "specfun-check": "specfun"}

DEFAULTS = {
    "": {"omega": 1.0},
    "material": {"c0": 1.0, "rho0": 1.0, "u1": 0.0, "u2": 0.0},
    "director": {"angle": 0.0},
    "dispersion": {"omega": [1.0], "xi": math.pi / 2},
    "reflect": {"bc": "sound_soft", "zeta_re": 0.0, "zeta_im": 0.0, "theta": [0.0, 0.3, 0.6, 0.9, 1.2]},
    "transmit": {"n": 1.5, "n_t": 1.0, "theta": [0.0, 0.3, 0.6, 0.9, 1.2], "k": 1.0},
    "scatter": {
        "psi": -math.pi / 2, "radius": 1.0, "xi": [0.0, math.pi / 2], "y_inner": 1.5, "y_outer": 4.0,
        "samples": 40, "resolution": 16.0, "layer_wavelengths": 3.0, "layer_strength": 3.0, "image_pixels": 0,
    },
    "solve": {
        "nodes": 41, "length": 1.0, "bc": "sound_soft", "zeta_re": 0.0, "zeta_im": 0.0,
        "source_x": 0.5, "source_y": 0.5, "source_width": 0.1,
    },
    "pulse": {"nodes": 200, "half_width": 1.0, "pulse_width": 0.04, "t_end": 0.2, "times": [], "probe_radius": 0.0},
    "specfun": {"jmax": 50, "x_min": 0.1, "x_max": 50.0, "points": 200},
}


class ConfigError(ValueError):
    """The configuration cannot be run as written."""


@dataclass
class RunConfig:
    """Validated configuration of one run."""

    command: str
    material: MaterialParams
    director: Director
    omega: float
    section: dict
    raw: dict = field(repr=False, default_factory=dict)


@dataclass
class RunResult:
    status: int
    metrics: dict
    artifacts: list


# -- configuration ------------------------------------------------------------


def preset_names() -> list:
    root = resources.files("korteweg") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def load_preset(name: str) -> dict:
    path = resources.files("korteweg") / "presets" / f"{name}.toml"
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return tomllib.loads(path.read_text(encoding="utf-8"))


def load_file(path) -> dict:
    p = Path(path)
    if not p.is_file():
        if "/" not in str(path) and not str(path).endswith(".toml"):
            return load_preset(str(path))
        raise ConfigError(f"config file {path} not found")
    try:
        return tomllib.loads(p.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_override(text: str) -> tuple:
    """``section.key=value`` (or ``key=value`` at top level) with a TOML literal value."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not key=value")
    key, value = (s.strip() for s in text.split("=", 1))
    try:
        parsed = tomllib.loads(f"v = {value}")["v"]
    except tomllib.TOMLDecodeError:
        parsed = value
    section, _, name = key.rpartition(".")
    return section, name, parsed


def apply_overrides(raw: dict, overrides) -> dict:
    out = {k: (dict(v) if isinstance(v, dict) else v) for k, v in raw.items()}
    for text in overrides or ():
        section, name, value = parse_override(text)
        if section:
            out.setdefault(section, {})[name] = value
        else:
            out[name] = value
    return out


def _check_value(where: str, kind: str, value):
    if kind == STR:
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string")
        return value
    if kind == INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if kind == NUM:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise ConfigError(f"{where} must be a list of numbers")
    return [float(v) for v in value]


def validate(raw: dict, command: str | None = None) -> RunConfig:
    """Check keys and types, fill defaults and build the physical objects."""
    raw = dict(raw)
    command = command or raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")
    raw["command"] = command
    values = {}
    for key, value in raw.items():
        if isinstance(value, dict):
            if key not in SCHEMA or key == "":
                raise ConfigError(f"unknown section [{key}]")
            sect = {}
            for k, v in value.items():
                if k not in SCHEMA[key]:
                    raise ConfigError(f"unknown key {key}.{k}")
                sect[k] = _check_value(f"{key}.{k}", SCHEMA[key][k], v)
            values[key] = sect
        else:
            if key not in SCHEMA[""]:
                raise ConfigError(f"unknown key {key}")
            values.setdefault("", {})[key] = _check_value(key, SCHEMA[""][key], value)
    merged = {s: {**DEFAULTS.get(s, {}), **values.get(s, {})} for s in SCHEMA}
    try:
        material = MaterialParams(**merged["material"])
        director = Director.from_angle(merged["director"]["angle"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    omega = merged[""]["omega"]
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ConfigError("omega must be finite and non-negative")
    section = merged[SECTION_OF.get(command, command)]
    return RunConfig(command, material, director, omega, section, raw)


# -- commands -----------------------------------------------------------------


def _run_dispersion(cfg: RunConfig, out: Path):
    s = cfg.section
    path = out / "dispersion.csv"
    rows = []
    for omega in s["omega"]:
        x = omega * tau2(cfg.material, s["xi"])
        roots = roots_from_omega_tau(x)
        ki = math.nan if roots.degenerate else roots.evanescent.imag
        depth = math.inf if roots.degenerate else penetration_depth(cfg.material, omega, s["xi"])
        rows.append((omega, x, roots.propagating, ki, float(speed_ratio(x)), depth, int(roots.degenerate)))
    with path.open("w", encoding="utf-8") as fh:
        fh.write("omega,omega_tau,kappa_real,kappa_evanescent_imag,speed_ratio,penetration_depth,degenerate\n")
        for r in rows:
            fh.write(",".join(f"{v:.17g}" for v in r[:-1]) + f",{r[-1]}\n")
    first = rows[0]
    metrics = {"rows": len(rows), "kappa": first[2], "omega_tau": first[1], "degenerate": bool(first[6]),
               "speed_ratio": first[4]}
    return metrics, [path]


def _interface(s) -> InterfaceSpec:
    try:
        return InterfaceSpec(s["bc"], complex(s["zeta_re"], s["zeta_im"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _run_reflect(cfg: RunConfig, out: Path):
    s = cfg.section
    iface = _interface(s)
    omega = cfg.omega
    path = out / "reflect.csv"
    worst = 0.0
    with path.open("w", encoding="utf-8") as fh:
        fh.write("theta,k,A_re,A_im,A_abs,residual\n")
        for theta in s["theta"]:
            wave = incoming_wave(cfg.material, cfg.director, omega, theta)
            a = reflect_amplitude(wave, iface)
            res = boundary_residual(reflected_field(wave, iface), iface, np.linspace(-5, 5, 41))
            worst = max(worst, res)
            fh.write(f"{theta:.17g},{wave.k.real:.17g},{a.real:.17g},{a.imag:.17g},{abs(a):.17g},{res:.3e}\n")
    return {"angles": len(s["theta"]), "max_residual": worst}, [path]


def _run_transmit(cfg: RunConfig, out: Path):
    s = cfg.section
    n, n_t, k = s["n"], s["n_t"], s["k"]
    try:
        theta_c = critical_angle(n, n_t)
    except NoTotalInternalReflection:
        theta_c = math.nan
    path = out / "transmit.csv"
    with path.open("w", encoding="utf-8") as fh:
        fh.write("theta,d1,d2_re,d2_im,tir,alpha\n")
        for theta in s["theta"]:
            d = snell_transmit(theta, n, n_t)
            tir = bool(d[1].imag > 0.0)
            alpha = tir_decay_parameter(theta, k, n, n_t) if tir else 0.0
            fh.write(f"{theta:.17g},{d[0].real:.17g},{d[1].real:.17g},{d[1].imag:.17g},{int(tir)},{alpha:.17g}\n")
    return {"critical_angle": theta_c}, [path]


def _axis_samples(s) -> np.ndarray:
    side = np.linspace(s["y_inner"], s["y_outer"], s["samples"])
    return np.concatenate([-side[::-1], side])


def _scatter_curves(cfg: RunConfig, solver: bool):
    s = cfg.section
    p, psi = cfg.material, s["psi"]
    y = _axis_samples(s)
    curves, mie_curves, fields = {}, {}, {}
    for xi in s["xi"]:
        n = Director.from_angle(psi + xi)
        k = nematic_wavenumber(p, cfg.omega, psi, n)
        mie = along_axis_field(mie_expansion(k, psi, s["radius"]), y)
        mie_curves[xi] = mie.real
        if solver:
            layer = default_layer(p, cfg.omega, s["layer_wavelengths"], s["layer_strength"])
            result = scatter_bvp(p, cfg.omega, n, psi, s["radius"], layer=layer, resolution=s["resolution"])
            curves[xi] = axis_profile(result.S, y).real
            fields[xi] = result
        else:
            curves[xi] = mie.real
    return y, curves, mie_curves, fields


def _gap(a, b) -> float:
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def _run_scatter(cfg: RunConfig, out: Path, solver: bool):
    s = cfg.section
    y, curves, mie_curves, fields = _scatter_curves(cfg, solver)
    artifacts, metrics = [], {}
    for xi, F in curves.items():
        path = out / fieldio.amplitude_csv_name(cfg.material.u1, cfg.material.u2, xi)
        artifacts.append(fieldio.write_amplitude_csv(y, F, path))
        tag = f"{round(xi, 2):.2f}"
        metrics[f"mean_abs_F_xi_{tag}"] = float(np.mean(np.abs(F)))
        if solver:
            metrics[f"mie_error_xi_{tag}"] = _gap(F, mie_curves[xi])
            metrics[f"residual_xi_{tag}"] = fields[xi].residual
            if s["image_pixels"] > 0:
                artifacts.append(_annulus_image(fields[xi], s["image_pixels"], out / f"field_xi_{tag}.pgm"))
    keys = list(curves)
    if len(keys) >= 2:
        a, b = curves[keys[0]], curves[keys[-1]]
        metrics["curve_gap"] = _gap(a, b)
        ma, mb = mie_curves[keys[0]], mie_curves[keys[-1]]
        significant = np.abs(ma - mb) > 0.05 * np.max(np.abs(mb))
        metrics["ordering_agrees_with_mie"] = bool(np.all(np.sign(a - b)[significant] == np.sign(ma - mb)[significant]))
    return metrics, artifacts


def _annulus_image(result, pixels: int, path: Path) -> Path:
    g = result.S.grid
    c = np.linspace(-g.r1, g.r1, pixels)
    X, Y = np.meshgrid(c, c, indexing="ij")
    R = np.hypot(X, Y)
    inside = (R >= g.r0) & (R <= g.r1)
    img = np.zeros(X.shape)
    img[inside] = np.abs(sample_polar(result.S, R[inside], np.arctan2(Y[inside], X[inside])))
    return fieldio.write_modulus_pgm(img, path)


def _run_solve(cfg: RunConfig, out: Path):
    s = cfg.section
    L = s["length"]
    g = CartesianGrid(0.0, L, 0.0, L, s["nodes"], s["nodes"])
    src = GaussianPulse((s["source_x"], s["source_y"]), s["source_width"])
    try:
        bc = BoundaryCondition(s["bc"], zeta=complex(s["zeta_re"], s["zeta_im"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    result = solve(assemble(cfg.material, cfg.omega, cfg.director, g, bc=bc, source=src))
    a = fieldio.write_field_csv(result.S, out / "field.csv")
    b = fieldio.write_modulus_pgm(result.S.values, out / "field.pgm")
    return {"residual": result.residual, "max_abs_S": float(np.abs(result.S.values).max())}, [a, b]


def _run_pulse(cfg: RunConfig, out: Path):
    s = cfg.section
    L, N = s["half_width"], s["nodes"]
    g = CartesianGrid(-L, L, -L, L, N, N, True, True)
    times = sorted(set(s["times"]) | {s["t_end"]})
    try:
        snaps = run_pulse(cfg.material, cfg.director, g, GaussianPulse((0.0, 0.0), s["pulse_width"]), s["t_end"], times)
    except StabilityError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    vmax = float(np.max(np.abs(snaps[-1].s)))
    artifacts = []
    for i, snap in enumerate(snaps):
        artifacts.append(fieldio.write_modulus_pgm(snap.s, out / f"pulse_{i:02d}.pgm", vmax))
    r_max = s["probe_radius"] or 0.95 * L
    n = cfg.director.vector
    along = front_radius(snaps[-1].s, g, (0.0, 0.0), n, r_max)
    across = front_radius(snaps[-1].s, g, (0.0, 0.0), (-n[1], n[0]), r_max)
    rx = front_radius(snaps[-1].s, g, (0.0, 0.0), (1.0, 0.0), r_max)
    ry = front_radius(snaps[-1].s, g, (0.0, 0.0), (0.0, 1.0), r_max)
    metrics = {"t_final": snaps[-1].t, "front_along_director": along, "front_across_director": across,
               "axis_ratio": along / across, "front_x": rx, "front_y": ry}
    return metrics, artifacts


def _run_specfun(cfg: RunConfig, out: Path):
    s = cfg.section
    xs = np.linspace(s["x_min"], s["x_max"], s["points"])
    worst = 0.0
    path = out / "wronskian.csv"
    with path.open("w", encoding="utf-8") as fh:
        fh.write("x,max_relative_wronskian_error\n")
        for x in xs:
            j = bessel_j_orders(s["jmax"] + 1, x)
            yv = bessel_y_orders(s["jmax"] + 1, x)
            w = j[1:] * yv[:-1] - j[:-1] * yv[1:]
            ref = 2.0 / (math.pi * x)
            scale = np.maximum(np.abs(j[1:] * yv[:-1]) + np.abs(j[:-1] * yv[1:]), ref)
            err = float(np.max(np.abs(w - ref) / scale))
            worst = max(worst, err)
            fh.write(f"{x:.17g},{err:.3e}\n")
    return {"points": len(xs), "max_wronskian_error": worst}, [path]


def run(cfg: RunConfig, out_dir=".") -> RunResult:
    """Execute a validated configuration, writing artifacts to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    handlers = {
        "dispersion": _run_dispersion,
        "reflect": _run_reflect,
        "transmit": _run_transmit,
        "scatter-mie": lambda c, o: _run_scatter(c, o, solver=False),
        "scatter-solve": lambda c, o: _run_scatter(c, o, solver=True),
        "solve": _run_solve,
        "pulse": _run_pulse,
        "specfun-check": _run_specfun,
    }
    metrics, artifacts = handlers[cfg.command](cfg, out)
    return RunResult(EXIT_OK, {"command": cfg.command, **metrics}, [str(a) for a in artifacts])


def format_metrics(metrics: dict) -> str:
    def fmt(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return f"{v:.10g}"
        return str(v)

    return "\n".join(f"{k}={fmt(v)}" for k, v in metrics.items())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="korteweg", description="Acoustics of (nematic) Korteweg fluids.")
    ap.add_argument("command", nargs="?", choices=COMMANDS, help="overrides the config's command")
    ap.add_argument("--config", help="TOML file or the name of a bundled preset")
    ap.add_argument("--out", default=".", help="output directory (default: current directory)")
    ap.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                    help="set section.key to a TOML value; repeatable")
    ap.add_argument("--quiet", action="store_true", help="suppress the metric summary")
    ap.add_argument("--list-presets", action="store_true", help="print bundled preset names and exit")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_presets:
        print("\n".join(preset_names()))
        return EXIT_OK
    try:
        raw = load_file(args.config) if args.config else {}
        cfg = validate(apply_overrides(raw, args.override), args.command)
        result = run(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolveError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        print(f"residual={exc.residual:.3e}")
        return EXIT_NUMERICAL
    except (StabilityError, MeshingError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if not args.quiet:
        print(format_metrics(result.metrics))
        for a in result.artifacts:
            print(f"artifact={a}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
