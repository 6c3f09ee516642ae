"""Command-line front end.

Configuration is a TOML or JSON file with an optional ``[params]`` table
(M, omega, e, c, hbar) and one table per command. Flags override the file.

Exit codes: 0 ok, 1 check failure, 2 config error, 3 numerical failure,
4 auxiliary-equation singularity.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks as chk
from .fields import FieldProfile, FieldProfileError
from .invariants import co_invariant_series, drift
from .numerics import ErmakovSingularity, IntegrationError, IntegratorConfig, integrate_ode, solve_ermakov
from .oscillator import angular_momentum, co_evolve_series, co_hamiltonian, co_vector_field
from .params import Chirality, CoState, PhysicalParams
from .spectrum import FockBasisSpec, JacobiNonConvergence, exact_landau_levels, zeeman_spectrum
from .zeeman import QuantumNumbers, zeeman_levels, zeeman_phase_series

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_SINGULAR = 0, 1, 2, 3, 4
COMMANDS = ("evolve", "zeeman", "spectrum", "solder", "invariants", "duality")


class ConfigError(ValueError):
    pass


_TOL = {"rel_tol": ("float", 1e-10), "abs_tol": ("float", 1e-12)}

SCHEMAS = {
    "params": {k: ("float", 1.0) for k in ("M", "omega", "e", "c", "hbar")},
    "evolve": {
        "chirality": ("str", "+"),
        "x0": ("vec2", (1.0, 0.0)),
        "t_start": ("float", 0.0),
        "t_end": ("float", 2 * math.pi),
        "n_samples": ("int", 101),
        "method": ("str", "adaptive-RK45"),
        "step": ("opt_float", None),
        **_TOL,
    },
    "zeeman": {
        "B": ("opt_float", None),
        "field_csv": ("opt_str", None),
        "levels": ("levels", ((0, 0), (1, 0), (2, 0))),
        "n": ("int", 0),
        "j": ("int", 0),
        "rho0": ("opt_float", None),
        "rhodot0": ("float", 0.0),
        "t_start": ("opt_float", None),
        "t_end": ("opt_float", None),
        "n_samples": ("int", 201),
        **_TOL,
    },
    "spectrum": {"n_max": ("int", 10), "B": ("float", 0.0), "n_levels": ("opt_int", None)},
    "solder": {
        "x0": ("vec2", (1.0, 0.3)),
        "y0": ("vec2", (0.4, -0.8)),
        "periods": ("float", 10.0),
        "n_samples": ("int", 4001),
        "seed": ("int", 0),
        "n_random": ("int", 100),
        **_TOL,
    },
    "invariants": {
        "x0": ("vec2", (1.0, 0.3)),
        "y0": ("vec2", (0.4, -0.8)),
        "ho0": ("vec2", (1.0, 0.5)),
        "periods": ("float", 10.0),
        **_TOL,
    },
    "duality": {"seed": ("int", 0), "n_random": ("int", 100), "n_theta": ("int", 32), **_TOL},
}


def _coerce(section: str, key: str, kind: str, value):
    where = f"{section}.{key}"

    def num(v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {v!r}")
        if not math.isfinite(v):
            raise ConfigError(f"{where}: must be finite")
        return float(v)

    if kind.startswith("opt_") and value is None:
        return None
    kind = kind.removeprefix("opt_")
    if kind == "float":
        return num(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if kind == "vec2":
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ConfigError(f"{where}: expected a pair of numbers")
        return (num(value[0]), num(value[1]))
    if kind == "levels":
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{where}: expected a list of [n, j] pairs")
        out = []
        for item in value:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ConfigError(f"{where}: expected [n, j] pairs")
            try:
                qn = QuantumNumbers(*item)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{where}: {exc}") from None
            out.append((qn.n, qn.j))
        return tuple(out)
    raise AssertionError(kind)


def _section(raw: dict, name: str) -> dict:
    schema = SCHEMAS[name]
    given = raw.get(name, {})
    if not isinstance(given, dict):
        raise ConfigError(f"[{name}] must be a table")
    unknown = sorted(set(given) - set(schema))
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {', '.join(unknown)}")
    return {k: _coerce(name, k, kind, given.get(k, default)) for k, (kind, default) in schema.items()}


def load_config(path) -> dict:
    if path is None:
        return {}
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        if path.suffix == ".toml":
            raw = tomllib.loads(text)
        elif path.suffix == ".json":
            raw = json.loads(text)
        else:
            raise ConfigError("config must be a .toml or .json file")
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table")
    unknown = sorted(set(raw) - set(SCHEMAS))
    if unknown:
        raise ConfigError(f"unknown config sections {', '.join(unknown)}")
    return raw


def _apply_overrides(raw: dict, command: str, overrides, tol) -> dict:
    raw = {k: dict(v) if isinstance(v, dict) else v for k, v in raw.items()}
    for item in overrides or ():
        key, sep, text = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        section, _, name = key.rpartition(".")
        section = section or command
        if section not in SCHEMAS:
            raise ConfigError(f"--set: unknown section {section!r}")
        try:
            value = json.loads(text)
        except ValueError:
            value = text
        raw.setdefault(section, {})[name] = value
    if tol is not None and "rel_tol" in SCHEMAS[command]:
        raw.setdefault(command, {})["rel_tol"] = tol
    return raw


def resolve(raw: dict, command: str):
    """Validate the ``params`` table and the table for ``command``."""
    for name in SCHEMAS:
        if name in raw:
            _section(raw, name)
    p = _section(raw, "params")
    try:
        params = PhysicalParams(**p)
    except ValueError as exc:
        raise ConfigError(f"[params]: {exc}") from None
    return params, _section(raw, command)


def _integrator(settings: dict, method: str = "adaptive-RK45", step=None) -> IntegratorConfig:
    try:
        max_step = step if step is not None else math.inf
        return IntegratorConfig(settings["rel_tol"], settings["abs_tol"], max_step, method)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    # adding 0.0 folds -0.0 into 0.0
    return format(float(value) + 0.0, ".17g")


def render_table(columns, rows, fmt: str) -> str:
    if fmt == "json":
        body = {"columns": list(columns), "rows": [[_json_value(v) for v in r] for r in rows]}
        return json.dumps(body, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def _json(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return _json_value(o)

    return json.dumps(clean(obj), indent=2) + "\n"


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _sidecar(out: Path | None, tag: str) -> Path | None:
    return None if out is None else out.with_name(f"{out.stem}.{tag}.json")


# commands ------------------------------------------------------------------


def cmd_evolve(params, s, fmt, out) -> int:
    try:
        chir = Chirality.parse(s["chirality"])
    except ValueError as exc:
        raise ConfigError(f"[evolve] {exc}") from None
    if s["n_samples"] < 2 or not s["t_end"] > s["t_start"]:
        raise ConfigError("[evolve] need n_samples >= 2 and t_end > t_start")
    cfg = _integrator(s, s["method"], s["step"])
    state0 = CoState(*s["x0"], chir)
    times = np.linspace(s["t_start"], s["t_end"], s["n_samples"])
    traj = integrate_ode(co_vector_field(chir, params), state0.xy, (times[0], times[-1]), cfg,
                         t_eval=times, producer="evolve")
    xy = traj.samples
    H = [co_hamiltonian(CoState(a, b, chir), params) for a, b in xy]
    J = [angular_momentum(CoState(a, b, chir), params) for a, b in xy]
    report = {
        "hamiltonian_drift": drift(H),
        "angular_momentum_drift": drift(J),
        "invariant_drift": drift(co_invariant_series(times - times[0], xy, chir, params)),
        "analytic_max_error": float(np.max(np.abs(xy - co_evolve_series(state0, times - times[0], params)))),
    }
    _emit(render_table(("t", "x1", "x2"), [(t, a, b) for t, (a, b) in zip(traj.times, xy)], fmt), out)
    side = _sidecar(out, "drift")
    if side is not None:
        side.write_text(_json(report))
    return EXIT_OK


def cmd_zeeman(params, s, fmt, out) -> int:
    if (s["B"] is None) == (s["field_csv"] is None):
        raise ConfigError("[zeeman] give exactly one of B (constant) or field_csv (tabulated)")
    if s["field_csv"] is None:
        rows = []
        hw = params.hbar * params.omega
        for n, j in s["levels"]:
            e_plus, e_minus = zeeman_levels(QuantumNumbers(n, j), s["B"], params)
            rows.append((n, j, e_minus, (n + 0.5) * hw, e_plus))
        _emit(render_table(("n", "j", "E_minus", "E_0", "E_plus"), rows, fmt), out)
        return EXIT_OK

    try:
        qn = QuantumNumbers(s["n"], s["j"])
    except ValueError as exc:
        raise ConfigError(f"[zeeman] {exc}") from None
    try:
        field = FieldProfile.from_csv(s["field_csv"])
    except (OSError, FieldProfileError) as exc:
        raise ConfigError(f"[zeeman] field table: {exc}") from None
    t0 = field.span[0] if s["t_start"] is None else s["t_start"]
    t1 = field.span[1] if s["t_end"] is None else s["t_end"]
    if s["rho0"] is None or not s["rho0"] > 0:
        raise ConfigError("[zeeman] tabulated fields need a positive rho0")
    if not (t1 > t0 and field.covers(t0, t1)) or s["n_samples"] < 3:
        raise ConfigError("[zeeman] time span must lie inside the field table (n_samples >= 3)")
    cfg = _integrator(s)
    times = np.linspace(t0, t1, s["n_samples"])
    status = {"singularity": False, "last_good_time": float(t1)}
    try:
        traj = solve_ermakov(field, s["rho0"], s["rhodot0"], (t0, t1), params, cfg, t_eval=times)
    except ErmakovSingularity as exc:
        traj = exc.partial
        status = {"singularity": True, "last_good_time": exc.t_last}
    rows = []
    if traj is not None and len(traj) > 0:
        rho = traj.component(0)
        inv_rho2 = rho ** -2.0
        if len(traj) >= 2:
            a_plus = zeeman_phase_series(qn, +1, field, traj.times, inv_rho2, params)
            a_minus = zeeman_phase_series(qn, -1, field, traj.times, inv_rho2, params)
        else:
            a_plus = a_minus = np.zeros(1)
        rows = list(zip(traj.times, rho, a_plus, a_minus))
    _emit(render_table(("t", "rho", "alpha_plus", "alpha_minus"), rows, fmt), out)
    if status["singularity"]:
        side = _sidecar(out, "status")
        if side is not None:
            side.write_text(_json(status))
        print(f"warning: rho singularity, output truncated at t={status['last_good_time']}", file=sys.stderr)
        return EXIT_SINGULAR
    return EXIT_OK


def cmd_spectrum(params, s, fmt, out) -> int:
    try:
        spec = FockBasisSpec(s["n_max"])
    except ValueError as exc:
        raise ConfigError(f"[spectrum] {exc}") from None
    result = zeeman_spectrum(spec, s["B"], params)
    count = len(result.eigenvalues) if s["n_levels"] is None else min(s["n_levels"], len(result.eigenvalues))
    rows = []
    for k in range(count):
        npl, nmi = result.labels[k]
        energy = float(result.eigenvalues[k])
        exact = exact_landau_levels(npl, nmi, s["B"], params)
        rows.append((npl, nmi, energy, result.truncation_error_estimate[k], energy - exact))
    cols = ("n_plus", "n_minus", "energy", "truncation_error", "deviation_from_exact")
    _emit(render_table(cols, rows, fmt), out)
    return EXIT_OK


def _report(command: str, results, fmt: str, out) -> int:
    ok = all(c.passed for c in results)
    if fmt == "csv":
        rows = [(c.name, c.max_residual, c.threshold, c.comparison, c.passed) for c in results]
        text = render_table(("name", "max_residual", "threshold", "comparison", "passed"), rows, "csv")
    else:
        text = _json({"command": command, "checks": [c.as_dict() for c in results], "all_passed": ok})
    _emit(text, out)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_solder(params, s, fmt, out) -> int:
    if s["n_samples"] < 5 or s["n_random"] < 1 or not s["periods"] > 0:
        raise ConfigError("[solder] need n_samples >= 5, n_random >= 1, periods > 0")
    results = chk.solder_checks(params, s["x0"], s["y0"], s["periods"], s["n_samples"],
                                _integrator(s), s["seed"], s["n_random"])
    return _report("solder", results, fmt, out)


def cmd_invariants(params, s, fmt, out) -> int:
    if not s["periods"] > 0:
        raise ConfigError("[invariants] need periods > 0")
    results = chk.invariant_checks(params, s["x0"], s["y0"], s["ho0"], s["periods"], _integrator(s))
    return _report("invariants", results, fmt, out)


def cmd_duality(params, s, fmt, out) -> int:
    if not params.is_unit_normalized():
        raise ConfigError("[duality] the duality sector requires M = omega = 1")
    if s["n_random"] < 1 or s["n_theta"] < 2:
        raise ConfigError("[duality] need n_random >= 1 and n_theta >= 2")
    results = chk.duality_checks(s["seed"], s["n_random"], s["n_theta"], _integrator(s))
    return _report("duality", results, fmt, out)


HANDLERS = {
    "evolve": cmd_evolve,
    "zeeman": cmd_zeeman,
    "spectrum": cmd_spectrum,
    "solder": cmd_solder,
    "invariants": cmd_invariants,
    "duality": cmd_duality,
}

DEFAULT_FORMAT = {"evolve": "csv", "zeeman": "csv", "spectrum": "csv",
                  "solder": "json", "invariants": "json", "duality": "json"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiralosc", description="Chiral oscillator simulations and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "evolve": "integrate a chiral oscillator; CSV t,x1,x2 plus a drift report",
        "zeeman": "Zeeman levels (constant B) or rho and phases (tabulated B)",
        "spectrum": "truncated Fock-space spectrum of the charged oscillator",
        "solder": "soldering checks",
        "invariants": "invariant constancy checks",
        "duality": "duality checks",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", metavar="PATH", help="TOML or JSON config file")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--tol", type=float, metavar="REAL", help="relative integrator tolerance")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", dest="overrides",
                       help="override a config value, e.g. B=0.2 or params.M=2")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    fmt = args.format or DEFAULT_FORMAT[args.command]
    out = Path(args.out) if args.out else None
    try:
        raw = _apply_overrides(load_config(args.config), args.command, args.overrides, args.tol)
        params, settings = resolve(raw, args.command)
        return HANDLERS[args.command](params, settings, fmt, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ErmakovSingularity as exc:
        print(f"singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (IntegrationError, JacobiNonConvergence) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
