"""Batch front end: JSON configs in, JSON/CSV reports out.

Configs are plain JSON (key/value with nested sections); every key is
validated and unknown keys are rejected with their path.  Exit codes:

* 0 -- run completed (classifications and measured constants are data),
* 1 -- usage error: bad arguments, invalid config, I/O failure,
* 2 -- a property the analysed system was expected to satisfy failed on this
  input; the report carries witnesses.

Reports embed the canonical config echo, its SHA-256 hash, and the seed, so
reruns with identical inputs produce byte-identical numeric payloads.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hyposym.conditions import SamplingGrid, run_conditions
from hyposym.energy import (
    SolverConfig,
    energy_inequality_check,
    growth_fit,
    integral_K_sweep,
    reduced_integrate,
    solve_cauchy_1d,
)
from hyposym.errors import CapabilityError, DomainError
from hyposym.examples import BUILTIN_SYSTEMS, builtin_system
from hyposym.quasisym import sample_separation_set, verify_properties
from hyposym.reduction import assemble, reduction_residual, transform_initial_data
from hyposym.energy import direct_integrate
from hyposym.symbols import MAX_DIMENSION, SystemSymbol, bracket

SCHEMA_VERSION = 1

COMMANDS = ("reduce", "verify-qs", "conditions", "solve", "growth", "report")


class ConfigError(ValueError):
    """Carries the full list of schema errors for a config document."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


_DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "command": None,
    "system": None,
    "grids": {
        "t_points": 201,
        "xi_points": 32,
        "xi_min": 1.0,
        "xi_max": 1.0e4,
        "directions": 16,
        "xi_list": [10.0, 100.0, 1000.0],
    },
    "eps_policy": {"kind": "balanced", "k": 2.0},
    "solver": {"t_step": None, "cfl_safety": 0.05},
    "initial_data": {"kind": "uniform"},
    "snapshots": [0.5, 1.0],
    "grid_size": 1024,
    "seed": 0,
    "out": None,
}


# Sections whose allowed keys depend on a discriminator; their validators
# check keys explicitly instead of the defaults-shape merge.
_POLYMORPHIC = {"system", "eps_policy", "initial_data"}


def _merge_defaults(data: dict, defaults: dict, path: str, errors: list) -> dict:
    out = {}
    for key, default in defaults.items():
        if key in data:
            value = data[key]
            if (
                isinstance(default, dict)
                and default
                and isinstance(value, dict)
                and key not in _POLYMORPHIC
            ):
                value = _merge_defaults(value, default, f"{path}{key}.", errors)
            out[key] = value
        else:
            out[key] = json.loads(json.dumps(default))
    for key in data:
        if key not in defaults:
            errors.append(f"unknown key {path}{key}")
    return out


def _require_number(data, key, errors, path, low=None, high=None, integer=False):
    value = data.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        errors.append(f"{path}{key} must be a number")
        return None
    if integer and int(value) != value:
        errors.append(f"{path}{key} must be an integer")
        return None
    if low is not None and value < low:
        errors.append(f"{path}{key} must be >= {low}")
        return None
    if high is not None and value > high:
        errors.append(f"{path}{key} must be <= {high}")
        return None
    return int(value) if integer else float(value)


def _parse_system(section, errors) -> SystemSymbol | None:
    if not isinstance(section, dict):
        errors.append("system must be an object")
        return None
    if "name" in section:
        extra = set(section) - {"name"}
        if extra:
            errors.append(f"system carries both a name and extra keys {sorted(extra)}")
        name = section["name"]
        if name not in BUILTIN_SYSTEMS:
            errors.append(f"system.name must be one of {sorted(BUILTIN_SYSTEMS)}")
            return None
        return builtin_system(name)
    allowed = {"m", "n", "horizon", "coefficients"}
    for key in section:
        if key not in allowed:
            errors.append(f"unknown key system.{key}")
    m = _require_number(section, "m", errors, "system.", low=2, integer=True)
    n = _require_number(section, "n", errors, "system.", low=1, integer=True)
    horizon = _require_number(section, "horizon", errors, "system.", low=0.0)
    if m is not None and m > MAX_DIMENSION:
        errors.append(f"system.m must be <= {MAX_DIMENSION}")
        return None
    coeffs = section.get("coefficients")
    if m is None or n is None or horizon is None or horizon <= 0:
        return None
    if (
        not isinstance(coeffs, list)
        or len(coeffs) != n
        or any(
            not isinstance(row_block, list) or len(row_block) != m
            or any(not isinstance(row, list) or len(row) != m for row in row_block)
            for row_block in coeffs
        )
    ):
        errors.append("system.coefficients must be an n x m x m nest of coefficient lists")
        return None
    max_deg = 1
    for block in coeffs:
        for row in block:
            for entry in row:
                if not isinstance(entry, list) or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry
                ):
                    errors.append("system.coefficients entries must be lists of numbers")
                    return None
                max_deg = max(max_deg, len(entry))
    arr = np.zeros((n, m, m, max_deg))
    for p, block in enumerate(coeffs):
        for i, row in enumerate(block):
            for j, entry in enumerate(row):
                arr[p, i, j, : len(entry)] = entry
    try:
        return SystemSymbol(coeffs=arr, horizon=horizon)
    except (DomainError, CapabilityError) as exc:
        errors.append(str(exc))
        return None


@dataclass(frozen=True)
class RunConfig:
    """Validated run description: canonical data plus constructed objects."""

    data: dict
    symbol: SystemSymbol
    command: str | None
    seed: int

    def solver_config(self, **overrides) -> SolverConfig:
        policy = self.data["eps_policy"]
        if policy["kind"] == "fixed":
            eps_policy = ("fixed", policy["value"])
        elif policy["kind"] == "inverse":
            eps_policy = ("inverse",)
        else:
            eps_policy = ("balanced", policy["k"])
        params = {
            "t_step": self.data["solver"]["t_step"],
            "cfl_safety": self.data["solver"]["cfl_safety"],
            "eps_policy": eps_policy,
            "xi_grid": tuple(self.data["grids"]["xi_list"]),
        }
        params.update(overrides)
        return SolverConfig(**params)

    def sampling_grid(self) -> SamplingGrid:
        g = self.data["grids"]
        return SamplingGrid.default(
            self.symbol,
            n_t=g["t_points"],
            n_r=g["xi_points"],
            r_min=g["xi_min"],
            r_max=g["xi_max"],
            n_dirs=g["directions"],
        )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config; raises ConfigError with all problems."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    if not isinstance(raw, dict):
        raise ConfigError(["config root must be a JSON object"])
    errors: list = []
    data = _merge_defaults(raw, _DEFAULTS, "", errors)

    if data["schema_version"] != SCHEMA_VERSION:
        errors.append(f"schema_version must be {SCHEMA_VERSION}")
    if data["command"] is not None and data["command"] not in COMMANDS:
        errors.append(f"command must be one of {COMMANDS}")
    if data["system"] is None:
        errors.append("missing key system")
        symbol = None
    else:
        symbol = _parse_system(data["system"], errors)

    g = data["grids"]
    _require_number(g, "t_points", errors, "grids.", low=2, integer=True)
    _require_number(g, "xi_points", errors, "grids.", low=2, integer=True)
    _require_number(g, "xi_min", errors, "grids.", low=0.0)
    _require_number(g, "xi_max", errors, "grids.", low=0.0)
    _require_number(g, "directions", errors, "grids.", low=1, integer=True)
    if not isinstance(g.get("xi_list"), list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 for v in g["xi_list"]
    ):
        errors.append("grids.xi_list must be a list of positive numbers")

    policy = data["eps_policy"]
    if not isinstance(policy, dict) or policy.get("kind") not in ("fixed", "inverse", "balanced"):
        errors.append("eps_policy.kind must be fixed, inverse, or balanced")
    else:
        for key in policy:
            if key not in ("kind", "value", "k"):
                errors.append(f"unknown key eps_policy.{key}")
        if policy["kind"] == "fixed":
            v = policy.get("value")
            if not isinstance(v, (int, float)) or not 0 < v <= 1:
                errors.append("eps_policy.value must lie in (0, 1]")
        if policy["kind"] == "balanced":
            policy.setdefault("k", 2.0)
            if not isinstance(policy["k"], (int, float)) or policy["k"] < 1:
                errors.append("eps_policy.k must be >= 1")

    solver = data["solver"]
    if solver["t_step"] is not None:
        _require_number(solver, "t_step", errors, "solver.", low=0.0)
    _require_number(solver, "cfl_safety", errors, "solver.", low=0.0)

    init = data["initial_data"]
    if not isinstance(init, dict) or init.get("kind") not in ("uniform", "fourier_modes"):
        errors.append("initial_data.kind must be uniform or fourier_modes")
    elif init["kind"] == "fourier_modes":
        for key in init:
            if key not in ("kind", "modes"):
                errors.append(f"unknown key initial_data.{key}")
        modes = init.get("modes")
        if not isinstance(modes, list) or not modes:
            errors.append("initial_data.modes must be a non-empty list")

    if not isinstance(data["snapshots"], list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0 for v in data["snapshots"]
    ):
        errors.append("snapshots must be a list of nonnegative times")
    _require_number(data, "grid_size", errors, "", low=2, integer=True)
    if data["out"] is not None and not isinstance(data["out"], str):
        errors.append("out must be a string path")
    seed = _require_number(data, "seed", errors, "", low=0, integer=True)

    if errors or symbol is None:
        raise ConfigError(errors or ["invalid system section"])
    return RunConfig(data=data, symbol=symbol, command=data["command"], seed=seed)


def emit_config(config: RunConfig) -> str:
    """Canonical JSON form of a config; parse(emit(c)) reproduces c."""
    return json.dumps(config.data, sort_keys=True, indent=2)


def config_hash(config: RunConfig) -> str:
    canonical = json.dumps(config.data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# serialization helpers


def _jsonable(obj):
    """Recursively convert to JSON-safe values; floats at 17 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.ndarray,)):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.17g}")
    return obj


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


# ---------------------------------------------------------------------------
# command implementations; each returns (results dict, failures list, csv map)


def _cmd_reduce(config: RunConfig):
    symbol = config.symbol
    results: dict = {"samples": []}
    sample_ts = [0.0, symbol.horizon / 2.0, symbol.horizon]
    xi_list = config.data["grids"]["xi_list"][:3]
    for xi_mag in xi_list:
        xi = np.zeros(symbol.n)
        xi[0] = xi_mag
        for t in sample_ts:
            red = assemble(symbol, t, xi)
            entry = {
                "t": t,
                "xi": xi.tolist(),
                "calA": red.calA,
                "calB_re": red.calB.real,
                "calB_im": red.calB.imag,
                "char_coeffs": red.char,
            }
            results["samples"].append(entry)
    # Convergence study of the reduction against the direct oracle.
    xi = np.zeros(symbol.n)
    xi[0] = min(10.0, float(config.data["grids"]["xi_list"][0]))
    u0 = np.ones(symbol.m, dtype=complex)
    study = []
    for h in (4e-3, 2e-3, 1e-3):
        cfg = config.solver_config(t_step=h)
        ts, traj = direct_integrate(symbol, xi, u0, cfg)
        study.append({"step": h, "residual": reduction_residual(symbol, xi, ts, traj)})
    results["residual_study"] = study
    if symbol.m == 3:
        results["closed_form_comparison"] = _closed_form_comparison(symbol, xi, sample_ts)
    return results, [], {}


def _closed_form_comparison(symbol: SystemSymbol, xi, sample_ts):
    """Informational diff between assembled 3x3 lower-order entries and the
    closed forms sometimes quoted for them; emitted, never asserted."""
    from hyposym.reduction import scaled_lower_order_entries
    from hyposym.symbols import eval_symbol, time_derivative

    bxi = bracket(xi)
    out = []
    for t in sample_ts:
        red = assemble(symbol, t, xi)
        b = scaled_lower_order_entries(red)
        A = eval_symbol(symbol, t, xi)
        dA = eval_symbol(time_derivative(symbol, 1), t, xi)
        d2A = eval_symbol(time_derivative(symbol, 2), t, xi)
        trA0 = np.trace(A) / bxi
        b1_closed = (-d2A + (-1j) * 2.0 * dA - trA0 * (-1j) * dA) / bxi
        b2_closed = (A @ ((-1j) * dA)) / bxi ** 2
        out.append(
            {
                "t": t,
                "b1_max_diff": float(np.abs(b[0] - b1_closed).max()),
                "b2_max_diff": float(np.abs(b[1] - b2_closed).max()),
            }
        )
    return out


def _cmd_verify_qs(config: RunConfig):
    symbol = config.symbol
    m = symbol.m
    rng_samples = sample_separation_set(m, bound=10.0, count=50, seed=config.seed)
    failures = []
    worst = {
        "psd_min": 0.0,
        "recursion": 0.0,
        "factorization": 0.0,
        "det_rel": 0.0,
        "diag_ratio": 0.0,
        "commutator": 0.0,
        "coercivity": 0.0,
    }
    for lam in rng_samples:
        for eps in (1.0, 0.1, 0.01):
            rep = verify_properties(lam, eps)
            worst["psd_min"] = min(worst["psd_min"], min(rep.psd_min_eigs))
            worst["recursion"] = max(worst["recursion"], rep.recursion_residual)
            worst["factorization"] = max(worst["factorization"], rep.factorization_residual)
            worst["det_rel"] = max(worst["det_rel"], rep.det_identity_rel)
            if np.isfinite(rep.diag_product_ratio):
                worst["diag_ratio"] = max(worst["diag_ratio"], rep.diag_product_ratio)
            worst["commutator"] = max(worst["commutator"], rep.commutator_constant)
            worst["coercivity"] = max(worst["coercivity"], rep.coercivity_constant)
            if min(rep.psd_min_eigs) < -1e-10:
                failures.append({"kind": "psd", "lambda": lam.tolist(), "eps": eps})
            if rep.recursion_residual > 1e-8:
                failures.append({"kind": "recursion", "lambda": lam.tolist(), "eps": eps})
            if rep.factorization_residual > 1e-8 * (1.0 + abs(lam).max() ** (2 * (m - 1))):
                failures.append({"kind": "factorization", "lambda": lam.tolist(), "eps": eps})
    return {"worst": worst, "samples": len(rng_samples)}, failures, {}


def _cmd_conditions(config: RunConfig):
    symbol = config.symbol
    report = run_conditions(symbol, config.sampling_grid(), seed=config.seed)
    failures = []
    if report.nonhyperbolic_points:
        failures.append({"kind": "hyperbolicity", "points": report.nonhyperbolic_points})
    for name, value in (
        ("ks", report.ks_constant),
        ("levi", float(np.max(report.levi_sups))),
        ("thm2", float(np.max(report.thm2_sups))),
        ("sandwich", report.sandwich_sup),
    ):
        if not np.isfinite(value):
            failures.append({"kind": name, "witness": getattr(report, f"{name}_witness", {})})
    results = {
        "ks_constant": report.ks_constant,
        "ks_witness": report.ks_witness,
        "levi_sups": report.levi_sups,
        "levi_witness": report.levi_witness,
        "thm2_sups": report.thm2_sups,
        "thm2_witness": report.thm2_witness,
        "sandwich_sup": report.sandwich_sup,
        "sandwich_witness": report.sandwich_witness,
        "implication_constant": report.implication_constant,
        "zone_stats": report.zone_stats,
        "nonhyperbolic_points": report.nonhyperbolic_points,
        "grid": {
            "t_points": report.grid.ts.size,
            "xi_points": report.grid.radii.size,
            "directions": report.grid.dirs.shape[0],
        },
    }
    rows = []
    grid = report.grid
    m = symbol.m
    for t_idx, t in enumerate(grid.ts):
        for r_idx in range(grid.radii.size):
            for d_idx in range(grid.dirs.shape[0]):
                xi = grid.xi(r_idx, d_idx)
                xi_str = ";".join(f"{v:.17g}" for v in xi)
                rows.append((float(t), xi_str, "ks", 0, 0,
                             float(report.ks_values[t_idx, r_idx, d_idx])))
                for l in range(m - 1):
                    rows.append((float(t), xi_str, "thm2", l + 1, 0,
                                 float(report.thm2_values[t_idx, r_idx, d_idx, l])))
                    for j in range(m):
                        rows.append((float(t), xi_str, "levi", l + 1, j + 1,
                                     float(report.levi_values[t_idx, r_idx, d_idx, l, j])))
    csvs = {"conditions.csv": (("t", "xi", "kind", "l", "j", "value"), rows)}
    return results, failures, csvs


def _initial_field(config: RunConfig, n_grid: int) -> np.ndarray:
    symbol = config.symbol
    init = config.data["initial_data"]
    x = 2.0 * np.pi * np.arange(n_grid) / n_grid
    u0 = np.zeros((symbol.m, n_grid), dtype=complex)
    if init["kind"] == "uniform":
        u0 += np.exp(1j * x)[None, :]
        return u0
    for mode in init["modes"]:
        k = mode["k"]
        amps = mode["amplitudes"]
        for i, amp in enumerate(amps):
            u0[i] += complex(amp[0], amp[1]) * np.exp(1j * k * x)
    return u0


def _cmd_solve(config: RunConfig):
    symbol = config.symbol
    n_grid = config.data["grid_size"]
    u0 = _initial_field(config, n_grid)
    cfg = config.solver_config()
    field = solve_cauchy_1d(symbol, u0, cfg, config.data["snapshots"])
    results = {
        "grid_size": n_grid,
        "snapshots": field.snapshot_ts,
        "max_abs": [float(np.abs(field.fields[s]).max()) for s in range(field.fields.shape[0])],
    }
    csvs = {}
    for s, t in enumerate(field.snapshot_ts):
        header = ["x"]
        for i in range(symbol.m):
            header += [f"re_u{i + 1}", f"im_u{i + 1}"]
        rows = []
        for q in range(n_grid):
            row = [float(field.x[q])]
            for i in range(symbol.m):
                row += [float(field.fields[s, i, q].real), float(field.fields[s, i, q].imag)]
            rows.append(tuple(row))
        csvs[f"solve_t{s}.csv"] = (tuple(header), rows)
    return results, [], csvs


def _cmd_growth(config: RunConfig):
    symbol = config.symbol
    cfg = config.solver_config()
    report = growth_fit(symbol, cfg)
    results = {
        "classification": report.classification,
        "kappa": report.kappa,
        "sigma": report.sigma,
        "rate": report.rate,
        "aic_log": report.aic_log,
        "aic_power": report.aic_power,
        "brackets": report.brackets,
        "growth_logs": report.growth_logs,
    }
    rows = [(float(b), float(g)) for b, g in zip(report.brackets, report.growth_logs)]
    return results, [], {"growth.csv": (("bracket_xi", "log_growth"), rows)}


def _trace_payload(trace, max_samples: int = 1001) -> dict:
    """Serializable form of an energy trace, stride-decimated to bound size.

    Component (i-1)m + (j-1) of V holds the (j-1)-th time derivative of the
    i-th transformed component, scaled by <xi>^{m-j}.
    """
    stride = max(1, -(-trace.ts.size // max_samples))
    sl = slice(None, None, stride)
    payload = {
        "xi": trace.xi,
        "eps": trace.eps,
        "stride": stride,
        "t": trace.ts[sl],
        "V_re": trace.V[sl].real,
        "V_im": trace.V[sl].imag,
        "log_scale": trace.log_scale[sl],
    }
    for name in ("E", "K", "term2", "term3", "dtE", "inequality_residual"):
        arr = getattr(trace, name)
        if arr is not None:
            payload[name] = arr[sl]
    payload["coercivity_sup"] = trace.coercivity_sup
    return payload


def _cmd_report(config: RunConfig):
    results, failures, csvs = {}, [], {}
    for name, fn in (("conditions", _cmd_conditions), ("verify_qs", _cmd_verify_qs),
                     ("growth", _cmd_growth)):
        sub_results, sub_failures, sub_csvs = fn(config)
        results[name] = sub_results
        failures.extend(sub_failures)
        csvs.update(sub_csvs)
    # Energy inequality summary on the configured frequency sweep.
    symbol = config.symbol
    cfg = config.solver_config()
    traces = []
    for xi_mag in config.data["grids"]["xi_list"]:
        xi = np.zeros(symbol.n)
        xi[0] = xi_mag
        u0 = np.ones(symbol.m, dtype=complex) / np.sqrt(symbol.m)
        V0 = transform_initial_data(symbol, u0, xi).V
        traces.append(reduced_integrate(symbol, xi, V0, cfg))
    ineq = energy_inequality_check(traces)
    results["energy"] = {
        "C2": ineq.C2,
        "C3": ineq.C3,
        "margins": ineq.margins,
        "K_integrals": ineq.K_integrals,
        "passed": ineq.passed,
        "traces": [_trace_payload(tr) for tr in traces],
    }
    if not ineq.passed:
        failures.append({"kind": "energy_inequality", "witnesses": list(ineq.witnesses)})
    sweep = integral_K_sweep(symbol, np.array([config.data["grids"]["xi_list"][0]]),
                             (1e-1, 1e-2, 1e-3), cfg)
    results["K_sweep"] = {
        "eps": sweep.eps_values,
        "integrals": sweep.K_integrals,
        "fitted_exponent": sweep.fitted_exponent,
        "theoretical_exponent": sweep.theoretical_exponent,
    }
    return results, failures, csvs


_COMMAND_TABLE = {
    "reduce": _cmd_reduce,
    "verify-qs": _cmd_verify_qs,
    "conditions": _cmd_conditions,
    "solve": _cmd_solve,
    "growth": _cmd_growth,
    "report": _cmd_report,
}


def run(config: RunConfig, command: str, out_dir: Path) -> int:
    """Execute a command and write report.json plus CSV artifacts."""
    if command not in _COMMAND_TABLE:
        raise DomainError(f"unknown command {command!r}")
    if config.command is not None and config.command != command:
        raise DomainError(
            f"config requests command {config.command!r} but {command!r} was invoked"
        )
    out_dir.mkdir(parents=True, exist_ok=True)
    results, failures, csvs = _COMMAND_TABLE[command](config)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": config.seed,
        "config_sha256": config_hash(config),
        "config": config.data,
        "results": _jsonable(results),
        "failures": _jsonable(failures),
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    for name, (header, rows) in csvs.items():
        _write_csv(out_dir / name, header, rows)
    return 2 if failures else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hyposym",
        description="Block-Sylvester reduction and energy diagnostics for "
                    "first-order hyperbolic systems (batch runs, no interactive UI).",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--out", default=None,
                        help="output directory (overrides the config's `out`)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker hint; the current engine runs single-process")
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        config = parse_config(text)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 1
    if args.seed is not None:
        data = dict(config.data)
        data["seed"] = args.seed
        config = RunConfig(data=data, symbol=config.symbol, command=config.command,
                           seed=args.seed)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 1
    out_dir = args.out or config.data["out"] or "hyposym-out"
    try:
        return run(config, args.command, Path(out_dir))
    except (DomainError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
