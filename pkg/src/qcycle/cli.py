"""Operator-facing command line: config ingestion, runs, structured output.

Subcommands: ``simulate`` (per-cycle CSV trace), ``report`` (limit-cycle
thermodynamics as JSON), ``reverse`` (Kraus extraction and time-reversal
certificates as JSON), ``spectrum`` (channel eigenvalue diagnostics as
JSON). Exit statuses are one per error family: 0 ok, 1 config, 2
non-convergence, 3 degenerate fixed point, 4 rank deficiency.

All floats are emitted with up to 17 significant digits, enough to
round-trip doubles exactly; identical config and seed give bit-identical
output. NaN (an undefined efficiency) is emitted as JSON null.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, build_hamiltonian
from .engine import CycleParams, cycle_operators, run_cycle
from .errors import (ConfigError, DegenerateFixedPointError, QcycleError,
                     RankDeficientError, ZeroHeatError)
from .limitcycle import (channel_matrix, cycle_channel_ac, cycle_channel_cb,
                         fixed_point_iterate, fixed_point_spectral, limit_cycle_states)
from .linalg import check_density_matrix, random_density_matrix, trace_distance
from .reversal import (choi_matrix, choi_output_trace, kraus_channel_matrix,
                       kraus_from_choi, reverse_channel, sequence_probability)
from .thermo import limit_cycle_report

TRACE_COLUMNS = ("cycle", "delta_prev", "q_c", "q_h", "w1", "w2", "w3", "w4",
                 "w_total", "w_ledger", "first_law_residual_paper",
                 "first_law_residual_ledger")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2
EXIT_DEGENERATE = 3
EXIT_RANK_DEFICIENT = 4


@dataclass
class RunConfig:
    spec: ChainSpec
    params: CycleParams
    tol: float
    max_iter: int
    method: str
    seed: int
    initial_state: str | None
    out_format: str | None
    out_path: str | None


# ---------------------------------------------------------------------------
# config parsing with field-path errors


def _section(raw: dict, key: str, required: bool = True):
    if key not in raw:
        if required:
            raise ConfigError(key, "missing required section")
        return {}
    val = raw[key]
    if not isinstance(val, dict):
        raise ConfigError(key, f"must be an object, got {type(val).__name__}")
    return val


def _int_field(section: dict, key: str, path: str, default=None, minimum=None) -> int:
    if key not in section:
        if default is not None:
            return default
        raise ConfigError(path, "missing required field")
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(path, f"must be an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {val}")
    return val


def _float_field(section: dict, key: str, path: str, default=None) -> float:
    if key not in section:
        if default is not None:
            return default
        raise ConfigError(path, "missing required field")
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(path, f"must be a number, got {val!r}")
    return float(val)


def _float_list(section: dict, key: str, path: str, length: int) -> list:
    if key not in section:
        raise ConfigError(path, "missing required field")
    val = section[key]
    if not isinstance(val, list) or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in val):
        raise ConfigError(path, "must be a list of numbers")
    if len(val) != length:
        raise ConfigError(path, f"must have length {length}, got {len(val)}")
    return [float(x) for x in val]


def parse_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")

    chain = _section(raw, "chain")
    n = _int_field(chain, "n", "chain.n", minimum=3)
    e = _float_list(chain, "E", "chain.E", n)
    j = _float_list(chain, "J", "chain.J", n - 1)
    k = _float_list(chain, "K", "chain.K", n - 1)
    f = _float_list(chain, "F", "chain.F", n - 1)
    if e[0] == 0.0:
        raise ConfigError("chain.E[0]", "must be nonzero")
    if e[-1] == 0.0:
        raise ConfigError(f"chain.E[{n - 1}]", "must be nonzero")
    try:
        spec = ChainSpec(n=n, E=e, J=j, K=k, F=f)
    except ValueError as exc:
        raise ConfigError("chain", str(exc)) from exc

    cyc = _section(raw, "cycle")
    for key in ("beta1", "beta2"):
        if _float_field(cyc, key, f"cycle.{key}") <= 0.0:
            raise ConfigError(f"cycle.{key}", "must be strictly positive")
    for key in ("tau1", "tau2"):
        if _float_field(cyc, key, f"cycle.{key}") < 0.0:
            raise ConfigError(f"cycle.{key}", "must be non-negative")
    try:
        params = CycleParams(
            beta1=_float_field(cyc, "beta1", "cycle.beta1"),
            beta2=_float_field(cyc, "beta2", "cycle.beta2"),
            tau1=_float_field(cyc, "tau1", "cycle.tau1"),
            tau2=_float_field(cyc, "tau2", "cycle.tau2"),
        )
    except ValueError as exc:
        raise ConfigError("cycle", str(exc)) from exc

    solver = _section(raw, "solver", required=False)
    tol = _float_field(solver, "tol", "solver.tol", default=1e-10)
    if tol <= 0.0:
        raise ConfigError("solver.tol", f"must be positive, got {tol}")
    max_iter = _int_field(solver, "max_iter", "solver.max_iter", default=100_000, minimum=1)
    method = solver.get("method", "both")
    if method not in ("iterate", "spectral", "both"):
        raise ConfigError("solver.method", f"must be iterate, spectral or both, got {method!r}")

    seed = _int_field(raw, "seed", "seed", default=0)

    initial_state = raw.get("initial_state")
    if initial_state is not None and not isinstance(initial_state, str):
        raise ConfigError("initial_state", "must be a path string")

    output = _section(raw, "output", required=False)
    out_format = output.get("format")
    if out_format is not None and out_format not in ("json", "csv"):
        raise ConfigError("output.format", f"must be json or csv, got {out_format!r}")
    out_path = output.get("path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError("output.path", "must be a path string")

    return RunConfig(spec=spec, params=params, tol=tol, max_iter=max_iter, method=method,
                     seed=seed, initial_state=initial_state,
                     out_format=out_format, out_path=out_path)


# ---------------------------------------------------------------------------
# deterministic serialization


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return f"{x:.17g}"


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits; NaN becomes null."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv_cell(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return _fmt_float(float(x)).strip('"') if not math.isnan(float(x)) else "nan"


def _write_text(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


# ---------------------------------------------------------------------------
# commands


def _initial_full_state(cfg: RunConfig) -> np.ndarray:
    dim = 2**cfg.spec.n
    if cfg.initial_state is not None:
        try:
            rho = np.load(cfg.initial_state)
        except OSError as exc:
            raise ConfigError("initial_state", f"cannot read {cfg.initial_state}: {exc}") from exc
        if rho.shape != (dim, dim):
            raise ConfigError("initial_state", f"expected shape ({dim}, {dim}), got {rho.shape}")
        try:
            check_density_matrix(rho, herm_atol=1e-10, trace_atol=1e-10)
        except ValueError as exc:
            raise ConfigError("initial_state", str(exc)) from exc
        return np.asarray(rho, dtype=complex)
    rng = np.random.default_rng(cfg.seed)
    return random_density_matrix(dim, rng)


def cmd_simulate(cfg: RunConfig):
    """Iterate full-chain cycles; returns (exit_status, csv_text)."""
    parts = build_hamiltonian(cfg.spec)
    ops = cycle_operators(parts, cfg.params)
    rho0 = _initial_full_state(cfg)

    lines = [",".join(TRACE_COLUMNS)]
    prev_rho0 = None
    converged = False
    for cycle_idx in range(1, cfg.max_iter + 1):
        state, rec = run_cycle(rho0, parts, cfg.params, ops=ops)
        rec.delta_prev = (trace_distance(rho0, prev_rho0)
                          if prev_rho0 is not None else float("nan"))
        row = (cycle_idx, rec.delta_prev, rec.q_c, rec.q_h, rec.w1, rec.w2, rec.w3,
               rec.w4, rec.w_total, rec.w_ledger, rec.first_law_residual_paper,
               rec.first_law_residual_ledger)
        lines.append(",".join(_csv_cell(x) for x in row))
        if not math.isnan(rec.delta_prev) and rec.delta_prev < cfg.tol:
            converged = True
            break
        prev_rho0 = rho0
        rho0 = state.rho4
    status = EXIT_OK if converged else EXIT_NO_CONVERGENCE
    return status, "\n".join(lines) + "\n"


def _solve_fixed_point(cfg: RunConfig, channel):
    """Fixed point per solver.method, plus the spectral certificate.

    The spectral decomposition always runs: it is the only reliable
    degeneracy detector, and a degenerate sector must never be passed off
    as a unique fixed point.
    """
    cm = channel_matrix(channel)
    spectral = fixed_point_spectral(cm)  # raises DegenerateFixedPointError
    iterate = None
    if cfg.method in ("iterate", "both"):
        rng = np.random.default_rng(cfg.seed)
        init = random_density_matrix(channel.dim, rng)
        iterate = fixed_point_iterate(channel, init, tol=cfg.tol, max_iter=cfg.max_iter)
        if not iterate.converged:
            return None, spectral, iterate
        if cfg.method == "both":
            gap_between = trace_distance(iterate.rho_star, spectral.rho_star)
            if gap_between > 10.0 * cfg.tol:
                print(f"qcycle: warning: solvers disagree by {gap_between:.3e}", file=sys.stderr)
    rho_star = iterate.rho_star if cfg.method == "iterate" else spectral.rho_star
    return rho_star, spectral, iterate


def cmd_report(cfg: RunConfig):
    """Limit-cycle thermodynamic report; returns (exit_status, doc or None)."""
    parts = build_hamiltonian(cfg.spec)
    channel = cycle_channel_cb(parts, cfg.params)
    rho_star, spectral, _ = _solve_fixed_point(cfg, channel)
    if rho_star is None:
        return EXIT_NO_CONVERGENCE, None
    cycle = limit_cycle_states(rho_star, parts, cfg.params, tol=cfg.tol)
    try:
        report = limit_cycle_report(cycle, parts, cfg.spec, cfg.params, spectral.spectral_gap)
    except ZeroHeatError as exc:
        report = exc.report  # eta is NaN -> emitted as null
    return EXIT_OK, report.to_dict()


def _reverse_one(cfg: RunConfig, channel):
    cm = channel_matrix(channel)
    spectral = fixed_point_spectral(cm)
    j = choi_matrix(channel)
    kraus = kraus_from_choi(j)
    rev = reverse_channel(kraus, spectral.rho_star, fp_tol=cfg.tol)

    d = channel.dim
    recon = float(np.linalg.norm(cm.matrix - kraus_channel_matrix(kraus).matrix, 2))
    tp_residual = float(np.abs(choi_output_trace(j, d) - np.eye(d)).max())
    rev_fp_dist = trace_distance(rev.apply(spectral.rho_star), spectral.rho_star)

    rng = np.random.default_rng(cfg.seed)
    n_ops = len(kraus.operators)
    pairs = rng.integers(0, n_ops, size=(50, 2))
    balance = 0.0
    for a1, a2 in pairs:
        p_fwd = sequence_probability([kraus.operators[a1], kraus.operators[a2]],
                                     spectral.rho_star)
        p_rev = sequence_probability([rev.kraus.operators[a2], rev.kraus.operators[a1]],
                                     spectral.rho_star)
        balance = max(balance, abs(p_fwd - p_rev))

    return {
        "dim": d,
        "kraus_count": n_ops,
        "discarded_choi_weight": kraus.discarded_weight,
        "choi_output_trace_residual": tp_residual,
        "completeness_residual": kraus.completeness_residual(),
        "reversed_completeness_residual": rev.kraus.completeness_residual(),
        "reconstruction_residual": recon,
        "reversed_fixed_point_distance": rev_fp_dist,
        "max_detailed_balance_violation": balance,
    }


def cmd_reverse(cfg: RunConfig):
    """Time-reversal certificates for both cycle channels."""
    parts = build_hamiltonian(cfg.spec)
    doc = {
        "cb": _reverse_one(cfg, cycle_channel_cb(parts, cfg.params)),
        "ac": _reverse_one(cfg, cycle_channel_ac(parts, cfg.params)),
    }
    return EXIT_OK, doc


def _spectrum_one(channel):
    cm = channel_matrix(channel)
    evals = np.linalg.eigvals(cm.matrix)
    moduli = np.sort(np.abs(evals))[::-1]
    near_unit = [ev for ev in evals if abs(abs(ev) - 1.0) <= 1e-8]
    return {
        "dim": channel.dim,
        "spectral_gap": float(1.0 - moduli[1]) if len(moduli) > 1 else 1.0,
        "degenerate": len(near_unit) > 1,
        "near_unit_eigenvalues": [[float(ev.real), float(ev.imag)] for ev in near_unit],
        "eigenvalue_moduli": [float(m) for m in moduli],
    }


def cmd_spectrum(cfg: RunConfig):
    """Channel spectrum diagnostics; degenerate sectors are reported, not fatal."""
    parts = build_hamiltonian(cfg.spec)
    doc = {
        "cb": _spectrum_one(cycle_channel_cb(parts, cfg.params)),
        "ac": _spectrum_one(cycle_channel_ac(parts, cfg.params)),
    }
    return EXIT_OK, doc


# ---------------------------------------------------------------------------
# driver


def _check_output_format(cfg: RunConfig, command: str) -> None:
    expected = "csv" if command == "simulate" else "json"
    if cfg.out_format is not None and cfg.out_format != expected:
        raise ConfigError("output.format", f"{command} emits {expected}, got {cfg.out_format!r}")


def _run_one(command: str, config_path: str, seed_override: int | None):
    """Returns (exit_status, text_or_doc). Exceptions mapped to statuses."""
    try:
        cfg = parse_config(config_path)
        if seed_override is not None:
            cfg.seed = seed_override
        _check_output_format(cfg, command)
        if command == "simulate":
            status, text = cmd_simulate(cfg)
            return status, text, cfg
        if command == "report":
            status, doc = cmd_report(cfg)
            return status, doc, cfg
        if command == "reverse":
            status, doc = cmd_reverse(cfg)
            return status, doc, cfg
        if command == "spectrum":
            status, doc = cmd_spectrum(cfg)
            return status, doc, cfg
        raise ConfigError("command", f"unknown command {command!r}")
    except ConfigError as exc:
        print(f"qcycle: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG, None, None
    except DegenerateFixedPointError as exc:
        evs = ", ".join(f"{ev:.12g}" for ev in np.asarray(exc.eigenvalues))
        print(f"qcycle: degenerate fixed point; near-unit eigenvalues: [{evs}]", file=sys.stderr)
        return EXIT_DEGENERATE, None, None
    except RankDeficientError as exc:
        print(f"qcycle: {exc}", file=sys.stderr)
        return EXIT_RANK_DEFICIENT, None, None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcycle",
        description="Four-stroke quantum engine on a spin-conserving chain: "
                    "limit cycles, thermodynamic reports, time reversal.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "iterate cycles and write a per-cycle CSV trace"),
        ("report", "solve the limit cycle and emit the thermodynamic report (JSON)"),
        ("reverse", "extract Kraus operators and certify the time-reversed channel (JSON)"),
        ("spectrum", "emit channel eigenvalue diagnostics (JSON)"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, nargs="+", metavar="PATH",
                       help="JSON run configuration (several paths allowed with --sweep)")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="output file (default: output.path from config, else stdout)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--sweep", action="store_true",
                       help="fan independent configs out across workers "
                            "(QCYCLE_THREADS caps parallelism)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configs = args.config

    if len(configs) > 1 and not args.sweep:
        print("qcycle: error: multiple --config paths require --sweep", file=sys.stderr)
        return EXIT_CONFIG
    if args.sweep and args.command == "simulate":
        print("qcycle: error: --sweep is not supported for simulate (one CSV per run)",
              file=sys.stderr)
        return EXIT_CONFIG

    if not args.sweep:
        status, payload, cfg = _run_one(args.command, configs[0], args.seed)
        if payload is not None:
            out_path = args.out if args.out is not None else (cfg.out_path if cfg else None)
            text = payload if isinstance(payload, str) else dumps(payload) + "\n"
            _write_text(text, out_path)
        return status

    threads = os.environ.get("QCYCLE_THREADS")
    max_workers = max(1, int(threads)) if threads else min(len(configs), os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda p: _run_one(args.command, p, args.seed), configs))

    merged = []
    worst = EXIT_OK
    for path, (status, payload, _) in zip(configs, results):  # deterministic config order
        entry = {"config": path, "status": status}
        if payload is not None and not isinstance(payload, str):
            entry["document"] = payload
        merged.append(entry)
        worst = max(worst, status)
    _write_text(dumps(merged) + "\n", args.out)
    return worst


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
