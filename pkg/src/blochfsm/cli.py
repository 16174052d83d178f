"""Command-line interface.

Subcommands: ``simulate``, ``propagate``, ``parity``, ``generators``, ``sweep``.
Exit codes: 0 success, 1 I/O failure, 2 config error, 3 numerical error,
4 parity encoding mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .config import SimulationConfig, SweepSpec, parse_config
from .dynamics import integrate, initial_vector, system_for
from .errors import ConfigError, DomainError, EncodingMismatch, NumericalError, ParseError
from .generators import basis_residuals, make_basis, structure_constants
from .logic import readout, run_parity, state_table_csv
from .output import rows_csv, trajectory_csv, trajectory_json, write_text
from .pulses import pulse_area
from .sylvester import superevolution

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3, 4


def load_config(path: str | None) -> SimulationConfig:
    if path is None:
        return SimulationConfig()
    with open(path, "rb") as fh:
        return parse_config(fh.read())


def _emit(text: str, path: str | None) -> None:
    if path:
        write_text(path, text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def summarize(cfg: SimulationConfig, S_final: np.ndarray, norm_drift: float | None = None) -> dict:
    """Final observables of a run as plain JSON-ready values."""
    b, _ = system_for(cfg.dimension)
    s = cfg.time_scale
    out = {
        "S_final": [float(x) for x in S_final],
        "pulse_area": pulse_area(cfg.pulse, s * cfg.window[0], s * cfg.window[1]),
    }
    if cfg.dimension == 2:
        r = readout(S_final, cfg.thresholds)
        out.update(
            rho00=r.rho00,
            rho11=r.rho11,
            coherence=float(np.hypot(S_final[0], S_final[1])),
            abs_rho01=float(np.hypot(S_final[0], S_final[1]) / 2),
            state_bit=r.state_bit,
            coherence_bit=r.coherence_bit,
        )
    else:
        from .dynamics import coherence_to_density

        rho = coherence_to_density(S_final, b, warn=False)
        out["populations"] = [float(x) for x in np.diag(rho).real]
    if norm_drift is not None:
        out["norm_drift"] = norm_drift
    return out


# -- subcommands ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.format:
        cfg = replace(cfg, output=replace(cfg.output, format=args.format))
    path = args.output or cfg.output.path
    traj = integrate(cfg)
    extra = {"seed": args.seed} if args.seed is not None else {}
    if path:
        text = trajectory_csv(cfg, traj, **extra) if cfg.output.format == "csv" else trajectory_json(cfg, traj, **extra)
        write_text(path, text)
    summary = summarize(cfg, traj.final, traj.norm_drift)
    summary["samples"] = int(len(traj.t))
    summary["trajectory"] = path
    sys.stdout.write(_dump(summary))
    return EXIT_OK


def cmd_propagate(args) -> int:
    cfg = load_config(args.config)
    S0 = initial_vector(cfg)
    report: dict = {"method": args.method, "S0": [float(x) for x in S0]}
    results = {}
    if args.method in ("rk4", "both"):
        traj = integrate(cfg)
        results["rk4"] = traj.final
        report["rk4"] = {"S_final": [float(x) for x in traj.final], "norm_drift": traj.norm_drift}
    if args.method in ("sylvester", "both"):
        prop = superevolution(cfg, tol=args.tol)
        S = prop @ S0
        results["sylvester"] = S
        report["sylvester"] = {
            "S_final": [float(x) for x in S],
            "orthogonality_residual": prop.orthogonality_residual(),
            "diagnostics": list(prop.diagnostics),
        }
        if prop.zeta is not None:
            report["sylvester"]["zeta"] = prop.zeta
    if args.method == "both":
        report["max_deviation"] = float(np.max(np.abs(results["rk4"] - results["sylvester"])))
    _emit(_dump(report), args.output)
    return EXIT_OK


def cmd_parity(args) -> int:
    cfg = load_config(args.config) if args.config else None
    if args.state_table:
        _emit(state_table_csv(args.mode, cfg), args.output)
        return EXIT_OK
    start = {"even": 0, "odd": 1}[args.start]
    final, outs, transcript = run_parity(args.bits, start, args.mode, cfg)
    doc = {
        "bits": args.bits,
        "start": args.start,
        "mode": args.mode,
        "final_state": final,
        "final_parity": "odd" if final else "even",
        "outputs": outs,
        "transcript": [r.as_dict() for r in transcript],
    }
    _emit(_dump(doc), args.output)
    return EXIT_OK


def cmd_generators(args) -> int:
    try:
        b = make_basis(args.n)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    doc = {
        "N": b.N,
        "count": b.size,
        "labels": [list(lab) for lab in b.labels],
        "generators": [[[[float(z.real), float(z.imag)] for z in row] for row in g] for g in b.generators],
    }
    if args.check:
        doc["residuals"] = basis_residuals(b, structure_constants(b))
    _emit(_dump(doc), args.output)
    return EXIT_OK


SWEEP_COLUMNS = ["value", "pulse_area", "rho00", "rho11", "coherence", "state_bit", "coherence_bit", "norm_drift", "status"]


def sweep_row(spec_and_value) -> list:
    """One sweep row; failures are reported in the status column."""
    spec, value = spec_and_value
    try:
        cfg = spec.config_for(value)
        traj = integrate(cfg)
        s = summarize(cfg, traj.final, traj.norm_drift)
        return [value, s["pulse_area"], s.get("rho00", float("nan")), s.get("rho11", float("nan")),
                s.get("coherence", float("nan")), s.get("state_bit", ""), s.get("coherence_bit", ""),
                traj.norm_drift, "ok"]
    except Exception as exc:  # noqa: BLE001 - a failed row must not stop the sweep
        msg = f"failed: {type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return [value, "", "", "", "", "", "", "", msg]


def run_sweep(spec: SweepSpec) -> list[list]:
    values = sorted(spec.values)
    jobs = [(spec, v) for v in values]
    if spec.workers == 1:
        return [sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        return list(pool.map(sweep_row, jobs))


def cmd_sweep(args) -> int:
    base = load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()] if args.values else []
    except ValueError:
        raise ConfigError(f"sweep values must be comma-separated numbers, got {args.values!r}") from None
    spec = SweepSpec(base, args.axis, tuple(values), args.workers)
    rows = run_sweep(spec)
    _emit(rows_csv([args.axis] + SWEEP_COLUMNS[1:], rows), args.output)
    return EXIT_OK if all(r[-1] == "ok" for r in rows) else EXIT_NUMERIC


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    common.add_argument("--output", default=argparse.SUPPRESS, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="recorded in metadata only")

    p = argparse.ArgumentParser(prog="blochfsm", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="integrate one trajectory with RK4")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("propagate", parents=[common], help="RK4 and/or analytic propagation")
    s.add_argument("--method", choices=("rk4", "sylvester", "both"), default="both")
    s.add_argument("--tol", type=float, default=1e-8, help="commutativity tolerance for the analytic path")
    s.set_defaults(func=cmd_propagate)

    s = sub.add_parser("parity", parents=[common], help="run the parity checker")
    s.add_argument("--bits", default="")
    s.add_argument("--start", choices=("even", "odd"), default="even")
    s.add_argument("--mode", choices=("logical", "physical"), default="logical")
    s.add_argument("--state-table", action="store_true", help="emit the PS,PI,NS,PO table as CSV")
    s.set_defaults(func=cmd_parity)

    s = sub.add_parser("generators", parents=[common], help="print the su(N) generator basis")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--check", action="store_true", help="include invariant residuals")
    s.set_defaults(func=cmd_generators)

    s = sub.add_parser("sweep", parents=[common], help="sweep one pulse parameter")
    s.add_argument("--axis", choices=("omega0", "sigma", "tau", "delta"), required=True)
    s.add_argument("--values", required=True, help="comma-separated values")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("config", "output", "format", "seed"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EncodingMismatch as exc:
        print(f"encoding mismatch: {exc}", file=sys.stderr)
        print(json.dumps(exc.observables, sort_keys=True), file=sys.stderr)
        return EXIT_MISMATCH
    except (NumericalError, DomainError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
