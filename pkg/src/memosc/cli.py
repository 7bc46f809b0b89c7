"""Command-line interface.

Exit codes: 0 success, 1 infeasible design or failed reproduction check,
2 usage or config error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import (ConfigDocument, ConfigError, load_config, paper_defaults,
                     paper_defaults_yaml, parse_config, parse_quantity)
from .design import analyze, validate_design
from .experiments import SweepSpec, sweep_ra, write_sweep_csv
from .memristor import DomainError, ParameterError
from .reproduce import measurements_document, reproduce, write_json
from .transient import (SimConfig, SimulationError, TriggerSchedule, measure_pulses, simulate,
                        write_events_csv, write_trace_csv)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"error: usage: {message}\n")
        self.print_usage(sys.stderr)
        sys.exit(EXIT_USAGE)


def _load(args) -> ConfigDocument:
    if args.paper_defaults:
        return parse_config(paper_defaults())
    if not args.config:
        raise UsageError("one of --config or --paper-defaults is required")
    return load_config(args.config)


def _sim_config(doc: ConfigDocument) -> SimConfig:
    sim = dict(doc.sim)
    if "t_end" not in sim:
        rep = analyze(doc.memristor, doc.circuit)
        last = max((s + w for s, w in doc.triggers), default=0.0)
        sim["t_end"] = last + 2.0 * (rep.t_o2 or 1.0)
    try:
        return SimConfig(**sim)
    except ParameterError as exc:
        raise ConfigError("sim", str(exc)) from None


def cmd_validate(args) -> int:
    doc = _load(args)
    verdict = validate_design(doc.memristor, doc.circuit)
    if verdict.feasible:
        print("feasible")
        return EXIT_OK
    for name in verdict.violations:
        print(f"violation: {name}")
    return EXIT_FAIL


def cmd_analyze(args) -> int:
    doc = _load(args)
    text = json.dumps(analyze(doc.memristor, doc.circuit).to_dict(), indent=2,
                      allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    doc = _load(args)
    try:
        trig = TriggerSchedule(tuple(doc.triggers))
    except ParameterError as exc:
        raise ConfigError("triggers", str(exc)) from None
    cfg = _sim_config(doc)
    trace = simulate(doc.memristor, doc.circuit, trig, cfg)
    prefix = args.out
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    write_trace_csv(trace, f"{prefix}_trace.csv")
    write_events_csv(trace, f"{prefix}_events.csv")
    pulses = measure_pulses(trace, doc.circuit)
    write_json(measurements_document(pulses, doc.memristor, doc.circuit),
               f"{prefix}_measurements.json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    doc = _load(args)
    r_trans = [parse_quantity(v, "--r-trans") for v in (args.r_trans or ["0"])]
    spec = SweepSpec(parse_quantity(args.start, "--from"), parse_quantity(args.stop, "--to"),
                     args.steps, tuple(r_trans), parameter=args.param)
    rows = sweep_ra(spec, m=doc.memristor, c=doc.circuit,
                    dt=doc.sim["dt"], crossing_tol=doc.sim["crossing_tol"],
                    workers=args.workers)
    if not any(r.feasible for r in rows):
        print("warning: no feasible points in sweep range", file=sys.stderr)
    out = args.out or "sweep.csv"
    write_sweep_csv(rows, out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    checks = reproduce(args.out or "reproduction", dt=args.dt, workers=args.workers)
    for ch in checks:
        print(f"{'PASS' if ch.passed else 'FAIL'} {ch.name}: computed={ch.computed:.6g} "
              f"reference={ch.reference:.6g} ({ch.tolerance})")
    return EXIT_OK if all(ch.passed for ch in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="memosc", description=__doc__.splitlines()[0])
    p.add_argument("--paper-defaults", action="store_true",
                   help="print the published parameter set as a config file and exit")
    p.add_argument("--out", help="write --paper-defaults output here instead of stdout")
    sub = p.add_subparsers(dest="command")

    def common(sp, out_help):
        sp.add_argument("--config", help="YAML config file")
        sp.add_argument("--paper-defaults", action="store_true",
                        help="use the published parameter set instead of --config")
        sp.add_argument("--out", help=out_help)

    sp = sub.add_parser("validate", help="check oscillation feasibility")
    common(sp, "unused")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="closed-form design report as JSON")
    common(sp, "JSON output path (default stdout)")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("simulate", help="transient run; writes trace, events, measurements")
    common(sp, "output prefix")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="analytic vs simulated first-pulse width over a parameter")
    common(sp, "CSV output path (default sweep.csv)")
    sp.add_argument("--param", default="r_a", choices=["r_a"])
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--to", dest="stop", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--r-trans", action="append", help="transmission-gate resistance (repeatable)")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("reproduce", help="regenerate every published number into a directory")
    sp.add_argument("--out", help="bundle directory (default ./reproduction)")
    sp.add_argument("--dt", type=float, default=1e-4)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        if args.paper_defaults:
            text = paper_defaults_yaml()
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        print("error: usage: a command is required", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.command == "simulate" and not args.out:
        print("error: usage: simulate requires --out <prefix>", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DomainError) as exc:
        print(f"error: parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimulationError as exc:
        print(f"error: internal: {exc} (t={exc.t}, r_m={exc.r_m})", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"error: internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
