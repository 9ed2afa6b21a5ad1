"""Command-line front end.

Commands:

    vrnoc validate <scenario>
    vrnoc run <scenario> [--cycles N] [--seed S] [--out PATH]
                         [--trace PATH] [--format csv|text]
    vrnoc sweep <scenario> --rates a,b,c [--collision] [--out PATH]

Exit codes: 0 success, 2 scenario parse/schema error, 3 topology or
configuration validation failure, 4 runtime failure during simulation.

Reports land in --out when given, otherwise in the directory named by
the VRNOC_OUTPUT_DIR environment variable (default: current directory)
as ``<scenario stem>_report.<ext>``.  All outputs are byte-for-byte
reproducible for identical inputs.

Trace CSV columns (one row per active router per cycle):
cycle, router, offer_north, offer_south, offer_west, offer_east,
accepted_ports, emit_north, emit_south, emit_west, emit_east — flits
shown as 16-bit header words in hex, accepted ports as '|'-joined
port numbers (0=N 1=S 2=W 3=E).

Sweep CSV columns: rate, mean_latency, mean_waiting, throughput.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace
from pathlib import Path

from .engine import SimConfig, SimConfigError, Simulation, sweep_injection
from .scenario import ScenarioError, load_scenario, select_variant
from .tenancy import TenancyError
from .topology import TopologyError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

OUTPUT_DIR_ENV = "VRNOC_OUTPUT_DIR"

TRACE_COLUMNS = ["cycle", "router", "offer_north", "offer_south",
                 "offer_west", "offer_east", "accepted_ports", "emit_north",
                 "emit_south", "emit_west", "emit_east"]

SWEEP_COLUMNS = ["rate", "mean_latency", "mean_waiting", "throughput"]


def _default_out(scenario_path: str, suffix: str) -> Path:
    out_dir = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return out_dir / f"{Path(scenario_path).stem}_report{suffix}"


def _load(path: str) -> SimConfig:
    return load_scenario(path)


def cmd_validate(args) -> int:
    try:
        cfg = _load(args.scenario)
    except ScenarioError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    try:
        Simulation(cfg)
    except (SimConfigError, TopologyError, TenancyError) as exc:
        for line in str(exc).split("; "):
            print(line, file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{args.scenario}: ok")
    return EXIT_OK


class _TraceWriter:
    def __init__(self, fh):
        self.writer = csv.writer(fh, lineterminator="\n")
        self.writer.writerow(TRACE_COLUMNS)

    @staticmethod
    def _word(flit) -> str:
        return f"0x{flit.header_word():04x}" if flit is not None else ""

    def __call__(self, cycle, router_id, router, offers, accepted, emitted):
        row = [str(cycle), str(router_id)]
        row += [self._word(offers.get(d)) for d in range(4)]
        row.append("|".join(str(p) for p in sorted(accepted)))
        row += [self._word(emitted.get(d)) for d in range(4)]
        self.writer.writerow(row)


def cmd_run(args) -> int:
    try:
        cfg = _load(args.scenario)
    except ScenarioError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    if args.cycles is not None:
        cfg = replace(cfg, cycles=args.cycles)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    try:
        sim = Simulation(cfg)
    except (SimConfigError, TopologyError, TenancyError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    trace_fh = None
    try:
        if args.trace:
            trace_fh = open(args.trace, "w", encoding="utf-8", newline="")
            sim.trace_sink = _TraceWriter(trace_fh)
        report = sim.run()
    except (TenancyError, SimConfigError, AssertionError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        if trace_fh is not None:
            trace_fh.close()

    suffix = ".csv" if args.format == "csv" else ".txt"
    out = Path(args.out) if args.out else _default_out(args.scenario, suffix)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        if args.format == "csv":
            csv.writer(fh, lineterminator="\n").writerows(report.to_csv_rows())
        else:
            fh.write(report.to_text())
    print(f"cycles={report.cycles} injected={report.injected} "
          f"delivered={report.delivered} refused={report.refused} "
          f"denied={report.denied} misrouted={report.misrouted} "
          f"mean_latency={report.mean_latency():.3f} "
          f"mean_waiting={report.mean_waiting():.3f} "
          f"throughput={report.aggregate_throughput():.6f}")
    print(f"report written to {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        rates = [float(tok) for tok in args.rates.split(",") if tok.strip()]
    except ValueError:
        print(f"--rates: could not parse {args.rates!r}", file=sys.stderr)
        return EXIT_PARSE
    if not rates:
        print("--rates: at least one rate is required", file=sys.stderr)
        return EXIT_PARSE
    try:
        cfg = _load(args.scenario)
    except ScenarioError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    variant = "collision" if args.collision else "no_collision"
    cfg = select_variant(cfg, variant)
    try:
        Simulation(cfg)
    except (SimConfigError, TopologyError, TenancyError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    try:
        rows = sweep_injection(cfg, rates)
    except (SimConfigError, TenancyError, AssertionError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out = Path(args.out) if args.out else _default_out(args.scenario, ".csv")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([f"{row['rate']:g}", f"{row['mean_latency']:.3f}",
                        f"{row['mean_waiting']:.3f}",
                        f"{row['throughput']:.6f}"])
    for row in rows:
        print(f"rate={row['rate']:g} mean_latency={row['mean_latency']:.3f} "
              f"mean_waiting={row['mean_waiting']:.3f} "
              f"throughput={row['throughput']:.6f}")
    print(f"sweep ({variant}) written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vrnoc",
        description="Cycle-accurate multi-tenant FPGA column-NoC simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file and topology")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run one scenario and write a report")
    p.add_argument("scenario")
    p.add_argument("--cycles", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--trace", default=None,
                   help="write a per-cycle router trace CSV to this path")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run an injection-rate sweep")
    p.add_argument("scenario")
    p.add_argument("--rates", required=True,
                   help="comma-separated injection rates, e.g. 0.1,0.2,0.3")
    p.add_argument("--collision", action="store_true",
                   help="select the scenario's collision traffic variant")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
