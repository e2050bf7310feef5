"""Command-line entry point.

Exit codes: 0 success, 1 validation or goal violations, 2 parse errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .distributions import DistributionSpec, ReferenceDist, generate_counts
from .errors import InvalidSpec, ParseError, ValidationError
from .evaluation import TRANSFORMS, ks_statistic, ks_table, run_ntd_experiment
from .eventlog import open_log
from .goals import parse_rules_text, validate_trace
from .lccc import allocate_interceptors, enumerate_threat_instances, prioritize_clusters
from .scenario import load_scenario
from .simulation import run_simulation

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


def _write_csv(path: str, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "F_emp", "F_ref"])
        for x, emp, ref in rows:
            writer.writerow([f"{x:.6f}", f"{emp:.6f}", f"{ref:.6f}"])


def _read_sample(path: str) -> list[float]:
    """First column of a CSV; a non-numeric first row is taken as a header."""
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                if lineno == 1:
                    continue
                raise ParseError(f"{path}: non-numeric sample value {row[0]!r}", lineno) from None
    return values


def cmd_simulate(args) -> int:
    scn = load_scenario(args.scenario)
    result = run_simulation(scn, seed=args.seed, ticks=args.ticks)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "events.log").write_text(result.log_text(), encoding="utf-8")
    (out / "report.txt").write_text(result.report.to_text(), encoding="utf-8")
    (out / "validation.txt").write_text("\n".join(result.validation_lines()) + "\n", encoding="utf-8")
    print(result.report.to_text(), end="")
    print("\n".join(result.validation_lines()))
    return EXIT_OK if result.validation.valid else EXIT_INVALID


def cmd_ntd_eval(args) -> int:
    spec = DistributionSpec.parse(args.dist)
    report = run_ntd_experiment(spec, args.n, args.seed, transform=args.transform, alpha=args.alpha)
    print(report.to_text(), end="")
    if args.csv:
        series = TRANSFORMS[args.transform](generate_counts(spec, args.n, args.seed))
        ref = ReferenceDist.parse(args.ref) if args.ref else ReferenceDist("studentt", (2.0,))
        _write_csv(args.csv, ks_table(series, ref))
    return EXIT_OK


def cmd_ks_test(args) -> int:
    sample = _read_sample(args.sample)
    ref = ReferenceDist.parse(args.ref)
    result = ks_statistic(sample, ref, args.alpha)
    print(f"reference={ref.label}")
    print(f"n={result.n}")
    print(f"d_stat={result.d_stat:.6f}")
    print(f"alpha={result.alpha:g}")
    print(f"critical={result.critical:.6f}")
    print(f"reject={int(result.reject)}")
    if args.csv:
        _write_csv(args.csv, ks_table(sample, ref))
    return EXIT_OK


def cmd_allocate(args) -> int:
    scn = load_scenario(args.scenario)
    tick = args.tick
    clusters = scn.clusters_at(tick)
    instances = enumerate_threat_instances(clusters, scn.vavps, scn.traps, scn.values)
    priority = prioritize_clusters(clusters, scn.vavps, scn.traps, scn.values)
    result = allocate_interceptors(priority, scn.interceptors, tick)
    print(f"instances={len(instances)}")
    for pos, entry in enumerate(priority, start=1):
        b = entry.breakdown
        print(f"priority[{pos}]={entry.cluster_id} vavp={entry.vavp_id} d1={b.distance:.6f} "
              f"size={entry.size} rank={b.rank} precedence={b.precedence}")
    for a in result.assignments:
        print(f"assign={a.target_id} interceptor={a.interceptor_id} cluster={a.cluster_id}")
    for target in result.unassigned:
        print(f"unassigned={target}")
    return EXIT_OK


def cmd_verify_goals(args) -> int:
    records = open_log(args.log)
    rules, forbidden = parse_rules_text(Path(args.rules).read_text(encoding="utf-8"), args.rules)
    trace = [(r.tick, tuple(g for g in r.get("modes", "").split(",") if g))
             for r in records if r.kind == "mode"]
    report = validate_trace(trace, rules, forbidden)
    print(f"ticks={len(trace)}")
    print(f"violations={len(report.violations)}")
    for v in report.violations:
        print(f"violation[{v.tick}]={','.join(sorted(v.goals))}: {v.reason}")
    print(f"valid={int(report.valid)}")
    return EXIT_OK if report.valid else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iad-agents", description="Air-defense BDI agents and evaluation tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario and write events.log, report.txt, validation.txt")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ticks", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ntd-eval", help="NTD jamming experiment on generated counts")
    p.add_argument("--dist", required=True, help="e.g. normal:20,10")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--transform", choices=sorted(TRANSFORMS), default="ntd")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--ref", help="reference for the CSV table (default studentt:2)")
    p.add_argument("--csv", help="write (x, F_emp, F_ref) rows here")
    p.set_defaults(func=cmd_ntd_eval)

    p = sub.add_parser("ks-test", help="one-sample KS test of a CSV column against a reference")
    p.add_argument("--sample", required=True)
    p.add_argument("--ref", required=True, help="e.g. gamma:12.06,0.08,rate")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_ks_test)

    p = sub.add_parser("allocate", help="prioritize clusters and allocate interceptors once")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tick", type=int, default=0)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("verify-goals", help="check the mode trace of an event log against goal rules")
    p.add_argument("--log", required=True)
    p.add_argument("--rules", required=True)
    p.set_defaults(func=cmd_verify_goals)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, InvalidSpec, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
