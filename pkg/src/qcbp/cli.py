"""Command-line entry point: dataset generation, single solves, benchmarks, reports."""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .bench import (
    PRICING_HEADER,
    RunConfig,
    generate_dataset,
    make_run_config,
    parse_bench_csv,
    parse_config_file,
    run_benchmark,
    solve_instance,
    summarize,
)
from .chromatic import exact_chromatic_number
from .graphs import parse_dimacs

_CONFIG_FLAGS = [f.name for f in fields(RunConfig)]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file; flags override it")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f.name, default=None, metavar=f.type.upper())


def _build_config(args: argparse.Namespace) -> RunConfig:
    settings: dict[str, str] = {}
    if getattr(args, "config", None):
        settings.update(parse_config_file(Path(args.config).read_text()))
    for name in _CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            settings[name] = str(value)
    return make_run_config(settings)


def _cmd_gen(args: argparse.Namespace) -> int:
    ns = tuple(int(x) for x in args.ns.split(","))
    records = generate_dataset(
        args.out, ns=ns, per_n=args.per_n, ud_fraction=args.ud_fraction,
        seed=args.seed, radius=args.radius, box=args.box,
    )
    n_ud = sum(r.is_ud for r in records)
    print(f"wrote {len(records)} instances ({n_ud} unit-disk) to {args.out}")
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    config = _build_config(args)
    g = parse_dimacs(Path(args.graph).read_text())
    result, log = solve_instance(g, config, engine_seed=config.seed)
    print(f"instance: {args.graph}")
    print(f"mode={config.mode} sampler={config.sampler}")
    print(f"colors={result['chi_hat']} proven_optimal={str(result['proven']).lower()}")
    print(f"shots={result['shots']} ilp_calls={result['ilp_calls']} "
          f"nodes={result['nodes_generated']}/{result['nodes_explored']}/{result['nodes_pruned']} "
          f"(generated/explored/pruned) wall_ms={result['wall_ms']:.1f}")
    if args.chi_exact:
        print(f"chi_exact={exact_chromatic_number(g)}")
    if args.pricing_log:
        rows = [f"{r.iteration},{r.n_sub},{r.shots},{r.distinct_bitstrings},{r.improving},{r.maximal}"
                for r in log]
        header = PRICING_HEADER.split(",", 1)[1]  # per-run log has no instance column
        Path(args.pricing_log).write_text("\n".join([header, *rows]) + "\n")
        print(f"pricing log written to {args.pricing_log}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    config = _build_config(args)
    records, pricing_rows = run_benchmark(args.dataset, config, out_dir=args.out)
    print(summarize(records, pricing_rows))
    print(f"records written to {Path(args.out) / 'records.csv'}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    records = parse_bench_csv(Path(args.records).read_text())
    pricing_rows: list[str] = []
    if args.pricing_log:
        lines = Path(args.pricing_log).read_text().splitlines()
        if not lines or lines[0] != PRICING_HEADER:
            raise ValueError("malformed pricing log header")
        pricing_rows = lines[1:]
    print(summarize(records, pricing_rows), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcbp",
        description="Branch-and-price vertex coloring with an emulated neutral-atom pricing sampler.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a benchmark dataset")
    gen.add_argument("--out", required=True)
    gen.add_argument("--ns", default="8,9,10,11,12", help="comma-separated instance sizes")
    gen.add_argument("--per-n", type=int, default=12)
    gen.add_argument("--ud-fraction", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--radius", type=float, default=10.0)
    gen.add_argument("--box", type=float, default=40.0)
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="solve a single DIMACS instance")
    solve.add_argument("graph")
    solve.add_argument("--chi-exact", action="store_true", help="also print the oracle chromatic number")
    solve.add_argument("--pricing-log", help="write the per-iteration pricing log CSV here")
    _add_config_flags(solve)
    solve.set_defaults(func=_cmd_solve)

    bench = sub.add_parser("bench", help="run the benchmark sweep over a dataset")
    bench.add_argument("--dataset", required=True)
    bench.add_argument("--out", required=True)
    _add_config_flags(bench)
    bench.set_defaults(func=_cmd_bench)

    report = sub.add_parser("report", help="summarize a benchmark records CSV")
    report.add_argument("--records", required=True)
    report.add_argument("--pricing-log")
    report.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
