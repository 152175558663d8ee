"""Benchmark harness: dataset generation, solver modes, metrics, CSV reports.

Modes: `qcbp` runs the full branch-and-price solver, `hcg_only` stops after
root column generation plus the primal heuristic, and `exact` runs the
reference backtracking oracle. Every record carries the exact chromatic
number, so optimality rates and gaps come straight off the CSV.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .bnp import SolverConfig, node_lb, primal_heuristic, solve_qcbp
from .bounds import spectral_lb
from .chromatic import exact_coloring
from .embedding import EmbedParams
from .emulator import DEFAULT_C6, EmulatorConfig
from .graphs import Graph, flip_random_pairs, parse_dimacs, positions_to_csv, random_ud_graph
from .hcg import HcgCaps, run_hcg
from .pricing import COMPACT_REGISTER_RADIUS_UM, PricingEngine, PricingStats, SamplerConfig
from .rmp import ColumnPool

exact_reference_chromatic = exact_coloring

MODES = ("qcbp", "hcg_only", "exact")
SAMPLERS = ("emulated_qaa", "classical_stochastic", "exact_pricer")

BENCH_HEADER = (
    "instance,n,is_ud,chi_exact,chi_hat,gap,proven,shots,"
    "nodes_generated,nodes_explored,nodes_pruned,ilp_calls,wall_ms"
)
PRICING_HEADER = "instance,iteration,n_sub,shots,distinct_bitstrings,improving,maximal"
MANIFEST_HEADER = "instance,n,is_ud,seed,graph_file,positions_file"


@dataclass
class RunConfig:
    mode: str = "qcbp"
    sampler: str = "emulated_qaa"
    shots: int = 200
    seed: int = 0
    node_budget: int = 1000
    hcg_max_iterations: int = 50
    extend_to_maximal: bool = False
    dt: float = 1e-3
    c6: float = DEFAULT_C6
    duration: float = 3.0
    delta_start: float = -15.0
    delta_end: float = 15.0
    register_radius: float = COMPACT_REGISTER_RADIUS_UM
    embed_iterations: int = 3000
    embed_restarts: int = 5
    embed_w_edge: float = 1.0
    embed_w_nonedge: float = 1.0
    embed_w_spacing: float = 4.0
    embed_w_radius: float = 1.0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")

    def sampler_config(self, seed: int | None = None) -> SamplerConfig:
        return SamplerConfig(
            kind=self.sampler,
            shots=self.shots,
            seed=self.seed if seed is None else seed,
            extend_to_maximal=self.extend_to_maximal,
            emulator=EmulatorConfig(
                c6=self.c6,
                dt=self.dt,
                shots=self.shots,
                duration=self.duration,
                delta_start=self.delta_start,
                delta_end=self.delta_end,
            ),
            embed=EmbedParams(
                ud_radius=self.register_radius,
                iterations=self.embed_iterations,
                restarts=self.embed_restarts,
                w_edge=self.embed_w_edge,
                w_nonedge=self.embed_w_nonedge,
                w_spacing=self.embed_w_spacing,
                w_radius=self.embed_w_radius,
            ),
        )

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            node_budget=self.node_budget,
            hcg=HcgCaps(max_iterations=self.hcg_max_iterations),
        )


def parse_config_file(text: str) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def make_run_config(settings: dict[str, str]) -> RunConfig:
    """Build a RunConfig from string settings, coercing by field type."""
    known = {f.name: f.type for f in fields(RunConfig)}
    kwargs: dict[str, object] = {}
    for key, value in settings.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        ftype = known[key]
        if ftype == "bool":
            kwargs[key] = value.lower() in ("1", "true", "yes", "on")
        elif ftype == "int":
            kwargs[key] = int(value)
        elif ftype == "float":
            kwargs[key] = float(value)
        else:
            kwargs[key] = value
    return RunConfig(**kwargs)


@dataclass(frozen=True)
class InstanceRecord:
    instance: str
    n: int
    is_ud: bool
    seed: int
    graph_file: str
    positions_file: str


def generate_dataset(
    out_dir: str | Path,
    ns: tuple[int, ...] = (8, 9, 10, 11, 12),
    per_n: int = 12,
    ud_fraction: float = 0.5,
    seed: int = 0,
    radius: float = 10.0,
    box: float = 40.0,
) -> list[InstanceRecord]:
    """Write DIMACS graphs, position CSVs, and a manifest; deterministic per seed.

    The first round(per_n * ud_fraction) instances of each size keep their
    unit-disk structure; the rest get 1-3 adjacency flips (non-UD).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records: list[InstanceRecord] = []
    n_ud = round(per_n * ud_fraction)
    for n in ns:
        for i in range(per_n):
            inst_seed = seed * 1_000_000 + n * 1_000 + i
            g, pos = random_ud_graph(n, inst_seed, radius=radius, box=box)
            is_ud = i < n_ud
            if not is_ud:
                g = flip_random_pairs(g, seed=inst_seed + 500_000)
            name = f"n{n:02d}_{'ud' if is_ud else 'nud'}_{i:02d}"
            graph_file = f"{name}.dimacs"
            positions_file = f"{name}_positions.csv"
            (out / graph_file).write_text(g.to_dimacs())
            (out / positions_file).write_text(positions_to_csv(pos))
            records.append(InstanceRecord(name, n, is_ud, inst_seed, graph_file, positions_file))
    lines = [MANIFEST_HEADER]
    lines.extend(
        f"{r.instance},{r.n},{str(r.is_ud).lower()},{r.seed},{r.graph_file},{r.positions_file}"
        for r in records
    )
    (out / "manifest.csv").write_text("\n".join(lines) + "\n")
    return records


def load_manifest(dataset_dir: str | Path) -> list[InstanceRecord]:
    path = Path(dataset_dir) / "manifest.csv"
    lines = path.read_text().splitlines()
    if not lines or lines[0] != MANIFEST_HEADER:
        raise ValueError(f"malformed manifest at {path}")
    records = []
    for line in lines[1:]:
        name, n, is_ud, seed, graph_file, positions_file = line.split(",")
        records.append(InstanceRecord(name, int(n), is_ud == "true", int(seed), graph_file, positions_file))
    return records


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    n: int
    is_ud: bool
    chi_exact: int
    chi_hat: int
    gap: float
    proven: bool
    shots: int
    nodes_generated: int
    nodes_explored: int
    nodes_pruned: int
    ilp_calls: int
    wall_ms: float

    def to_csv_row(self) -> str:
        return (
            f"{self.instance},{self.n},{str(self.is_ud).lower()},{self.chi_exact},"
            f"{self.chi_hat},{self.gap!r},{str(self.proven).lower()},{self.shots},"
            f"{self.nodes_generated},{self.nodes_explored},{self.nodes_pruned},"
            f"{self.ilp_calls},{self.wall_ms!r}"
        )


def parse_bench_csv(text: str) -> list[BenchRecord]:
    lines = text.splitlines()
    if not lines or lines[0] != BENCH_HEADER:
        raise ValueError("malformed benchmark CSV header")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(BenchRecord(
            instance=parts[0], n=int(parts[1]), is_ud=parts[2] == "true",
            chi_exact=int(parts[3]), chi_hat=int(parts[4]), gap=float(parts[5]),
            proven=parts[6] == "true", shots=int(parts[7]), nodes_generated=int(parts[8]),
            nodes_explored=int(parts[9]), nodes_pruned=int(parts[10]),
            ilp_calls=int(parts[11]), wall_ms=float(parts[12]),
        ))
    return records


def solve_instance(g: Graph, config: RunConfig, engine_seed: int,
                   clock=time.perf_counter) -> tuple[dict, list[PricingStats]]:
    """Run one instance in the configured mode; the coloring is re-validated."""
    t0 = clock()
    if config.mode == "exact":
        chi, assignment = exact_coloring(g)
        classes: dict[int, int] = {}
        for v, c in enumerate(assignment):
            classes[c] = classes.get(c, 0) | (1 << v)
        union = 0
        for cls in classes.values():
            if cls & union or not g.is_independent(cls):
                raise RuntimeError("oracle produced an invalid coloring")
            union |= cls
        if union != g.full_mask:
            raise RuntimeError("oracle coloring does not cover the graph")
        return {
            "chi_hat": chi, "proven": True, "shots": 0,
            "nodes_generated": 0, "nodes_explored": 0, "nodes_pruned": 0,
            "ilp_calls": 0, "wall_ms": (clock() - t0) * 1e3,
        }, []

    engine = PricingEngine(config.sampler_config(seed=engine_seed))
    if config.mode == "hcg_only":
        pool = ColumnPool.with_singletons(g)
        res = run_hcg(g, tuple(range(g.n)), pool, engine,
                      HcgCaps(max_iterations=config.hcg_max_iterations))
        coloring = primal_heuristic(g, pool.masks())
        coloring.validate(g, g.full_mask)
        lb = node_lb(0, res.lp_bound, spectral_lb(g))
        return {
            "chi_hat": coloring.colors_used, "proven": coloring.colors_used == lb,
            "shots": res.shots_used, "nodes_generated": 1, "nodes_explored": 1,
            "nodes_pruned": 0, "ilp_calls": res.exact_pricer_calls,
            "wall_ms": (clock() - t0) * 1e3,
        }, res.pricing_log

    res = solve_qcbp(g, config.solver_config(), engine=engine, clock=clock)
    res.coloring.validate(g, g.full_mask)
    return {
        "chi_hat": res.chi_hat, "proven": res.proven_optimal,
        "shots": res.stats.shots_total,
        "nodes_generated": res.stats.nodes_generated,
        "nodes_explored": res.stats.nodes_explored,
        "nodes_pruned": res.stats.nodes_pruned,
        "ilp_calls": res.stats.exact_pricer_calls,
        "wall_ms": (clock() - t0) * 1e3,
    }, res.pricing_log


def run_benchmark(
    dataset_dir: str | Path,
    config: RunConfig,
    out_dir: str | Path | None = None,
    clock=time.perf_counter,
) -> tuple[list[BenchRecord], list[str]]:
    """Solve every manifest instance; returns records and pricing-log rows.

    With a deterministic clock and fixed seeds the CSV outputs are
    byte-identical across runs (single worker).
    """
    manifest = load_manifest(dataset_dir)
    dataset = Path(dataset_dir)
    records: list[BenchRecord] = []
    pricing_rows: list[str] = []
    for idx, inst in enumerate(manifest):
        g = parse_dimacs((dataset / inst.graph_file).read_text())
        chi_exact, _ = exact_coloring(g)
        engine_seed = int(np.random.default_rng([config.seed, idx]).integers(1 << 31))
        result, log = solve_instance(g, config, engine_seed, clock=clock)
        chi_hat = result["chi_hat"]
        if chi_hat < chi_exact:
            raise RuntimeError(f"{inst.instance}: reported {chi_hat} colors below chi={chi_exact}")
        records.append(BenchRecord(
            instance=inst.instance, n=inst.n, is_ud=inst.is_ud,
            chi_exact=chi_exact, chi_hat=chi_hat,
            gap=(chi_hat - chi_exact) / chi_exact,
            proven=result["proven"], shots=result["shots"],
            nodes_generated=result["nodes_generated"],
            nodes_explored=result["nodes_explored"],
            nodes_pruned=result["nodes_pruned"],
            ilp_calls=result["ilp_calls"], wall_ms=result["wall_ms"],
        ))
        pricing_rows.extend(
            f"{inst.instance},{row.iteration},{row.n_sub},{row.shots},"
            f"{row.distinct_bitstrings},{row.improving},{row.maximal}"
            for row in log
        )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "records.csv").write_text(records_to_csv(records))
        (out / "pricing_log.csv").write_text("\n".join([PRICING_HEADER, *pricing_rows]) + "\n")
        (out / "summary.txt").write_text(summarize(records, pricing_rows))
    return records, pricing_rows


def records_to_csv(records: list[BenchRecord]) -> str:
    return "\n".join([BENCH_HEADER, *(r.to_csv_row() for r in records)]) + "\n"


def _rate(records: list[BenchRecord]) -> float:
    return sum(r.chi_hat == r.chi_exact for r in records) / len(records)


def summarize(records: list[BenchRecord], pricing_rows: list[str]) -> str:
    """Aggregate tables: optimality by UD flag, gap by n, shot and node
    distributions, median exact-pricer calls, and sampler quality by n_sub."""
    if not records:
        return "no records\n"
    lines: list[str] = []
    ns = sorted({r.n for r in records})

    lines.append("== optimality rate ==")
    for flag in (True, False):
        grp = [r for r in records if r.is_ud == flag]
        if grp:
            lines.append(f"unit_disk={str(flag).lower():5s} rate={_rate(grp):.3f}  ({len(grp)} instances)")
    lines.append(f"total            rate={_rate(records):.3f}  ({len(records)} instances)")

    lines.append("")
    lines.append("== mean relative gap by n ==")
    for n in ns:
        grp = [r.gap for r in records if r.n == n]
        lines.append(f"n={n:2d}  mean_gap={statistics.mean(grp):.3f}  max_gap={max(grp):.3f}")

    lines.append("")
    lines.append("== shots by n (min/median/max) ==")
    for n in ns:
        grp = sorted(r.shots for r in records if r.n == n)
        lines.append(f"n={n:2d}  {grp[0]} / {statistics.median(grp):.0f} / {grp[-1]}")

    lines.append("")
    lines.append("== nodes by n (median generated/explored/pruned) ==")
    for n in ns:
        grp = [r for r in records if r.n == n]
        lines.append(
            f"n={n:2d}  {statistics.median([r.nodes_generated for r in grp]):.1f} / "
            f"{statistics.median([r.nodes_explored for r in grp]):.1f} / "
            f"{statistics.median([r.nodes_pruned for r in grp]):.1f}"
        )

    lines.append("")
    lines.append("== median exact-pricer calls by n and unit-disk flag ==")
    for flag in (True, False):
        cells = []
        for n in ns:
            grp = [r.ilp_calls for r in records if r.n == n and r.is_ud == flag]
            cells.append(f"n={n}:{statistics.median(grp):.1f}" if grp else f"n={n}:-")
        lines.append(f"unit_disk={str(flag).lower():5s}  " + "  ".join(cells))

    by_sub: dict[int, list[tuple[int, int, int]]] = {}
    for row in pricing_rows:
        _, _, n_sub, _, distinct, improving, maximal = row.split(",")
        by_sub.setdefault(int(n_sub), []).append((int(distinct), int(improving), int(maximal)))
    if by_sub:
        lines.append("")
        lines.append("== sampler quality by subproblem size (improving / maximal fraction of distinct) ==")
        for n_sub in sorted(by_sub):
            distinct = sum(d for d, _, _ in by_sub[n_sub])
            improving = sum(i for _, i, _ in by_sub[n_sub])
            maximal = sum(m for _, _, m in by_sub[n_sub])
            if distinct:
                lines.append(
                    f"n_sub={n_sub:2d}  improving={improving / distinct:.3f}  "
                    f"maximal={maximal / distinct:.3f}  (distinct={distinct})"
                )
    return "\n".join(lines) + "\n"
