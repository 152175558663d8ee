import numpy as np
import pytest
from scipy.optimize import linprog

from qcbp.embedding import EmbedParams
from qcbp.emulator import EmulatorConfig
from qcbp.graphs import Graph, iter_bits, random_ud_graph
from qcbp.hcg import HcgCaps, run_hcg
from qcbp.pricing import PricingEngine, SamplerConfig
from qcbp.rmp import ColumnPool


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def full_lp_value(g: Graph) -> float:
    """LP over every independent set, solved by HiGHS."""
    masks = [s for s in range(1, 1 << g.n) if g.is_independent(s)]
    a = np.zeros((g.n, len(masks)))
    for j, mask in enumerate(masks):
        for v in iter_bits(mask):
            a[v, j] = 1.0
    res = linprog(np.ones(len(masks)), A_eq=a, b_eq=np.ones(g.n), bounds=(0, None), method="highs")
    assert res.status == 0
    return float(res.fun)


def exact_engine() -> PricingEngine:
    return PricingEngine(SamplerConfig(kind="exact_pricer"))


def stochastic_engine(seed: int = 0) -> PricingEngine:
    return PricingEngine(SamplerConfig(kind="classical_stochastic", shots=40, seed=seed))


def run_root(g: Graph, engine: PricingEngine):
    pool = ColumnPool.with_singletons(g)
    return run_hcg(g, tuple(range(g.n)), pool, engine, HcgCaps())


class TestSmallGraphs:
    def test_edgeless_terminates_at_one(self):
        g = Graph.from_edges(4, [])
        res = run_root(g, exact_engine())
        assert res.certified
        assert res.lp_bound == pytest.approx(1.0, abs=1e-9)
        assert g.full_mask in res.pool

    def test_triangle_stays_at_three(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        res = run_root(g, exact_engine())
        assert res.certified
        assert res.lp_bound == pytest.approx(3.0, abs=1e-9)

    def test_path3_reaches_two(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        res = run_root(g, exact_engine())
        assert res.certified
        assert res.lp_bound == pytest.approx(2.0, abs=1e-9)

    def test_single_vertex(self):
        res = run_root(Graph.from_edges(1, []), exact_engine())
        assert res.certified and res.lp_bound == pytest.approx(1.0)
        assert res.exact_pricer_calls >= 1


class TestCertificates:
    def test_certified_bound_matches_full_lp(self):
        rng = np.random.default_rng(70)
        for engine_maker in (exact_engine, stochastic_engine):
            for _ in range(12):
                n = int(rng.integers(3, 13))
                g = random_graph(n, rng.uniform(0.15, 0.7), rng)
                res = run_root(g, engine_maker())
                assert res.certified
                assert res.lp_bound == pytest.approx(full_lp_value(g), abs=1e-6)

    def test_certificate_means_no_improving_set(self):
        rng = np.random.default_rng(71)
        for _ in range(10):
            g = random_graph(8, 0.4, rng)
            res = run_root(g, stochastic_engine(int(rng.integers(1 << 20))))
            assert res.certified
            duals = res.rmp.duals
            best = max(
                (sum(duals[v] for v in iter_bits(s)) for s in range(1, 1 << g.n) if g.is_independent(s)),
            )
            assert best <= 1 + 1e-6

    def test_exact_calls_on_certificate(self):
        rng = np.random.default_rng(72)
        for _ in range(10):
            g = random_graph(7, 0.5, rng)
            res = run_root(g, stochastic_engine(int(rng.integers(1 << 20))))
            assert res.certified
            assert res.exact_pricer_calls >= 1


class TestAccounting:
    def test_shots_match_log(self):
        rng = np.random.default_rng(73)
        g = random_graph(9, 0.4, rng)
        engine = stochastic_engine(5)
        res = run_root(g, engine)
        assert res.shots_used == sum(row.shots for row in res.pricing_log)
        assert res.shots_used == engine.shots_used
        assert len(res.new_sets_per_iteration) == res.iterations

    def test_exact_pricer_mode_uses_no_shots(self):
        g = random_graph(8, 0.4, np.random.default_rng(74))
        res = run_root(g, exact_engine())
        assert res.shots_used == 0
        assert res.pricing_log == []
        assert res.exact_pricer_calls == res.iterations

    def test_iteration_cap_flags_uncertified(self):
        g = random_graph(9, 0.35, np.random.default_rng(75))
        pool = ColumnPool.with_singletons(g)
        res = run_hcg(g, tuple(range(g.n)), pool, exact_engine(), HcgCaps(max_iterations=1))
        assert not res.certified or res.iterations <= 1


class TestSubproblemIndexing:
    def test_columns_translate_to_root(self):
        g, _ = random_ud_graph(9, seed=11, radius=10, box=30)
        keep = 0b101110110
        sub, old_to_new = g.induced_subgraph(keep)
        sub_to_root = tuple(sorted(old_to_new))
        pool = ColumnPool.with_singletons(g)
        res = run_hcg(sub, sub_to_root, pool, exact_engine(), HcgCaps())
        assert res.certified
        for col in pool.columns:
            if col.origin != "singleton":
                assert col.mask & ~keep == 0
                assert g.is_independent(col.mask)


class TestEmulatedEndToEnd:
    def test_ud_instance_certifies(self):
        g, _ = random_ud_graph(6, seed=12, radius=10, box=22)
        cfg = SamplerConfig(
            kind="emulated_qaa", shots=120, seed=4,
            embed=EmbedParams(iterations=800, restarts=2),
            emulator=EmulatorConfig(dt=2e-3),
        )
        res = run_root(g, PricingEngine(cfg))
        assert res.certified
        assert res.lp_bound == pytest.approx(full_lp_value(g), abs=1e-6)
        assert res.exact_pricer_calls >= 1
        assert res.shots_used > 0
