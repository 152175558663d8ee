import numpy as np
import pytest
from scipy.optimize import linprog

from qcbp.graphs import Graph, iter_bits, mask_of
from qcbp.rmp import (
    RmpError,
    add_columns,
    init_rmp,
    solve_rmp,
    to_lp_text,
)


def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def all_independent_sets(g: Graph) -> list[int]:
    return [s for s in range(1, 1 << g.n) if g.is_independent(s)]


def lp_oracle(g: Graph, masks: list[int]) -> float:
    """Independent LP value via HiGHS."""
    a = np.zeros((g.n, len(masks)))
    for j, mask in enumerate(masks):
        for v in iter_bits(mask):
            a[v, j] = 1.0
    res = linprog(np.ones(len(masks)), A_eq=a, b_eq=np.ones(g.n), bounds=(0, None), method="highs")
    assert res.status == 0
    return float(res.fun)


class TestModelConstruction:
    def test_init_path3_singletons(self):
        model = init_rmp(path3())
        assert model.masks == [1, 2, 4]

    def test_init_k1(self):
        model = init_rmp(Graph.from_edges(1, []))
        assert model.masks == [1]

    def test_initial_model_objective_is_n(self):
        model = init_rmp(path3())
        sol = solve_rmp(model)
        assert abs(sol.objective - 3) < 1e-9
        assert np.allclose(sol.duals, 1.0, atol=1e-9)

    def test_add_column(self):
        model = init_rmp(path3())
        assert add_columns(model, [mask_of([0, 2])]) == 1
        assert len(model.masks) == 4

    def test_duplicate_skipped(self):
        model = init_rmp(path3())
        add_columns(model, [mask_of([0, 2])])
        assert add_columns(model, [mask_of([0, 2])]) == 0

    def test_dependent_set_rejected(self):
        model = init_rmp(path3())
        with pytest.raises(ValueError, match="independent"):
            add_columns(model, [mask_of([0, 1])])


class TestSolve:
    def test_path3_with_endpoint_pair(self):
        model = init_rmp(path3())
        add_columns(model, [mask_of([0, 2])])
        sol = solve_rmp(model)
        assert abs(sol.objective - 2.0) < 1e-9
        assert abs(sol.lam[3] - 1.0) < 1e-9  # the {0,2} column
        assert abs(sol.lam[1] - 1.0) < 1e-9  # the {1} singleton

    def test_edgeless_with_full_set(self):
        g = Graph.from_edges(4, [])
        model = init_rmp(g)
        add_columns(model, [g.full_mask])
        sol = solve_rmp(model)
        assert abs(sol.objective - 1.0) < 1e-9

    def test_objective_never_increases_with_columns(self):
        rng = np.random.default_rng(30)
        for _ in range(20):
            g = random_graph(7, 0.4, rng)
            model = init_rmp(g)
            prev = solve_rmp(model).objective
            for s in all_independent_sets(g):
                if s.bit_count() > 1 and rng.random() < 0.3:
                    add_columns(model, [s])
                    obj = solve_rmp(model).objective
                    assert obj <= prev + 1e-9
                    prev = obj

    def test_invariants_on_random_models(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            g = random_graph(int(rng.integers(2, 9)), rng.uniform(0.1, 0.8), rng)
            model = init_rmp(g)
            extra = [s for s in all_independent_sets(g) if s.bit_count() > 1 and rng.random() < 0.4]
            add_columns(model, extra)
            sol = solve_rmp(model)
            a = np.zeros((g.n, len(model.masks)))
            for j, mask in enumerate(model.masks):
                for v in iter_bits(mask):
                    a[v, j] = 1.0
            assert np.abs(a @ sol.lam - 1.0).max() < 1e-9
            assert abs(sol.objective - sol.duals.sum()) < 1e-7
            assert (a.T @ sol.duals).max() <= 1.0 + 1e-7
            assert sol.lam.min() >= 0.0

    def test_full_pool_matches_highs_oracle(self):
        rng = np.random.default_rng(32)
        for _ in range(25):
            g = random_graph(int(rng.integers(2, 11)), rng.uniform(0.1, 0.8), rng)
            model = init_rmp(g)
            add_columns(model, [s for s in all_independent_sets(g) if s.bit_count() > 1])
            sol = solve_rmp(model)
            assert abs(sol.objective - lp_oracle(g, model.masks)) < 1e-6

    def test_missing_singletons_detected(self):
        model = init_rmp(path3())
        model.masks.pop(0)
        with pytest.raises(RmpError, match="singleton"):
            solve_rmp(model)


class TestLpDump:
    def test_shape(self):
        model = init_rmp(path3())
        add_columns(model, [mask_of([0, 2])])
        text = to_lp_text(model)
        assert "Minimize" in text and "cover_1: l1 = 1" in text
        assert "l0 + l3" in text
