import math

import numpy as np

from qcbp.bounds import adjacency_spectrum, jacobi_eigenvalues, spectral_lb
from qcbp.chromatic import exact_chromatic_number
from qcbp.graphs import Graph


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


class TestAdjacencySpectrum:
    def test_single_edge(self):
        eig = adjacency_spectrum(Graph.from_edges(2, [(0, 1)]))
        assert np.allclose(eig, [-1.0, 1.0], atol=1e-10)

    def test_edgeless(self):
        eig = adjacency_spectrum(Graph.from_edges(3, []))
        assert np.allclose(eig, 0.0, atol=1e-12)

    def test_c5_closed_form(self):
        # Eigenvalues of a cycle are 2*cos(2*pi*k/n).
        expected = sorted(2 * math.cos(2 * math.pi * k / 5) for k in range(5))
        eig = adjacency_spectrum(cycle(5))
        assert np.allclose(eig, expected, atol=1e-9)

    def test_trace_and_energy(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            g = random_graph(int(rng.integers(2, 13)), rng.uniform(0.1, 0.9), rng)
            eig = adjacency_spectrum(g)
            assert abs(eig.sum()) < 1e-8
            assert abs((eig**2).sum() - 2 * g.edge_count) < 1e-6

    def test_against_numpy(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = rng.normal(size=(8, 8))
            m = (m + m.T) / 2
            assert np.allclose(jacobi_eigenvalues(m), np.sort(np.linalg.eigvalsh(m)), atol=1e-8)


class TestSpectralLb:
    def test_k4(self):
        b = spectral_lb(complete(4))
        assert abs(b.hoffman - 4.0) < 1e-8
        assert abs(b.elphick_wocjan - 4.0) < 1e-8
        assert abs(b.edwards_elphick - 4.0) < 1e-8
        assert b.combined_lb == 4

    def test_edgeless(self):
        b = spectral_lb(Graph.from_edges(5, []))
        assert b.hoffman == b.elphick_wocjan == b.edwards_elphick == 1.0
        assert b.combined_lb == 1

    def test_c5_hoffman(self):
        b = spectral_lb(cycle(5))
        phi = (1 + math.sqrt(5)) / 2
        assert abs(b.hoffman - (1 + 2 / phi)) < 1e-8
        assert math.ceil(b.hoffman - 1e-6) == 3 == exact_chromatic_number(cycle(5))

    def test_hoffman_exact_on_cliques(self):
        for n in range(2, 9):
            b = spectral_lb(complete(n))
            assert abs(b.hoffman - n) < 1e-8
            assert b.combined_lb == n

    def test_soundness_against_exact_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            n = int(rng.integers(1, 11))
            g = random_graph(n, rng.uniform(0.0, 1.0), rng)
            assert spectral_lb(g).combined_lb <= exact_chromatic_number(g)

    def test_fields_at_least_one(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            g = random_graph(int(rng.integers(1, 9)), rng.uniform(0, 1), rng)
            b = spectral_lb(g)
            assert min(b.hoffman, b.elphick_wocjan, b.edwards_elphick) >= 1.0
            assert b.combined_lb >= 1
