import pytest

from qcbp.cli import main
from qcbp.graphs import Graph


@pytest.fixture()
def dataset(tmp_path):
    out = tmp_path / "data"
    assert main(["gen", "--out", str(out), "--ns", "5,6", "--per-n", "2", "--seed", "7"]) == 0
    return out


class TestGen:
    def test_writes_dataset(self, dataset):
        assert (dataset / "manifest.csv").exists()
        assert len(list(dataset.glob("*.dimacs"))) == 4


class TestSolve:
    def test_exact_mode(self, tmp_path, capsys):
        graph = tmp_path / "k4.dimacs"
        g = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        graph.write_text(g.to_dimacs())
        assert main(["solve", str(graph), "--mode", "exact", "--chi-exact"]) == 0
        out = capsys.readouterr().out
        assert "colors=4" in out and "chi_exact=4" in out

    def test_stochastic_with_pricing_log(self, tmp_path, capsys):
        graph = tmp_path / "p4.dimacs"
        graph.write_text(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]).to_dimacs())
        log = tmp_path / "pricing.csv"
        code = main([
            "solve", str(graph), "--mode", "qcbp", "--sampler", "classical_stochastic",
            "--shots", "20", "--pricing-log", str(log),
        ])
        assert code == 0
        assert "colors=2" in capsys.readouterr().out
        assert log.read_text().startswith("iteration,n_sub,shots,distinct_bitstrings,improving,maximal")

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        graph = tmp_path / "p3.dimacs"
        graph.write_text(Graph.from_edges(3, [(0, 1), (1, 2)]).to_dimacs())
        conf = tmp_path / "run.conf"
        conf.write_text("mode = exact\nshots = 11\n")
        assert main(["solve", str(graph), "--config", str(conf), "--mode", "qcbp",
                     "--sampler", "exact_pricer"]) == 0
        out = capsys.readouterr().out
        assert "mode=qcbp" in out and "sampler=exact_pricer" in out

    def test_missing_file_errors(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "nope.dimacs")]) == 2
        assert "error:" in capsys.readouterr().err


class TestBenchReport:
    def test_bench_then_report(self, dataset, tmp_path, capsys):
        out = tmp_path / "out"
        code = main([
            "bench", "--dataset", str(dataset), "--out", str(out),
            "--mode", "qcbp", "--sampler", "classical_stochastic", "--shots", "20",
        ])
        assert code == 0
        assert (out / "records.csv").exists()
        capsys.readouterr()
        code = main(["report", "--records", str(out / "records.csv"),
                     "--pricing-log", str(out / "pricing_log.csv")])
        assert code == 0
        assert "optimality rate" in capsys.readouterr().out

    def test_bad_mode_errors(self, dataset, tmp_path, capsys):
        code = main(["bench", "--dataset", str(dataset), "--out", str(tmp_path / "o"),
                     "--mode", "quantum"])
        assert code == 2
        assert "error:" in capsys.readouterr().err
