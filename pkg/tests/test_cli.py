"""End-to-end tests of the graphspec command-line interface."""
import json

import numpy as np
import pytest

from graphspec import fileio
from graphspec.cli import main


def run(*argv):
    return main(list(argv))


@pytest.fixture
def graph_csv(tmp_path):
    path = str(tmp_path / "g.csv")
    assert run("gen-graph", "--family", "er", "--n", "14", "--p", "0.4",
               "--seed", "7", "--out", path) == 0
    return path


@pytest.fixture
def signals_csv(tmp_path, graph_csv):
    path = str(tmp_path / "x.csv")
    assert run("gen-process", "--graph", graph_csv, "--filter", "1,0.5,0.25",
               "--r", "30", "--seed", "1", "--out", path) == 0
    return path


class TestGenGraph:
    def test_deterministic(self, tmp_path):
        p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        run("gen-graph", "--family", "er", "--n", "10", "--p", "0.3",
            "--seed", "5", "--out", p1)
        run("gen-graph", "--family", "er", "--n", "10", "--p", "0.3",
            "--seed", "5", "--out", p2)
        assert open(p1).read() == open(p2).read()

    def test_sbm_with_sizes(self, tmp_path):
        path = str(tmp_path / "s.csv")
        code = run("gen-graph", "--family", "sbm", "--n", "12", "--sizes", "6,6",
                   "--p", "0.9", "--q", "0.1", "--seed", "0", "--out", path)
        assert code == 0
        assert fileio.load_adjacency(path).shape == (12, 12)

    def test_bad_family_exits_2(self, tmp_path):
        assert run("gen-graph", "--family", "nope", "--n", "5",
                   "--out", str(tmp_path / "x.csv")) == 2


class TestGenProcess:
    def test_sidecar_written(self, tmp_path, graph_csv):
        out = str(tmp_path / "proc.csv")
        assert run("gen-process", "--graph", graph_csv, "--diffusion", "0.1,0.05",
                   "--r", "4", "--out", out) == 0
        meta = json.load(open(str(tmp_path / "proc.json")))
        assert meta["r"] == 4 and len(meta["filter"]) == 3

    def test_filter_xor_diffusion(self, tmp_path, graph_csv):
        out = str(tmp_path / "proc.csv")
        assert run("gen-process", "--graph", graph_csv, "--out", out) == 2
        assert run("gen-process", "--graph", graph_csv, "--filter", "1",
                   "--diffusion", "0.1", "--out", out) == 2


class TestEstimate:
    def test_periodogram(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "psd.json")
        assert run("estimate", "--method", "periodogram", "--graph", graph_csv,
                   "--signals", signals_csv, "--out", out) == 0
        doc = json.load(open(out))
        assert doc["method"]["name"] == "periodogram"
        assert len(doc["p"]) == 14
        assert all(v >= 0 for v in doc["p"])

    def test_windowed(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "psd.json")
        assert run("estimate", "--method", "windowed", "--windows", "random:3",
                   "--graph", graph_csv, "--signals", signals_csv,
                   "--out", out) == 0
        assert json.load(open(out))["method"]["name"] == "windowed"

    def test_filterbank(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "psd.json")
        assert run("estimate", "--method", "filterbank", "--fb", "ideal:3",
                   "--graph", graph_csv, "--signals", signals_csv,
                   "--out", out) == 0
        assert json.load(open(out))["method"]["design"] == "ideal:3"

    def test_non_normal_graph_exits_2(self, tmp_path, signals_csv):
        # a directed path is not a normal matrix: input validation error
        bad = str(tmp_path / "bad.csv")
        with open(bad, "w") as fh:
            fh.write("src,dst,weight\n0,1,1.0\n1,2,1.0\n")
        out = str(tmp_path / "psd.json")
        assert run("estimate", "--method", "periodogram", "--graph", bad,
                   "--signals", signals_csv, "--out", out) == 2

    def test_numerical_failure_exits_3(self, tmp_path, graph_csv, signals_csv):
        # FIR design on a shift with repeated eigenvalues is ill conditioned
        eye = str(tmp_path / "eye.csv")
        n = 14
        import numpy as np

        fileio.save_matrix_csv(np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1), eye)
        out = str(tmp_path / "psd.json")
        code = run("estimate", "--method", "filterbank", "--fb", f"fir:{n}",
                   "--graph", eye, "--signals", signals_csv, "--out", out)
        assert code == 3


class TestFit:
    def test_ma_freq(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "ma", "--order", "3", "--graph", graph_csv,
                   "--signals", signals_csv, "--restarts", "3",
                   "--out", out) == 0
        doc = json.load(open(out))
        assert doc["model"] == "ma" and len(doc["coefficients"]["beta"]) == 3
        assert len(doc["psd"]) == 14

    def test_ma_symmetric_from_psd(self, tmp_path, graph_csv, signals_csv):
        psd = str(tmp_path / "psd.json")
        run("estimate", "--method", "periodogram", "--graph", graph_csv,
            "--signals", signals_csv, "--out", psd)
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "ma", "--order", "3", "--variant",
                   "symmetric", "--graph", graph_csv, "--psd", psd,
                   "--out", out) == 0
        assert len(json.load(open(out))["coefficients"]["gamma"]) == 5

    def test_ar(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "ar", "--order", "1", "--graph", graph_csv,
                   "--signals", signals_csv, "--out", out) == 0
        assert "alpha0" in json.load(open(out))["coefficients"]

    def test_arma_orders_required(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "arma", "--order", "2", "--variant",
                   "symmetric", "--graph", graph_csv, "--signals", signals_csv,
                   "--out", out) == 2

    def test_arma_nonneg_needs_psd_shift(self, tmp_path, graph_csv, signals_csv):
        # adjacency of an ER graph is indefinite -> validation error
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "arma", "--order", "2,2", "--variant",
                   "nonneg", "--graph", graph_csv, "--signals", signals_csv,
                   "--out", out) == 2

    def test_arma_relaxed_on_laplacian(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "model.json")
        assert run("fit", "--model", "arma", "--order", "2,1", "--variant",
                   "symmetric", "--graph", graph_csv, "--shift", "laplacian",
                   "--signals", signals_csv, "--out", out) == 0
        doc = json.load(open(out))
        assert len(doc["coefficients"]["denominator"]) == 3
        assert len(doc["coefficients"]["numerator"]) == 3


class TestExperiment:
    @pytest.mark.parametrize(
        "scenario,extra",
        [
            ("tc1_periodogram", ["--n", "12", "--p", "0.4", "--r", "2,4"]),
            ("tc1_windows", ["--n", "20", "--communities", "4", "--m", "4"]),
            ("tc1_filterbank",
             ["--n", "12", "--p", "0.4", "--degrees", "2", "--designs", "ideal:2"]),
            ("tc2_ma",
             ["--n", "16", "--p", "0.4", "--r", "10", "--degrees", "2",
              "--restarts", "2"]),
            ("tc2_arma", ["--n", "16", "--p", "0.4", "--r", "1,2"]),
        ],
    )
    def test_every_scenario_runs(self, tmp_path, scenario, extra):
        base = str(tmp_path / scenario)
        code = run("experiment", "--scenario", scenario, "--trials", "2",
                   "--seed", "0", "--out", base, *extra)
        assert code == 0
        lines = open(base + ".csv").read().splitlines()
        assert len(lines) >= 2
        meta = json.load(open(base + ".json"))
        assert meta["config"]["scenario"] == scenario

    def test_tiny_periodogram_run(self, tmp_path):
        base = str(tmp_path / "rep")
        code = run("experiment", "--scenario", "tc1_periodogram", "--n", "12",
                   "--p", "0.4", "--trials", "3", "--r", "2,4", "--seed", "0",
                   "--out", base)
        assert code == 0
        lines = open(base + ".csv").read().splitlines()
        assert lines[0] == "r,method,empirical_nmse,theoretical_nmse"
        assert len(lines) == 3

    def test_unknown_scenario_exits_2(self):
        assert run("experiment", "--scenario", "bogus") == 2


class TestDenoiseAndDiagnose:
    def test_denoise_roundtrip(self, tmp_path, graph_csv, signals_csv):
        psd = str(tmp_path / "psd.json")
        run("estimate", "--method", "periodogram", "--graph", graph_csv,
            "--signals", signals_csv, "--out", psd)
        out = str(tmp_path / "clean.csv")
        assert run("denoise", "--graph", graph_csv, "--signal", signals_csv,
                   "--psd", psd, "--noise-power", "0.5", "--out", out) == 0
        assert fileio.load_matrix_csv(out).shape == (14, 1)

    def test_lowpass_variant(self, tmp_path, graph_csv, signals_csv):
        psd = str(tmp_path / "psd.json")
        run("estimate", "--method", "periodogram", "--graph", graph_csv,
            "--signals", signals_csv, "--out", psd)
        out = str(tmp_path / "clean.csv")
        assert run("denoise", "--method", "lowpass", "--graph", graph_csv,
                   "--signal", signals_csv, "--psd", psd, "--noise-power", "1",
                   "--out", out) == 0

    def test_diagnose(self, tmp_path, graph_csv, signals_csv):
        out = str(tmp_path / "diag.json")
        assert run("diagnose", "--graph", graph_csv, "--signals", signals_csv,
                   "--taps", "3", "--out", out) == 0
        doc = json.load(open(out))
        assert 0.0 < doc["theta"] <= 1.0
        assert len(doc["residuals"]) == 4
        assert doc["locality"]["taps"] == 3

    def test_diagnose_needs_one_input(self, tmp_path, graph_csv):
        assert run("diagnose", "--graph", graph_csv,
                   "--out", str(tmp_path / "d.json")) == 2


class TestMalformedFlags:
    def test_bad_windows_spec(self, tmp_path, graph_csv, signals_csv):
        assert run("estimate", "--method", "windowed", "--windows", "local",
                   "--graph", graph_csv, "--signals", signals_csv,
                   "--out", str(tmp_path / "p.json")) == 2

    def test_bad_order_spec(self, tmp_path, graph_csv, signals_csv):
        assert run("fit", "--model", "ma", "--order", "two", "--graph",
                   graph_csv, "--signals", signals_csv,
                   "--out", str(tmp_path / "m.json")) == 2

    def test_missing_graph_file(self, tmp_path, signals_csv):
        assert run("estimate", "--method", "periodogram", "--graph",
                   str(tmp_path / "nope.csv"), "--signals", signals_csv,
                   "--out", str(tmp_path / "p.json")) == 2
