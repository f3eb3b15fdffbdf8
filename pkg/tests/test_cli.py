from __future__ import annotations

import json

import numpy as np
import pytest
from prometheus_client import REGISTRY

from graphpe.services.dynamics import HenonParams, henon
from graphpe.services.entropy import EntropyParams, mpe_graph, permutation_entropy
from graphpe.services.graphs import complete_graph, directed_path
from graphpe.services.signals import MultivariateSignal, save_adjacency, save_signal
from scripts.entropy_cli import main


@pytest.fixture
def signal_file(tmp_path, rng):
    u = MultivariateSignal(rng.random((2, 60)), channel_names=("x", "y"))
    return save_signal(u, tmp_path / "u.csv"), u


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_pe_single_channel(capsys, tmp_path, rng):
    x = rng.random(40)
    path = save_signal(MultivariateSignal(x), tmp_path / "x.csv")
    code, out, _ = _run(capsys, "compute", "pe", "--input", str(path), "-m", "3")
    assert code == 0
    result = json.loads(out)
    assert list(result) == ["metric", "m", "L", "value", "pattern_count", "metadata"]
    assert result["metric"] == "pe"
    assert result["pattern_count"] == 38
    assert result["value"] == permutation_entropy(x, EntropyParams(m=3))


def test_compute_pe_needs_channel_for_multichannel(capsys, signal_file):
    path, _ = signal_file
    code, out, err = _run(capsys, "compute", "pe", "--input", str(path))
    assert code == 1
    assert out == ""
    assert "error[USAGE_ERROR]" in err


def test_compute_pe_channel_by_name(capsys, signal_file):
    path, u = signal_file
    code, out, _ = _run(capsys, "compute", "pe", "--input", str(path), "--channel", "y")
    assert code == 0
    result = json.loads(out)
    assert result["metadata"]["channel"] == "2"
    assert result["value"] == permutation_entropy(u.channel(1), EntropyParams(m=3))


def test_compute_mpeg_defaults_to_complete_graph(capsys, signal_file):
    path, u = signal_file
    code, out, _ = _run(capsys, "compute", "mpeg", "--input", str(path), "-m", "3", "-L", "1")
    assert code == 0
    result = json.loads(out)
    assert result["metadata"]["graph"] == "complete (default)"
    assert result["value"] == mpe_graph(u, complete_graph(2), EntropyParams(m=3))


def test_compute_mpeg_with_empty_graph_equals_mmspe(capsys, signal_file, write_csv):
    path, _ = signal_file
    empty2 = write_csv("empty2.csv", "0,0\n0,0\n")
    _, out_g, _ = _run(
        capsys, "compute", "mpeg", "--input", str(path), "--graph", str(empty2), "-m", "2"
    )
    _, out_kind, _ = _run(
        capsys, "compute", "mpeg", "--input", str(path), "--graph-kind", "empty", "-m", "2"
    )
    _, out_m, _ = _run(capsys, "compute", "mmspe", "--input", str(path), "-m", "2")
    mmspe_value = json.loads(out_m)["value"]
    assert json.loads(out_g)["value"] == pytest.approx(mmspe_value, abs=1e-12)
    assert json.loads(out_kind)["value"] == pytest.approx(mmspe_value, abs=1e-12)


def test_compute_mpeg_graph_options_are_exclusive(capsys, signal_file, write_csv):
    path, _ = signal_file
    g = write_csv("g.csv", "0,1\n1,0\n")
    code, _, err = _run(
        capsys,
        "compute", "mpeg", "--input", str(path), "--graph", str(g), "--graph-kind", "empty",
    )
    assert code == 1
    assert "mutually exclusive" in err


def test_compute_mpeg_graph_size_mismatch(capsys, signal_file, write_csv):
    path, _ = signal_file
    g = write_csv("g3.csv", "0,1,1\n1,0,1\n1,1,0\n")
    code, _, err = _run(capsys, "compute", "mpeg", "--input", str(path), "--graph", str(g))
    assert code == 2
    assert "error[INVALID_ARGUMENT]" in err


def test_compute_peg_on_path_equals_pe(capsys, tmp_path, rng):
    x = rng.random(30)
    path = save_signal(MultivariateSignal(x), tmp_path / "x.csv")
    graph = save_adjacency(directed_path(30), tmp_path / "path.csv")
    code, out, _ = _run(
        capsys, "compute", "peg", "--input", str(path), "--graph", str(graph), "-m", "4", "-L", "2"
    )
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(
        permutation_entropy(x, EntropyParams(m=4, L=2)), abs=1e-12
    )


def test_compute_peg_requires_graph(capsys, signal_file):
    path, _ = signal_file
    code, _, _ = _run(capsys, "compute", "peg", "--input", str(path))
    assert code == 1


def test_compute_peg_without_valid_vertices(capsys, tmp_path):
    path = save_signal(MultivariateSignal(np.arange(3.0)), tmp_path / "x.csv")
    graph = save_adjacency(directed_path(3), tmp_path / "path.csv")
    code, _, err = _run(
        capsys, "compute", "peg", "--input", str(path), "--graph", str(graph), "-m", "4"
    )
    assert code == 2
    assert "error[NO_VALID_PATTERNS]" in err


@pytest.mark.parametrize("extra", [["-m", "13"], ["-m", "1"], ["-m", "3", "-L", "40"]])
def test_compute_invalid_parameters(capsys, signal_file, extra):
    path, _ = signal_file
    code, out, err = _run(capsys, "compute", "mmspe", "--input", str(path), *extra)
    assert code == 2
    assert out == ""
    assert "error[INVALID_ARGUMENT]" in err


def test_compute_parse_error(capsys, write_csv):
    bad = write_csv("bad.csv", "1,2\n3\n")
    code, _, err = _run(capsys, "compute", "mmspe", "--input", str(bad))
    assert code == 3
    assert "error[PARSE_ERROR]: line 2" in err


def test_compute_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "compute", "mmspe", "--input", str(tmp_path / "nope.csv"))
    assert code == 3
    assert "error[IO_ERROR]" in err


def test_unknown_metric_is_usage_error(capsys, signal_file):
    path, _ = signal_file
    with pytest.raises(SystemExit) as exc:
        main(["compute", "wpe", "--input", str(path)])
    assert exc.value.code == 1


def test_compute_is_deterministic(capsys, signal_file):
    path, _ = signal_file
    _, first, _ = _run(capsys, "compute", "mpeg", "--input", str(path), "-m", "4")
    _, second, _ = _run(capsys, "compute", "mpeg", "--input", str(path), "-m", "4")
    assert first == second


def test_metrics_flag_dumps_counters(capsys, signal_file):
    path, _ = signal_file
    before = REGISTRY.get_sample_value("entropy_compute_total", {"metric": "mmspe"}) or 0.0
    code, _, err = _run(capsys, "--metrics", "compute", "mmspe", "--input", str(path))
    assert code == 0
    after = REGISTRY.get_sample_value("entropy_compute_total", {"metric": "mmspe"})
    assert after == before + 1
    assert f'entropy_compute_total{{metric="mmspe"}} {after}' in err
    assert REGISTRY.get_sample_value("entropy_compute_seconds_count", {"metric": "mmspe"}) >= 1


def test_gen_henon_then_compute(capsys, tmp_path):
    out_csv = tmp_path / "henon.csv"
    code, _, _ = _run(capsys, "gen", "henon", "--a", "1.4", "-n", "100", "--output", str(out_csv))
    assert code == 0
    assert out_csv.read_text().splitlines()[0] == "x,y"
    code, out, _ = _run(capsys, "compute", "mpeg", "--input", str(out_csv), "-m", "3")
    assert code == 0
    expected = mpe_graph(henon(HenonParams(a=1.4)), complete_graph(2), EntropyParams(m=3))
    assert json.loads(out)["value"] == expected


def test_gen_henon_divergence(capsys, tmp_path):
    code, _, err = _run(
        capsys, "gen", "henon", "--x0", "10", "--y0", "0", "--output", str(tmp_path / "h.csv")
    )
    assert code == 2
    assert "error[DIVERGENCE]" in err
    assert "index 5" in err


def test_gen_lorenz(capsys, tmp_path):
    out_csv = tmp_path / "lorenz.csv"
    code, _, _ = _run(
        capsys,
        "gen", "lorenz", "--rho", "28", "--steps", "400", "--transient", "100",
        "--output", str(out_csv),
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "x,y,z"
    assert len(lines) == 301


def test_gen_unwritable_output(capsys, tmp_path):
    code, _, err = _run(
        capsys, "gen", "henon", "--output", str(tmp_path / "missing" / "h.csv")
    )
    assert code == 3
    assert "error[IO_ERROR]" in err


def test_repro_henon_sweep(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _, _ = _run(
        capsys,
        "repro", "henon-sweep", "--a-min", "1.0", "--a-max", "1.4", "--step", "0.2",
        "--workers", "2", "--output", str(out_csv),
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "a,mpeg,pe_x,pe_y,mmspe,diverged"
    assert len(lines) == 4
    assert lines[1].startswith("1.000000,")


def test_repro_henon_orbit(capsys, tmp_path):
    out_csv = tmp_path / "orbit.csv"
    code, _, _ = _run(
        capsys,
        "repro", "henon-orbit", "--a-min", "1.2", "--a-max", "1.4", "--step", "0.1",
        "--keep", "10", "--output", str(out_csv),
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "a,x"
    assert len(lines) == 31


def test_repro_lorenz_table(capsys, tmp_path):
    out_csv = tmp_path / "lorenz.csv"
    code, _, _ = _run(
        capsys,
        "repro", "lorenz-table", "--rhos", "0.8", "--ms", "3", "4",
        "--steps", "800", "--transient", "300", "--output", str(out_csv),
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "rho,m3,m4,frozen_steps"
    assert len(lines) == 2
    values = [float(v) for v in lines[1].split(",")[1:3]]
    assert all(0.0 <= v <= 1.0 for v in values)


def test_gen_graph_matches_default_interaction(capsys, tmp_path, signal_file):
    path, _ = signal_file
    k2 = tmp_path / "k2.csv"
    code, _, _ = _run(capsys, "gen", "graph", "--kind", "complete", "-p", "2", "--output", str(k2))
    assert code == 0
    assert k2.read_text().splitlines() == ["0.0,1.0", "1.0,0.0"]
    _, explicit, _ = _run(capsys, "compute", "mpeg", "--input", str(path), "--graph", str(k2))
    _, default, _ = _run(capsys, "compute", "mpeg", "--input", str(path))
    assert json.loads(explicit)["value"] == json.loads(default)["value"]
