import csv
import json

import pytest

from qaoa_tn import Angles, energy_expectation, random_regular
from qaoa_tn.cli import component_seed, main
from qaoa_tn.engine import NaiveBackend
from qaoa_tn.graphs import load


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def graph_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert run(capsys, "generate-graph", "--n", "8", "--seed", "3", "--out", str(path))[0] == 0
    return path


def test_generate_graph_to_stdout(capsys):
    code, out, _ = run(capsys, "generate-graph", "--n", "10", "--seed", "4")
    assert code == 0
    assert json.loads(out) == random_regular(10, 3, seed=4).to_dict()


def test_zero_angle_energy_is_half_the_edges(capsys, graph_file):
    code, out, _ = run(capsys, "energy", "--graph", str(graph_file), "--p", "1",
                       "--gammas", "0", "--betas", "0", "--backend", "naive")
    assert code == 0 and out.strip() == "6"


def test_generated_graph_round_trips_into_energy(capsys, graph_file):
    g = load(graph_file)
    by_file = run(capsys, "energy", "--graph", str(graph_file), "--gammas", "0.2", "--betas", "0.4")
    by_seed = run(capsys, "energy", "--n", "8", "--seed", "3", "--gammas", "0.2", "--betas", "0.4")
    assert by_file[1] == by_seed[1]
    direct = energy_expectation(g, Angles((0.2,), (0.4,)), NaiveBackend()).energy
    assert by_file[1].strip() == f"{direct:.12g}"


def test_energy_agrees_with_oracle(capsys, graph_file):
    flags = ["--graph", str(graph_file), "--gammas", "0.3,0.5", "--betas", "0.2,0.1"]
    tn = float(run(capsys, "energy", *flags, "--backend", "matmul", "--merged")[1])
    sv = float(run(capsys, "oracle-energy", *flags)[1])
    assert abs(tn - sv) <= 1e-8


def test_mixed_run_csv_obeys_dispatch(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "energy", "--n", "12", "--seed", "1", "--p", "3", "--backend",
                     "mixed", "--threshold", "8", "--timing-csv", str(csv_path))
    assert code == 0
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert any(int(r["width"]) > 8 for r in rows)
    for r in rows:
        assert (int(r["width"]) > 8) == (r["backend"] == "matmul")


def test_seeded_runs_are_deterministic(capsys):
    flags = ["energy", "--n", "10", "--seed", "5", "--p", "2"]
    assert run(capsys, *flags)[1] == run(capsys, *flags)[1]
    assert run(capsys, *flags)[1] != run(capsys, "energy", "--n", "10", "--seed", "6", "--p", "2")[1]


def test_angles_json_inline_and_file(capsys, graph_file, tmp_path):
    doc = json.dumps({"gammas": [0.3], "betas": [0.7]})
    (tmp_path / "a.json").write_text(doc)
    inline = run(capsys, "energy", "--graph", str(graph_file), "--angles", doc)[1]
    from_file = run(capsys, "energy", "--graph", str(graph_file), "--angles", str(tmp_path / "a.json"))[1]
    listed = run(capsys, "energy", "--graph", str(graph_file), "--gammas", "0.3", "--betas", "0.7")[1]
    assert inline == from_file == listed


def test_report_and_order_stats(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    run(capsys, "energy", "--n", "10", "--seed", "2", "--p", "2", "--backend", "mixed",
        "--threshold", "5", "--timing-csv", str(csv_path))
    code, out, _ = run(capsys, "report", str(csv_path))
    assert code == 0
    assert out.splitlines()[0] == "backend,width,count,mean_s,total_s,mean_flops"
    total = sum(int(line.split(",")[2]) for line in out.splitlines()[1:])
    code, hist, _ = run(capsys, "order-stats", "--n", "10", "--seed", "2", "--p", "2")
    assert hist.splitlines()[0] == "width,count"
    assert sum(int(line.split(",")[1]) for line in hist.splitlines()[1:]) == total


@pytest.mark.filterwarnings("ignore:no width where")
def test_calibrate_prints_threshold(capsys, tmp_path):
    code, out, _ = run(capsys, "calibrate", "--trial-width", "8", "--repeats", "3",
                       "--csv", str(tmp_path / "c.csv"))
    assert code == 0 and 1 <= int(out) <= 40
    assert (tmp_path / "c.csv").read_text().startswith("width,naive_s,matmul_s")


def test_bench_command(capsys, tmp_path):
    md = tmp_path / "b.md"
    code, out, _ = run(capsys, "bench", "--tier", "matmul,random,circuit", "--sizes", "4,8",
                       "--ks", "4", "--expression", "caedb,eab->cde", "--n", "6", "--p", "1",
                       "--backends", "naive", "--markdown", str(md))
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert {r["kind"] for r in rows} == {"matmul", "tncontract_random", "bucket_unmerged",
                                         "bucket_merged", "lightcone", "circuit"}
    assert any(r["param"] == "caedb,eab->cde" and r["ops"] == "32" for r in rows)
    assert "| matmul |" in md.read_text()


@pytest.mark.parametrize("argv,needle", [
    (["energy", "--n", "8", "--gammas", "1,2", "--betas", "1"], "betas"),
    (["energy", "--n", "8"], "angles are required"),
    (["energy", "--p", "1"], "graph is required"),
    (["energy", "--n", "7", "--p", "1"], "even"),
    (["energy", "--n", "8", "--p", "1", "--backend", "gpu"], "unknown backend"),
    (["energy", "--n", "8", "--p", "1", "--backend", "naive", "--threshold", "4"], "mixed"),
    (["energy", "--n", "8", "--p", "2", "--gammas", "0", "--betas", "0"], "--p 2"),
    (["energy", "--graph", "/nonexistent/g.json", "--p", "1"], "No such file"),
    (["bench", "--tier", "gpu"], "unknown tier"),
])
def test_errors_exit_nonzero_with_diagnostic(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert needle in err and err.startswith(f"qaoa-tn {argv[0]}: error:")


def test_parse_errors_name_the_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["energy", "--threshold", "high"])
    assert info.value.code == 2
    assert "--threshold" in capsys.readouterr().err


def test_width_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QAOA_TN_MAX_WIDTH", "3")
    code, _, err = run(capsys, "energy", "--n", "10", "--seed", "1", "--p", "2")
    assert code == 1 and "cap is 3" in err
    code, _, _ = run(capsys, "energy", "--n", "10", "--seed", "1", "--p", "2", "--max-width", "30")
    assert code == 0


def test_component_seeds_differ():
    assert component_seed(1, "angles") != component_seed(1, "bench")
    assert component_seed(1, "angles") == component_seed(1, "angles")
