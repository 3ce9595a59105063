import csv
import hashlib
import json

import pytest

from seminalrank.cli import main
from seminalrank.config import RunConfig


def rows(path):
    with open(path, encoding="utf-8") as f:
        return list(csv.reader(f, delimiter="\t"))


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert main(["synth", "--out", str(out), "--seed", "7", "--set", "synth.n_nodes=3000",
                 "--set", "synth.age_skew=60"]) == 0
    return out


def args(data, *extra):
    return ["--nodes", str(data / "nodes.tsv"), "--edges", str(data / "edges.tsv"), *extra]


@pytest.fixture
def net2_files(tmp_path):
    (tmp_path / "nodes.tsv").write_text("id\tdate\nA\t1990-01-01\nB\t1990-01-11\n")
    (tmp_path / "edges.tsv").write_text("citing_id\tcited_id\nB\tA\n")
    (tmp_path / "seminal.txt").write_text("A\n")
    return tmp_path


def test_rank_net2(net2_files):
    out = net2_files / "out"
    assert main(["rank", *args(net2_files), "--metrics", "C", "--out", str(out)]) == 0
    assert rows(out / "scores" / "C.tsv") == [["id", "score", "rank"], ["A", "1.0", "1"], ["B", "0.0", "2"]]
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "rank"
    assert man["inputs"]["nodes"]["sha256"] == digest(net2_files / "nodes.tsv")


def test_rescaled_emits_base_and_is_deterministic(data, tmp_path):
    for run in ("a", "b"):
        assert main(["rank", *args(data), "--metrics", "RP,HITS", "--out", str(tmp_path / run)]) == 0
    for name in ("P.tsv", "RP.tsv", "HITS.tsv"):
        assert digest(tmp_path / "a" / "scores" / name) == digest(tmp_path / "b" / "scores" / name)
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["iterations"]["P"] > 0


def test_evaluate_z_list_and_ager(data, tmp_path):
    out = tmp_path / "ev"
    rc = main(["evaluate", *args(data), "--seminal", str(data / "seminal.txt"),
               "--metrics", "C,RC,AgeR", "--z", "0.005,0.01,0.02", "--out", str(out)])
    assert rc == 0
    table = rows(out / "ir.csv")
    assert table[0] == ["metric", "z", "IR", "NIR", "sigma_ratio", "rel_score"]
    body = table[1:]
    assert len(body) == 9
    for m in ("C", "RC", "AgeR"):
        assert sum(r[0] == m for r in body) == 3
    for r in body:
        assert 0 <= float(r[3]) <= float(r[2]) <= 1
    for name in ("bias_hist.csv", "spearman.csv", "report.json"):
        assert (out / name).exists()
    assert any(r[0] == "AgeR" for r in rows(out / "bias_hist.csv"))
    assert not (out / "age_curves.csv").exists()


def test_evaluate_with_snapshots(data, tmp_path):
    out = tmp_path / "snap"
    rc = main(["evaluate", *args(data), "--seminal", str(data / "seminal.txt"), "--metrics", "RC,AgeR",
               "--snapshots", "--workers", "2", "--out", str(out)])
    assert rc == 0
    curves = rows(out / "age_curves.csv")
    assert curves[0] == ["metric", "dt_years", "ir", "nir", "n_seminal"]
    assert {r[0] for r in curves[1:]} == {"RC", "AgeR"}


def test_config_replay(data, tmp_path):
    first = tmp_path / "one"
    assert main(["bias", *args(data), "--metrics", "C,RC", "--out", str(first), "--seed", "3"]) == 0
    man = json.loads((first / "manifest.json").read_text())
    cfg = RunConfig.from_text(man["config"])
    cfg.out = str(tmp_path / "two")
    (tmp_path / "replay.ini").write_text(cfg.to_text())
    assert main(["bias", "--config", str(tmp_path / "replay.ini")]) == 0
    assert digest(first / "bias_hist.csv") == digest(tmp_path / "two" / "bias_hist.csv")
    assert json.loads((tmp_path / "two" / "report.json").read_text()) == json.loads((first / "report.json").read_text())


def test_similarity_and_snapshots(data, tmp_path):
    assert main(["similarity", *args(data), "--metrics", "C,P,H", "--out", str(tmp_path / "s")]) == 0
    rho = rows(tmp_path / "s" / "spearman.csv")
    assert len(rho) == 1 + 9
    assert main(["snapshots", *args(data), "--seminal", str(data / "seminal.txt"), "--out", str(tmp_path / "t")]) == 0
    stats = json.loads((tmp_path / "t" / "stats.json").read_text())
    assert stats["all"]["tau_3_years"] > 0
    assert len(rows(tmp_path / "t" / "snapshots.csv")) == 1 + 20


def test_precomputed_scores(data, tmp_path):
    assert main(["rank", *args(data), "--metrics", "C,L", "--out", str(tmp_path / "r")]) == 0
    assert main(["similarity", *args(data), "--metrics", "C,L", "--scores", str(tmp_path / "r" / "scores"),
                 "--out", str(tmp_path / "s")]) == 0


def test_synth_checksums(tmp_path):
    for run in ("a", "b"):
        assert main(["synth", "--out", str(tmp_path / run), "--seed", "7",
                     "--set", "synth.n_nodes=10000", "--set", "synth.refs_per_node=3"]) == 0
    for name in ("nodes.tsv", "edges.tsv", "seminal.txt", "quality.tsv"):
        assert digest(tmp_path / "a" / name) == digest(tmp_path / "b" / name)


def test_synth_skew_report(tmp_path):
    assert main(["synth", "--out", str(tmp_path), "--set", "synth.refs_per_node=3",
                 "--set", "synth.age_skew=120"]) == 0
    assert json.loads((tmp_path / "manifest.json").read_text())["seminal_in_group1"] >= 0.5


@pytest.mark.parametrize("argv", [
    ["synth", "--set", "synth.n_nodes=0"],
    ["rank", "--metrics", "RYCCP"],
    ["rank", "--metrics", "Q"],
    ["rank", "--nodes", "/nonexistent", "--edges", "/nonexistent"],
    ["evaluate", "--z", "1.5"],
    ["frobnicate"],
])
def test_usage_errors(argv, tmp_path):
    assert main([*argv, "--out", str(tmp_path)] if argv[0] != "frobnicate" else argv) == 1


def test_data_errors(tmp_path, net2_files):
    (tmp_path / "bad.tsv").write_text("A\t1990-02-30\n")
    assert main(["rank", "--nodes", str(tmp_path / "bad.tsv"), "--edges", str(net2_files / "edges.tsv"),
                 "--out", str(tmp_path / "o")]) == 2
    (tmp_path / "sem.txt").write_text("nobody\n")
    assert main(["evaluate", *args(net2_files), "--seminal", str(tmp_path / "sem.txt"),
                 "--out", str(tmp_path / "o")]) == 2


def test_nonconvergence_exit(net2_files, tmp_path):
    out = tmp_path / "o"
    rc = main(["rank", *args(net2_files), "--metrics", "P", "--out", str(out),
               "--set", "solver.max_iter=2", "--set", "solver.eps=1e-15"])
    assert rc == 3
    man = json.loads((out / "manifest.json").read_text())
    assert man["failed_metric"] == "P" and man["residual"] > 0
