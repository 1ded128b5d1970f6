import json

import pytest

from twowaygym.cli import EXIT_DISAGREEMENT, EXIT_FORMAT, EXIT_OK, main
from twowaygym.codecs import Digraph3, encode_graph, encode_quaternary


def last_json(capsys) -> dict:
    out = capsys.readouterr().out.strip().splitlines()
    return json.loads(out[-1])


def test_encode_decode(capsys):
    assert main(["encode", "--kind", "quaternary", "--text", "10"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0100"

    assert main(["encode", "--kind", "graph", "--text", "n=2\n0 1\n"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == encode_quaternary("1#10####10###")

    assert main(["encode", "--kind", "graph", "--scheme", "unary", "--text", "n=2\n0 1\n1 1\n"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "2*5"

    assert main(["decode", "--kind", "prime", "--n", "2", "--text", "0110#1101", "--format", "json"]) == EXIT_OK
    assert last_json(capsys)["decoded"] == "n=2\n0 1\n1 1\n"


def test_decode_errors(capsys):
    assert main(["decode", "--kind", "quaternary", "--text", "011"]) == EXIT_FORMAT
    assert main(["decode", "--kind", "graph", "--text", "10"]) == EXIT_FORMAT
    assert main(["decode", "--kind", "prime", "--text", "0110"]) == EXIT_FORMAT


def test_build_and_run(tmp_path, capsys):
    pth = tmp_path / "validator.json"
    assert main(["build", "--family", "validator", "--n", "2", "--out", str(pth), "--format", "json"]) == EXIT_OK
    summary = last_json(capsys)
    assert summary["kind"] == "2dfa" and summary["simple"]

    word = encode_graph(Digraph3.from_edges(2, [(0, 1)]))
    assert main(["run", "--machine", str(pth), "--word", word]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accept"
    assert main(["run", "--machine", str(pth), "--word", word + "00"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "reject"

    assert main(["measure", "--machine", str(pth), "--word", word, "--format", "json"]) == EXIT_OK
    assert last_json(capsys)["width"] == 0

    dot = tmp_path / "validator.dot"
    assert main(["export-dot", "--machine", str(pth), "--out", str(dot)]) == EXIT_OK
    assert dot.read_text().startswith("digraph")


def test_build_dtm_afa(capsys):
    assert main(["build", "--family", "dtm-afa", "--n", "2", "--format", "json"]) == EXIT_OK
    assert last_json(capsys)["kind"] == "2afa"


def test_reduce(tmp_path, capsys):
    pth = tmp_path / "solver.json"
    assert main(["build", "--family", "solver", "--n", "2", "--out", str(pth)]) == EXIT_OK
    capsys.readouterr()
    out = tmp_path / "instance.json"
    assert main(["reduce", "--machine", str(pth), "--word", "0", "--out", str(out), "--format", "json"]) == EXIT_OK
    record = last_json(capsys)
    assert record["vertices"] == json.loads(out.read_text())["n"]


def test_fuzz_and_replay(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    args = ["fuzz", "--target", "solver", "--seed", "11", "--trials", "5", "--n", "3", "--format", "json"]
    assert main(args + ["--manifest", str(manifest)]) == EXIT_OK
    outcome = last_json(capsys)
    assert outcome["trials"] == 5 and outcome["disagreements"] == 0

    assert main(["verify", "--replay", str(manifest), "--format", "json"]) == EXIT_OK
    assert last_json(capsys)["reproduced"] is True


def test_verify_disagreement(tmp_path):
    pipeline = tmp_path / "pipeline.json"
    pipeline.write_text(json.dumps({
        "name": "validator-as-solver",
        "seed": 7,
        "trials": 40,
        "stages": [
            {"stage": "random-graph", "n": 3},
            {"stage": "encode"},
            {"stage": "build-validator"},
            {"stage": "evaluate"},
            {"stage": "oracle-check"},
        ],
    }))
    cex_dir = tmp_path / "cex"
    assert main(["verify", str(pipeline), "--counterexample-dir", str(cex_dir)]) == EXIT_DISAGREEMENT
    written = list(cex_dir.glob("validator-as-solver-*.json"))
    assert len(written) == 1
    assert json.loads(written[0].read_text())["oracle"] is False


def test_verify_needs_arguments():
    assert main(["verify"]) == EXIT_FORMAT


@pytest.mark.parametrize("length, verdict", [("2*3*5", "accept"), ("3*5", "reject"), ("1", "reject")])
def test_unary_solve(capsys, length, verdict):
    assert main(["unary", "solve", "--n", "2", "--length", length]) == EXIT_OK
    assert capsys.readouterr().out.strip() == verdict


def test_unary_compress_and_rho(capsys):
    assert main(["unary", "compress", "--n", "2", "--text", "0110#1101", "--flat", "--format", "json"]) == EXIT_OK
    record = last_json(capsys)
    assert record["accepted"] is True and record["flat_states"] > 0

    assert main(["unary", "rho", "--n", "2", "--format", "json"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.strip().splitlines()]
    assert all(row["cycle"] >= 1 for row in rows)


def test_report_manifest_replays(tmp_path, capsys):
    manifest = tmp_path / "report.json"
    args = ["report", "--family", "validator", "--n-min", "2", "--n-max", "3", "--format", "json"]
    assert main(args + ["--manifest", str(manifest), "--cap-solver-max-n", "5"]) == EXIT_OK
    capsys.readouterr()
    doc = json.loads(manifest.read_text())
    assert doc["seed"] == 0
    assert doc["parameters"]["report"] == {"family": "validator", "n_min": 2, "n_max": 3}
    assert doc["parameters"]["caps"]["solver_max_n"] == 5
    assert [row["n"] for row in doc["outcome"]["rows"]] == [2, 3]

    assert main(["verify", "--replay", str(manifest), "--format", "json"]) == EXIT_OK
    assert last_json(capsys)["reproduced"] is True
