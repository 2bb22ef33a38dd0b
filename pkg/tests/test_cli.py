import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from ultragraph.cli import main

GOLDEN = Path(__file__).parent / "golden"
COMPLETE = {"kind": "growing_complete", "size": {"form": "affine", "a": 1, "b": 3}}
CYCLE = {"kind": "growing_cycle", "size": {"form": "affine", "a": 1, "b": 3}}
K4 = {"kind": "constant", "graph": {"vertices": [0, 1, 2, 3], "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}}
TWO_EDGES = {"kind": "constant", "graph": {"vertices": [0, 1, 2, 3], "edges": [[0, 1], [2, 3]]}}


def run(*args, env=None):
    full_env = {k: v for k, v in os.environ.items() if k != "ULTRAGRAPH_WINDOW"}
    full_env.update(env or {})
    proc = subprocess.run([sys.executable, "-m", "ultragraph", *args], capture_output=True, text=True, env=full_env)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def config(tmp_path):
    def write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return write


class TestAnalyze:
    def test_complete_table(self, config):
        code, out, _ = run("analyze", "--config", config({"family": COMPLETE, "window": 8}))
        report = json.loads(out)
        assert code == 0 and report["preconditions_met"]
        assert [r["n"] for r in report["rows"]] == list(range(8))
        assert [r["q"] for r in report["rows"]] == [(n + 3) * (n + 2) // 2 for n in range(8)]
        assert report["summary"]["counts"]["identity_holds"]

    def test_constant_rows_identical(self, config):
        code, out, _ = run("analyze", "--config", config({"family": K4, "window": 8}))
        rows = [{k: v for k, v in r.items() if k != "n"} for r in json.loads(out)["rows"]]
        assert code == 0 and all(r == rows[0] for r in rows)
        assert rows[0] == {"p": 4, "q": 6, "r": 3, "radius": 1, "diameter": 1, "degrees": [3, 3, 3, 3], "connected": True}

    def test_unmet_precondition_exit(self, config):
        code, out, _ = run("analyze", "--config", config({"family": TWO_EDGES, "window": 8}))
        assert code == 1 and not json.loads(out)["preconditions_met"]

    def test_strict_undecided(self, config):
        path = config({"family": {"kind": "random_connected"}, "seed": 3, "window": 32})
        assert run("analyze", "--config", path)[0] == 0
        assert run("analyze", "--config", path, "--strict")[0] == 3


class TestConfigErrors:
    @pytest.mark.parametrize(
        "content",
        [
            "{not json",
            json.dumps({"window": 64}),
            json.dumps({"family": {"kind": "nope"}}),
            json.dumps({"family": COMPLETE, "window": 4}),
            json.dumps({"family": COMPLETE, "theorems": ["Fermat"]}),
            json.dumps({"family": COMPLETE, "ultrafilter": {"factorial_residues": [0, 1, 0]}}),
            json.dumps({"family": {"kind": "growing_cycle", "size": {"form": "affine", "a": 1, "b": 0}}}),
        ],
    )
    def test_exit_2(self, config, content):
        code, out, err = run("analyze", "--config", config(content))
        assert code == 2 and out == "" and "config error" in err

    def test_missing_config(self):
        assert run("transfer")[0] == 2

    def test_missing_file(self, tmp_path):
        assert run("transfer", "--config", str(tmp_path / "absent.json"))[0] == 2


class TestWindow:
    def test_env_overrides_default(self, config):
        path = config({"family": CYCLE})
        _, out, _ = run("analyze", "--config", path, env={"ULTRAGRAPH_WINDOW": "16"})
        assert json.loads(out)["window"] == 16 and len(json.loads(out)["rows"]) == 16
        _, out, _ = run("analyze", "--config", path)
        assert json.loads(out)["window"] == 64

    def test_flag_wins(self, config):
        path = config({"family": CYCLE, "window": 20})
        _, out, _ = run("analyze", "--config", path, "--window", "12", env={"ULTRAGRAPH_WINDOW": "16"})
        assert json.loads(out)["window"] == 12

    def test_bad_env(self, config):
        assert run("analyze", "--config", config({"family": CYCLE}), env={"ULTRAGRAPH_WINDOW": "x"})[0] == 2


class TestTransfer:
    def test_cycle_suite(self, config):
        code, out, _ = run("transfer", "--config", config({"family": CYCLE, "window": 16}))
        got = {r["theorem"]: r["decision"] for r in json.loads(out)["reports"]}
        assert code == 0
        assert got["CyclomaticIdentity"] == got["EulerEvenDegree"] == "in"
        assert got["DiracCriterion"] == got["OreCriterion"] == got["PosaCriterion"] == "out"

    def test_euler_under_two_points(self, config):
        path = config({"family": COMPLETE, "window": 16})
        one = config({"integer": 1}, "point.json")
        _, zero_out, _ = run("transfer", "--config", path, "--theorem", "EulerEvenDegree")
        _, one_out, _ = run("transfer", "--config", path, "--theorem", "EulerEvenDegree", "--point", one)
        assert json.loads(zero_out)["reports"][0]["decision"] == "in"
        assert json.loads(one_out)["reports"][0]["decision"] == "out"

    def test_empty_theorem_list(self, config):
        code, out, _ = run("transfer", "--config", config({"family": COMPLETE, "window": 8}), "--theorem", "")
        assert code == 0 and json.loads(out)["reports"] == []

    def test_precondition_failure_is_reported(self, config):
        code, out, _ = run("transfer", "--config", config({"family": TWO_EDGES, "window": 8}), "--theorem", "EdgeBounds")
        assert code == 1 and json.loads(out)["reports"][0]["error"] == "precondition_failed"

    def test_strict_transfer(self, config):
        path = config({"family": {"kind": "random_connected"}, "seed": 3, "window": 32})
        assert run("transfer", "--config", path, "--theorem", "OreCriterion", "--strict")[0] == 3
        assert run("transfer", "--config", path, "--theorem", "OreCriterion")[0] == 0


def test_example21():
    code, out, _ = run("example21")
    report = json.loads(out)
    assert code == 0 and len(report["cases"]) == 4
    for case in report["cases"]:
        assert case["edge_k_k1"] and not case["edge_k_km"] and case["pairwise_distinct"]
    assert report["self_check"] == {"equal": True, "edge_attempted": False}


def test_byte_identical_reports(config, tmp_path):
    path = config({"family": {"kind": "random_connected"}, "seed": 5, "window": 16})
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run("transfer", "--config", path, "--out", str(first))
    run("transfer", "--config", path, "--out", str(second))
    assert first.read_bytes() == second.read_bytes() and first.stat().st_size > 0
    _, stdout, _ = run("transfer", "--config", path)
    assert stdout.encode() == first.read_bytes()


@pytest.mark.parametrize(
    "args, golden",
    [
        (["example21"], "example21.json"),
        (["transfer", "--config", str(GOLDEN / "cycle_transfer_config.json")], "cycle_transfer.json"),
    ],
)
def test_golden(args, golden):
    code, out, _ = run(*args)
    assert code == 0 and out == (GOLDEN / golden).read_text()


def test_main_in_process(config, capsys):
    assert main(["transfer", "--config", config({"family": CYCLE, "window": 8}), "--theorem", "EdgeBounds"]) == 0
    assert json.loads(capsys.readouterr().out)["reports"][0]["decision"] == "in"
