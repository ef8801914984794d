"""End-to-end CLI runs through a subprocess."""
import json
import subprocess
import sys

import pytest

from conftest import diamond_poset
from stonetrim import FOUND


def run_cli(*argv):
    return subprocess.run([sys.executable, "-m", "stonetrim.cli", *argv],
                          capture_output=True, text=True)


class TestAnalyze:
    def test_finite_family_report(self):
        proc = run_cli("analyze", "--family", "rn(2,0)")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert set(doc) == {"poset", "horizon", "minimal", "maximal",
                            "extremal_exact", "p_delta", "p_delta_exact",
                            "acc", "omega_complete", "completion"}
        assert doc["horizon"] == 3
        assert doc["minimal"] == ["p1", "p2"]
        assert doc["maximal"] == ["p0", "p1"]
        assert doc["completion"] == {"elements": 3, "tokens": []}
        assert doc["acc"]["status"] == "holds"

    def test_subset_foundations(self):
        proc = run_cli("analyze", "--family", "dyadic", "--horizon", "9",
                       "--subset", "1/2", "3/4")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["foundations"] == [{
            "subset": ["1/2", "3/4"], "status": FOUND, "foundation": ["0"],
            "note": "the bottom element founds every subset"}]

    def test_poset_file(self, tmp_path):
        path = tmp_path / "diamond.json"
        path.write_text(json.dumps(diamond_poset().to_json()))
        proc = run_cli("analyze", str(path))
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["poset"] == "diamond"
        assert doc["minimal"] == ["a"] and doc["maximal"] == ["d"]

    def test_unreadable_input(self, tmp_path):
        proc = run_cli("analyze", str(tmp_path / "missing.json"))
        assert proc.returncode == 2
        assert "cannot load poset" in proc.stderr

    def test_unknown_family(self):
        proc = run_cli("analyze", "--family", "nope")
        assert proc.returncode == 2


class TestBuildVerify:
    def test_report_shape(self):
        proc = run_cli("build-verify", "--family", "rn(2,0)", "--depth", "5")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["level_sizes"] == [1, 3, 7, 15, 32]
        assert doc["structure"]["passed"] is True
        assert doc["axioms"]["passed"] is True

    def test_byte_identical_reruns(self):
        a = run_cli("build-verify", "--family", "rn(2,2)", "--depth", "5")
        b = run_cli("build-verify", "--family", "rn(2,2)", "--depth", "5")
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout

    def test_dot_format(self):
        proc = run_cli("build-verify", "--family", "rn(2,0)", "--depth", "3",
                       "--format", "dot")
        assert proc.returncode == 0
        assert proc.stdout.startswith("digraph skeleton {")

    def test_config_rejection(self):
        proc = run_cli("build-verify", "--family", "rn-infinity",
                       "--pb", "p0", "--depth", "4")
        assert proc.returncode == 3
        assert "bounded-not-lower" in proc.stderr
        assert "bounded-outside-delta" in proc.stderr


class TestIso:
    def test_identical_sides(self):
        proc = run_cli("iso", "--left-family", "rn(2,0)",
                       "--right-family", "rn(2,0)", "--depth", "6")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["status"] == "iso"
        assert doc["coverage"] is True
        assert doc["invariant_failures"] == []
        assert doc["witness"] is None
        assert doc["steps"] > 0

    def test_mismatch_exit_code(self):
        proc = run_cli("iso", "--left-family", "rn(2,0)",
                       "--right-family", "rn(2,0)",
                       "--left-isolated", "p1", "--depth", "6")
        assert proc.returncode == 4
        doc = json.loads(proc.stdout)
        assert doc["status"] == "mismatch"
        assert doc["witness"]["type"] == "p1"

    def test_depth_exhaustion_exit_code(self):
        proc = run_cli("iso", "--left-family", "omega-chain",
                       "--right-family", "omega-chain",
                       "--depth", "6", "--max-depth", "6")
        assert proc.returncode == 5
        doc = json.loads(proc.stdout)
        assert doc["status"] == "depth-exhausted"
        assert doc["note"] == "right side needs level 7"

    def test_setup_rejection(self):
        proc = run_cli("iso", "--left-family", "rn-infinity",
                       "--right-family", "rn-infinity", "--depth", "6")
        assert proc.returncode == 3
        assert "compared region is empty" in proc.stderr

    def test_missing_side(self):
        proc = run_cli("iso", "--right-family", "rn(2,0)")
        assert proc.returncode == 2
        assert "no left poset given" in proc.stderr

    def test_byte_identical_reruns(self):
        argv = ("iso", "--left-family", "rn(2,2)",
                "--right-family", "rn(2,2)", "--depth", "6", "--seed", "5")
        assert run_cli(*argv).stdout == run_cli(*argv).stdout


class TestClosure:
    def test_json_report(self):
        proc = run_cli("closure", "--family", "rn(2,0)")
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert set(doc) == {"family", "trace", "classification",
                            "identity_violations", "generator_check"}
        assert doc["classification"]["case"] == 1
        assert doc["classification"]["name"] == "P(2,0)"
        assert doc["identity_violations"] == []
        assert doc["generator_check"]["holds"] is True

    def test_ladder_classification(self):
        proc = run_cli("closure", "--family", "rn-infinity")
        doc = json.loads(proc.stdout)
        assert doc["classification"]["case"] == 3
        assert doc["trace"]["stabilized"] is False

    def test_text_format(self):
        proc = run_cli("closure", "--family", "rn(2,0)", "--format", "text")
        assert proc.returncode == 0
        assert "N = 2; classification P(2,0) (case 1)" in proc.stdout
        assert "generator check: holds (2 steps)" in proc.stdout

    def test_dot_format(self):
        proc = run_cli("closure", "--family", "rn-infinity",
                       "--format", "dot")
        assert proc.returncode == 0
        assert proc.stdout.startswith("digraph ladder {")

    def test_non_symbolic_family(self):
        proc = run_cli("closure", "--family", "omega-chain")
        assert proc.returncode == 3
        assert "symbolic spaces need" in proc.stderr

    def test_unknown_family(self):
        proc = run_cli("closure", "--family", "nope")
        assert proc.returncode == 2
