import json
import math
import subprocess
import sys

import pytest

from lfgeo.behavior import behavior_to_json, pr_box
from lfgeo.cli import run

from tests.conftest import FIXTURES


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured


def read_json(path):
    return json.loads(path.read_text())


class TestPolytopeCommands:
    def test_facets_lhv_2x2(self, tmp_path, capsys):
        out = tmp_path / "facets.json"
        code, _ = invoke(capsys, "polytope", "facets", "--kind", "lhv",
                         "--scenario", "2,2,2,2", "--out", str(out))
        assert code == 0
        assert len(read_json(out)["facets"]) == 24

    def test_vertices_3x3(self, tmp_path, capsys):
        out = tmp_path / "verts.json"
        code, _ = invoke(capsys, "polytope", "vertices",
                         "--scenario", "3,3,2,2", "--out", str(out))
        assert code == 0
        assert len(read_json(out)["vertices"]) == 64

    def test_member_pr_box_outside_lhv(self, tmp_path, capsys):
        beh = tmp_path / "pr.json"
        beh.write_text(json.dumps(behavior_to_json(pr_box())))
        out = tmp_path / "member.json"
        code, _ = invoke(capsys, "polytope", "member", "--kind", "lhv",
                         "--behavior", str(beh), "--out", str(out))
        assert code == 0
        data = read_json(out)
        assert data["inside"] is False
        assert "certificate" in data

    def test_max_chsh_over_ns(self, tmp_path, capsys):
        out = tmp_path / "max.json"
        code, _ = invoke(capsys, "polytope", "max", "--kind", "ns",
                         "--ineq", str(FIXTURES / "chsh_ineq.json"),
                         "--out", str(out))
        assert code == 0
        assert read_json(out)["value"] == {"num": 4, "den": 1}

    def test_slice_writes_csv_and_exact_json(self, tmp_path, capsys):
        out = tmp_path / "slice.csv"
        ineq = str(FIXTURES / "chsh_ineq.json")
        code, _ = invoke(capsys, "polytope", "slice", "--kinds", "lhv,ns",
                         "--f1", ineq, "--f2", str(FIXTURES / "lf33_facet.json"),
                         "--resolution", "4", "--out", str(out))
        # mixed scenarios must fail cleanly, not crash
        assert code == 1


class TestQuantumCommands:
    def test_optimize_reaches_tsirelson(self, tmp_path, capsys):
        out = tmp_path / "opt.json"
        code, _ = invoke(capsys, "quantum", "optimize",
                         "--ineq", str(FIXTURES / "chsh_ineq.json"),
                         "--steps", "50", "--seed", "7", "--out", str(out))
        assert code == 0
        data = read_json(out)
        assert data["value"] >= 2 * math.sqrt(2) - 1e-3
        assert data["seed"] == 7 and data["steps"] == 50

    def test_grid(self, tmp_path, capsys):
        out = tmp_path / "grid.json"
        code, _ = invoke(capsys, "quantum", "grid",
                         "--ineq", str(FIXTURES / "chsh_ineq.json"),
                         "--resolution", "36", "--out", str(out))
        assert code == 0
        assert read_json(out)["value"] > 2.7

    def test_grid_cap_exceeded_is_domain_error(self, tmp_path, capsys):
        out = tmp_path / "grid.json"
        code, captured = invoke(capsys, "quantum", "grid",
                                "--ineq", str(FIXTURES / "chsh_ineq.json"),
                                "--resolution", "10000", "--cap", "1000000",
                                "--out", str(out))
        assert code == 1
        assert json.loads(captured.err)["error"] == "CapExceededError"


class TestCausalCommands:
    def test_dsep_true(self, tmp_path, capsys):
        out = tmp_path / "dsep.json"
        code, _ = invoke(capsys, "causal", "dsep",
                         "--dag", str(FIXTURES / "bell_dag.json"),
                         "--A", "A", "--B", "Y", "--Z", "X,Lambda",
                         "--out", str(out))
        assert code == 0
        assert read_json(out)["d_separated"] is True

    def test_scan_bell_quantum_point(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        code, _ = invoke(capsys, "causal", "scan-bell",
                         "--behavior", str(FIXTURES / "quantum_chsh_point.json"),
                         "--out", str(out))
        assert code == 0
        assert len(out.read_text().strip().split("\n")) == 193
        summary = read_json(tmp_path / "scan.csv.summary.json")
        assert summary["dichotomy_holds"] is True
        assert summary["faithful_reproducing"] == 0


class TestPrinciplesCommands:
    def test_check_lf_inconsistent(self, tmp_path, capsys):
        out = tmp_path / "check.json"
        code, _ = invoke(capsys, "principles", "check",
                         "--position", str(FIXTURES / "qcm_position.json"),
                         "--falsified", "lf", "--out", str(out))
        assert code == 0
        data = read_json(out)
        assert data["ok"] is False
        assert all(name == "LF" for name, _ in data["violated"])

    def test_repair_six_singletons(self, tmp_path, capsys):
        out = tmp_path / "repair.json"
        code, _ = invoke(capsys, "principles", "repair",
                         "--position", str(FIXTURES / "qcm_position.json"),
                         "--falsified", "LF", "--out", str(out))
        assert code == 0
        data = read_json(out)
        assert len(data["repairs"]) == 6
        assert all(len(r) == 1 for r in data["repairs"])
        assert data["rules"]

    def test_show(self, tmp_path, capsys):
        out = tmp_path / "graph.json"
        code, _ = invoke(capsys, "principles", "show", "--out", str(out))
        assert code == 0
        assert len(read_json(out)["principles"]) == 15


class TestManifests:
    def test_manifest_written_with_digests(self, tmp_path, capsys):
        out = tmp_path / "max.json"
        ineq = FIXTURES / "chsh_ineq.json"
        invoke(capsys, "polytope", "max", "--kind", "lhv",
               "--ineq", str(ineq), "--out", str(out))
        manifest = read_json(tmp_path / "max.json.manifest.json")
        assert manifest["command"][0] == "polytope"
        assert str(ineq) in manifest["inputs"]
        assert len(manifest["inputs"][str(ineq)]) == 64  # sha256 hex
        assert manifest["wall_time_s"] >= 0

    def test_repeat_runs_byte_identical(self, tmp_path, capsys):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            invoke(capsys, "polytope", "facets", "--kind", "ns",
                   "--scenario", "2,2,2,2", "--out", str(out))
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_optimizer_deterministic_across_runs(self, tmp_path, capsys):
        vals = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            invoke(capsys, "quantum", "optimize",
                   "--ineq", str(FIXTURES / "chsh_ineq.json"),
                   "--steps", "20", "--seed", "3", "--out", str(out))
            vals.append(out.read_bytes())
        assert vals[0] == vals[1]


class TestErrors:
    def test_bad_scenario_exit_1(self, tmp_path, capsys):
        code, captured = invoke(capsys, "polytope", "vertices",
                                "--scenario", "2,2,2", "--out",
                                str(tmp_path / "o.json"))
        assert code == 1
        assert json.loads(captured.err)["error"] == "StructuralError"

    def test_missing_input_exit_1(self, tmp_path, capsys):
        code, captured = invoke(capsys, "polytope", "member", "--kind", "lhv",
                                "--behavior", str(tmp_path / "nope.json"),
                                "--out", str(tmp_path / "o.json"))
        assert code == 1
        assert json.loads(captured.err)["error"] == "FileNotFoundError"

    def test_unknown_subcommand_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["polytope", "frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_bad_thread_env_exit_1(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("LFGEO_THREADS", "many")
        code, captured = invoke(capsys, "principles", "show",
                                "--out", str(tmp_path / "o.json"))
        assert code == 1
        assert "LFGEO_THREADS" in json.loads(captured.err)["message"]


class TestEntryPoint:
    def test_installed_script_version(self):
        proc = subprocess.run([sys.executable, "-m", "lfgeo.cli", "--version"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "0.1.0"
