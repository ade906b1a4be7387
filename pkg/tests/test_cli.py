import json

import numpy as np
import pytest

from phaseiso import (
    LinearIsometry,
    PerturbedLinear,
    PhaseIsometry,
    SamplePlan,
    Scaled,
    SeededSign,
    SpaceSpec,
    map_to_json,
    plan_to_json,
    random_orthogonal,
    sample,
    tabulate,
)
from phaseiso.cli import main

R3 = SpaceSpec("real", 3)


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=1))
    return str(path)


@pytest.fixture
def linear_fixture(tmp_path):
    m = LinearIsometry(R3, R3, random_orthogonal(3, 1))
    return (
        write_json(tmp_path / "map.json", map_to_json(m)),
        write_json(tmp_path / "plan.json", plan_to_json(SamplePlan(40, seed=2))),
    )


class TestCheck:
    def test_exit_zero_on_exact_isometry(self, linear_fixture, capsys):
        map_file, plan_file = linear_fixture
        code = main(["check", "--map", map_file, "--plan", plan_file])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["all_pass"] is True
        assert out["schema_version"] == "1"

    def test_exit_one_on_violator(self, tmp_path, capsys):
        m = Scaled(LinearIsometry(R3, R3, random_orthogonal(3, 3)), 1.1)
        map_file = write_json(tmp_path / "map.json", map_to_json(m))
        plan_file = write_json(tmp_path / "plan.json", plan_to_json(SamplePlan(30, seed=4)))
        code = main(["check", "--map", map_file, "--plan", plan_file])
        out = json.loads(capsys.readouterr().out)
        assert code == 1
        assert out["all_pass"] is False

    def test_table_and_json_agree(self, linear_fixture, capsys):
        map_file, plan_file = linear_fixture
        main(["--output", "json", "check", "--map", map_file, "--plan", plan_file])
        doc = json.loads(capsys.readouterr().out)
        main(["--output", "table", "check", "--map", map_file, "--plan", plan_file])
        table = capsys.readouterr().out
        rows = [ln.split() for ln in table.splitlines() if ln and not ln.startswith(("condition", "-", "verdict"))]
        table_verdicts = {r[0]: r[-1] == "yes" for r in rows}
        json_verdicts = {r["condition"]: r["pass"] for r in doc["reports"]}
        assert table_verdicts == json_verdicts

    def test_exit_two_on_malformed_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"variant": "linear_isometry",\n  broken\n}')
        code = main(["check", "--map", str(bad), "--plan", str(bad)])
        err = capsys.readouterr().err
        assert code == 2
        assert "line" in err

    def test_exit_two_on_schema_violation(self, tmp_path, capsys):
        map_file = write_json(tmp_path / "map.json", {"variant": "warp_drive"})
        plan_file = write_json(tmp_path / "plan.json", plan_to_json(SamplePlan(5)))
        code = main(["check", "--map", map_file, "--plan", plan_file])
        assert code == 2
        assert "input error" in capsys.readouterr().err

    def test_missing_plan_for_evaluable_map(self, tmp_path, capsys):
        m = LinearIsometry(R3, R3, np.eye(3))
        map_file = write_json(tmp_path / "map.json", map_to_json(m))
        code = main(["check", "--map", map_file])
        assert code == 2

    def test_tabulated_map_without_plan(self, tmp_path, capsys):
        m = LinearIsometry(R3, R3, np.eye(3))
        tab = tabulate(m, np.vstack([sample(SamplePlan(10, seed=5), R3), np.zeros((1, 3))]))
        map_file = write_json(tmp_path / "map.json", map_to_json(tab))
        code = main(["check", "--map", map_file])
        assert code == 0

    def test_seed_override_changes_samples(self, linear_fixture, capsys):
        map_file, plan_file = linear_fixture
        main(["--seed", "11", "check", "--map", map_file, "--plan", plan_file])
        first = capsys.readouterr().out
        main(["--seed", "11", "check", "--map", map_file, "--plan", plan_file])
        assert capsys.readouterr().out == first

    def test_env_tolerance_override(self, linear_fixture, capsys, monkeypatch):
        map_file, plan_file = linear_fixture
        monkeypatch.setenv("PHASEISO_TOL", "1e-20")
        code = main(["check", "--map", map_file, "--plan", plan_file])
        doc = json.loads(capsys.readouterr().out)
        assert doc["reports"][0]["tol"] == 1e-20
        assert code == 1


class TestRecover:
    def test_certified_recovery_exits_zero(self, tmp_path, capsys):
        m = PhaseIsometry(R3, R3, random_orthogonal(3, 6), SeededSign(7))
        tab = tabulate(m, sample(SamplePlan(50, seed=8), R3))
        map_file = write_json(tmp_path / "tab.json", map_to_json(tab))
        code = main(["recover", "--map", map_file])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["certified"] is True
        assert np.asarray(doc["matrix"]).shape == (3, 3)

    def test_perturbed_fixture_exits_one(self, tmp_path, capsys):
        m = PerturbedLinear(R3, R3, random_orthogonal(3, 9), 0.1, seed=9)
        tab = tabulate(m, sample(SamplePlan(40, seed=10), R3))
        map_file = write_json(tmp_path / "tab.json", map_to_json(tab))
        code = main(["recover", "--map", map_file])
        doc = json.loads(capsys.readouterr().out)
        assert code == 1
        assert doc["certified"] is False
        assert doc["error"] in ("NotPhaseEquivalent", "MagnitudeMismatch")

    def test_evaluable_map_with_plan(self, tmp_path, capsys):
        m = LinearIsometry(R3, R3, random_orthogonal(3, 11))
        map_file = write_json(tmp_path / "map.json", map_to_json(m))
        plan_file = write_json(tmp_path / "plan.json", plan_to_json(SamplePlan(30, seed=12)))
        code = main(["recover", "--map", map_file, "--plan", plan_file])
        assert code == 0

    def test_evaluable_map_without_plan_is_usage_error(self, tmp_path, capsys):
        m = LinearIsometry(R3, R3, np.eye(3))
        map_file = write_json(tmp_path / "map.json", map_to_json(m))
        assert main(["recover", "--map", map_file]) == 2


class TestDemoRatz:
    def test_json_profile(self, capsys):
        code = main(["demo-ratz"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["expected_profile"] is True
        assert doc["witness"]["residual"] == pytest.approx(2.0, abs=1e-12)
        assert doc["recovery"]["certified"] is True
        by_cond = {r["condition"]: r["pass"] for r in doc["battery"]["reports"]}
        assert by_cond["ADDITIVE"] and by_cond["REAL_HOMOGENEOUS"] and by_cond["T2_IV"]
        assert not by_cond["COMPLEX_LINEAR"]

    def test_table_output(self, capsys):
        code = main(["--output", "table", "demo-ratz"])
        out = capsys.readouterr().out
        assert code == 0
        assert "complex homogeneity witness" in out
        assert "2.000000000000" in out


class TestExploreCommand:
    def test_p1_config_roundtrip(self, tmp_path, capsys):
        cfg = {"problem": "p1", "dim": 2, "p": 1.0, "trials": 2, "seed": 3, "pairs": 80}
        cfg_file = write_json(tmp_path / "cfg.json", cfg)
        code = main(["explore", "--config", cfg_file])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["verdict"] == "solutions-found"
        names = {c["name"] for c in doc["candidates"]}
        assert "rotation45_constant" in names

    def test_bad_config_exits_two(self, tmp_path, capsys):
        cfg_file = write_json(tmp_path / "cfg.json", {"problem": "p1", "dim": 2})
        assert main(["explore", "--config", cfg_file]) == 2
