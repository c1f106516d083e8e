import json

import pytest

from main import cli

GRID_ARG = "0.25,0.5,1,2,4"


@pytest.fixture
def generated(tmp_path, menus_file, params_file):
    def run(kind, n=0, seed=0, **params):
        out = tmp_path / f"{kind}-{n}-{seed}.csv"
        args = ["generate", "--kind", kind, "--grid", GRID_ARG, "--menus", str(menus_file),
                "--n", str(n), "--seed", str(seed), "--out", str(out)]
        if params:
            args += ["--params", str(params_file(**params))]
        assert cli(args) == 0
        return out
    return run


class TestGenerateAndCheck:
    def test_exact_boltzmann_passes(self, generated, capsys):
        path = generated("boltzmann", energies={"a": 0.0, "b": 1.0, "c": 2.0})
        assert cli(["check", "--in", str(path), "--exact"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["overall"] is True
        assert report["config"]["exact_input"] is True

    def test_squared_noise_fails(self, generated, capsys):
        noise = {"kind": "tabulated", "temperatures": [0.25, 0.5, 1.0, 2.0, 4.0],
                 "values": [0.0625, 0.25, 1.0, 4.0, 16.0]}
        path = generated("softmax", energies={"a": 0.0, "b": 1.0, "c": 2.0}, noise=noise)
        assert cli(["check", "--in", str(path), "--exact"]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["axioms"]["verdicts"]["A6"]["verdict"] == "fail"
        assert report["axioms"]["softmax_representable"] is True

    def test_sampled_counts(self, generated, tmp_path):
        path = generated("boltzmann", n=1000, seed=3, energies={"a": 0.0, "b": 1.0, "c": 2.0})
        assert path.read_text().splitlines()[0] == "temperature,menu_id,state,count"
        assert cli(["check", "--in", str(path), "--report", str(tmp_path / "r.json")]) in (0, 1)
        assert json.loads((tmp_path / "r.json").read_text())["command"] == "check"

    def test_same_input_gives_identical_reports(self, generated, tmp_path):
        path = generated("boltzmann", n=2000, seed=11, energies={"a": 0.0, "b": 1.0, "c": 2.0})
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        cli(["check", "--in", str(path), "--report", str(first)])
        cli(["check", "--in", str(path), "--report", str(second)])
        assert first.read_bytes() == second.read_bytes()

    def test_same_seed_gives_identical_files(self, tmp_path, menus_file, params_file):
        params = str(params_file(energies={"a": 0.0, "b": 1.0, "c": 2.0}))
        outs = [tmp_path / "one.csv", tmp_path / "two.csv"]
        for out in outs:
            cli(["generate", "--kind", "boltzmann", "--grid", GRID_ARG, "--menus", str(menus_file),
                 "--n", "100", "--seed", "5", "--params", params, "--out", str(out)])
        assert outs[0].read_bytes() == outs[1].read_bytes()


class TestRecoverAndReport:
    def test_recover_then_render(self, generated, tmp_path, capsys):
        path = generated("boltzmann", energies={"a": 0.0, "b": 1.0, "c": 2.0})
        report = tmp_path / "recovery.json"
        assert cli(["recover", "--in", str(path), "--exact", "--report", str(report)]) == 0
        data = json.loads(report.read_text())
        assert data["recovery"]["pivot"]["c"] == "a"
        assert data["recovery"]["energy"]["energies"]["c"] == pytest.approx(8.0)

        assert cli(["report", "--in", str(report)]) == 0
        out = capsys.readouterr().out
        assert "## Recovery" in out
        assert "c̄ = a" in out

    def test_uniform_recovery(self, generated, capsys):
        path = generated("uniform")
        assert cli(["recover", "--in", str(path), "--exact", "--format", "markdown"]) == 0
        assert "E is constant; κ is undetermined." in capsys.readouterr().out


class TestConvexity:
    def test_positive_definite_quadratic(self, tmp_path, capsys):
        model = tmp_path / "model.json"
        model.write_text(json.dumps({"matrix": [[2.0, 0.5], [0.5, 1.0]], "low": [-1.0, -1.0],
                                     "high": [1.0, 1.0], "trials": 200, "menu_trials": 10}))
        assert cli(["convexity", "--model", str(model)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["convexity"]["convex"] is True
        assert report["convexity"]["agrees_with_oracle"] is True

    def test_bad_model(self, tmp_path):
        model = tmp_path / "model.json"
        model.write_text(json.dumps({"matrix": [[1.0, 0.0]], "low": [0.0], "high": [1.0]}))
        assert cli(["convexity", "--model", str(model)]) == 2


class TestErrors:
    def test_missing_input(self, tmp_path):
        assert cli(["check", "--in", str(tmp_path / "absent.csv")]) == 2

    def test_bad_row(self, tmp_path, caplog):
        path = tmp_path / "bad.csv"
        path.write_text("temperature,menu_id,state,count\n1.0,M,a,3\n1.0,M,b,-1\n")
        assert cli(["check", "--in", str(path)]) == 2
        assert "line 3" in caplog.text

    def test_unknown_subcommand(self):
        assert cli(["explode"]) == 2

    def test_help(self):
        assert cli(["--help"]) == 0

    def test_kind_needs_parameters(self, tmp_path, menus_file):
        out = tmp_path / "out.csv"
        args = ["generate", "--kind", "boltzmann", "--grid", GRID_ARG, "--menus", str(menus_file), "--out", str(out)]
        assert cli(args) == 2
        assert not out.exists()

    def test_binary_only_kind_with_full_menu(self, tmp_path, menus_file, params_file):
        out = tmp_path / "probit.csv"
        args = ["generate", "--kind", "probit-binary", "--grid", GRID_ARG, "--menus", str(menus_file),
                "--params", str(params_file(energies={"a": 0.0, "b": 1.0, "c": 2.0})), "--out", str(out)]
        assert cli(args) == 2
