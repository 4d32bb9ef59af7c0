import os

import pytest

from subdfo.cli import _tolerance_list, cli
from subdfo.outputs import parse_profile, parse_records


def test_run_smoke(tmp_path, capsys):
    status = cli(
        [
            "--quiet",
            "run",
            "--problem",
            "arwhead",
            "--n",
            "100",
            "--subspace",
            "lmqn",
            "--truncate-digits",
            "3",
            "--out",
            str(tmp_path),
        ]
    )
    out = capsys.readouterr().out
    assert status == 0
    assert "f0: 2.970000e+02" in out
    assert "f_fin:" in out
    assert "NF:" in out
    (record,) = parse_records(
        (tmp_path / "runs.csv").read_text(), (tmp_path / "traces.csv").read_text()
    )
    assert record.problem_id == "arwhead"
    assert record.solver_id == "lmqn/nelder-mead"
    assert record.nf <= 500 * 101


def test_run_full_space_baseline(tmp_path, capsys):
    status = cli(
        ["--quiet", "run", "--problem", "sphere", "--n", "5", "--algorithm", "full-space",
         "--max-evals", "600", "--out", str(tmp_path)]
    )
    assert status == 0
    (record,) = parse_records(
        (tmp_path / "runs.csv").read_text(), (tmp_path / "traces.csv").read_text()
    )
    assert record.solver_id == "full-space/nelder-mead"
    assert record.best_value < record.f0


def test_run_with_more_digits_than_a_float_holds(tmp_path, capsys):
    status = cli(
        ["--quiet", "run", "--problem", "arwhead", "--n", "10", "--truncate-digits", "29",
         "--max-evals", "200", "--out", str(tmp_path)]
    )
    assert status == 0
    assert "f0: 2.700000e+01" in capsys.readouterr().out


def test_run_uses_environment_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SUBDFO_OUTPUT_DIR", str(tmp_path / "env"))
    status = cli(
        ["--quiet", "run", "--problem", "sphere", "--n", "3", "--max-evals", "40"]
    )
    assert status == 0
    assert (tmp_path / "env" / "runs.csv").exists()


def test_problems_lists_catalog(capsys):
    assert cli(["problems"]) == 0
    names = capsys.readouterr().out.split()
    assert len(names) >= 12
    for name in ("arwhead", "chrosen", "liarwhd", "woods"):
        assert name in names


def test_problems_describe(capsys):
    assert cli(["problems", "--describe"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("sphere: ") for line in lines)


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--problem", "sphere"],
        ["run", "--problem", "sphere", "--n", "3", "--subspace", "bfgs"],
        ["run", "--problem", "sphere", "--n", "3", "--no-such-flag"],
        ["bench", "--manifest", "m.yml", "--tol", "2.0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli(argv) != 0
    assert capsys.readouterr().err


def test_unknown_problem(tmp_path, capsys):
    status = cli(["run", "--problem", "nosuch", "--n", "3", "--out", str(tmp_path)])
    assert status == 2
    assert "nosuch" in capsys.readouterr().err


def test_invalid_option_value(tmp_path, capsys):
    status = cli(
        ["run", "--problem", "sphere", "--n", "3", "--eta", "-1", "--out", str(tmp_path)]
    )
    assert status == 2
    assert "eta" in capsys.readouterr().err


def test_tolerance_list():
    assert _tolerance_list("1e-1,1e-3") == [0.1, 0.001]
    assert _tolerance_list("0.5") == [0.5]


def test_bench_emits_two_profile_pairs(tmp_path, manifest_path, capsys):
    out = tmp_path / "results"
    status = cli(
        ["--quiet", "bench", "--manifest", manifest_path, "--tol", "1e-1,1e-3", "--out", str(out)]
    )
    assert status == 0
    produced = sorted(os.listdir(out))
    assert produced == [
        "profiles_tol1e-01.csv",
        "profiles_tol1e-01.svg",
        "profiles_tol1e-03.csv",
        "profiles_tol1e-03.svg",
        "runs.csv",
        "traces.csv",
    ]
    records = parse_records((out / "runs.csv").read_text(), (out / "traces.csv").read_text())
    assert len(records) == 8
    curves = parse_profile((out / "profiles_tol1e-01.csv").read_text())
    assert [c.solver_id for c in curves] == ["cg", "lmqn", "lmqn-qm", "full-space"]
    svg = (out / "profiles_tol1e-03.svg").read_text()
    assert svg.count("<polyline") == 4


def test_bad_manifest_path(tmp_path, capsys):
    status = cli(["bench", "--manifest", str(tmp_path / "absent.yml"), "--out", str(tmp_path)])
    assert status == 2
    assert "absent.yml" in capsys.readouterr().err


def test_seeded_runs_are_identical(tmp_path, capsys):
    traces = []
    for attempt in ("first", "second"):
        out = tmp_path / attempt
        status = cli(
            [
                "--quiet",
                "run",
                "--problem",
                "chrosen",
                "--n",
                "50",
                "--seed",
                "7",
                "--max-evals",
                "3000",
                "--out",
                str(out),
            ]
        )
        assert status == 0
        traces.append((out / "traces.csv").read_bytes())
    assert traces[0] == traces[1]


def test_seeded_quadratic_model_runs_are_identical(tmp_path, capsys):
    traces = []
    for attempt in ("first", "second"):
        out = tmp_path / attempt
        cli(
            [
                "--quiet",
                "run",
                "--problem",
                "rosenbrock",
                "--n",
                "10",
                "--inner",
                "quadratic-model",
                "--seed",
                "7",
                "--max-evals",
                "800",
                "--out",
                str(out),
            ]
        )
        traces.append((out / "traces.csv").read_bytes())
    assert traces[0] == traces[1]
