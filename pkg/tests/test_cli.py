import pytest

from islopt.cli import main

CONFIG = "problem = sphere\noptimizer = random\nmax_step = 100\nnum_seeds = 1\nproblem_dim = 3\n"


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "exp.txt"
    path.write_text(CONFIG)
    return path


def test_list_problems(capsys):
    assert main(["list-problems"]) == 0
    names = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert names == ["cartpole", "pendulum", "pickplace", "rastrigin", "reacher", "rosenbrock", "sphere"]


def test_validate_prints_resolved_config(config, capsys):
    assert main(["validate", str(config)]) == 0
    out = capsys.readouterr().out
    assert "pop_num = 10" in out and "optimizer = random" in out


def test_validate_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(CONFIG + "alpha_maxx = 1\n")
    assert main(["validate", str(bad)]) == 1
    assert "alpha_maxx" in capsys.readouterr().err


def test_run_and_replay(config, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(config), "--out", str(out), "--seed", "4"]) == 0
    assert (out / "run_seed4.csv").exists()
    assert main(["replay", str(out / "best_seed4.params"), "sphere", "--dim", "3", "--episodes", "2"]) == 0
    assert "mean:" in capsys.readouterr().out
    assert main(["replay", str(out / "best_seed4.params"), "sphere", "--config", str(config)]) == 0


def test_replay_errors(config, tmp_path):
    out = tmp_path / "out"
    main(["run", str(config), "--out", str(out)])
    params = str(out / "best_seed0.params")
    assert main(["replay", params, "sphere"]) == 1  # stored dim 3, default 10
    assert main(["replay", params, "nowhere"]) == 1
    assert main(["replay", str(tmp_path / "missing.params"), "sphere"]) == 2


def test_run_failure_exit_code(config, tmp_path, monkeypatch):
    import islopt.experiment as ex

    def boom(*args):
        raise RuntimeError("boom")

    monkeypatch.setitem(ex._RUNNERS, "random", boom)
    assert main(["run", str(config), "--out", str(tmp_path / "o")]) == 2


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
