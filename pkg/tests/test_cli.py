import json
from pathlib import Path

import pytest

from photonwave import export
from photonwave.cli import main as cli
from photonwave.cli.schemas import ConfigError, load_run_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_BOX = """
[box]
lengths = [6.283185307179586, 6.283185307179586, 6.283185307179586]
points = [8, 8, 8]
"""

FIVE_MODES = """
[quantize]
labels = [[[1, 0, 0], 1], [[2, 0, 0], 1], [[3, 0, 0], 1], [[0, 1, 0], 1], [[0, 2, 0], 1]]
"""


def _summary(out: Path) -> dict:
    return json.loads((out / "summary.json").read_text())


def test_full_check_passes(tmp_path):
    out = tmp_path / "check"
    code = cli.main(["check", "--config", str(CONFIGS / "check.toml"), "--out", str(out)])
    summary = _summary(out)
    failed = [check["name"] for check in summary["checks"] if not check["passed"]]
    assert code == cli.EXIT_OK, failed
    assert summary["passed"] is True
    assert summary["task"] == "check"
    assert len(summary["checks"]) >= 25
    assert "out" not in summary["parameters"]
    assert summary["parameters"]["normalization"] == "canonical"
    names = {check["name"] for check in summary["checks"]}
    assert "dynamics.conservation.energy" in names
    assert "lorentz.boost_density_order" in names
    assert "greens.far_field_doubling" in names
    assert (out / "run.log").exists()


def test_summaries_are_deterministic(tmp_path, run_config_file):
    config = run_config_file("seed = 42\n" + SMALL_BOX)
    first, second = tmp_path / "a", tmp_path / "b"
    assert cli.main(["dirac", "--config", str(config), "--out", str(first)]) == cli.EXIT_OK
    assert cli.main(["dirac", "--config", str(config), "--out", str(second)]) == cli.EXIT_OK
    assert (first / "summary.json").read_bytes() == (second / "summary.json").read_bytes()


def test_seed_override_lands_in_the_summary(tmp_path, run_config_file):
    config = run_config_file(SMALL_BOX)
    out = tmp_path / "seeded"
    assert cli.main(["dirac", "--config", str(config), "--out", str(out), "--seed", "9"]) == 0
    assert _summary(out)["parameters"]["seed"] == 9


def test_invalid_config_writes_nothing(tmp_path, run_config_file):
    config = run_config_file("[box]\nlengths = [-1.0, 1.0, 1.0]\n")
    out = tmp_path / "never"
    assert cli.main(["check", "--config", str(config), "--out", str(out)]) == cli.EXIT_CONFIG
    assert not out.exists()


def test_unknown_keys_and_missing_files_are_config_errors(tmp_path, run_config_file):
    with pytest.raises(ConfigError):
        load_run_config(run_config_file("colour = 'blue'\n"))
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.toml")
    with pytest.raises(ConfigError):
        load_run_config(run_config_file("[box\n"))


def test_oversized_box_exceeds_the_budget(tmp_path, run_config_file):
    config = run_config_file("[box]\npoints = [64, 64, 64]\n")
    out = tmp_path / "big"
    assert cli.main(["evolve", "--config", str(config), "--out", str(out)]) == cli.EXIT_BUDGET
    assert not out.exists()


def test_tiny_tolerances_fail_but_still_write_a_summary(tmp_path, run_config_file):
    config = run_config_file(SMALL_BOX)
    out = tmp_path / "strict"
    args = ["quantize", "--config", str(config), "--out", str(out), "--tol-scale", "1e-30"]
    assert cli.main(args) == cli.EXIT_TOLERANCE
    summary = _summary(out)
    assert summary["passed"] is False
    assert summary["parameters"]["tol_scale"] == 1e-30
    assert (out / "spectrum.csv").exists()


def test_evolve_writes_its_artifacts(tmp_path, run_config_file):
    config = run_config_file(
        SMALL_BOX + "\n[packet]\nn = [1, 0, 0]\nhelicity = 1\nsigma_k = 0.0\n"
    )
    out = tmp_path / "evolve"
    assert cli.main(["evolve", "--config", str(config), "--out", str(out)]) == cli.EXIT_OK
    rows = export.read_table(out / "conserved.csv")
    assert list(rows[0]) == ["t", "energy", "px", "py", "pz", "jx", "jy", "jz"]
    final = export.read_snapshot(out / "final.snap")
    assert final.box.grid_points == (8, 8, 8)
    assert final.time > 0.0


def test_propagator_writes_its_table(tmp_path, run_config_file):
    config = run_config_file("[propagator]\ndims = [4, 4, 4, 4]\n")
    out = tmp_path / "propagator"
    assert cli.main(["propagator", "--config", str(config), "--out", str(out)]) == cli.EXIT_OK
    assert len(export.read_table(out / "propagator.csv")) == 4**4


def test_run_parameters_come_from_the_run_file(tmp_path, run_config_file):
    config = run_config_file(
        'normalization = "number"\nunit_longitudinal = true\nlog_level = "debug"\n' + SMALL_BOX
    )
    out = tmp_path / "number"
    assert cli.main(["modes", "--config", str(config), "--out", str(out)]) == cli.EXIT_OK
    parameters = _summary(out)["parameters"]
    assert parameters["normalization"] == "number"
    assert parameters["unit_longitudinal"] is True
    assert parameters["log_level"] == "DEBUG"


@pytest.mark.parametrize(
    "body",
    [
        'normalization = "relativistic"\n',
        'log_level = "chatty"\n',
        "[quantize]\ncommutator_points = 32\n",
    ],
)
def test_invalid_run_parameters_are_config_errors(run_config_file, body):
    with pytest.raises(ConfigError):
        load_run_config(run_config_file(body))


@pytest.mark.parametrize(
    "task, body",
    [
        ("quantize", FIVE_MODES),
        ("propagator", "[propagator]\ndims = [40, 32, 32, 32]\n"),
    ],
)
def test_fock_and_lattice_caps_write_nothing(tmp_path, run_config_file, task, body):
    out = tmp_path / "capped"
    config = run_config_file(SMALL_BOX + body)
    assert cli.main([task, "--config", str(config), "--out", str(out)]) == cli.EXIT_BUDGET
    assert not out.exists()
