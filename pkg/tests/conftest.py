from pathlib import Path

import numpy as np
import pytest

from photonwave import grid
from photonwave.fields import dynamics


@pytest.fixture()
def box8():
    return grid.cubic_box(2 * np.pi, 8)


@pytest.fixture()
def box16():
    return grid.cubic_box(2 * np.pi, 16)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


@pytest.fixture()
def real_state(box8):
    return dynamics.random_transverse_field(box8, seed=7, real=True)


@pytest.fixture()
def complex_state(box8):
    return dynamics.random_transverse_field(box8, seed=11, real=False)


@pytest.fixture()
def run_config_file(tmp_path):
    def _write(body: str = "") -> Path:
        path = tmp_path / "run.toml"
        path.write_text(body)
        return path

    return _write
