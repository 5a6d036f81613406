from importlib import reload

import pytest

import photonwave.config as cfg


@pytest.fixture()
def reload_settings(monkeypatch):
    yield lambda: reload(cfg)
    monkeypatch.delenv("PHOTONWAVE_THREADS", raising=False)
    reload(cfg)


def test_settings_respect_env(monkeypatch, reload_settings):
    monkeypatch.setenv("PHOTONWAVE_THREADS", "4")
    reload_settings()
    assert cfg.settings.threads == 4


def test_run_parameters_are_not_read_from_env(monkeypatch, reload_settings):
    monkeypatch.setenv("PHOTONWAVE_NORMALIZATION", "number")
    monkeypatch.setenv("PHOTONWAVE_UNIT_LONGITUDINAL", "yes")
    reload_settings()
    assert set(cfg.Settings.model_fields) == {"threads"}
    assert cfg.settings == cfg.Settings()


@pytest.mark.parametrize("value", ["0", "many"])
def test_invalid_overrides_fall_back_to_defaults(monkeypatch, reload_settings, value):
    monkeypatch.setenv("PHOTONWAVE_THREADS", value)
    reload_settings()
    assert cfg.settings == cfg.Settings()
