from pytest import raises

from blowup_kit.config import ConfigError, RunConfig, chosen_settings, load_config, resolve_config
from blowup_kit.series import Mode
from blowup_kit.wedge import EpsSequence


def test_defaults():
    config = resolve_config()
    assert config == RunConfig()
    assert config.mode is Mode.exact
    assert config.truncation == 8
    assert config.seed == 0


def test_load_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("mode: float\ntruncation: 12\ntau_bv: 1.0e-6\nseed: 7\n")
    config = load_config(path)
    assert config.mode is Mode.float
    assert config.truncation == 12
    assert config.tau_bv == 1e-6
    assert config.seed == 7
    assert config.grid_density == RunConfig().grid_density


def test_load_json_and_empty_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"eps_levels": 4, "eps_ratio": 0.25}')
    assert load_config(path).wedge_settings().eps == EpsSequence(1e-2, 0.25, 4)
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert load_config(empty) == RunConfig()


def test_load_failures(tmp_path):
    unknown = tmp_path / "unknown.yaml"
    unknown.write_text("truncaton: 3\n")
    with raises(ConfigError) as e:
        load_config(unknown)
    assert e.value.source == str(unknown)

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with raises(ConfigError):
        load_config(listing)

    bad_value = tmp_path / "bad.yaml"
    bad_value.write_text("truncation: 0\n")
    with raises(ConfigError) as e:
        load_config(bad_value)
    assert e.value.source == str(bad_value)

    bad_type = tmp_path / "type.yaml"
    bad_type.write_text("truncation: twelve\n")
    with raises(ConfigError):
        load_config(bad_type)

    with raises(ConfigError):
        load_config(tmp_path / "missing.yaml")


def test_value_checks():
    with raises(ConfigError):
        RunConfig(eps_ratio=1.0)
    with raises(ConfigError):
        RunConfig(eps_levels=2)
    with raises(ConfigError):
        RunConfig(tau_glue=0.0)
    with raises(ConfigError):
        RunConfig(seed=-1)


def test_precedence(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("truncation: 12\nseed: 7\n")
    config = resolve_config(path, {"truncation": 5, "seed": None, "mode": "float"})
    assert config.truncation == 5
    assert config.seed == 7
    assert config.mode is Mode.float
    assert resolve_config(None, {"mode": Mode.float}).mode is Mode.float


def test_chosen_settings(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("truncation: 8\nseed: 7\n")
    assert chosen_settings(path) == {"truncation", "seed"}
    assert chosen_settings(path, {"mode": "float", "seed": None}) == {"truncation", "seed", "mode"}
    assert chosen_settings(None, {"truncation": None}) == frozenset()
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert chosen_settings(empty) == frozenset()
    with raises(ConfigError):
        chosen_settings(tmp_path / "missing.yaml")


def test_override_failures():
    with raises(ConfigError):
        resolve_config(None, {"colour": "red"})
    with raises(ConfigError):
        resolve_config(None, {"mode": "interval"})
    with raises(ConfigError) as e:
        resolve_config(None, {"truncation": 0})
    assert e.value.source == "values"


def test_wedge_settings():
    settings = RunConfig(truncation=6, fit_degree=9, seed=3).wedge_settings()
    assert settings.truncation == 6
    assert settings.fit_degree == 9
    assert settings.seed == 3
    assert settings.eps == EpsSequence()
