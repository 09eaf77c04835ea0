import pytest

from wordbox.config import ABLATIONS, ConfigError, config_from_dict, load_config


def test_defaults_load():
    cfg = load_config()
    assert cfg.output.count == 100 and cfg.retry_limit == 10
    assert cfg.visibility.tolerance == 10 and cfg.visibility.threshold == 0.5
    assert cfg.text.p_length == 0.5 and cfg.text.p_char == 0.0 and cfg.text.max_length == 25


def test_yaml_overrides_and_relative_paths(tmp_path):
    (tmp_path / "words.txt").write_text("x\n", encoding="utf-8")
    path = tmp_path / "cfg.yaml"
    path.write_text("resources:\n  lexicon: words.txt\noutput:\n  count: 3\nshape:\n  font_size: [10, 12]\n",
                    encoding="utf-8")
    cfg = load_config(path)
    assert cfg.resources.lexicon == str(tmp_path / "words.txt")
    assert cfg.output.count == 3 and cfg.shape.font_size == (10, 12)
    assert cfg.shape.curve.prob == 0.3


@pytest.mark.parametrize("data", [
    {"output": {"count": 0}},
    {"retry_limit": 0},
    {"text": {"p_length": 1.5}},
    {"shape": {"curve": {"prob": -0.1}}},
    {"post": {"prob": 2}},
    {"output": {"format": "gif"}},
    {"transform": {"kinds": ["twist"]}},
    {"shape": {"font_size": [40, 20]}},
    {"bogus": 1},
    {"output": {"count": "many"}},
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


@pytest.mark.parametrize("name", sorted(ABLATIONS))
def test_every_ablation_switches_a_flag(name):
    cfg = load_config(disable=[name])
    node = cfg
    for part in ABLATIONS[name].split("."):
        node = getattr(node, part)
    assert node is False
    assert load_config() != cfg


def test_unknown_ablation():
    with pytest.raises(ConfigError):
        load_config(disable=["sparkles"])


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    bad = tmp_path / "list.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_round_trip_through_dict():
    cfg = load_config(overrides={"output.seed": 4})
    assert cfg.to_dict()["output"]["seed"] == 4
