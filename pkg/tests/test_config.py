import pytest

from citegate.config import ConfigError, PipelineConfig, config_from_dict, load_config
from citegate.models import Thresholds


def test_defaults():
    cfg = PipelineConfig()
    assert cfg.thresholds == Thresholds(1.25, 7.25)
    assert cfg.cascade.min_title_similarity == cfg.similarity.min_title_similarity == 70.0
    assert cfg.cascade.crossref_confidence_gate == 75.0
    assert cfg.suspicion_similarity_gate == 70.0
    assert load_config(None) == cfg


def test_yaml_file(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("cascade:\n  enable_web_search: false\n  min_title_similarity: 65\n"
                    "thresholds: {tau_m: 2.0, tau_e: 8.0}\nworkers: 2\n"
                    "verifier: {backend: rule_based}\n")
    cfg = load_config(path)
    assert not cfg.cascade.enable_web_search
    assert cfg.similarity.min_title_similarity == 65
    assert cfg.thresholds == Thresholds(2.0, 8.0) and cfg.workers == 2


@pytest.mark.parametrize("data", [
    {"bogus": 1},
    {"cascade": {"bogus": 1}},
    {"cascade": [1, 2]},
    {"similarity": {"min_title_similarity": 60}, "cascade": {"min_title_similarity": 70}},
    {"thresholds": {"tau_m": 9, "tau_e": 2}},
    {"workers": 0},
    {"verifier": {"backend": "oracle"}},
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


@pytest.mark.parametrize("text", ["[1, 2]\n", "a: [unclosed\n"])
def test_bad_yaml(tmp_path, text):
    path = tmp_path / "c.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.yaml")


def test_overrides():
    cfg = PipelineConfig().with_overrides(no_web_search=True, no_reviewer=True, workers=8,
                                          cache_path="/tmp/c")
    assert not cfg.cascade.enable_web_search and not cfg.enable_reviewer
    assert cfg.workers == 8 and cfg.cache_path == "/tmp/c"
    assert cfg.to_dict()["thresholds"] == {"tau_m": 1.25, "tau_e": 7.25}
