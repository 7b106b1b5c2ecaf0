import json

import numpy as np
import pytest

from taskgrowth.config import (
    BASELINE,
    FEATURE_NAMES,
    RANGES,
    ModelConfig,
    apply_scenario,
    config_from_dict,
    config_to_dict,
    load_config,
)
from taskgrowth.errors import ConfigError, ModelDomainError


def test_defaults_match_baseline_table():
    cfg = config_from_dict({})
    assert cfg.growth.alpha == BASELINE["alpha"]
    assert cfg.growth.beta == BASELINE["beta"]
    assert cfg.friction.gamma == BASELINE["gamma"]
    assert cfg.sigma == BASELINE["sigma"]
    assert cfg.endow.S_R == BASELINE["S_R"]
    assert cfg.endow.K / cfg.endow.L == pytest.approx(3.0)


def test_feature_names_order_stable():
    assert FEATURE_NAMES == list(RANGES)
    assert len(FEATURE_NAMES) == 14
    assert "K_over_L" in FEATURE_NAMES


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"alpah": 0.4})


def test_non_numeric_value_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"alpha": "high"})


def test_sigma_one_rejected():
    with pytest.raises(ModelDomainError):
        config_from_dict({"sigma": 1.0})


def test_parameter_range_validation():
    with pytest.raises(ModelDomainError):
        config_from_dict({"alpha": 0.0})
    with pytest.raises(ModelDomainError):
        config_from_dict({"theta": 0.0})
    with pytest.raises(ModelDomainError):
        config_from_dict({"kappa": -0.1})


def test_explicit_K_overrides_ratio():
    cfg = config_from_dict({"K": 2.0, "K_over_L": 5.0})
    assert cfg.endow.K == 2.0


def test_profile_override():
    cfg = config_from_dict({"a_L": {"kind": "power", "scale": 1.0, "shape": 2.0, "offset": 0.1}})
    assert cfg.a_L.kind == "power"
    with pytest.raises(ConfigError):
        config_from_dict({"a_L": {"kind": "power", "slope": 1.0}})
    with pytest.raises(ConfigError):
        config_from_dict({"a_L": "power"})


def test_load_config_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{nope")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_round_trip_via_dict(tmp_path):
    cfg = config_from_dict({"alpha": 0.55, "rho": 0.2, "A_tilde": 1.5})
    doc = config_to_dict(cfg)
    p = tmp_path / "c.json"
    # K_over_L is redundant once K is resolved
    doc.pop("K_over_L")
    p.write_text(json.dumps(doc))
    back = load_config(p)
    assert back == cfg


def test_scenario_presets():
    cfg = config_from_dict({})
    s0 = apply_scenario(cfg, "0")
    assert (s0.growth.zeta, s0.growth.lam, s0.growth.chi, s0.growth.kappa) == (0, 0, 0, 0)
    assert s0.friction.gamma == 0.0
    s1 = apply_scenario(cfg, "knowledge")
    assert s1.growth.zeta > 0 and s1.growth.lam == 0 and s1.friction.gamma == 0
    s2 = apply_scenario(cfg, "adaptive")
    assert s2.growth.lam > 0 and s2.friction.gamma == 0
    assert apply_scenario(cfg, "full") == cfg
    with pytest.raises(ConfigError):
        apply_scenario(cfg, "turbo")


def test_n_steps():
    cfg = config_from_dict({"dt": 0.1, "horizon": 50.0})
    assert cfg.n_steps == 500
