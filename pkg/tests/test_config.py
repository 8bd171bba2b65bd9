import json
from pathlib import Path

import pytest

from chiralnet.config import ConfigError, FockConfig, RunConfig, from_dict, load_config, parse_range
from chiralnet.inner import parse_phi, is_exponential
from chiralnet.report import CheckReport, all_passed

ROOT = Path(__file__).resolve().parents[1]


def test_defaults_validate():
    cfg = RunConfig().validate()
    assert cfg.character.order == 40 and cfg.fock.emax == 12
    assert all(is_exponential(parse_phi(s)) for s in cfg.scatter.elastic)
    assert not any(is_exponential(parse_phi(s)) for s in cfg.scatter.inelastic)


def test_shipped_config_matches_defaults():
    assert load_config(ROOT / "configs" / "default.toml") == RunConfig()


def test_partial_sections_keep_defaults():
    cfg = from_dict({"fock": {"emax": 14}})
    assert cfg.fock.emax == 14 and cfg.character == RunConfig().character


@pytest.mark.parametrize(
    "data",
    [{}, {"bogus": {}}, {"fock": {"nope": 1}}, {"fock": 3}, {"fock": {"emax": 10}}, {"scatter": {"tol": 0}}],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        from_dict(data)


def test_required_emax_default_is_twelve():
    assert FockConfig().required_emax() == 12


@pytest.mark.parametrize("text, want", [("0.1:10:50", (0.1, 10.0, 50)), ("1:1:1", (1.0, 1.0, 1))])
def test_parse_range(text, want):
    assert parse_range(text) == want


@pytest.mark.parametrize("text", ["1:2", "x:1:2", "0:1:2", "2:1:3", "1:2:0"])
def test_parse_range_rejects(text):
    with pytest.raises(ConfigError):
        parse_range(text)


def test_report_serialisation():
    r = CheckReport("x", True, 1e-9, 1e-6, "anchor text", {"k": 1})
    d = r.to_dict()
    assert d["pass"] is True and json.loads(json.dumps(d)) == d
    assert r.line().startswith("[PASS] x")
    bad = CheckReport("y", False, "why", 0.0)
    assert not bad and not all_passed([r, bad]) and all_passed([r])
