import json
import math

import pytest

from oracles import git_blob_sha1
from qpnoise import constants as const
from qpnoise.config import (
    PRESETS,
    ConfigError,
    build_material,
    canonical_json,
    config_hash,
    grid_values,
    load_config,
    parse_config,
)


def test_fig3_preset_defaults():
    cfg = load_config(preset="fig3")
    mat = build_material(cfg)
    assert mat.temperature == pytest.approx(0.030)
    assert mat.penetration_depth == pytest.approx(50e-9)
    assert mat.gap == pytest.approx(const.h * 44e9)
    dev = cfg.block("device")
    assert dev["characteristic_impedance_ohm"] == 50.0
    assert cfg.block("tls")["p_surface"] == 23e-4
    assert cfg.block("tls")["p_bulk"] == 0.9


def test_fig2_reduced_temperature():
    mat = build_material(load_config(preset="fig2"))
    assert mat.reduced_temperature == pytest.approx(0.1, rel=1e-14)


def test_nbtin_gap_from_critical_temperature():
    mat = build_material(load_config(preset="nbtin"))
    assert mat.gap == pytest.approx(1.764 * const.k_B * 14.0, rel=1e-12)


def test_file_overrides_preset(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"preset": "fig4", "material": {"temperature_mK": 50.0}}))
    cfg = load_config(path)
    assert cfg.block("material")["temperature_mK"] == 50.0
    assert cfg.block("material")["gap_GHz"] == 44.0


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"material": {"temperature_K": 0.03}}, "material.temperature_K"),
        ({"device": {"variant": "transmon", "ej_ec": 70.0, "pad_geometric_inductance_pH": 20.0}}, "device.pad_geometric_inductance_pH"),
    ],
)
def test_unit_suffix_mismatch(raw, key):
    with pytest.raises(ConfigError, match="unit suffix mismatch") as err:
        parse_config(raw, "fig4")
    assert err.value.key == key


@pytest.mark.parametrize(
    "raw",
    [{"colour": 1}, {"material": {"colour": 1}}, {"sweep": {"grid": {"step": 1}}}],
    ids=["top", "material", "grid"],
)
def test_unknown_keys_rejected(raw):
    with pytest.raises(ConfigError, match="unknown"):
        parse_config(raw, "fig4")


def test_empty_device_block_lists_required_keys():
    with pytest.raises(ConfigError) as err:
        parse_config({"device": {}})
    assert "variant" in str(err.value) and "josephson_inductance_nH" in str(err.value)


def test_missing_required_device_key():
    raw = {"device": {"variant": "flux_qubit", "beta": 2.5}}
    with pytest.raises(ConfigError, match="missing required keys"):
        parse_config(raw)


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"material": {"temperature_mK": -5.0}}, "material.temperature_mK"),
        ({"material": {"gap_GHz": 0.0}}, "material.gap_GHz"),
        ({"distribution": {"x_qp_res": []}}, "distribution.x_qp_res"),
        ({"distribution": {"x_qp_res": [-1e-6]}}, "distribution.x_qp_res"),
        ({"tls": {"p_surface": 2.0}}, "tls.p_surface"),
        ({"output": {"format": "xml"}}, "output.format"),
    ],
)
def test_constraint_violations_name_the_key(raw, key):
    with pytest.raises(ConfigError) as err:
        parse_config(raw, "fig4")
    assert err.value.key == key
    assert key in str(err.value)


@pytest.mark.parametrize(
    "grid",
    [
        {"variable": "frequency_GHz", "values": []},
        {"variable": "frequency_GHz", "values": [1.0, 3.0, 2.0]},
        {"variable": "frequency_GHz", "start": 0.0, "stop": 1.0, "num": 5, "spacing": "log"},
        {"variable": "frequency_GHz", "start": 1.0},
    ],
    ids=["empty", "non_monotone", "log_zero", "incomplete"],
)
def test_bad_grids(grid):
    with pytest.raises(ConfigError):
        parse_config({"sweep": {"quantity": "t1", "grid": grid}})


def test_grid_values():
    g = grid_values({"start": 1.0, "stop": 100.0, "num": 3, "spacing": "log"})
    assert list(g) == pytest.approx([1.0, 10.0, 100.0])


def test_unknown_preset():
    with pytest.raises(ConfigError, match="unknown preset"):
        load_config(preset="fig9")


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_echo_round_trip(preset):
    cfg = load_config(preset=preset)
    assert parse_config(json.loads(cfg.to_json())) == cfg


def test_config_hash_is_git_blob_id():
    cfg = load_config(preset="fig5")
    assert config_hash(cfg.data) == git_blob_sha1(canonical_json(cfg.data).encode())


def test_variant_switch_drops_preset_device_keys():
    raw = {"device": {"variant": "cpw", "characteristic_impedance_ohm": 50.0, "area_um2": 1.0, "refractive_index": math.sqrt(11.7)}}
    cfg = parse_config(raw, "fig4")
    assert "ej_ec" not in cfg.block("device")
