"""Run configuration: JSON with unit-bearing keys, presets and validation.

Every physical key carries its unit as a suffix (``temperature_mK``,
``gap_GHz``); a key whose stem is known but whose suffix differs is
rejected as a unit mismatch rather than converted.
"""

import copy
import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .circuits import (
    CpwResonator,
    FluxQubit,
    Junction,
    SplitTransmon,
    Transmon,
    WireSegment,
    capacitance_from_ej_ec,
    kinetic_inductance,
)
from .conductivity import Material, QpDistribution
from .noise import TlsParameters

__all__ = [
    "ConfigError",
    "RunConfig",
    "PRESETS",
    "load_config",
    "parse_config",
    "config_hash",
    "canonical_json",
    "build_material",
    "build_distributions",
    "build_tls",
    "grid_values",
]


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


def _positive(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 and math.isfinite(v)


def _nonneg(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0 and math.isfinite(v)


def _unit_interval(v):
    return _nonneg(v) and v <= 1


def _real(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _bool(v):
    return isinstance(v, bool)


def _string(v):
    return isinstance(v, str)


def _int_positive(v):
    return isinstance(v, int) and not isinstance(v, bool) and v > 0


# key -> (check, description)
_MATERIAL = {
    "gap_GHz": (_positive, "positive number"),
    "penetration_depth_nm": (_positive, "positive number"),
    "critical_temperature_K": (_positive, "positive number"),
    "temperature_mK": (_positive, "positive number"),
    "reduced_temperature": (lambda v: _positive(v) and v < 1, "number in (0, 1)"),
}
_DISTRIBUTION = {
    "x_qp_res": (lambda v: isinstance(v, list) and len(v) > 0 and all(_nonneg(x) for x in v), "non-empty list of non-negative numbers"),
    "mode": (lambda v: v in ("quasithermal", "thermal"), "'quasithermal' or 'thermal'"),
}
_TLS = {
    "p_surface": (_unit_interval, "number in [0, 1]"),
    "p_bulk": (_unit_interval, "number in [0, 1]"),
    "tan_surface": (_nonneg, "non-negative number"),
    "tan_bulk": (_nonneg, "non-negative number"),
}
_DEVICE = {
    "cpw": {
        "characteristic_impedance_ohm": (_positive, "positive number"),
        "area_um2": (_positive, "positive number"),
        "refractive_index": (_positive, "positive number"),
        "center_strip_um": (_positive, "positive number"),
        "gap_um": (_positive, "positive number"),
    },
    "transmon": {
        "ej_ec": (lambda v: _positive(v) and v > 1, "number > 1"),
        "lead_kinetic_inductance_nH": (_nonneg, "non-negative number"),
        "lead_geometric_inductance_nH": (_nonneg, "non-negative number"),
        "pad_kinetic_inductance_nH": (_nonneg, "non-negative number"),
        "pad_geometric_inductance_nH": (_nonneg, "non-negative number"),
        "gap_engineered": (_bool, "boolean"),
    },
    "flux_qubit": {
        "loop_kinetic_inductance_nH": (_nonneg, "non-negative number"),
        "loop_geometric_inductance_nH": (_nonneg, "non-negative number"),
        "josephson_inductance_nH": (_positive, "positive number"),
        "beta": (lambda v: _positive(v) and v > 1, "number > 1"),
        "phase_rad": (lambda v: _real(v) and 0 <= v < 2 * math.pi, "number in [0, 2 pi)"),
        "capacitance_pF": (_positive, "positive number"),
        "gap_engineered": (_bool, "boolean"),
        "inductance_approximation": (lambda v: v in ("exact", "josephson"), "'exact' or 'josephson'"),
    },
    "split_transmon": {
        "loop_half_length_um": (_positive, "positive number"),
        "loop_half_area_um2": (_positive, "positive number"),
        "loop_half_geometric_inductance_nH": (_nonneg, "non-negative number"),
        "pad_kinetic_inductance_nH": (_nonneg, "non-negative number"),
        "pad_geometric_inductance_nH": (_nonneg, "non-negative number"),
        "josephson_inductance_nH": (_positive, "positive number"),
        "ej_ec": (lambda v: _positive(v) and v > 1, "number > 1"),
        "flux_quanta": (lambda v: _real(v) and 0 <= v < 1, "number in [0, 1)"),
        "gap_engineered": (_bool, "boolean"),
    },
    "none": {},
}
_REQUIRED = {
    "cpw": ("characteristic_impedance_ohm", "area_um2", "refractive_index"),
    "transmon": ("ej_ec", "lead_kinetic_inductance_nH", "pad_geometric_inductance_nH"),
    "flux_qubit": ("loop_kinetic_inductance_nH", "loop_geometric_inductance_nH", "josephson_inductance_nH", "beta"),
    "split_transmon": ("loop_half_length_um", "loop_half_area_um2", "josephson_inductance_nH", "ej_ec"),
    "none": (),
}
_GRID_VARIABLES = ("frequency_GHz", "flux_quanta", "hw_over_kT")
_GRID = {
    "variable": (lambda v: v in _GRID_VARIABLES, f"one of {_GRID_VARIABLES}"),
    "start": (_real, "number"),
    "stop": (_real, "number"),
    "num": (_int_positive, "positive integer"),
    "spacing": (lambda v: v in ("linear", "log"), "'linear' or 'log'"),
    "values": (lambda v: isinstance(v, list) and len(v) > 0 and all(_real(x) for x in v), "non-empty list of numbers"),
}
_SWEEP = {
    "quantity": (lambda v: v in ("conductivity", "quality-factor", "t1", "flux-noise", "t2star"), "a sweepable quantity"),
    "grid": (lambda v: isinstance(v, dict), "object"),
    "method": (lambda v: v in ("analytic", "numeric"), "'analytic' or 'numeric'"),
}
_OUTPUT = {
    "directory": (_string, "string"),
    "format": (lambda v: v in ("csv", "json"), "'csv' or 'json'"),
}
_FDT = {
    "seed": (lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0, "non-negative integer"),
    "count": (_int_positive, "positive integer"),
    "min_dimension": (lambda v: isinstance(v, int) and 2 <= v <= 16, "integer in [2, 16]"),
    "max_dimension": (lambda v: isinstance(v, int) and 2 <= v <= 16, "integer in [2, 16]"),
    "temperature_K": (_positive, "positive number"),
}
_TOP = ("preset", "material", "distribution", "device", "tls", "sweep", "output", "fdt")
_UNIT_SUFFIXES = ("GHz", "MHz", "Hz", "nm", "um", "um2", "mm", "m", "K", "mK", "nH", "pH", "H", "pF", "fF", "F", "ohm", "rad", "deg", "s", "us")

_ALUMINUM = {
    "gap_GHz": 44.0,
    "penetration_depth_nm": 50.0,
    "critical_temperature_K": 1.2,
    "temperature_mK": 30.0,
}
_TLS_DEFAULT = {"tan_surface": 1e-3, "tan_bulk": 1e-6}

PRESETS = {
    "fig2": {
        "material": {**_ALUMINUM, "reduced_temperature": 0.1},
        "distribution": {"x_qp_res": [0.0], "mode": "quasithermal"},
        "device": {"variant": "none"},
        "sweep": {"quantity": "conductivity", "grid": {"variable": "hw_over_kT", "start": 1e-2, "stop": 10.0, "num": 40, "spacing": "log"}},
    },
    "fig3": {
        "material": dict(_ALUMINUM),
        "distribution": {"x_qp_res": [1e-9, 1e-7, 1e-5], "mode": "quasithermal"},
        "device": {
            "variant": "cpw",
            "characteristic_impedance_ohm": 50.0,
            "area_um2": 1.0,
            "refractive_index": math.sqrt(11.7),
            "center_strip_um": 10.0,
            "gap_um": 6.0,
        },
        "tls": {"p_surface": 23e-4, "p_bulk": 0.9, **_TLS_DEFAULT},
        "sweep": {"quantity": "quality-factor", "grid": {"variable": "frequency_GHz", "start": 2.0, "stop": 10.0, "num": 41, "spacing": "linear"}},
    },
    "fig4": {
        "material": dict(_ALUMINUM),
        "distribution": {"x_qp_res": [1e-9, 1e-7, 1e-5], "mode": "quasithermal"},
        "device": {
            "variant": "transmon",
            "ej_ec": 70.0,
            "lead_kinetic_inductance_nH": 4.7e-4,
            "lead_geometric_inductance_nH": 0.0,
            "pad_kinetic_inductance_nH": 0.0,
            "pad_geometric_inductance_nH": 0.02,
            "gap_engineered": False,
        },
        "tls": {"p_surface": 2.4e-4, "p_bulk": 0.9, **_TLS_DEFAULT},
        "sweep": {"quantity": "t1", "grid": {"variable": "frequency_GHz", "start": 4.0, "stop": 8.0, "num": 41, "spacing": "linear"}},
    },
    "fig5": {
        "material": dict(_ALUMINUM),
        "distribution": {"x_qp_res": [1e-9, 1e-7, 1e-5], "mode": "quasithermal"},
        "device": {
            "variant": "flux_qubit",
            "loop_kinetic_inductance_nH": 0.003,
            "loop_geometric_inductance_nH": 0.6,
            "josephson_inductance_nH": 0.24,
            "beta": 2.5,
            "phase_rad": 0.0,
            "capacitance_pF": 0.1,
            "gap_engineered": False,
            "inductance_approximation": "exact",
        },
        "tls": {"p_surface": 1.0, "p_bulk": 0.0, "tan_surface": 2e-4, "tan_bulk": 0.0},
        "sweep": {"quantity": "flux-noise", "grid": {"variable": "frequency_GHz", "start": 1e-3, "stop": 10.0, "num": 81, "spacing": "log"}},
    },
    "fig6": {
        "material": dict(_ALUMINUM),
        "distribution": {"x_qp_res": [1e-9, 1e-8, 1e-7, 1e-6, 1e-5], "mode": "quasithermal"},
        "device": {
            "variant": "split_transmon",
            "loop_half_length_um": 1.0,
            "loop_half_area_um2": 0.01,
            "loop_half_geometric_inductance_nH": 0.0,
            "pad_kinetic_inductance_nH": 0.0,
            # not listed for this device; pad value of the single-junction transmon
            "pad_geometric_inductance_nH": 0.02,
            "josephson_inductance_nH": 10.0,
            "ej_ec": 70.0,
            "flux_quanta": 0.25,
            "gap_engineered": False,
        },
        "sweep": {"quantity": "t2star", "method": "analytic", "grid": {"variable": "flux_quanta", "start": 0.1, "stop": 0.4, "num": 31, "spacing": "linear"}},
    },
    "nbtin": {
        # NbTiN parameters are not tabulated: weak-coupling gap from Tc and an assumed bath temperature
        "material": {"critical_temperature_K": 14.0, "penetration_depth_nm": 250.0, "temperature_mK": 20.0},
        "distribution": {"x_qp_res": [3e-4], "mode": "quasithermal"},
        "device": {
            "variant": "flux_qubit",
            "loop_kinetic_inductance_nH": 0.0,
            "loop_geometric_inductance_nH": 0.0,
            "josephson_inductance_nH": 5.0,
            "beta": 2.0,
            "phase_rad": 0.0,
            "gap_engineered": False,
            "inductance_approximation": "josephson",
        },
        "sweep": {"quantity": "flux-noise", "grid": {"variable": "frequency_GHz", "start": 1e-2, "stop": 1.0, "num": 21, "spacing": "log"}},
    },
}
_BASE = {
    "output": {"directory": "out", "format": "csv"},
    "fdt": {"seed": 0, "count": 100, "min_dimension": 2, "max_dimension": 8, "temperature_K": 0.1},
}


def _stem(key):
    head, sep, tail = key.rpartition("_")
    return head if sep and tail in _UNIT_SUFFIXES else None


def _check_block(name, block, schema, required=()):
    if not isinstance(block, dict):
        raise ConfigError(f"{name} must be an object", name)
    stems = {_stem(k): k for k in schema if _stem(k)}
    for key, value in block.items():
        if key not in schema:
            stem = _stem(key)
            if stem is not None and stem in stems:
                raise ConfigError(f"unit suffix mismatch for {name}.{key}: expected {name}.{stems[stem]}", f"{name}.{key}")
            raise ConfigError(f"unknown key {name}.{key}; allowed: {sorted(schema)}", f"{name}.{key}")
        check, desc = schema[key]
        if value is None:
            continue
        if not check(value):
            raise ConfigError(f"{name}.{key} must be {desc}, got {value!r}", f"{name}.{key}")
    missing = [k for k in required if block.get(k) is None]
    if missing:
        raise ConfigError(f"{name} is missing required keys {missing}", name)


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            if key == "device" and value.get("variant", out[key].get("variant")) != out[key].get("variant"):
                out[key] = copy.deepcopy(value)
            else:
                out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration; ``data`` is the fully resolved JSON object."""

    data: dict

    def __eq__(self, other):
        return isinstance(other, RunConfig) and canonical_json(self.data) == canonical_json(other.data)

    def __hash__(self):
        return hash(canonical_json(self.data))

    def block(self, name):
        return self.data.get(name, {})

    @property
    def preset(self):
        return self.data.get("preset")

    def to_json(self):
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data):
    """git blob SHA-1 of the canonical JSON text."""
    payload = canonical_json(data).encode()
    return hashlib.sha1(b"blob %d\0" % len(payload) + payload).hexdigest()


def parse_config(raw, preset=None):
    """Validate a config object, filling omitted fields from ``preset`` (or its ``preset`` key)."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    for key in raw:
        if key not in _TOP:
            raise ConfigError(f"unknown top-level key {key!r}; allowed: {list(_TOP)}", key)
    name = preset or raw.get("preset")
    data = copy.deepcopy(_BASE)
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}", "preset")
        data = _merge(data, PRESETS[name])
    data = _merge(data, {k: v for k, v in raw.items() if k != "preset"})
    if name is not None:
        data["preset"] = name

    for block, schema in (("material", _MATERIAL), ("distribution", _DISTRIBUTION), ("tls", _TLS), ("output", _OUTPUT), ("fdt", _FDT)):
        if block in data:
            _check_block(block, data[block], schema)
    if "material" in data:
        m = data["material"]
        if m.get("gap_GHz") is None and m.get("critical_temperature_K") is None:
            raise ConfigError("material needs gap_GHz or critical_temperature_K", "material")
        if m.get("penetration_depth_nm") is None:
            raise ConfigError("material is missing required keys ['penetration_depth_nm']", "material")
        if m.get("temperature_mK") is None and m.get("reduced_temperature") is None:
            raise ConfigError("material needs temperature_mK or reduced_temperature", "material")
    if "device" in data:
        dev = data["device"]
        if not isinstance(dev, dict) or "variant" not in dev:
            needs = {v: ["variant", *req] for v, req in sorted(_REQUIRED.items())}
            raise ConfigError(f"device is missing required keys ['variant']; required keys per variant: {needs}", "device")
        variant = dev["variant"]
        if variant not in _DEVICE:
            raise ConfigError(f"unknown device variant {variant!r}; allowed: {sorted(_DEVICE)}", "device.variant")
        body = {k: v for k, v in dev.items() if k != "variant"}
        _check_block("device", body, _DEVICE[variant], _REQUIRED[variant])
    if "sweep" in data:
        _check_block("sweep", data["sweep"], _SWEEP, ("quantity", "grid"))
        grid = data["sweep"]["grid"]
        _check_block("sweep.grid", grid, _GRID, ("variable",))
        grid_values(grid)
    if "fdt" in data and data["fdt"]["min_dimension"] > data["fdt"]["max_dimension"]:
        raise ConfigError("fdt.min_dimension exceeds fdt.max_dimension", "fdt")
    return RunConfig(data)


def load_config(path=None, preset=None):
    """Read and validate a JSON config file; with no path, the preset alone."""
    raw = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw, preset)


def grid_values(grid):
    """Monotone grid from ``values`` or (start, stop, num, spacing)."""
    if grid.get("values") is not None:
        values = np.asarray(grid["values"], dtype=float)
    else:
        missing = [k for k in ("start", "stop", "num") if grid.get(k) is None]
        if missing:
            raise ConfigError(f"sweep.grid is missing {missing}", "sweep.grid")
        start, stop, num = grid["start"], grid["stop"], grid["num"]
        if grid.get("spacing", "linear") == "log":
            if not (start > 0 and stop > 0):
                raise ConfigError("log grid needs positive start and stop", "sweep.grid")
            values = np.logspace(math.log10(start), math.log10(stop), num)
        else:
            values = np.linspace(start, stop, num)
    if values.size == 0:
        raise ConfigError("grid is empty", "sweep.grid")
    if values.size > 1 and not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
        raise ConfigError("grid must be strictly monotone", "sweep.grid")
    return values


def build_material(cfg):
    m = cfg.block("material")
    gap = const.gap_from_GHz(m["gap_GHz"]) if m.get("gap_GHz") is not None else const.bcs_gap_from_Tc(m["critical_temperature_K"])
    if m.get("reduced_temperature") is not None:
        temperature = m["reduced_temperature"] * gap / const.k_B
    else:
        temperature = m["temperature_mK"] * 1e-3
    return Material(gap, m["penetration_depth_nm"] * 1e-9, temperature, m.get("critical_temperature_K"))


def build_distributions(cfg):
    d = cfg.block("distribution")
    mode = d.get("mode") or "quasithermal"
    return [QpDistribution(float(x), mode) for x in d["x_qp_res"]]


def build_tls(cfg):
    t = cfg.block("tls")
    if not t:
        return None
    return TlsParameters(t["p_surface"], t["p_bulk"], t.get("tan_surface", 1e-3), t.get("tan_bulk", 1e-6))


def _get(dev, key, default=0.0):
    value = dev.get(key)
    return default if value is None else value


def build_cpw(cfg, mat, omega):
    dev = cfg.block("device")
    return CpwResonator.for_frequency(
        omega, dev["area_um2"] * 1e-12, mat, dev["characteristic_impedance_ohm"], dev["refractive_index"]
    )


def build_transmon(cfg, omega, gap_engineered=None):
    dev = cfg.block("device")
    ge = dev.get("gap_engineered", False) if gap_engineered is None else gap_engineered
    lead = WireSegment(_get(dev, "lead_kinetic_inductance_nH") * 1e-9, _get(dev, "lead_geometric_inductance_nH") * 1e-9)
    pad = WireSegment(_get(dev, "pad_kinetic_inductance_nH") * 1e-9, _get(dev, "pad_geometric_inductance_nH") * 1e-9)
    return Transmon.for_frequency(omega, dev["ej_ec"], lead, pad, bool(ge))


def build_flux_qubit(cfg, gap_engineered=None):
    dev = cfg.block("device")
    ge = dev.get("gap_engineered", False) if gap_engineered is None else gap_engineered
    loop = WireSegment(_get(dev, "loop_kinetic_inductance_nH") * 1e-9, _get(dev, "loop_geometric_inductance_nH") * 1e-9)
    c = dev.get("capacitance_pF")
    return FluxQubit(
        loop,
        Junction(dev["josephson_inductance_nH"] * 1e-9, 0.0, bool(ge)),
        dev["beta"],
        dev.get("phase_rad"),
        None if c is None else c * 1e-12,
    )


def build_split_transmon(cfg, mat, flux, gap_engineered=None):
    dev = cfg.block("device")
    ge = dev.get("gap_engineered", False) if gap_engineered is None else gap_engineered
    length, area = dev["loop_half_length_um"] * 1e-6, dev["loop_half_area_um2"] * 1e-12
    loop = WireSegment(
        kinetic_inductance(length, area, mat.penetration_depth),
        _get(dev, "loop_half_geometric_inductance_nH") * 1e-9,
        length,
        area,
    )
    pad = WireSegment(_get(dev, "pad_kinetic_inductance_nH") * 1e-9, _get(dev, "pad_geometric_inductance_nH", 0.02) * 1e-9)
    lj = dev["josephson_inductance_nH"] * 1e-9
    return SplitTransmon(loop, pad, lj, flux, capacitance_from_ej_ec(lj, dev["ej_ec"]), bool(ge))
