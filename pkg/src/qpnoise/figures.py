"""Figure reproduction, quantity sweeps and table serialization.

A quantity is evaluated point by point over ``x_qp_res x grid``; figures
assemble curves from the same evaluators with device variants fixed.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import constants as const
from .circuits import device_frequency
from .conductivity import (
    Sigma1Table,
    approximation_window,
    occupation,
    sigma1_approx,
    sigma1_exact,
    sigma2_approx,
    sigma2_exact,
    xqp_from_occupation,
)
from .config import (
    ConfigError,
    build_cpw,
    build_distributions,
    build_flux_qubit,
    build_material,
    build_split_transmon,
    build_tls,
    build_transmon,
    config_hash,
    grid_values,
    parse_config,
)
from .decoherence import (
    alpha_analytic_st,
    alpha_asymptotic_st,
    alpha_numeric_st,
    quality_factor_cpw,
    quality_factor_tls,
    t1_tls,
    t1_transmon,
    t2_star,
)
from .fdt import random_batch
from .noise import (
    FLUX_QUANTUM_UNITS,
    qp_flux_noise_flux_qubit,
    qp_flux_noise_junction,
    qp_flux_noise_split_transmon,
    spin_flux_noise,
    tls_flux_noise,
    to_flux_quantum_units,
)

__all__ = [
    "Table",
    "CurveError",
    "FLOAT_FORMAT",
    "QUANTITIES",
    "SUBCOMMAND_PRESETS",
    "evaluate_point",
    "run_quantity",
    "run_sweep",
    "run_figure",
    "run_fdt_check",
    "write_table",
    "write_tables",
    "format_value",
]

FLOAT_FORMAT = "%.11e"
QUANTITIES = ("conductivity", "quality-factor", "t1", "flux-noise", "t2star")
SUBCOMMAND_PRESETS = {
    "conductivity": "fig2",
    "quality-factor": "fig3",
    "t1": "fig4",
    "flux-noise": "fig5",
    "t2star": "fig6",
}
_VERSION = "0.1.0"
# search window for T2*; GE devices at small x reach hours
T2STAR_T_MAX = 1e5


class CurveError(RuntimeError):
    """Physics failure while computing one curve or sweep point."""

    def __init__(self, curve, cause):
        super().__init__(f"{curve}: {type(cause).__name__}: {cause}")
        self.curve = curve
        self.cause = cause


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % float(v)
    return str(v)


@dataclass
class Table:
    """Rows of a single curve or sweep with its provenance."""

    name: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def header_lines(self):
        lines = [f"# qpnoise {_VERSION}", f"# table: {self.name}"]
        for key in sorted(self.metadata):
            value = self.metadata[key]
            text = format_value(value) if isinstance(value, (int, float, bool, np.floating)) else json.dumps(value, sort_keys=True)
            lines.append(f"# {key}: {text}")
        return lines

    def to_csv(self):
        fh = io.StringIO()
        for line in self.header_lines():
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return fh.getvalue()

    def to_dict(self):
        def plain(v):
            if isinstance(v, (np.floating, np.integer, np.bool_)):
                v = v.item()
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            return v

        return {
            "name": self.name,
            "metadata": {k: plain(v) for k, v in sorted(self.metadata.items())},
            "columns": list(self.columns),
            "rows": [[plain(v) for v in row] for row in self.rows],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_table(table, directory, fmt="csv"):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{table.name}.{fmt}")
    _write_text(path, table.to_csv() if fmt == "csv" else table.to_json())
    return path


def write_tables(tables, directory, fmt="csv", bundle=None):
    """One file per table; with ``fmt == "json"`` and a ``bundle`` name, one JSON file for all."""
    if fmt == "json" and bundle:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"{bundle}.json")
        _write_text(path, json.dumps([t.to_dict() for t in tables], indent=2, sort_keys=True) + "\n")
        return [path]
    return [write_table(t, directory, fmt) for t in tables]


def write_config_echo(cfg, directory):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, "config.echo.json")
    _write_text(path, cfg.to_json())
    return path


def _omega(variable, value, mat):
    if variable == "frequency_GHz":
        return 2 * math.pi * value * 1e9
    if variable == "hw_over_kT":
        return value * mat.kT / const.hbar
    raise ConfigError(f"grid variable {variable!r} does not define a frequency", "sweep.grid.variable")


_XQP_CACHE = {}


def _xqp_quadrature(dist, mat):
    key = (dist, mat)
    if key not in _XQP_CACHE:
        _XQP_CACHE[key] = xqp_from_occupation(lambda e: occupation(dist, mat, e), mat)
    return _XQP_CACHE[key]


def _conductivity(cfg, mat, dist, variable, value, opts):
    omega = _omega(variable, value, mat)
    x = _xqp_quadrature(dist, mat)
    sigma0 = x * (2.0 / mat.reduced_temperature) ** 1.5
    s1 = sigma1_exact(dist, mat, omega)
    s1a = sigma1_approx(x, mat, omega)
    return {
        "hw_over_kT": const.hbar * omega / mat.kT,
        "omega_rad_s": omega,
        "sigma1_exact_over_sigma0": s1 / sigma0,
        "sigma1_approx_over_sigma0": s1a / sigma0,
        "relative_error": (s1a - s1) / s1,
        "sigma1_exact_over_sigmaN": s1,
        "sigma1_approx_over_sigmaN": s1a,
        "sigma2_exact_over_sigmaN": sigma2_exact(dist, mat, omega),
        "sigma2_approx_over_sigmaN": sigma2_approx(mat, omega),
        "approx_valid": approximation_window(mat, omega),
    }


def _quality_factor(cfg, mat, dist, variable, value, opts):
    _require_variant(cfg, "cpw")
    omega = _omega(variable, value, mat)
    c = build_cpw(cfg, mat, omega)
    q = quality_factor_cpw(c, dist, mat)
    row = {
        "frequency_GHz": omega / (2 * math.pi * 1e9),
        "kinetic_fraction": c.wire.kinetic_inductance / c.wire.total_inductance,
        "Q_QP": q.value,
    }
    tls = build_tls(cfg)
    rates = [q.rate]
    if tls is not None:
        row["Q_TLS"] = quality_factor_tls(tls, mat.temperature, omega)
        rates.append(1.0 / row["Q_TLS"])
    row["Q_total"] = 1.0 / math.fsum(rates)
    return row


def _inv(rate):
    return math.inf if rate == 0 else 1.0 / rate


def _t1(cfg, mat, dist, variable, value, opts):
    _require_variant(cfg, "transmon")
    omega = _omega(variable, value, mat)
    t = build_transmon(cfg, omega, opts.get("gap_engineered"))
    res = t1_transmon(t, dist, mat)
    row = {
        "frequency_GHz": omega / (2 * math.pi * 1e9),
        "T1_QP_s": res.value,
        "T1_QP_wire_s": _inv(res.breakdown.get("QP-wire", 0.0)),
        "T1_QP_junction_s": _inv(res.breakdown.get("QP-junction", 0.0)),
    }
    rates = [res.rate]
    tls = build_tls(cfg)
    if tls is not None:
        row["T1_TLS_s"] = t1_tls(tls, mat.temperature, omega)
        rates.append(1.0 / row["T1_TLS_s"])
    row["T1_total_s"] = _inv(math.fsum(rates))
    row["junction_dominated"] = res.flags["junction_dominated"]
    row["high_frequency"] = res.flags["high_frequency"]
    return row


def _flux_noise(cfg, mat, dist, variable, value, opts):
    if variable != "frequency_GHz":
        raise ConfigError("flux-noise needs a frequency_GHz grid", "sweep.grid.variable")
    omega = _omega(variable, value, mat)
    dev = cfg.block("device")
    ge = opts.get("gap_engineered")
    tls = build_tls(cfg)
    row = {"frequency_Hz": omega / (2 * math.pi), "omega_rad_s": omega}
    if dev["variant"] == "flux_qubit":
        if dev.get("inductance_approximation") == "josephson":
            if ge if ge is not None else dev.get("gap_engineered", False):
                raise ConfigError("the junction-only estimate has no gap-engineered form", "device.inductance_approximation")
            lj = dev["josephson_inductance_nH"] * 1e-9
            s_qp = qp_flux_noise_junction(lj, dist, mat, omega)
            inductance, capacitance = lj, dev.get("capacitance_pF")
            capacitance = None if capacitance is None else capacitance * 1e-12
        else:
            f = build_flux_qubit(cfg, ge)
            s_qp = qp_flux_noise_flux_qubit(f, dist, mat, omega)
            inductance, capacitance = f.total_inductance, f.capacitance
    elif dev["variant"] == "split_transmon":
        s = build_split_transmon(cfg, mat, dev.get("flux_quanta", 0.25), ge)
        s_qp = qp_flux_noise_split_transmon(s, dist, mat, omega)
        inductance, capacitance = s.total_inductance, s.capacitance
    else:
        raise ConfigError("flux-noise needs a flux_qubit or split_transmon device", "device.variant")
    row["S_QP_Phi0sq_per_Hz"] = to_flux_quantum_units(s_qp)
    total = row["S_QP_Phi0sq_per_Hz"]
    if tls is not None and capacitance is not None:
        row["S_TLS_Phi0sq_per_Hz"] = to_flux_quantum_units(tls_flux_noise(tls, inductance, capacitance, mat.temperature, omega))
        total += row["S_TLS_Phi0sq_per_Hz"]
    row["S_spin_Phi0sq_per_Hz"] = to_flux_quantum_units(spin_flux_noise(omega))
    row["S_total_Phi0sq_per_Hz"] = total + row["S_spin_Phi0sq_per_Hz"]
    return row


_TABLES = {}


def _sigma_table(dist, mat):
    key = (dist, mat)
    if key not in _TABLES:
        _TABLES[key] = Sigma1Table(dist, mat, omega_min=1e-7)
    return _TABLES[key]


def _t2star(cfg, mat, dist, variable, value, opts):
    _require_variant(cfg, "split_transmon")
    if variable != "flux_quanta":
        raise ConfigError("t2star needs a flux_quanta grid", "sweep.grid.variable")
    s = build_split_transmon(cfg, mat, value, opts.get("gap_engineered"))
    method = opts.get("method") or cfg.block("sweep").get("method") or "analytic"
    table = _sigma_table(dist, mat) if method == "numeric" else None
    res = t2_star(s, dist, mat, method=method, t_max=T2STAR_T_MAX, table=table)
    return {
        "flux_quanta": value,
        "frequency_GHz": device_frequency(s) / (2 * math.pi * 1e9),
        "T2star_s": res.value,
        "valid": res.flags["valid"],
        "lower_bound": res.flags["lower_bound"],
        "upper_bound": res.flags["upper_bound"],
    }


_EVALUATORS = {
    "conductivity": _conductivity,
    "quality-factor": _quality_factor,
    "t1": _t1,
    "flux-noise": _flux_noise,
    "t2star": _t2star,
}


def _require_variant(cfg, variant):
    got = cfg.block("device").get("variant")
    if got != variant:
        raise ConfigError(f"this quantity needs device.variant = {variant!r}, got {got!r}", "device.variant")


def evaluate_point(quantity, cfg, x_index, value, opts=None):
    """One sweep row as an ordered dict (x_qp_res first)."""
    if quantity not in _EVALUATORS:
        raise ConfigError(f"unknown quantity {quantity!r}", "sweep.quantity")
    mat = build_material(cfg)
    dist = build_distributions(cfg)[x_index]
    variable = cfg.block("sweep")["grid"]["variable"]
    body = _EVALUATORS[quantity](cfg, mat, dist, variable, float(value), opts or {})
    return {"x_qp_res": dist.x_qp_res, variable: float(value), **{k: v for k, v in body.items() if k != variable}}


def _point_task(args):
    quantity, data, x_index, value, opts = args
    cfg = parse_config(data)
    try:
        return evaluate_point(quantity, cfg, x_index, value, opts)
    except ConfigError:
        raise
    except Exception as exc:
        x = cfg.block("distribution")["x_qp_res"][x_index]
        raise CurveError(f"{quantity} at x_qp_res={x:g}, value={value:g}", exc) from exc


def _points(cfg):
    xs = cfg.block("distribution")["x_qp_res"]
    grid = grid_values(cfg.block("sweep")["grid"])
    return [(i, float(v)) for i in range(len(xs)) for v in grid]


def _map(tasks, jobs):
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(_point_task, tasks)
    else:
        for task in tasks:
            yield _point_task(task)


def _metadata(cfg, quantity):
    mat = build_material(cfg)
    meta = {
        "quantity": quantity,
        "config_sha1": config_hash(cfg.data),
        "preset": cfg.preset or "none",
        "temperature_K": mat.temperature,
        "gap_J": mat.gap,
        "reduced_temperature": mat.reduced_temperature,
    }
    if quantity == "flux-noise":
        meta["units"] = FLUX_QUANTUM_UNITS
        meta["spectrum"] = "two-sided S(omega) at omega > 0"
    return meta


def run_quantity(cfg, quantity=None, jobs=1):
    """Full sweep held in memory; returns one Table."""
    quantity = quantity or cfg.block("sweep")["quantity"]
    tasks = [(quantity, cfg.data, i, v, {}) for i, v in _points(cfg)]
    rows = list(_map(tasks, jobs))
    columns = list(rows[0].keys())
    return Table(quantity.replace("-", "_"), columns, [[r[c] for c in columns] for r in rows], _metadata(cfg, quantity))


def _read_existing(path):
    """(header lines, column names, {key: raw line}) of a previous sweep CSV, or None."""
    if not os.path.exists(path):
        return None
    header, columns, rows = [], None, {}
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line)
            elif columns is None:
                columns = next(csv.reader([line]))
            elif line:
                fields = line.split(",", 2)
                if len(fields) >= 2:
                    rows[(fields[0], fields[1])] = line
    return header, columns, rows


def run_sweep(cfg, directory, jobs=1, resume=True, fmt="csv"):
    """Cartesian sweep written to ``<directory>/sweep_<quantity>.<fmt>``.

    With CSV output an existing file from the same config is resumed: rows
    already present are kept and only missing points are computed.  The
    file is rewritten in canonical order at the end.
    """
    quantity = cfg.block("sweep")["quantity"]
    os.makedirs(directory, exist_ok=True)
    name = f"sweep_{quantity.replace('-', '_')}"
    if fmt == "json":
        table = run_quantity(cfg, quantity, jobs)
        table.name = name
        return [write_table(table, directory, "json")]

    path = os.path.join(directory, f"{name}.csv")
    meta = _metadata(cfg, quantity)
    header = Table(name, [], [], meta).header_lines()
    existing = _read_existing(path) if resume else None
    done, columns = {}, None
    if existing is not None:
        old_header, columns, done = existing
        if old_header != header:
            raise ConfigError(f"{path} was written by a different config; remove it or use --fresh", "output.directory")
    variable = cfg.block("sweep")["grid"]["variable"]
    xs = cfg.block("distribution")["x_qp_res"]
    points = _points(cfg)
    keys = [(format_value(float(xs[i])), format_value(v)) for i, v in points]
    todo = [(quantity, cfg.data, i, v, {}) for (i, v), k in zip(points, keys) if k not in done]

    mode = "a" if existing is not None and columns else "w"
    with open(path, mode, encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if mode == "w":
            for line in header:
                fh.write(line + "\n")
        for row in _map(todo, jobs):
            if columns is None:
                columns = list(row.keys())
                writer.writerow(columns)
            text = ",".join(format_value(row[c]) for c in columns)
            fh.write(text + "\n")
            fh.flush()
            done[(format_value(float(row["x_qp_res"])), format_value(row[variable]))] = text

    fh = io.StringIO()
    for line in header:
        fh.write(line + "\n")
    csv.writer(fh, lineterminator="\n").writerow(columns)
    for k in keys:
        fh.write(done[k] + "\n")
    _write_text(path, fh.getvalue())
    return [path]


def _x_label(x):
    return ("%.0e" % x).replace("+", "")


def _curve(name, fn):
    try:
        return fn()
    except ConfigError:
        raise
    except Exception as exc:
        raise CurveError(name, exc) from exc


def _figure2(cfg, meta):
    mat = build_material(cfg)
    dist = build_distributions(cfg)[0]
    grid = grid_values(cfg.block("sweep")["grid"])
    cols = ["hw_over_kT", "sigma1_exact_over_sigma0", "sigma1_approx_over_sigma0", "relative_error"]

    def compute():
        rows = []
        for v in grid:
            r = _conductivity(cfg, mat, dist, "hw_over_kT", float(v), {})
            rows.append([r[c] for c in cols])
        return rows

    m = dict(meta, x_qp_quadrature=_xqp_quadrature(dist, mat), sigma0="sigma_N x_QP (2 Delta / k_B T)^(3/2)")
    return [Table("fig2_sigma1", cols, _curve("fig2_sigma1", compute), m)]


def _frequency_rows(cfg, mat, dist, fn, columns, opts=None):
    grid = grid_values(cfg.block("sweep")["grid"])
    rows = []
    for v in grid:
        r = fn(cfg, mat, dist, "frequency_GHz", float(v), opts or {})
        rows.append([r[c] for c in columns])
    return rows


def _figure3(cfg, meta):
    mat = build_material(cfg)
    tables = []
    for dist in build_distributions(cfg):
        name = f"fig3_Q_QP_x{_x_label(dist.x_qp_res)}"
        rows = _curve(name, lambda: _frequency_rows(cfg, mat, dist, _quality_factor, ["frequency_GHz", "Q_QP"]))
        tables.append(Table(name, ["frequency_GHz", "Q"], rows, dict(meta, x_qp_res=dist.x_qp_res, mechanism="QP-wire")))
    if build_tls(cfg) is not None:
        rows = _curve("fig3_Q_TLS", lambda: _frequency_rows(cfg, mat, build_distributions(cfg)[0], _quality_factor, ["frequency_GHz", "Q_TLS"]))
        tables.append(Table("fig3_Q_TLS", ["frequency_GHz", "Q"], rows, dict(meta, mechanism="TLS")))
    return tables


def _scale_column(rows, index, factor):
    return [[*r[:index], r[index] * factor, *r[index + 1:]] for r in rows]


def _figure4(cfg, meta):
    mat = build_material(cfg)
    dists = build_distributions(cfg)
    tables = []
    nge = max(dists, key=lambda d: d.x_qp_res)
    cols = ["frequency_GHz", "T1_QP_s"]
    name = f"fig4_T1_NGE_x{_x_label(nge.x_qp_res)}"
    rows = _curve(name, lambda: _frequency_rows(cfg, mat, nge, _t1, cols, {"gap_engineered": False}))
    tables.append(Table(name, ["frequency_GHz", "T1_us"], _scale_column(rows, 1, 1e6), dict(meta, x_qp_res=nge.x_qp_res, gap_engineered=False)))
    for dist in dists:
        name = f"fig4_T1_GE_x{_x_label(dist.x_qp_res)}"
        rows = _curve(name, lambda: _frequency_rows(cfg, mat, dist, _t1, cols, {"gap_engineered": True}))
        tables.append(Table(name, ["frequency_GHz", "T1_us"], _scale_column(rows, 1, 1e6), dict(meta, x_qp_res=dist.x_qp_res, gap_engineered=True)))
    if build_tls(cfg) is not None:
        rows = _curve("fig4_T1_TLS", lambda: _frequency_rows(cfg, mat, nge, _t1, ["frequency_GHz", "T1_TLS_s"]))
        tables.append(Table("fig4_T1_TLS", ["frequency_GHz", "T1_us"], _scale_column(rows, 1, 1e6), dict(meta, mechanism="TLS")))
    return tables


_SPECTRUM_COLUMNS = ["omega_rad_s", "frequency_Hz", "S_value", "units"]


def _spectrum_rows(cfg, mat, dist, key, opts):
    grid = grid_values(cfg.block("sweep")["grid"])
    rows = []
    for v in grid:
        r = _flux_noise(cfg, mat, dist, "frequency_GHz", float(v), opts)
        rows.append([r["omega_rad_s"], r["frequency_Hz"], r[key], FLUX_QUANTUM_UNITS])
    return rows


def _figure5(cfg, meta):
    mat = build_material(cfg)
    dists = build_distributions(cfg)
    meta = dict(meta, units=FLUX_QUANTUM_UNITS, spectrum="two-sided S(omega) at omega > 0")
    tables = []
    for dist in dists:
        name = f"fig5_S_QP_NGE_x{_x_label(dist.x_qp_res)}"
        rows = _curve(name, lambda: _spectrum_rows(cfg, mat, dist, "S_QP_Phi0sq_per_Hz", {"gap_engineered": False}))
        tables.append(Table(name, _SPECTRUM_COLUMNS, rows, dict(meta, x_qp_res=dist.x_qp_res, gap_engineered=False)))
    ge = max(dists, key=lambda d: d.x_qp_res)
    name = f"fig5_S_QP_GE_x{_x_label(ge.x_qp_res)}"
    rows = _curve(name, lambda: _spectrum_rows(cfg, mat, ge, "S_QP_Phi0sq_per_Hz", {"gap_engineered": True}))
    tables.append(Table(name, _SPECTRUM_COLUMNS, rows, dict(meta, x_qp_res=ge.x_qp_res, gap_engineered=True)))
    if build_tls(cfg) is not None:
        rows = _curve("fig5_S_TLS", lambda: _spectrum_rows(cfg, mat, ge, "S_TLS_Phi0sq_per_Hz", {}))
        tables.append(Table("fig5_S_TLS", _SPECTRUM_COLUMNS, rows, dict(meta, mechanism="TLS")))
    rows = _curve("fig5_S_spin", lambda: _spectrum_rows(cfg, mat, ge, "S_spin_Phi0sq_per_Hz", {}))
    tables.append(Table("fig5_S_spin", _SPECTRUM_COLUMNS, rows, dict(meta, mechanism="spin")))
    return tables


def alpha_factor(cfg, flux=None, x_qp_res=None):
    """numeric / closed-form alpha and numeric / asymptote at t = 100 hbar / k_B T."""
    mat = build_material(cfg)
    dists = build_distributions(cfg)
    dist = max(dists, key=lambda d: d.x_qp_res) if x_qp_res is None else type(dists[0])(x_qp_res, dists[0].mode)
    flux = cfg.block("device").get("flux_quanta", 0.25) if flux is None else flux
    s = build_split_transmon(cfg, mat, flux, False)
    t = 100 * const.hbar / mat.kT
    numeric = alpha_numeric_st(s, dist, mat, t, _sigma_table(dist, mat))
    return {
        "alpha_time_s": t,
        "alpha_flux_quanta": flux,
        "alpha_x_qp_res": dist.x_qp_res,
        "alpha_numeric": numeric,
        "alpha_closed_form": alpha_analytic_st(s, dist, mat, t),
        "alpha_asymptotic": alpha_asymptotic_st(s, dist, mat, t),
        "alpha_factor_numeric_over_closed_form": numeric / alpha_analytic_st(s, dist, mat, t),
        "alpha_factor_numeric_over_asymptotic": numeric / alpha_asymptotic_st(s, dist, mat, t),
    }


def _figure6(cfg, meta):
    mat = build_material(cfg)
    grid = grid_values(cfg.block("sweep")["grid"])
    method = cfg.block("sweep").get("method") or "analytic"
    meta = dict(meta, t2star_method=method, **alpha_factor(cfg))
    cols = ["flux_quanta", "frequency_GHz", "T2star_s", "valid", "lower_bound", "upper_bound"]
    tables = []
    for ge in (False, True):
        for dist in build_distributions(cfg):
            name = f"fig6_T2star_{'GE' if ge else 'NGE'}_x{_x_label(dist.x_qp_res)}"

            def compute():
                rows = []
                for v in grid:
                    r = _t2star(cfg, mat, dist, "flux_quanta", float(v), {"gap_engineered": ge, "method": method})
                    rows.append([r[c] for c in cols])
                return rows

            rows = _scale_column(_curve(name, compute), 2, 1e6)
            tables.append(Table(name, ["flux_quanta", "frequency_GHz", "T2star_us", "valid", "lower_bound", "upper_bound"], rows, dict(meta, x_qp_res=dist.x_qp_res, gap_engineered=ge)))
    return tables


_FIGURES = {2: _figure2, 3: _figure3, 4: _figure4, 5: _figure5, 6: _figure6}


def run_figure(number, overrides=None):
    """Tables for figure ``number`` (2-6) from its preset plus ``overrides`` (a config object)."""
    if number not in _FIGURES:
        raise ConfigError(f"no figure {number}; available: {sorted(_FIGURES)}", "figure")
    raw = dict(overrides or {})
    raw.pop("preset", None)
    cfg = parse_config(raw, preset=f"fig{number}")
    meta = {
        "figure": number,
        "config_sha1": config_hash(cfg.data),
        "preset": cfg.preset,
    }
    return cfg, _FIGURES[number](cfg, meta)


def run_fdt_check(cfg):
    """Residual table for the arbitrary, thermal and quasithermal batches."""
    f = cfg.block("fdt")
    rows = []
    for kind in ("arbitrary", "thermal", "quasithermal"):
        for r in random_batch(f["seed"], f["count"], kind, (f["min_dimension"], f["max_dimension"]), f["temperature_K"]):
            rows.append([kind, r["index"], r["dimension"], r["gfdt_residual"], r.get("fdt_residual", math.nan)])
    meta = {"seed": f["seed"], "count": f["count"], "temperature_K": f["temperature_K"], "config_sha1": config_hash(cfg.data)}
    for kind in ("arbitrary", "thermal", "quasithermal"):
        sel = [r for r in rows if r[0] == kind]
        meta[f"max_gfdt_residual_{kind}"] = max(r[3] for r in sel)
        if kind != "arbitrary":
            meta[f"max_fdt_residual_{kind}"] = max(r[4] for r in sel)
    return Table("fdt_check", ["kind", "index", "dimension", "gfdt_residual", "fdt_residual"], rows, meta)
