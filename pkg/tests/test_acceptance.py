"""Acceptance criteria at their stated tolerances; one summary line each."""

import math
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from qpnoise import constants as const
from qpnoise.circuits import (
    FluxQubit,
    Junction,
    SplitTransmon,
    Transmon,
    WireSegment,
    capacitance_from_ej_ec,
    flux_qubit_admittance,
    split_transmon_admittance,
)
from qpnoise.cli import main
from qpnoise.conductivity import ALUMINUM, QpDistribution, sigma2_approx, sigma2_exact
from qpnoise.config import build_material, load_config
from qpnoise.decoherence import alpha_analytic_st, alpha_numeric_st, t1_junction_limit, t1_transmon
from qpnoise.fdt import random_batch
from qpnoise.figures import run_figure, run_quantity
from qpnoise.noise import (
    flux_noise_chain,
    qp_flux_noise_flux_qubit,
    qp_flux_noise_split_transmon,
    sigma_ratio,
    to_flux_quantum_units,
)


def record(report, number, ok, detail):
    report.append(f"CRITERION {number}: {'PASS' if ok else 'FAIL'} | {detail}")
    assert ok, detail


def curve(tables, name):
    return next(t for t in tables if t.name == name)


def column(table, name):
    i = table.columns.index(name)
    return np.array([row[i] for row in table.rows], dtype=float)


def test_criterion_01_fig2_approximation(report):
    start = time.perf_counter()
    _, tables = run_figure(2)
    elapsed = time.perf_counter() - start
    t = tables[0]
    err = np.abs(column(t, "relative_error"))
    x = column(t, "hw_over_kT")
    ok = len(x) == 40 and err.max() <= 0.05 and elapsed < 10
    worst = x[err.argmax()]
    record(report, 1, ok, f"max |approx-exact|/exact = {err.max():.4f} at hw/kT = {worst:.3g} (limit 0.05); {elapsed:.2f} s")


def test_criterion_02_sigma2_limit(report):
    start = time.perf_counter()
    values = []
    for tau in np.linspace(0.005, 0.05, 6):
        mat = ALUMINUM.with_temperature(tau * ALUMINUM.gap / const.k_B)
        omega = np.geomspace(1e-4, 0.05, 12) * mat.gap / const.hbar
        for d in (QpDistribution(0.0), QpDistribution(1e-5)):
            values.extend(np.asarray(sigma2_exact(d, mat, omega)) / sigma2_approx(mat, omega))
    elapsed = time.perf_counter() - start
    values = np.array(values)
    ok = values.min() >= 0.97 and values.max() <= 1.0 and elapsed < 5
    record(report, 2, ok, f"sigma2 hbar omega / (pi Delta sigma_N) in [{values.min():.5f}, {values.max():.5f}] (band [0.97, 1.00]); {elapsed:.2f} s")


def test_criterion_03_fig3_quality_factors(report):
    start = time.perf_counter()
    cfg, tables = run_figure(3)
    elapsed = time.perf_counter() - start
    q = column(curve(tables, "fig3_Q_QP_x1e-05"), "Q")
    tls = curve(tables, "fig3_Q_TLS")
    f = column(tls, "frequency_GHz")
    mat = build_material(cfg)
    target = 3e5 / np.tanh(const.hbar * 2 * math.pi * f * 1e9 / (2 * mat.kT))
    rel = np.abs(column(tls, "Q") / target - 1).max()
    ok = q.max() < 1e7 and rel <= 1e-12 and elapsed < 10
    record(report, 3, ok, f"max Q_QP = {q.max():.4g} (limit 1e7); Q_TLS vs 3e5/tanh max rel dev {rel:.3g} (limit 1e-12); {elapsed:.2f} s")


def test_criterion_04_fig4_transmon(report):
    start = time.perf_counter()
    _, tables = run_figure(4)
    nge = curve(tables, "fig4_T1_NGE_x1e-05")
    t1 = column(nge, "T1_us")
    omega = 2 * math.pi * 5e9
    d = QpDistribution(1e-5)
    lk = 0.47e-12
    a = t1_transmon(Transmon.for_frequency(omega, 70.0, WireSegment(4.7e-13), WireSegment(0.0, 2e-11)), d, ALUMINUM)
    b = t1_transmon(Transmon.for_frequency(omega, 70.0, WireSegment(4.7e-13), WireSegment(0.0, 2e-11), True), d, ALUMINUM)
    ratio = b.rate / a.rate
    lj = Transmon.for_frequency(omega, 70.0, WireSegment(lk), WireSegment(0.0)).junction.josephson_inductance
    expected = 2 * lk / lj
    elapsed = time.perf_counter() - start
    ok = t1.min() >= 1 and t1.max() <= 100 and 1 / 3 <= ratio / expected <= 3 and elapsed < 10
    record(report, 4, ok, f"NGE T1 in [{t1.min():.3g}, {t1.max():.3g}] us (band [1, 100]); GE/NGE = {ratio:.3g} vs 2Lk/LJ = {expected:.3g}; {elapsed:.2f} s")


_DRAWS = []


@settings(max_examples=50, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.filter_too_much])
@given(
    x=st.floats(min_value=1e-9, max_value=1e-4),
    temp_mK=st.floats(min_value=10.0, max_value=30.0),
    excess=st.floats(min_value=1.0, max_value=2.0),
    ej_ec=st.floats(min_value=20.0, max_value=200.0),
    lk_pH=st.floats(min_value=0.0, max_value=1.0),
    lg_nH=st.floats(min_value=0.0, max_value=0.1),
)
def _criterion_5_draw(x, temp_mK, excess, ej_ec, lk_pH, lg_nH):
    mat = ALUMINUM.with_temperature(temp_mK * 1e-3)
    omega = 10 * excess * mat.kT / const.hbar
    t = Transmon.for_frequency(omega, ej_ec, WireSegment(lk_pH * 1e-12), WireSegment(0.0, lg_nH * 1e-9))
    assume(t.junction.josephson_inductance >= 50 * (t.electrode_kinetic_inductance + t.electrode_geometric_inductance))
    d = QpDistribution(x)
    full = t1_transmon(t, d, mat).value
    limit = t1_junction_limit(d.x_qp(mat), mat, omega)
    _DRAWS.append(abs(limit / full - 1))


def test_criterion_05_junction_limit(report):
    _DRAWS.clear()
    _criterion_5_draw()
    worst = max(_DRAWS)
    ok = len(_DRAWS) >= 50 and worst <= 0.10
    record(report, 5, ok, f"{len(_DRAWS)} draws, max relative difference {worst:.4f} (limit 0.10)")


def test_criterion_06_fig5_white_noise(report):
    start = time.perf_counter()
    cfg, tables = run_figure(5)
    elapsed = time.perf_counter() - start
    nge = curve(tables, "fig5_S_QP_NGE_x1e-05")
    f = column(nge, "frequency_Hz")
    s = column(nge, "S_value")
    band = (f >= 1e7 * (1 - 1e-12)) & (f <= 1e9 * (1 + 1e-12))
    flatness = s[band].max() / s[band].min()

    # strip the device and thermal factors, leaving sigma_1/sigma_N, then fit against ln omega
    mat = build_material(cfg)
    dev = cfg.block("device")
    fq = FluxQubit(
        WireSegment(dev["loop_kinetic_inductance_nH"] * 1e-9, dev["loop_geometric_inductance_nH"] * 1e-9),
        Junction(dev["josephson_inductance_nH"] * 1e-9),
        dev["beta"],
        dev["phase_rad"],
    )
    omega = 2 * math.pi * f
    unit = to_flux_quantum_units(qp_flux_noise_flux_qubit(fq, QpDistribution(1e-5), mat, omega, ratio=np.ones_like(omega)))
    low = const.hbar * omega < 0.05 * mat.kT
    slope = np.polyfit(np.log(omega[low]), (s / unit)[low], 1)[0]
    x = QpDistribution(1e-5).x_qp(mat)
    coefficient = -x * (2 / mat.reduced_temperature) ** 1.5 / (2 * math.sqrt(math.pi))
    slope_err = abs(slope / coefficient - 1)

    tls = curve(tables, "fig5_S_TLS")
    ft, st_ = column(tls, "frequency_Hz"), column(tls, "S_value")
    cold = const.hbar * 2 * math.pi * ft < 0.01 * mat.kT
    tls_slope = np.polyfit(np.log(ft[cold]), np.log(st_[cold]), 1)[0]
    ok = flatness < 3 and slope_err <= 0.10 and abs(tls_slope - 2) <= 0.05 and elapsed < 20
    record(
        report,
        6,
        ok,
        f"max/min over 10-1000 MHz = {flatness:.3f} (limit 3); ln-slope rel err {slope_err:.4f} (limit 0.10); "
        f"TLS slope {tls_slope:.4f} (2 +- 0.05); {elapsed:.2f} s",
    )


def test_criterion_07_nbtin_estimate(report):
    cfg = load_config(preset="nbtin")
    data = dict(cfg.data)
    data["sweep"] = {"quantity": "flux-noise", "grid": {"variable": "frequency_GHz", "values": [0.1]}}
    from qpnoise.config import parse_config

    table = run_quantity(parse_config(data))
    s = column(table, "S_QP_Phi0sq_per_Hz")[0]
    factor = max(s / 3.6e-15, 3.6e-15 / s)
    record(report, 7, factor <= 5, f"S = {s:.3g} Phi0^2/Hz at 100 MHz, factor {factor:.2f} from 3.6e-15 (limit 5; order of magnitude)")


def test_criterion_08_fig6_ranges(report):
    start = time.perf_counter()
    _, tables = run_figure(6)
    elapsed = time.perf_counter() - start

    def span(kind):
        values = np.concatenate([column(t, "T2star_us") for t in tables if f"_{kind}_" in t.name])
        return values.min(), values.max()

    def within(value, target):
        return 1 / 3 <= value / target <= 3

    nge, ge = span("NGE"), span("GE")
    ok = within(nge[0], 0.1) and within(nge[1], 1e3) and within(ge[0], 1e4) and within(ge[1], 1e8) and elapsed < 60
    record(
        report,
        8,
        ok,
        f"NGE T2* [{nge[0]:.3g}, {nge[1]:.3g}] us vs [0.1, 1e3]; GE [{ge[0]:.3g}, {ge[1]:.3g}] us vs [1e4, 1e8] (factor 3); {elapsed:.2f} s",
    )


def test_criterion_09_fdt(report):
    start = time.perf_counter()
    gfdt = max(r["gfdt_residual"] for r in random_batch(2024, 100, "arbitrary"))
    fdt = max(r["fdt_residual"] for r in random_batch(2025, 100, "quasithermal"))
    elapsed = time.perf_counter() - start
    ok = gfdt < 1e-12 and fdt < 1e-12 and elapsed < 5
    record(report, 9, ok, f"GFDT max residual {gfdt:.2e}, FDT reduction {fdt:.2e} (limit 1e-12); {elapsed:.2f} s")


def test_criterion_10_cross_path(report):
    rng = np.random.default_rng(10)
    d = QpDistribution(1e-5)
    mat = ALUMINUM
    loop = WireSegment.from_geometry(1e-6, 1e-14, 0.0, mat)
    worst = 0.0
    for ge in (False, True):
        fq = FluxQubit(WireSegment(3e-12, 6e-10), Junction(2.4e-10, 0.0, ge), 2.5, phase=0.0)
        st_ = SplitTransmon(loop, WireSegment(0.0, 2e-11), 10e-9, 0.3, capacitance_from_ej_ec(10e-9, 70.0), ge)
        omega = rng.choice([-1.0, 1.0], 20) * 2 * math.pi * 10 ** rng.uniform(6, 10.3, 20)
        r = sigma_ratio(d, mat, omega)
        for device, closed, admittance in (
            (fq, qp_flux_noise_flux_qubit, lambda ri, w: flux_qubit_admittance(fq, ri, mat, w)),
            (st_, qp_flux_noise_split_transmon, lambda ri, w: split_transmon_admittance(st_, ri, mat, w)),
        ):
            direct = closed(device, d, mat, omega, ratio=r)
            chain = np.array([flux_noise_chain(admittance(ri, abs(w)), device.total_inductance, mat.temperature, w) for ri, w in zip(r, omega)])
            worst = max(worst, float(np.max(np.abs(chain / direct - 1))))
    record(report, 10, worst <= 1e-10, f"max relative chain vs closed-form difference {worst:.2e} over 4 device variants x 20 frequencies (limit 1e-10)")


def test_criterion_11_alpha(report):
    _, tables = run_figure(6)
    meta = tables[0].metadata
    cfg = load_config(preset="fig6")
    mat = build_material(cfg)
    loop = WireSegment.from_geometry(1e-6, 1e-14, 0.0, mat)
    s = SplitTransmon(loop, WireSegment(0.0, 2e-11), 10e-9, 0.25, capacitance_from_ej_ec(10e-9, 70.0))
    d = QpDistribution(1e-5)
    t = 100 * const.hbar / mat.kT
    ratio = alpha_numeric_st(s, d, mat, t) / alpha_analytic_st(s, d, mat, t)
    agrees = abs(ratio - 1) <= 0.25
    reported = math.isclose(meta["alpha_factor_numeric_over_closed_form"], ratio, rel_tol=1e-6)
    how = "agreement within 25%" if agrees else f"constant factor {ratio:.4f} reported in output metadata"
    record(report, 11, agrees or reported, f"numeric/closed-form alpha at t = 100 hbar/kT = {ratio:.4f}; {how}")


def test_criterion_12_determinism(report, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["figure", "5", "--out", str(a)]) == 0
    assert main(["figure", "5", "--out", str(b)]) == 0
    files = sorted(p.name for p in a.glob("*.csv"))
    same = files and all((a / n).read_bytes() == (b / n).read_bytes() for n in files)
    record(report, 12, bool(same), f"{len(files)} CSV files byte-identical across two runs")
