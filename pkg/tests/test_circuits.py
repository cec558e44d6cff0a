import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qpnoise import constants as const
from qpnoise.circuits import (
    Admittance,
    ApproximationError,
    CpwResonator,
    DegenerateSuperconductorError,
    FluxQubit,
    Junction,
    SplitTransmon,
    Transmon,
    WireSegment,
    capacitance_from_ej_ec,
    check_junction_guard,
    cpw_rlc_map,
    device_frequency,
    flux_qubit_admittance,
    junction_admittance,
    junction_impedance_approx,
    kinetic_inductance,
    split_transmon_admittance,
    split_transmon_impedance,
    split_transmon_phase,
    transmon_admittance,
    transmon_impedance,
    wire_admittance,
    wire_impedance,
    wire_impedance_series,
    wire_series_impedance,
)
from qpnoise.conductivity import ALUMINUM, QpDistribution, complex_conductivity, sigma1_exact
from qpnoise.decoherence import quality_factor_cpw

OMEGA = 2 * math.pi * 5e9


def test_kinetic_inductance_value():
    # 1.5 um x 0.01 um^2 aluminum lead
    assert kinetic_inductance(1.5e-6, 1e-14, 50e-9) == pytest.approx(0.4712e-12, rel=1e-3)


def test_wire_segment_validation():
    with pytest.raises(ValueError):
        WireSegment(-1e-12)
    with pytest.raises(ValueError):
        WireSegment(1e-12, 0.0, length=0.0)
    with pytest.raises(ValueError):
        wire_impedance(WireSegment(1e-12), 1 + 1j, OMEGA)


def test_wire_impedance_forms_agree():
    w = WireSegment.from_geometry(100e-6, 1e-12, 2e-11, ALUMINUM)
    sigma = complex_conductivity(QpDistribution(1e-5), ALUMINUM, OMEGA).absolute(ALUMINUM)
    exact = wire_impedance(w, sigma, OMEGA)
    series = wire_impedance_series(w, sigma, OMEGA)
    ratio = sigma.real / abs(sigma.imag)
    assert series.imag == pytest.approx(exact.imag, rel=ratio**2 * 10)
    assert series.real == pytest.approx(exact.real, rel=ratio**2 * 10)
    # the conductivity-derived L_k matches the London value
    assert -series.imag / OMEGA == pytest.approx(w.total_inductance, rel=1e-3)


def test_degenerate_conductivity():
    w = WireSegment.from_geometry(1e-6, 1e-14, 0.0, ALUMINUM)
    with pytest.raises(DegenerateSuperconductorError):
        wire_impedance(w, 1.0 + 0j, OMEGA)


def test_wire_admittance_inverts_series_impedance():
    w = WireSegment(3e-12, 6e-10)
    y = wire_admittance(w, 1e-3, ALUMINUM, OMEGA)
    z = wire_series_impedance(w, 1e-3, ALUMINUM, OMEGA)
    assert complex(y) == pytest.approx(1 / z, rel=1e-9)


def test_admittance_passivity():
    with pytest.raises(ValueError):
        Admittance(-1.0, 0.0, OMEGA)
    y = Admittance(1e-3, 2e-3, OMEGA)
    assert y.impedance == pytest.approx(1 / complex(1e-3, 2e-3))


@pytest.mark.parametrize("phase", [0.0, 0.5, 2.0, 4.0])
def test_junction_impedance_inverse(phase):
    j = Junction(10e-9, phase)
    y = junction_admittance(j, 1e-3, ALUMINUM, OMEGA)
    z = junction_impedance_approx(j, 1e-3, ALUMINUM, OMEGA)
    # both are first order in the loss; they differ at (R / X)^2
    second_order = (z.real / z.imag) ** 2
    assert (1 / z).real == pytest.approx(y.real, rel=10 * second_order + 1e-12)
    assert (1 / z).imag == pytest.approx(y.imag, rel=10 * second_order + 1e-12)


def test_gap_engineered_junction_lossless():
    j = Junction(10e-9, 0.0, gap_engineered=True)
    assert junction_admittance(j, 1e-3, ALUMINUM, OMEGA).real == 0.0


@pytest.mark.parametrize("phase", [0.5 * math.pi, 1.5 * math.pi])
def test_guard_at_cos_zero(phase):
    with pytest.raises(ApproximationError) as err:
        check_junction_guard(1e-3, ALUMINUM, OMEGA, phase)
    assert err.value.phase == phase


def test_guard_tightens_with_loss():
    phi = 0.5 * math.pi - 1e-3
    check_junction_guard(1e-6, ALUMINUM, OMEGA, phi)
    with pytest.raises(ApproximationError):
        check_junction_guard(1e3, ALUMINUM, OMEGA, phi)


def test_junction_phase_range():
    with pytest.raises(ValueError):
        Junction(1e-9, 2 * math.pi)


@pytest.mark.parametrize("f_GHz", [2.0, 6.0, 10.0])
def test_cpw_design_frequency(f_GHz):
    omega = 2 * math.pi * f_GHz * 1e9
    c = CpwResonator.for_frequency(omega, 1e-12, ALUMINUM)
    assert c.omega == pytest.approx(omega, rel=1e-12)
    assert c.wire.total_inductance == pytest.approx(math.pi * 50 / omega, rel=1e-12)


def test_cpw_rlc_quality_factor_matches_closed_form():
    omega = 2 * math.pi * 6e9
    c = CpwResonator.for_frequency(omega, 1e-12, ALUMINUM)
    d = QpDistribution(1e-5)
    ratio = sigma1_exact(d, ALUMINUM, omega)
    rlc = cpw_rlc_map(c, ratio, ALUMINUM)
    assert 1 / math.sqrt(rlc.inductance * rlc.capacitance) == pytest.approx(omega, rel=1e-12)
    q_rlc = rlc.resistance * math.sqrt(rlc.capacitance / rlc.inductance)
    assert q_rlc == pytest.approx(quality_factor_cpw(c, d, ALUMINUM).value, rel=1e-12)


@pytest.mark.parametrize("ratio", [40.0, 70.0, 150.0])
def test_transmon_design_round_trip(ratio):
    t = Transmon.for_frequency(OMEGA, ratio, WireSegment(4.7e-13), WireSegment(0.0, 2e-11))
    assert device_frequency(t) == pytest.approx(OMEGA, rel=1e-12)
    assert t.ej_ec == pytest.approx(ratio, rel=1e-12)
    # hbar Omega = sqrt(8 E_J E_C)
    ec = const.e**2 / (2 * t.capacitance)
    assert const.hbar * OMEGA == pytest.approx(math.sqrt(8 * t.junction.josephson_energy * ec), rel=1e-12)


def test_transmon_at_5GHz_parameters():
    t = Transmon.for_frequency(OMEGA, 70.0, WireSegment(4.7e-13), WireSegment(0.0, 2e-11))
    assert t.junction.josephson_inductance == pytest.approx(11.05e-9, rel=2e-3)
    assert t.capacitance == pytest.approx(91.7e-15, rel=2e-3)


@pytest.mark.parametrize("ge", [False, True])
def test_transmon_composition_matches_closed_form(ge):
    t = Transmon.for_frequency(OMEGA, 70.0, WireSegment(4.7e-13), WireSegment(0.0, 2e-11), ge)
    y = transmon_admittance(t, 1e-3, ALUMINUM, OMEGA)
    z = transmon_impedance(t, 1e-3, ALUMINUM, OMEGA)
    second_order = (z.real / z.imag) ** 2
    assert (1 / z).real == pytest.approx(y.real, rel=10 * second_order + 1e-12)
    assert (1 / z).imag == pytest.approx(y.imag, rel=10 * second_order + 1e-12)


def test_flux_qubit_working_phase_and_admittance():
    f = FluxQubit(WireSegment(3e-12, 6e-10), Junction(2.4e-10), 2.5)
    assert f.working_phase == pytest.approx(math.pi + 3.0, abs=1e-12)
    nge = flux_qubit_admittance(f, 1e-3, ALUMINUM, OMEGA, phase=0.0)
    ge = flux_qubit_admittance(FluxQubit(f.loop, Junction(2.4e-10, 0.0, True), 2.5), 1e-3, ALUMINUM, OMEGA, phase=0.0)
    pref = 1e-3 * const.hbar / (math.pi * ALUMINUM.gap)
    assert ge == pytest.approx(pref * 3e-12 / (6.03e-10) ** 2, rel=1e-12)
    assert nge - ge == pytest.approx(pref / 2.4e-10, rel=1e-12)
    with pytest.raises(ValueError):
        FluxQubit(f.loop, f.junction, 1.0)


@pytest.mark.parametrize("flux", [0.1, 0.3, 0.6, 0.9, 1.4])
def test_split_transmon_branch_rule(flux):
    phi, p1, p2 = split_transmon_phase(flux)
    assert math.cos(phi) > 0
    # |cos phi| equals |cos(pi Phi/Phi0)| on both branches
    assert abs(math.cos(phi)) == pytest.approx(abs(math.cos(math.pi * flux)), rel=1e-12)
    assert p1 - p2 == pytest.approx(2 * math.pi * flux, abs=1e-12) or p1 + p2 == pytest.approx(2 * math.pi, abs=1e-12)


def test_split_transmon_half_flux_rejected():
    with pytest.raises(ApproximationError):
        split_transmon_phase(0.5)


def fig6_device(flux=0.3, ge=False):
    loop = WireSegment.from_geometry(1e-6, 1e-14, 0.0, ALUMINUM)
    lj = 10e-9
    return SplitTransmon(loop, WireSegment(0.0, 2e-11), lj, flux, capacitance_from_ej_ec(lj, 70.0), ge)


def test_fig6_capacitance_and_frequency():
    s = fig6_device(0.3)
    assert s.capacitance == pytest.approx(82.95e-15, rel=1e-3)
    assert device_frequency(s) / (2 * math.pi) == pytest.approx(5.99e9, rel=2e-3)
    assert s.kinetic_inductance == pytest.approx(0.5 * 0.314e-12, rel=1e-2)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99), st.booleans(), st.floats(min_value=1e-6, max_value=1e-2))
def test_split_transmon_composition_matches_closed_form(flux, ge, ratio):
    assume(abs(math.cos(math.pi * flux)) > 0.05)
    s = fig6_device(flux, ge)
    y = split_transmon_admittance(s, ratio, ALUMINUM, OMEGA)
    z = split_transmon_impedance(s, ratio, ALUMINUM, OMEGA)
    second_order = (z.real / z.imag) ** 2
    assert (1 / z).real == pytest.approx(y.real, rel=10 * second_order + 1e-12)
    assert (1 / z).imag == pytest.approx(y.imag, rel=10 * second_order + 1e-12)


def test_split_transmon_junction_inductance():
    s = fig6_device(0.25)
    assert s.junction_inductance == pytest.approx(10e-9 / (2 * math.cos(0.25 * math.pi)), rel=1e-12)
    assert s.with_flux(0.1).flux == 0.1
    assert s.junction(1).phase == pytest.approx(0.25 * math.pi)
