"""Two-fluid wire impedance, junction admittance and composed device admittances.

Sign convention: inductors have impedance ``-i omega L`` so their
admittance is ``+i / (omega L)``.  ``ratio`` arguments are the normalized
conductivity sigma_1 / sigma_N at the frequency in question; the loss
prefactor that multiplies every real part is ``ratio * hbar / (pi Delta)``.
"""

import math
from dataclasses import dataclass, field

from . import constants as const

__all__ = [
    "ApproximationError",
    "DegenerateSuperconductorError",
    "WireSegment",
    "Junction",
    "CpwResonator",
    "Transmon",
    "FluxQubit",
    "SplitTransmon",
    "Admittance",
    "RlcMap",
    "kinetic_inductance",
    "josephson_inductance_from_energy",
    "josephson_energy",
    "capacitance_from_ej_ec",
    "wire_impedance",
    "wire_impedance_series",
    "wire_series_impedance",
    "wire_admittance",
    "junction_admittance",
    "junction_impedance_approx",
    "cpw_rlc_map",
    "transmon_admittance",
    "transmon_impedance",
    "flux_qubit_admittance",
    "split_transmon_admittance",
    "split_transmon_impedance",
    "split_transmon_phase",
    "series_admittance",
    "check_junction_guard",
    "device_frequency",
]

GUARD_FACTOR = 100.0
SILICON_INDEX = math.sqrt(11.7)


class ApproximationError(ValueError):
    """The small-loss junction impedance approximation does not hold at ``phase``."""

    def __init__(self, message, phase):
        super().__init__(message)
        self.phase = phase


class DegenerateSuperconductorError(ValueError):
    """sigma_2 = 0: the wire carries no supercurrent."""


def _loss_prefactor(ratio, mat):
    return ratio * const.hbar / (math.pi * mat.gap)


def kinetic_inductance(length, area, penetration_depth):
    """L_k = mu_0 lambda^2 l / A (H)."""
    return const.mu_0 * penetration_depth**2 * length / area


@dataclass(frozen=True)
class WireSegment:
    """Superconducting wire in the two-fluid model.

    Built either from geometry (:meth:`from_geometry`) or directly from
    lumped kinetic and geometric inductances.
    """

    kinetic_inductance: float
    geometric_inductance: float = 0.0
    length: float = None
    area: float = None

    def __post_init__(self):
        if not self.kinetic_inductance >= 0:
            raise ValueError("kinetic inductance must be non-negative")
        if not self.geometric_inductance >= 0:
            raise ValueError("geometric inductance must be non-negative")
        for name in ("length", "area"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @classmethod
    def from_geometry(cls, length, area, geometric_inductance, mat):
        return cls(
            kinetic_inductance=kinetic_inductance(length, area, mat.penetration_depth),
            geometric_inductance=geometric_inductance,
            length=length,
            area=area,
        )

    @property
    def total_inductance(self):
        return self.kinetic_inductance + self.geometric_inductance

    def _require_geometry(self):
        if self.length is None or self.area is None:
            raise ValueError("wire geometry (length, area) is required here")


def josephson_energy(josephson_inductance):
    """E_J = (Phi_0 / 2 pi)^2 / L_J (J)."""
    return (const.Phi_0 / (2 * math.pi)) ** 2 / josephson_inductance


def josephson_inductance_from_energy(ej):
    return (const.Phi_0 / (2 * math.pi)) ** 2 / ej


def capacitance_from_ej_ec(josephson_inductance, ej_ec):
    """Capacitance giving E_J / E_C = ``ej_ec`` with E_C = e^2 / 2C."""
    ec = josephson_energy(josephson_inductance) / ej_ec
    return const.e**2 / (2 * ec)


@dataclass(frozen=True)
class Junction:
    josephson_inductance: float
    phase: float = 0.0
    gap_engineered: bool = False

    def __post_init__(self):
        if not self.josephson_inductance > 0:
            raise ValueError("Josephson inductance must be positive")
        if not 0.0 <= self.phase < 2 * math.pi:
            raise ValueError(f"phase must lie in [0, 2 pi), got {self.phase}")

    @classmethod
    def from_energy(cls, ej, phase=0.0, gap_engineered=False):
        return cls(josephson_inductance_from_energy(ej), phase, gap_engineered)

    @property
    def josephson_energy(self):
        return josephson_energy(self.josephson_inductance)


@dataclass(frozen=True)
class Admittance:
    """Complex admittance 1/Z = real + i imag (S) at angular frequency omega."""

    real: float
    imag: float
    omega: float

    def __post_init__(self):
        if self.real < 0:
            raise ValueError(f"admittance real part must be non-negative (passivity), got {self.real}")

    def __complex__(self):
        return complex(self.real, self.imag)

    @property
    def impedance(self):
        return 1.0 / complex(self)


def wire_impedance(w, sigma, omega):
    """Z = l / (sigma A) - i omega L_g for absolute complex conductivity sigma (S/m)."""
    w._require_geometry()
    sigma = complex(sigma)
    if sigma.imag == 0:
        raise DegenerateSuperconductorError("sigma_2 = 0")
    return w.length / (sigma * w.area) - 1j * omega * w.geometric_inductance


def wire_impedance_series(w, sigma, omega):
    """Series form R_s - i omega (L_k + L_g) with R_s = sigma_1 l / (sigma_2^2 A).

    L_k here is the conductivity-derived l / (omega sigma_2 A).
    """
    w._require_geometry()
    sigma = complex(sigma)
    if sigma.imag == 0:
        raise DegenerateSuperconductorError("sigma_2 = 0")
    rs = sigma.real * w.length / (sigma.imag**2 * w.area)
    lk = w.length / (omega * sigma.imag * w.area)
    return complex(rs, -omega * (lk + w.geometric_inductance))


def wire_series_impedance(w, ratio, mat, omega):
    """Series impedance with sigma_2 at its London value: R_s = ratio hbar omega^2 L_k / (pi Delta)."""
    rs = _loss_prefactor(ratio, mat) * omega**2 * w.kinetic_inductance
    return complex(rs, -omega * w.total_inductance)


def wire_admittance(w, ratio, mat, omega):
    lk, lt = w.kinetic_inductance, w.total_inductance
    return Admittance(_loss_prefactor(ratio, mat) * lk / lt**2, 1.0 / (omega * lt), omega)


def junction_admittance(j, ratio, mat, omega, phase=None):
    phi = j.phase if phase is None else phase
    real = 0.0 if j.gap_engineered else _loss_prefactor(ratio, mat) * math.cos(0.5 * phi) ** 2 / j.josephson_inductance
    return Admittance(real, abs(math.cos(phi)) / (omega * j.josephson_inductance), omega)


def check_junction_guard(ratio, mat, omega, phi):
    c2h = math.cos(0.5 * phi) ** 2
    lhs = abs(math.cos(phi)) / c2h if c2h > 0 else math.inf
    rhs = GUARD_FACTOR * ratio * const.hbar * omega / (math.pi * mat.gap)
    if abs(math.cos(phi)) < 1e-12 or not lhs > rhs:
        raise ApproximationError(
            f"junction impedance approximation invalid at phase {phi:.6g} rad "
            f"(|cos phi|/cos^2(phi/2) = {lhs:.3g} <= {rhs:.3g})",
            phi,
        )


def junction_impedance_approx(j, ratio, mat, omega, phase=None):
    """Small-loss junction impedance; raises ApproximationError near |cos phi| = 0."""
    phi = j.phase if phase is None else phase
    check_junction_guard(ratio, mat, omega, phi)
    lj = j.josephson_inductance
    cos_phi = math.cos(phi)
    real = 0.0
    if not j.gap_engineered:
        real = _loss_prefactor(ratio, mat) * omega**2 * lj * math.cos(0.5 * phi) ** 2 / cos_phi**2
    return complex(real, -omega * lj / abs(cos_phi))


def series_admittance(*impedances):
    """1/Z of impedances in series, as a plain complex number."""
    return 1.0 / sum(complex(z) for z in impedances)


@dataclass(frozen=True)
class RlcMap:
    resistance: float
    inductance: float
    capacitance: float
    resistance_per_length: float


@dataclass(frozen=True)
class CpwResonator:
    """Half-wavelength CPW; the lowest mode is at pi / (l sqrt(L' C'))."""

    wire: WireSegment
    characteristic_impedance: float = 50.0

    def __post_init__(self):
        if not self.characteristic_impedance > 0:
            raise ValueError("characteristic impedance must be positive")
        self.wire._require_geometry()

    @classmethod
    def for_frequency(cls, omega, area, mat, characteristic_impedance=50.0, index=SILICON_INDEX):
        """Length c pi / (n omega) and L_k + L_g = pi Z0 / omega."""
        length = const.c * math.pi / (index * omega)
        lk = kinetic_inductance(length, area, mat.penetration_depth)
        lg = math.pi * characteristic_impedance / omega - lk
        if lg < 0:
            raise ValueError("kinetic inductance exceeds pi Z0 / omega")
        return cls(WireSegment(lk, lg, length, area), characteristic_impedance)

    @property
    def inductance_per_length(self):
        return self.wire.total_inductance / self.wire.length

    @property
    def capacitance_per_length(self):
        return self.inductance_per_length / self.characteristic_impedance**2

    @property
    def omega(self):
        return math.pi / (self.wire.length * math.sqrt(self.inductance_per_length * self.capacitance_per_length))


def cpw_rlc_map(c, ratio, mat):
    """Lumped parallel RLC near the lowest mode, loss evaluated at that mode."""
    omega = c.omega
    ell = c.wire.length
    lpl, cpl = c.inductance_per_length, c.capacitance_per_length
    rpl = _loss_prefactor(ratio, mat) * omega**2 * c.wire.kinetic_inductance / ell
    resistance = 2 * lpl / (ell * rpl * cpl) if rpl > 0 else math.inf
    return RlcMap(resistance, 2 * ell * lpl / math.pi**2, ell * cpl / 2, rpl)


@dataclass(frozen=True)
class Transmon:
    """Electrode-junction-electrode transmon.

    Each of the two identical electrodes is a lead plus a pad in series;
    its inductances are the sums over both segments (leads usually carry
    the kinetic part, pads the geometric part).
    """

    lead: WireSegment
    pad: WireSegment
    junction: Junction
    capacitance: float

    def __post_init__(self):
        if not self.capacitance > 0:
            raise ValueError("capacitance must be positive")

    @classmethod
    def for_frequency(cls, omega, ej_ec, lead, pad, gap_engineered=False):
        """L_J and C chosen so that hbar omega = sqrt(8 E_J E_C) at fixed E_J / E_C."""
        if not ej_ec > 1:
            raise ValueError("E_J / E_C must exceed 1")
        ej = const.hbar * omega * math.sqrt(ej_ec / 8.0)
        c = math.sqrt(2 * const.e**4 * ej_ec) / (const.hbar * omega)
        return cls(lead, pad, Junction.from_energy(ej, 0.0, gap_engineered), c)

    @property
    def electrode_kinetic_inductance(self):
        return self.lead.kinetic_inductance + self.pad.kinetic_inductance

    @property
    def electrode_geometric_inductance(self):
        return self.lead.geometric_inductance + self.pad.geometric_inductance

    @property
    def total_inductance(self):
        return self.junction.josephson_inductance + 2 * (
            self.electrode_kinetic_inductance + self.electrode_geometric_inductance
        )

    @property
    def ej_ec(self):
        return self.junction.josephson_energy / (const.e**2 / (2 * self.capacitance))


def transmon_admittance(t, ratio, mat, omega):
    lk = t.electrode_kinetic_inductance
    lt = t.total_inductance
    lossy = 2 * lk if t.junction.gap_engineered else t.junction.josephson_inductance + 2 * lk
    return Admittance(_loss_prefactor(ratio, mat) * lossy / lt**2, 1.0 / (omega * lt), omega)


def transmon_impedance(t, ratio, mat, omega):
    """Z_J(0) + 2 Z_electrode by complex arithmetic (exact junction inverse)."""
    zj = junction_admittance(t.junction, ratio, mat, omega, phase=0.0).impedance
    electrode = WireSegment(t.electrode_kinetic_inductance, t.electrode_geometric_inductance)
    return zj + 2 * wire_series_impedance(electrode, ratio, mat, omega)


@dataclass(frozen=True)
class FluxQubit:
    """Junction shunted by a wire loop, beta = E_J / E_L > 1.

    ``phase`` defaults to the double-well minimum pi + sqrt(6 (beta - 1)),
    taken modulo 2 pi.
    """

    loop: WireSegment
    junction: Junction
    beta: float
    phase: float = None
    capacitance: float = None

    def __post_init__(self):
        if not self.beta > 1:
            raise ValueError("flux qubit requires beta > 1")

    @property
    def working_phase(self):
        if self.phase is not None:
            return self.phase
        return math.fmod(math.pi + math.sqrt(6 * (self.beta - 1)), 2 * math.pi)

    @property
    def total_inductance(self):
        return 1.0 / (1.0 / self.junction.josephson_inductance + 1.0 / self.loop.total_inductance)


def flux_qubit_admittance(f, ratio, mat, omega, phase=None):
    """Real part of the flux qubit total admittance (S)."""
    phi = f.working_phase if phase is None else phase
    wire = f.loop.kinetic_inductance / f.loop.total_inductance**2
    junction = 0.0 if f.junction.gap_engineered else math.cos(0.5 * phi) ** 2 / f.junction.josephson_inductance
    return _loss_prefactor(ratio, mat) * (wire + junction)


def split_transmon_phase(flux):
    """(phi, phi_1, phi_2) for reduced flux Phi/Phi_0 following the cos-sign branch rule."""
    x = math.pi * flux
    c = math.cos(x)
    if abs(c) < 1e-12:
        raise ApproximationError("cos(pi Phi/Phi_0) = 0: the split transmon has no working point", x)
    if c > 0:
        return x, x, -x
    return math.pi + x, math.pi + x, math.pi - x


@dataclass(frozen=True)
class SplitTransmon:
    """Two identical junctions in a small loop, with pads.

    ``flux`` is Phi/Phi_0.  Aggregate inductances follow
    L_k = 2 L_kp + L_kl / 2 and L_g = 2 L_gp + L_gl / 2 with ``loop_half``
    one half of the loop wire and ``pad`` one pad electrode.
    """

    loop_half: WireSegment
    pad: WireSegment
    josephson_inductance: float
    flux: float
    capacitance: float
    gap_engineered: bool = False
    large_loop_energy: bool = field(default=True)

    def __post_init__(self):
        if not self.josephson_inductance > 0:
            raise ValueError("Josephson inductance must be positive")
        if not self.capacitance > 0:
            raise ValueError("capacitance must be positive")
        if not self.large_loop_energy:
            raise ValueError("the single-phase reduction needs E_L >> E_J / 4")
        split_transmon_phase(self.flux)

    @property
    def phase(self):
        return split_transmon_phase(self.flux)[0]

    @property
    def kinetic_inductance(self):
        return 2 * self.pad.kinetic_inductance + 0.5 * self.loop_half.kinetic_inductance

    @property
    def geometric_inductance(self):
        return 2 * self.pad.geometric_inductance + 0.5 * self.loop_half.geometric_inductance

    @property
    def junction_inductance(self):
        """Effective L_J / |2 cos(pi Phi/Phi_0)| of the junction pair."""
        return self.josephson_inductance / abs(2 * math.cos(math.pi * self.flux))

    @property
    def total_inductance(self):
        return self.junction_inductance + self.kinetic_inductance + self.geometric_inductance

    @property
    def lossy_inductance(self):
        """Bracket multiplying the loss prefactor: junction term (NGE only) plus L_k."""
        if self.gap_engineered:
            return self.kinetic_inductance
        phi = self.phase
        return self.josephson_inductance * math.cos(0.5 * phi) ** 2 / (2 * math.cos(phi) ** 2) + self.kinetic_inductance

    def with_flux(self, flux):
        return SplitTransmon(
            self.loop_half, self.pad, self.josephson_inductance, flux, self.capacitance, self.gap_engineered
        )

    def junction(self, which=1):
        phi = split_transmon_phase(self.flux)[which]
        return Junction(self.josephson_inductance, math.fmod(phi + 2 * math.pi, 2 * math.pi), self.gap_engineered)


def split_transmon_admittance(s, ratio, mat, omega):
    check_junction_guard(ratio, mat, omega, s.phase)
    lt = s.total_inductance
    return Admittance(_loss_prefactor(ratio, mat) * s.lossy_inductance / lt**2, 1.0 / (omega * lt), omega)


def split_transmon_impedance(s, ratio, mat, omega):
    """2 Z_pad + Z_loop / 2 + Z_J(phi) / 2 by complex arithmetic."""
    zj = junction_impedance_approx(s.junction(1), ratio, mat, omega, phase=s.phase)
    return (
        2 * wire_series_impedance(s.pad, ratio, mat, omega)
        + 0.5 * wire_series_impedance(s.loop_half, ratio, mat, omega)
        + 0.5 * zj
    )


def device_frequency(d):
    """Angular frequency (rad/s) of the device's working mode."""
    if isinstance(d, CpwResonator):
        return d.omega
    if isinstance(d, Transmon):
        return 1.0 / math.sqrt(d.junction.josephson_inductance * d.capacitance)
    if isinstance(d, SplitTransmon):
        return math.sqrt(2 * abs(math.cos(math.pi * d.flux)) / (d.josephson_inductance * d.capacitance))
    if isinstance(d, FluxQubit):
        if d.capacitance is None:
            raise ValueError("flux qubit frequency needs a capacitance")
        return 1.0 / math.sqrt(d.total_inductance * d.capacitance)
    raise TypeError(f"unsupported device {type(d).__name__}")
