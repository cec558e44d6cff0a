"""Charge and flux noise spectra from admittances, TLS and spin-impurity spectra.

Spectra are two-sided, S(omega) for omega of either sign.  Charge noise is
in C^2 s and flux noise in Wb^2 s.  Flux values are reported in Phi_0^2/Hz
by dividing by Phi_0^2 only: S(omega) per unit angular frequency already
carries units of Wb^2 / Hz, and the quoted literature values
(e.g. 16 pi 1e-11 Phi_0^2 / omega) use the same convention.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import constants as const
from .circuits import check_junction_guard
from .conductivity import sigma1_approx, sigma1_exact
from .numerics import Bracket, find_root

__all__ = [
    "DivergenceError",
    "NoiseSpectrum",
    "TlsParameters",
    "bose_einstein",
    "thermal_factor",
    "charge_noise_from_admittance",
    "flux_noise_from_charge",
    "flux_noise_chain",
    "sigma_ratio",
    "qp_flux_noise_flux_qubit",
    "qp_flux_noise_split_transmon",
    "qp_flux_noise_junction",
    "tls_charge_noise",
    "tls_flux_noise",
    "spin_flux_noise",
    "to_flux_quantum_units",
    "from_flux_quantum_units",
    "spectrum_crossing",
    "SPIN_NOISE_AMPLITUDE",
]

#: Spin-impurity 1/omega amplitude in Phi_0^2 (S = A / omega).
SPIN_NOISE_AMPLITUDE = 16 * math.pi * 1e-11

CHARGE_UNITS = "C^2 s"
FLUX_UNITS = "Wb^2 s"
FLUX_QUANTUM_UNITS = "Phi0^2/Hz"


class DivergenceError(ZeroDivisionError):
    """The spectrum diverges at omega = 0."""


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _check_nonzero(omega):
    if np.any(np.asarray(omega) == 0):
        raise DivergenceError("spectrum diverges at omega = 0; integrate around it")


def bose_einstein(omega, T):
    """n_B(omega) = 1 / (exp(hbar omega / k_B T) - 1), either sign of omega."""
    return _out(thermal_factor(omega, T) - 1.0)


def thermal_factor(omega, T):
    """n_B(omega) + 1, written as -1 / expm1(-x) so it holds for both signs; T = 0 allowed."""
    omega = np.asarray(omega, dtype=float)
    if T == 0:
        return _out(np.where(omega > 0, 1.0, 0.0))
    if T < 0:
        raise ValueError("temperature must be non-negative")
    x = const.hbar * omega / (const.k_B * T)
    with np.errstate(over="ignore", divide="ignore"):
        return _out(-1.0 / np.expm1(-x))


def charge_noise_from_admittance(admittance_real, T, omega):
    """S_Q(omega) = 2 hbar (1/omega) Re{1/Z(|omega|)} [n_B(omega) + 1].

    ``admittance_real`` is Re{1/Z} evaluated at |omega| (an
    :class:`~qpnoise.circuits.Admittance` is accepted too).  The 1/omega
    factor makes Im chi odd, so negative omega gives the absorption side.
    """
    re = getattr(admittance_real, "real", admittance_real)
    _check_nonzero(omega)
    omega = np.asarray(omega, dtype=float)
    return _out(2 * const.hbar * np.asarray(re) / omega * thermal_factor(omega, T))


def flux_noise_from_charge(s_q, inductance, omega):
    """S_Phi = (L omega)^2 S_Q."""
    if not inductance > 0:
        raise ValueError("inductance must be positive")
    return _out((inductance * np.asarray(omega, dtype=float)) ** 2 * np.asarray(s_q))


def flux_noise_chain(admittance_real, inductance, T, omega):
    """Flux noise assembled through the charge-noise step."""
    return flux_noise_from_charge(charge_noise_from_admittance(admittance_real, T, omega), inductance, omega)


def sigma_ratio(dist, mat, omega, sigma1="exact"):
    """sigma_1(|omega|) / sigma_N by quadrature (``"exact"``) or the K0 closed form (``"approx"``)."""
    w = np.abs(np.asarray(omega, dtype=float))
    if sigma1 == "exact":
        return sigma1_exact(dist, mat, w)
    if sigma1 == "approx":
        return sigma1_approx(dist.x_qp(mat), mat, w)
    raise ValueError(f"unknown sigma1 method {sigma1!r}")


def _ratio(dist, mat, omega, sigma1, ratio):
    return sigma_ratio(dist, mat, omega, sigma1) if ratio is None else np.asarray(ratio, dtype=float)


def qp_flux_noise_flux_qubit(f, dist, mat, omega, sigma1="exact", phase=None, ratio=None):
    """Resident-QP flux noise of a flux qubit (Wb^2 s).

    S = (sigma_1/sigma_N) (2 hbar^2 omega L^2 / pi Delta)
        [L_k/(L_k+L_g)^2 + cos^2(phi/2)/L_J] [n_B + 1];
    the junction term is dropped for a gap-engineered junction.
    """
    _check_nonzero(omega)
    omega = np.asarray(omega, dtype=float)
    phi = f.working_phase if phase is None else phase
    bracket = f.loop.kinetic_inductance / f.loop.total_inductance**2
    if not f.junction.gap_engineered:
        bracket += math.cos(0.5 * phi) ** 2 / f.junction.josephson_inductance
    r = _ratio(dist, mat, omega, sigma1, ratio)
    pref = 2 * const.hbar**2 * omega * f.total_inductance**2 / (math.pi * mat.gap)
    return _out(r * pref * bracket * thermal_factor(omega, mat.temperature))


def qp_flux_noise_split_transmon(s, dist, mat, omega, sigma1="exact", ratio=None):
    """Resident-QP flux noise of a split transmon (Wb^2 s).

    S = (sigma_1/sigma_N) (2 hbar^2 omega / pi Delta)
        [L_J c^2 / (2 cos^2(pi Phi/Phi_0)) + L_k] [n_B + 1]
    with c = cos(pi Phi / 2 Phi_0) when cos(pi Phi/Phi_0) > 0 and
    c = sin(pi Phi / 2 Phi_0) otherwise; only L_k remains for GE junctions.
    """
    _check_nonzero(omega)
    omega = np.asarray(omega, dtype=float)
    r = _ratio(dist, mat, omega, sigma1, ratio)
    # the guard tightens with ratio * omega, so the largest product decides
    r_flat = np.ravel(np.broadcast_to(r, omega.shape))
    w_flat = np.ravel(np.abs(omega))
    k = int(np.argmax(r_flat * w_flat))
    check_junction_guard(float(r_flat[k]), mat, float(w_flat[k]), s.phase)
    x = math.pi * s.flux
    half = math.cos(0.5 * x) if math.cos(x) > 0 else math.sin(0.5 * x)
    bracket = s.kinetic_inductance
    if not s.gap_engineered:
        bracket += s.josephson_inductance * half**2 / (2 * math.cos(x) ** 2)
    pref = 2 * const.hbar**2 * omega / (mat.gap * math.pi)
    return _out(r * pref * bracket * thermal_factor(omega, mat.temperature))


def qp_flux_noise_junction(josephson_inductance, dist, mat, omega, sigma1="exact", ratio=None):
    """Junction-only estimate with L ~ L_J and cos^2(phi/2) = 1 (Wb^2 s).

    S = (sigma_1/sigma_N)(2 hbar^2 omega L_J / pi Delta)[n_B + 1].
    """
    _check_nonzero(omega)
    omega = np.asarray(omega, dtype=float)
    r = _ratio(dist, mat, omega, sigma1, ratio)
    pref = 2 * const.hbar**2 * omega * josephson_inductance / (math.pi * mat.gap)
    return _out(r * pref * thermal_factor(omega, mat.temperature))


@dataclass(frozen=True)
class TlsParameters:
    """Participation ratios and TLS loss-tangent amplitudes of surface and bulk dielectrics."""

    p_surface: float
    p_bulk: float
    tan_surface: float = 1e-3
    tan_bulk: float = 1e-6

    def __post_init__(self):
        for name in ("p_surface", "p_bulk"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        for name in ("tan_surface", "tan_bulk"):
            if not getattr(self, name) >= 0.0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def amplitude(self):
        """p_S tan(delta_S) + p_B tan(delta_B), the loss tangent before the tanh factor."""
        return self.p_surface * self.tan_surface + self.p_bulk * self.tan_bulk

    def loss_tangent(self, T, omega):
        """Unsaturated average loss tangent, odd in omega."""
        omega = np.asarray(omega, dtype=float)
        if T == 0:
            return _out(self.amplitude * np.sign(omega))
        return _out(self.amplitude * np.tanh(const.hbar * omega / (2 * const.k_B * T)))


def tls_charge_noise(tls, capacitance, T, omega):
    """S_Q = 2 hbar C <tan delta> [n_B + 1]."""
    return _out(2 * const.hbar * capacitance * np.asarray(tls.loss_tangent(T, omega)) * thermal_factor(omega, T))


def tls_flux_noise(tls, inductance, capacitance, T, omega):
    """S_Phi = 2 hbar L^2 omega^2 C <tan delta> [n_B + 1]."""
    return _out((inductance * np.asarray(omega, dtype=float)) ** 2 * tls_charge_noise(tls, capacitance, T, omega))


def spin_flux_noise(omega):
    """Spin-impurity flux noise 16 pi 1e-11 Phi_0^2 / |omega| (Wb^2 s)."""
    _check_nonzero(omega)
    return _out(SPIN_NOISE_AMPLITUDE * const.Phi_0**2 / np.abs(np.asarray(omega, dtype=float)))


def to_flux_quantum_units(s_phi):
    """Wb^2 s to Phi_0^2/Hz."""
    return _out(np.asarray(s_phi) / const.Phi_0**2)


def from_flux_quantum_units(s_phi):
    return _out(np.asarray(s_phi) * const.Phi_0**2)


def spectrum_crossing(first, second, omega_lo, omega_hi, tol=1e-10):
    """Angular frequency where two spectra (callables of omega) are equal, by bisection in ln omega."""

    def objective(v):
        w = math.exp(v)
        return math.log(float(first(w))) - math.log(float(second(w)))

    v = find_root(objective, Bracket(math.log(omega_lo), math.log(omega_hi)), tol=tol)
    return math.exp(v)


@dataclass
class NoiseSpectrum:
    """Sampled spectrum with provenance.

    ``kind`` is ``"charge"`` or ``"flux"``; ``units`` one of ``"C^2 s"``,
    ``"Wb^2 s"`` or ``"Phi0^2/Hz"``.
    """

    kind: str
    omega: np.ndarray
    values: np.ndarray
    units: str
    temperature: float
    provenance: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in ("charge", "flux"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        allowed = (CHARGE_UNITS,) if self.kind == "charge" else (FLUX_UNITS, FLUX_QUANTUM_UNITS)
        if self.units not in allowed:
            raise ValueError(f"units {self.units!r} do not match kind {self.kind!r}")
        if self.omega.shape != self.values.shape:
            raise ValueError("omega and values must have the same shape")
        if np.any(self.values[self.omega > 0] < 0):
            raise ValueError("spectrum must be non-negative at positive frequencies")

    def in_flux_quantum_units(self):
        if self.kind != "flux":
            raise ValueError("only flux spectra convert to Phi0^2/Hz")
        if self.units == FLUX_QUANTUM_UNITS:
            return self
        return NoiseSpectrum(
            "flux", self.omega, to_flux_quantum_units(self.values), FLUX_QUANTUM_UNITS,
            self.temperature, self.provenance, dict(self.metadata),
        )

    def rows(self):
        for o, v in zip(self.omega, self.values):
            yield float(o), float(o) / (2 * math.pi), float(v), self.units

    def to_csv(self, fh=None, float_format="%.11e"):
        """Write columns omega_rad_s, frequency_Hz, S_value, units; returns text if ``fh`` is None."""
        own = fh is None
        fh = io.StringIO() if own else fh
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["omega_rad_s", "frequency_Hz", "S_value", "units"])
        for o, f, v, u in self.rows():
            writer.writerow([float_format % o, float_format % f, float_format % v, u])
        return fh.getvalue() if own else None

    def to_dict(self):
        return {
            "kind": self.kind,
            "units": self.units,
            "temperature_K": self.temperature,
            "provenance": self.provenance,
            "metadata": self.metadata,
            "omega_rad_s": self.omega.tolist(),
            "frequency_Hz": (self.omega / (2 * math.pi)).tolist(),
            "S_value": self.values.tolist(),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)
