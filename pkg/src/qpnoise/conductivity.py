"""Quasiparticle occupations, normalized QP density and Mattis-Bardeen conductivity.

Energies are SI (J), frequencies angular (rad/s), temperatures K.  The
integrals are carried out in reduced units ``e = E / Delta``,
``w = hbar omega / Delta`` and ``tau = k_B T / Delta``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import constants as const
from .numerics import DEFAULT_QUADRATURE, bessel_k0, bessel_k0e, integrate_singular

__all__ = [
    "DomainError",
    "Material",
    "QpDistribution",
    "ComplexConductivity",
    "ALUMINUM",
    "occupation",
    "xqp_total",
    "xqp_from_occupation",
    "sigma1_exact",
    "sigma1_approx",
    "sigma1_lowfreq",
    "sigma1_highfreq",
    "sigma2_exact",
    "sigma2_approx",
    "sigma_n",
    "complex_conductivity",
    "approximation_window",
    "Sigma1Table",
]

QUASITHERMAL = "quasithermal"
THERMAL = "thermal"

# Occupations are integrated up to Delta + 60 k_B T.
_CUTOFF_KT = 60.0


class DomainError(ValueError):
    """An argument lies outside the range where a formula is defined."""


@dataclass(frozen=True)
class Material:
    """Superconductor parameters.

    Parameters
    ----------
    gap:
        Gap energy Delta (J).
    penetration_depth:
        London penetration depth (m).
    temperature:
        Bath temperature (K); must satisfy ``k_B T < Delta``.
    critical_temperature:
        Tc (K), informational only.
    """

    gap: float
    penetration_depth: float
    temperature: float
    critical_temperature: float = None

    def __post_init__(self):
        if not self.gap > 0:
            raise ValueError(f"gap must be positive, got {self.gap}")
        if not self.penetration_depth > 0:
            raise ValueError(f"penetration depth must be positive, got {self.penetration_depth}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not const.k_B * self.temperature < self.gap:
            raise ValueError("k_B T must be below the gap")

    @classmethod
    def from_table(cls, gap_GHz, penetration_depth_nm, temperature_mK, critical_temperature_K=None):
        """Build from Delta/(2 pi hbar) in GHz, lambda in nm and T in mK."""
        return cls(
            gap=const.gap_from_GHz(gap_GHz),
            penetration_depth=penetration_depth_nm * 1e-9,
            temperature=temperature_mK * 1e-3,
            critical_temperature=critical_temperature_K,
        )

    @property
    def kT(self):
        return const.k_B * self.temperature

    @property
    def reduced_temperature(self):
        """k_B T / Delta."""
        return self.kT / self.gap

    @property
    def sigma_n(self):
        return sigma_n(self)

    def with_temperature(self, temperature):
        return Material(self.gap, self.penetration_depth, temperature, self.critical_temperature)


#: Aluminum as used throughout: Delta/h = 44 GHz, lambda = 50 nm, T = 30 mK.
ALUMINUM = Material.from_table(44.0, 50.0, 30.0, 1.2)


@dataclass(frozen=True)
class QpDistribution:
    """Quasiparticle occupation law.

    ``mode="quasithermal"`` is the Maxwell-Boltzmann law with chemical
    potential pinned at the gap and total density
    ``x_qp_res + sqrt(2 pi kT/Delta) exp(-Delta/kT)``;
    ``mode="thermal"`` is the Fermi-Dirac function (``x_qp_res`` ignored).
    """

    x_qp_res: float = 0.0
    mode: str = QUASITHERMAL

    def __post_init__(self):
        if not self.x_qp_res >= 0:
            raise ValueError(f"x_qp_res must be non-negative, got {self.x_qp_res}")
        if self.mode not in (QUASITHERMAL, THERMAL):
            raise ValueError(f"unknown distribution mode {self.mode!r}")

    def x_qp(self, mat):
        return xqp_total(self, mat)

    def reduced_occupation(self, mat, excess):
        """n at reduced energy ``1 + excess`` (excess = (E - Delta)/Delta >= 0)."""
        tau = mat.reduced_temperature
        excess = np.asarray(excess, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            if self.mode == QUASITHERMAL:
                return self.x_qp(mat) / math.sqrt(2 * math.pi * tau) * np.exp(-excess / tau)
            return 1.0 / (np.exp((1.0 + excess) / tau) + 1.0)

    def reduced_difference(self, mat, excess, w):
        """n(1 + excess) - n(1 + excess + w) without cancellation."""
        tau = mat.reduced_temperature
        with np.errstate(over="ignore", under="ignore"):
            if self.mode == QUASITHERMAL:
                return self.reduced_occupation(mat, excess) * -math.expm1(-w / tau)
            # f(a) - f(b) = expm1(b - a) (1 - f(a)) f(b)
            fa = self.reduced_occupation(mat, excess)
            fb = self.reduced_occupation(mat, np.asarray(excess) + w)
            return math.expm1(w / tau) * (1.0 - fa) * fb


def occupation(dist, mat, E):
    """Occupation n(E) for E >= Delta (J)."""
    E = np.asarray(E, dtype=float)
    if np.any(E < mat.gap * (1 - 1e-12)):
        raise DomainError("occupation is defined for E >= Delta only")
    n = dist.reduced_occupation(mat, np.maximum(E / mat.gap - 1.0, 0.0))
    return float(n) if n.ndim == 0 else n


def xqp_total(dist, mat):
    """Total normalized QP density: resident part plus the thermal part."""
    tau = mat.reduced_temperature
    thermal = math.sqrt(2 * math.pi * tau) * math.exp(-1.0 / tau)
    if dist.mode == THERMAL:
        return thermal
    return dist.x_qp_res + thermal


def _u_max(mat):
    return math.acosh(1.0 + _CUTOFF_KT * mat.reduced_temperature)


def xqp_from_occupation(n, mat, spec=DEFAULT_QUADRATURE):
    """Normalized QP density by quadrature of an occupation function.

    ``n`` maps energies (J, array) to occupations.  With ``E = Delta cosh u``
    the density-of-states singularity at the gap drops out:
    ``x_QP = 2 * int_0^inf cosh(u) n(Delta cosh u) du``.
    """
    gap = mat.gap

    def integrand(u):
        e = np.cosh(u)
        return 2.0 * e * np.asarray(n(gap * e), dtype=float)

    return integrate_singular(integrand, 0.0, _u_max(mat), spec)


def _omega_map(fn, omega):
    if np.ndim(omega):
        return np.array([fn(float(o)) for o in np.ravel(omega)]).reshape(np.shape(omega))
    return fn(float(omega))


def _reduced_frequency(mat, omega):
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    w = const.hbar * omega / mat.gap
    if w >= 2.0:
        raise DomainError("hbar omega >= 2 Delta: pair breaking is not modeled")
    return w


def _sigma1_reduced(difference, w, u_max, spec):
    """(2/w) int_1^inf [e(e+w)+1] / sqrt((e^2-1)((e+w)^2-1)) D(e) de in u = acosh(e).

    ``difference(excess)`` returns n(e) - n(e + w) at e = 1 + excess.  The
    remaining integrable near-singularity 1/sqrt(u^2 + 2w) at small w is
    handled by splitting at u = sqrt(2w) and using u = s exp(v) beyond.
    """

    def g(u):
        half = np.sinh(0.5 * u)
        excess = 2.0 * half * half
        e = 1.0 + excess
        root = np.sqrt((excess + w) * (e + w + 1.0))
        return (e * (e + w) + 1.0) / root * difference(excess)

    s = math.sqrt(2.0 * w)
    if s >= 0.5 * u_max:
        total = integrate_singular(g, 0.0, u_max, spec)
    else:
        inner = integrate_singular(g, 0.0, s, spec)

        def g_log(v):
            u = s * np.exp(v)
            return g(u) * u

        outer = integrate_singular(g_log, 0.0, math.log(u_max / s), spec)
        total = inner + outer
    return 2.0 / w * total


def sigma1_exact(dist, mat, omega, spec=DEFAULT_QUADRATURE, explicit_difference=False):
    """sigma_1 / sigma_N by quadrature of the generalized Mattis-Bardeen integral.

    ``explicit_difference=True`` forms n(E) - n(E + hbar omega) by direct
    subtraction instead of the factored, cancellation-free expression.
    """
    u_max = _u_max(mat)

    def one(o):
        w = _reduced_frequency(mat, o)
        if explicit_difference:

            def difference(excess):
                return dist.reduced_occupation(mat, excess) - dist.reduced_occupation(mat, excess + w)
        else:

            def difference(excess):
                return dist.reduced_difference(mat, excess, w)

        return _sigma1_reduced(difference, w, u_max, spec)

    return _omega_map(one, omega)


def sigma2_exact(dist, mat, omega, spec=DEFAULT_QUADRATURE):
    """sigma_2 / sigma_N by quadrature over [Delta - hbar omega, Delta].

    With e = 1 - w/2 + (w/2) cos(theta) both inverse-square-root endpoint
    singularities cancel against the Jacobian, leaving a smooth integrand on
    [0, pi].
    """

    def one(o):
        w = _reduced_frequency(mat, o)

        def g(theta):
            c = np.cos(0.5 * theta)
            excess_upper = w * c * c  # (E + hbar omega - Delta) / Delta
            e = 1.0 - w + excess_upper
            occ = dist.reduced_occupation(mat, excess_upper)
            return (e * (e + w) + 1.0) / np.sqrt((1.0 + e) * (e + w + 1.0)) * (1.0 - 2.0 * occ)

        return integrate_singular(g, 0.0, math.pi, spec) / w

    return _omega_map(one, omega)


def approximation_window(mat, omega, limit=0.1):
    """True where both hbar omega and k_B T are at most ``limit * Delta``."""
    w = const.hbar * np.asarray(omega, dtype=float) / mat.gap
    ok = (w <= limit * (1 + 1e-12)) & (mat.reduced_temperature <= limit * (1 + 1e-12))
    return bool(ok) if ok.ndim == 0 else ok


def _sinh_k0(y):
    # sinh(y) K0(y) without overflow for large y
    if y < 2.0:
        return math.sinh(y) * bessel_k0(y)
    return 0.5 * -math.expm1(-2.0 * y) * bessel_k0e(y)


def sigma1_approx(x_qp, mat, omega, with_validity=False):
    """Closed-form sigma_1 / sigma_N near the gap edge (K0 form).

    Valid for hbar omega, k_B T <~ 0.1 Delta.  With ``with_validity=True``
    returns ``(value, valid)``.
    """
    tau = mat.reduced_temperature

    def one(o):
        y = const.hbar * o / (2.0 * mat.kT)
        return x_qp * (2.0 / tau) ** 1.5 / math.sqrt(math.pi) / (2.0 * y) * _sinh_k0(y)

    value = _omega_map(one, omega)
    if with_validity:
        return value, approximation_window(mat, omega)
    return value


def sigma1_lowfreq(x_qp, mat, omega):
    """Logarithmic low-frequency form, hbar omega << k_B T."""
    tau = mat.reduced_temperature
    omega = np.asarray(omega, dtype=float)
    value = (
        x_qp
        * (2.0 / tau) ** 1.5
        / (2.0 * math.sqrt(math.pi))
        * (np.log(4.0 * mat.kT / (const.hbar * omega)) - const.euler_gamma)
    )
    return float(value) if value.ndim == 0 else value


def sigma1_highfreq(x_qp, mat, omega):
    """Power-law high-frequency form, hbar omega >> k_B T."""
    omega = np.asarray(omega, dtype=float)
    value = 0.5 * x_qp * (2.0 * mat.gap / (const.hbar * omega)) ** 1.5
    return float(value) if value.ndim == 0 else value


def sigma2_approx(mat, omega):
    """sigma_2 / sigma_N ~ pi Delta / (hbar omega) for hbar omega, k_B T << Delta."""
    value = math.pi * mat.gap / (const.hbar * np.asarray(omega, dtype=float))
    return float(value) if value.ndim == 0 else value


def sigma_n(mat):
    """Normal-state conductivity (S/m) inferred from the penetration depth."""
    return const.hbar / (const.mu_0 * mat.penetration_depth**2 * math.pi * mat.gap)


@dataclass(frozen=True)
class ComplexConductivity:
    """sigma_1/sigma_N and sigma_2/sigma_N at angular frequency ``omega``."""

    sigma1: float
    sigma2: float
    omega: float

    def absolute(self, mat):
        """sigma_1 + i sigma_2 in S/m."""
        return complex(self.sigma1, self.sigma2) * sigma_n(mat)


def complex_conductivity(dist, mat, omega, spec=DEFAULT_QUADRATURE):
    return ComplexConductivity(
        sigma1=sigma1_exact(dist, mat, omega, spec),
        sigma2=sigma2_exact(dist, mat, omega, spec),
        omega=float(omega),
    )


class Sigma1Table:
    """sigma_1 / sigma_N tabulated by quadrature and interpolated in log-log coordinates.

    Covers ``[omega_min, omega_max]`` (default up to 0.999 * 2 Delta / hbar)
    with ``per_efold`` nodes per e-fold of frequency.  Below ``omega_min``
    the low-frequency logarithm is continued linearly in ln(omega).
    """

    def __init__(self, dist, mat, omega_min=1e-6, omega_max=None, per_efold=16, spec=DEFAULT_QUADRATURE):
        if omega_max is None:
            omega_max = 0.999 * 2 * mat.gap / const.hbar
        if not 0 < omega_min < omega_max:
            raise ValueError("need 0 < omega_min < omega_max")
        n = max(int(math.ceil(per_efold * math.log(omega_max / omega_min))) + 1, 8)
        self.log_omega = np.linspace(math.log(omega_min), math.log(omega_max), n)
        self.values = np.asarray(sigma1_exact(dist, mat, np.exp(self.log_omega), spec))
        self.omega_min = omega_min
        self.omega_max = omega_max
        self._spline = CubicSpline(self.log_omega, np.log(self.values))
        self._low_slope = float(self._spline(self.log_omega[0], 1)) * self.values[0]

    def __call__(self, omega):
        v = np.log(np.abs(np.asarray(omega, dtype=float)))
        if np.any(v > self.log_omega[-1] + 1e-12):
            raise DomainError("frequency above the tabulated range")
        inside = np.exp(self._spline(np.clip(v, self.log_omega[0], None)))
        below = self.values[0] + self._low_slope * (v - self.log_omega[0])
        out = np.where(v < self.log_omega[0], below, inside)
        return float(out) if out.ndim == 0 else out
