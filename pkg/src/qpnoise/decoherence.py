"""Quality factors, T1, the Ramsey filter function, alpha(t) and T2*."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import constants as const
from .circuits import device_frequency
from .conductivity import Sigma1Table, sigma1_exact, sigma1_highfreq
from .noise import qp_flux_noise_split_transmon
from .numerics import Bracket, BracketError, QuadratureSpec, find_root, integrate_singular

__all__ = [
    "CoherenceResult",
    "FilterEvaluation",
    "t1_resonator",
    "t1_from_loss",
    "quality_factor_cpw",
    "quality_factor_cpw_highfreq",
    "quality_factor_tls",
    "t1_tls",
    "combine_rates",
    "t1_transmon",
    "t1_junction_limit",
    "t1_ge_limit",
    "fid_filter",
    "alpha_numeric",
    "alpha_numeric_st",
    "alpha_analytic_st",
    "alpha_asymptotic_st",
    "d_omega_d_flux",
    "split_transmon_spectrum",
    "t2_star",
    "t2_combined",
]

MECHANISMS = ("QP-junction", "QP-wire", "TLS", "spin", "total")
ALPHA_SPEC = QuadratureSpec(rtol=1e-8, atol=0.0, max_levels=14)


@dataclass
class CoherenceResult:
    """A quality factor (dimensionless) or a time (s).

    ``breakdown`` maps mechanism tags to component rates (1/Q or 1/T);
    ``flags`` carries validity information such as ``lower_bound``.
    """

    quantity: str
    value: float
    mechanism: str = "total"
    provenance: str = ""
    flags: dict = field(default_factory=dict)
    breakdown: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity not in ("Q", "T1", "T2*", "T2"):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}")
        if not self.value > 0:
            raise ValueError(f"{self.quantity} must be positive, got {self.value}")

    @property
    def rate(self):
        return 1.0 / self.value

    @property
    def unbounded(self):
        return math.isinf(self.value)


def _from_rates(quantity, rates, provenance="", flags=None, mechanism="total"):
    total = math.fsum(rates.values())
    value = math.inf if total == 0 else 1.0 / total
    return CoherenceResult(quantity, value, mechanism, provenance, dict(flags or {}), dict(rates))


@dataclass(frozen=True)
class FilterEvaluation:
    sequence: str
    time: float
    alpha: float
    omega_grid: tuple = ()


def t1_resonator(s_plus, s_minus, capacitance, omega):
    """T1 (s) from 1/T1 = (Omega / 2 hbar C) [S_Q(Omega) + S_Q(-Omega)]; inf without dissipation."""
    if not omega > 0:
        raise ValueError("Omega must be positive")
    rate = omega / (2 * const.hbar * capacitance) * (s_plus + s_minus)
    return math.inf if rate == 0 else 1.0 / rate


def t1_from_loss(admittance_real, capacitance, T, omega):
    """T1 from (Omega / C) Im chi coth(hbar Omega / 2 k_B T), Im chi = Re{1/Z} / Omega."""
    rate = admittance_real / capacitance / math.tanh(const.hbar * omega / (2 * const.k_B * T))
    return math.inf if rate == 0 else 1.0 / rate


def _ratio(dist, mat, omega, ratio):
    return sigma1_exact(dist, mat, omega) if ratio is None else ratio


def quality_factor_cpw(c, dist, mat, ratio=None):
    """Q_QP with 1/Q = (sigma_1/sigma_N)(L_k/L)(hbar Omega / pi Delta) at the lowest mode."""
    omega = c.omega
    r = _ratio(dist, mat, omega, ratio)
    inv_q = r * c.wire.kinetic_inductance / c.wire.total_inductance * const.hbar * omega / (math.pi * mat.gap)
    return _from_rates("Q", {"QP-wire": inv_q}, "cpw", mechanism="QP-wire")


def quality_factor_cpw_highfreq(c, x_qp, mat):
    """High-frequency form 1/Q = x (L_k/L) sqrt(2 Delta / pi^2 hbar Omega)."""
    inv_q = x_qp * c.wire.kinetic_inductance / c.wire.total_inductance * math.sqrt(
        2 * mat.gap / (math.pi**2 * const.hbar * c.omega)
    )
    return 1.0 / inv_q


def quality_factor_tls(tls, T, omega):
    """Q_TLS = 1 / <tan delta> in the unsaturated regime."""
    return 1.0 / float(tls.loss_tangent(T, omega))


def t1_tls(tls, T, omega):
    """TLS-limited T1; the tanh of the loss tangent cancels the coth, 1/T1 = Omega p tan(delta)."""
    return 1.0 / (omega * tls.amplitude)


def combine_rates(results, quantity=None):
    """Add rates of several results reciprocally; the breakdown keeps each mechanism."""
    rates = {}
    for res in results:
        parts = res.breakdown or {res.mechanism: res.rate}
        for key, value in parts.items():
            rates[key] = rates.get(key, 0.0) + value
    quantity = quantity or results[0].quantity
    return _from_rates(quantity, rates, "combined")


def t1_transmon(t, dist, mat, ratio=None):
    """Transmon T1 with junction and wire contributions.

    1/T1 = (sigma_1/sigma_N)(hbar / C pi Delta) (L_J + 2 L_k) / [L_J + 2(L_k + L_g)]^2
    coth(hbar Omega / 2 k_B T); the L_J part is absent for a GE junction.
    """
    omega = device_frequency(t)
    r = _ratio(dist, mat, omega, ratio)
    lt = t.total_inductance
    pref = r * const.hbar / (t.capacitance * math.pi * mat.gap) / lt**2
    pref /= math.tanh(const.hbar * omega / (2 * mat.kT))
    rates = {"QP-wire": pref * 2 * t.electrode_kinetic_inductance}
    if not t.junction.gap_engineered:
        rates["QP-junction"] = pref * t.junction.josephson_inductance
    flags = {
        "ej_ec": t.ej_ec,
        "junction_dominated": t.junction.josephson_inductance
        >= 50 * (t.electrode_kinetic_inductance + t.electrode_geometric_inductance),
        "high_frequency": const.hbar * omega >= 10 * mat.kT,
        "gap_engineered": t.junction.gap_engineered,
    }
    return _from_rates("T1", rates, "transmon", flags)


def t1_junction_limit(x_qp, mat, omega):
    """Junction-dominated high-frequency limit 1/T1 = x sqrt(2 Delta Omega / hbar pi^2)."""
    return 1.0 / (x_qp * math.sqrt(2 * mat.gap * omega / (const.hbar * math.pi**2)))


def t1_ge_limit(x_qp, mat, omega, kinetic_inductance, josephson_inductance):
    """GE limit: the junction-limited rate times 2 L_k / L_J."""
    return t1_junction_limit(x_qp, mat, omega) * josephson_inductance / (2 * kinetic_inductance)


def fid_filter(omega, t):
    """Ramsey filter (1/2) (sin(omega t / 2) / (omega / 2))^2 (s^2)."""
    omega = np.asarray(omega, dtype=float)
    value = 0.5 * t * t * np.sinc(omega * t / (2 * math.pi)) ** 2
    return float(value) if value.ndim == 0 else value


def alpha_numeric(spectrum, d_omega_d_phi, t, omega_max=math.inf, spec=ALPHA_SPEC):
    """alpha(t) = int d omega (dOmega/dPhi)^2 S(omega) F(omega, t) over the real line.

    ``spectrum`` is a vectorized callable giving the symmetrized
    S(omega) + S(-omega) for omega > 0; it may diverge logarithmically at 0.
    Pieces: [0, w0] with F = t^2 / 2 and S continued as a + b ln(omega)
    (closed form); [w0, 1/t] in ln(omega); [1/t, 400 pi / t] one filter
    period at a time; above that F is replaced by its mean 1/omega^2.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0.0
    d2 = d_omega_d_phi**2
    w0 = min(2 * math.pi * 1e-3, 1e-3 / t, 0.5 * omega_max)
    w_osc = min(400 * math.pi / t, omega_max)
    w_split = min(1.0 / t, w_osc)

    def sym(w):
        return np.asarray(spectrum(w), dtype=float)

    # low tail: int_0^w0 (a - b ln w) dw = w0 (S(w0) + b)
    h = 0.1
    s_lo, s_hi = sym(np.array([w0 * math.exp(-h), w0 * math.exp(h)]))
    b = (s_lo - s_hi) / (2 * h)
    total = float(sym(np.array([w0]))[0] + b) * w0 * 0.5 * t * t

    def log_piece(v):
        w = np.exp(v)
        return sym(w) * fid_filter(w, t) * w

    total += integrate_singular(log_piece, math.log(w0), math.log(w_split), spec)

    def lin_piece(w):
        return sym(w) * fid_filter(w, t)

    # later pieces only need accuracy relative to the running total
    floor = QuadratureSpec(spec.rtol, max(spec.atol, 1e-3 * spec.rtol * abs(total)), spec.max_levels)
    period = 2 * math.pi / t
    edges = [w_split]
    k = math.floor(w_split / period) + 1
    while k * period < w_osc:
        edges.append(k * period)
        k += 1
    edges.append(w_osc)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += integrate_singular(lin_piece, lo, hi, floor)

    if w_osc < omega_max:

        def mean_piece(v):
            with np.errstate(over="ignore", invalid="ignore"):
                w = np.exp(v)
                out = sym(w) / w
            return np.where(np.isfinite(out), out, 0.0)

        hi = math.inf if math.isinf(omega_max) else math.log(omega_max)
        total += integrate_singular(mean_piece, math.log(w_osc), hi, floor)
    return d2 * total


def d_omega_d_flux(s):
    """dOmega/dPhi = -Omega (pi / 2 Phi_0) tan(pi Phi / Phi_0) (rad s^-1 Wb^-1)."""
    return -device_frequency(s) * math.pi / (2 * const.Phi_0) * math.tan(math.pi * s.flux)


def split_transmon_spectrum(s, dist, mat, table=None):
    """Symmetrized split-transmon QP flux noise S(omega) + S(-omega) for omega > 0, and its cutoff."""
    table = table if table is not None else Sigma1Table(dist, mat, omega_min=1e-7)

    def sym(w):
        w = np.asarray(w, dtype=float)
        out = np.zeros_like(w)
        ok = w <= table.omega_max
        if np.any(ok):
            r = table(w[ok])
            out[ok] = qp_flux_noise_split_transmon(s, dist, mat, w[ok], ratio=r) + qp_flux_noise_split_transmon(
                s, dist, mat, -w[ok], ratio=r
            )
        return out

    return sym, table.omega_max


def alpha_numeric_st(s, dist, mat, t, table=None):
    spectrum, cutoff = split_transmon_spectrum(s, dist, mat, table)
    return alpha_numeric(spectrum, d_omega_d_flux(s), t, omega_max=cutoff)


def _alpha_prefactor(s, dist, mat):
    x = dist.x_qp(mat)
    omega = device_frequency(s)
    tan2 = math.tan(math.pi * s.flux) ** 2
    return x * tan2 * (omega / const.Phi_0) ** 2 * math.sqrt(2 * math.pi * const.hbar**2 * mat.gap / mat.kT) * s.lossy_inductance


def alpha_analytic_st(s, dist, mat, t, with_validity=False):
    """Closed-form split-transmon alpha(t) for t >> hbar / k_B T.

    x tan^2(pi Phi/Phi_0) (Omega/Phi_0)^2 sqrt(2 pi hbar^2 Delta / k_B T) B
    t {ln[4 (k_B T t / hbar)^3] + 1 - gamma}, with B the lossy inductance
    bracket (L_k only for GE junctions).  The validity flag is False for
    t < 10 hbar / k_B T.
    """
    tt = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.log(4 * (mat.kT * tt / const.hbar) ** 3) + 1 - const.euler_gamma
        value = np.where(tt > 0, _alpha_prefactor(s, dist, mat) * tt * log_term, 0.0)
    value = float(value) if value.ndim == 0 else value
    if with_validity:
        valid = tt >= 10 * const.hbar / mat.kT
        return value, (bool(valid) if valid.ndim == 0 else valid)
    return value


def alpha_asymptotic_st(s, dist, mat, t):
    """Large-t limit of the filter integral over the low-frequency logarithm.

    Using int_0^inf (1 - cos u) ln(u) / u^2 du = (pi / 2)(1 - gamma) one gets
    (pi / 2) P t [ln(4 k_B T t / hbar) - 1], with P the closed-form prefactor.
    """
    return 0.5 * math.pi * _alpha_prefactor(s, dist, mat) * t * (math.log(4 * mat.kT * t / const.hbar) - 1)


def t2_star(s, dist, mat, method="analytic", t_min=1e-9, t_max=10.0, table=None, tol=1e-10):
    """Ramsey T2* from alpha(T2*) = 1, bisection in log10(t) over [t_min, t_max].

    ``method`` is ``"analytic"`` (closed form) or ``"numeric"`` (filter
    integral).  If alpha(t_max) < 1 the result is ``t_max`` flagged as a
    lower bound; if alpha(t_min) > 1 it is ``t_min`` flagged as an upper
    bound.  The 1/T1 contribution is not included.
    """
    if method == "analytic":

        def alpha(t):
            return alpha_analytic_st(s, dist, mat, t)
    elif method == "numeric":
        spectrum, cutoff = split_transmon_spectrum(s, dist, mat, table)
        slope = d_omega_d_flux(s)

        def alpha(t):
            return alpha_numeric(spectrum, slope, t, omega_max=cutoff)
    else:
        raise ValueError(f"unknown method {method!r}")

    flags = {"method": method, "lower_bound": False, "upper_bound": False}
    try:
        v = find_root(lambda v: alpha(10.0**v) - 1.0, Bracket(math.log10(t_min), math.log10(t_max)), tol=tol)
        value = 10.0**v
    except BracketError:
        if alpha(t_max) < 1.0:
            value, flags["lower_bound"] = t_max, True
        else:
            value, flags["upper_bound"] = t_min, True
    flags["valid"] = value >= 10 * const.hbar / mat.kT
    mech = "QP-wire" if s.gap_engineered else "total"
    return CoherenceResult("T2*", value, mech, "split-transmon", flags)


def t2_combined(t1, t_phi):
    """1/T2 = 1/(2 T1) + 1/T_phi, reported separately from T2*."""
    rate = 0.5 / t1 + 1.0 / t_phi
    return CoherenceResult("T2", 1.0 / rate, "total", "combined", {"excludes_t1": False})
