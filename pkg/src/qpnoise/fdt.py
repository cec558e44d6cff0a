"""Finite-dimensional check of the generalized fluctuation-dissipation theorem.

For a time-independent density matrix diagonal in the energy basis, every
spectrum of an observable is a finite sum of delta lines at the transition
frequencies omega_mn = (E_m - E_n) / hbar.  Lines are kept as
(frequency, weight) pairs so both identities become exact finite sums.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const

__all__ = [
    "ToySystem",
    "SpectralLines",
    "correlation_spectrum",
    "susceptibility_spectrum",
    "shifted_correlation_spectrum",
    "verify_gfdt",
    "verify_fdt_reduction",
    "random_batch",
]


@dataclass(frozen=True)
class ToySystem:
    """Levels ``energies`` (J, strictly increasing), Hermitian ``observable`` and diagonal ``rho``."""

    energies: np.ndarray
    observable: np.ndarray
    rho: np.ndarray
    temperature: float = None

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        o = np.asarray(self.observable, dtype=complex)
        r = np.asarray(self.rho, dtype=float)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "observable", o)
        object.__setattr__(self, "rho", r)
        d = e.size
        if not 2 <= d <= 16:
            raise ValueError(f"dimension must lie in [2, 16], got {d}")
        if np.any(np.diff(e) <= 0):
            raise ValueError("energies must be strictly increasing (nondegenerate)")
        if o.shape != (d, d) or not np.allclose(o, o.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(o).max())):
            raise ValueError("observable must be a Hermitian d x d matrix")
        if r.shape != (d,) or np.any(r < 0) or not math.isclose(r.sum(), 1.0, rel_tol=0, abs_tol=1e-12):
            raise ValueError("rho must be non-negative weights summing to 1")

    @property
    def dimension(self):
        return self.energies.size

    @property
    def n0(self):
        """Prefactor n0 in rho = n0 exp(-E / k_B T) (meaningful for quasithermal weights)."""
        if self.temperature is None:
            raise ValueError("temperature required")
        return float(self.rho[0] * np.exp(self.energies[0] / (const.k_B * self.temperature)))

    @property
    def fluctuation(self):
        """A = O - <O>_rho."""
        mean = float(np.real(np.dot(self.rho, np.diag(self.observable))))
        return self.observable - mean * np.eye(self.dimension)

    @classmethod
    def random(cls, rng, dimension, kind="arbitrary", temperature=0.1):
        """Random system with level spacings of order k_B T.

        ``kind``: ``"arbitrary"`` (Dirichlet weights), ``"thermal"``
        (exp(-E/k_B T) with the ground level at 0) or ``"quasithermal"``
        (n0 exp(-E/k_B T) with levels starting at a random offset above
        zero, so the normalization prefactor n0 differs from 1/Z).
        """
        kT = const.k_B * temperature
        gaps = rng.uniform(0.2, 2.0, size=dimension - 1) * kT
        offset = rng.uniform(5.0, 20.0) * kT if kind == "quasithermal" else 0.0
        energies = offset + np.concatenate([[0.0], np.cumsum(gaps)])
        a = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
        observable = 0.5 * (a + a.conj().T)
        if kind == "arbitrary":
            rho = rng.dirichlet(np.ones(dimension))
        elif kind in ("thermal", "quasithermal"):
            w = np.exp(-(energies - energies[0]) / kT)
            rho = w / w.sum()
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return cls(energies, observable, rho, temperature)


@dataclass(frozen=True)
class SpectralLines:
    """Delta lines: weight ``weights[k]`` at ``frequencies[k]`` for the (m, n) pair ``pairs[k]``."""

    frequencies: np.ndarray
    weights: np.ndarray
    pairs: tuple

    def at(self, m, n):
        return self.weights[self.pairs.index((m, n))]


def _pairs(d):
    return tuple((m, n) for n in range(d) for m in range(d))


def _frequency_matrix(sys):
    e = sys.energies
    return (e[:, None] - e[None, :]) / const.hbar  # [m, n] = (E_m - E_n) / hbar


def _lines(sys, matrix):
    d = sys.dimension
    freq = _frequency_matrix(sys)
    pairs = _pairs(d)
    return SpectralLines(
        np.array([freq[m, n] for m, n in pairs]),
        np.array([matrix[m, n] for m, n in pairs]),
        pairs,
    )


def correlation_spectrum(sys, rho=None):
    """<S_O(omega)>: line at omega_mn with weight 2 pi rho_n |<m|A|n>|^2.

    ``rho`` overrides the weights used for the average while A keeps the
    system's own mean.
    """
    rho = sys.rho if rho is None else np.asarray(rho, dtype=float)
    a = sys.fluctuation
    weights = 2 * math.pi * rho[None, :] * np.abs(a) ** 2
    return _lines(sys, weights)


def susceptibility_spectrum(sys):
    """2 hbar Im<chi_O(omega)> from the retarded commutator.

    chi(t) = (i / hbar) theta(t) <[A(t), A(0)]>.  In the energy basis
    Tr(rho A(t) A) contributes the line at omega_mn with (rho A)_nm A_mn;
    Tr(rho A A(t)) contributes it from the swapped pair with (rho A)_mn A_nm.
    """
    a = sys.fluctuation
    rho = np.diag(sys.rho)
    forward = (rho @ a).T * a  # [m, n] = rho_n A_nm A_mn
    backward = (rho @ a) * a.T  # [m, n] = rho_m A_mn A_nm
    weights = 2 * math.pi * np.real(forward - backward)
    return _lines(sys, weights)


def shifted_correlation_spectrum(sys):
    """<S_O(omega)> averaged with rho(E + hbar omega): line (m, n) reweighted by rho(E_m)."""
    a = sys.fluctuation
    weights = 2 * math.pi * sys.rho[:, None] * np.abs(a) ** 2
    return _lines(sys, weights)


def verify_gfdt(sys):
    """Max |2 hbar Im chi - (S_rho(E) - S_rho(E + hbar omega))| over all lines, relative to the largest S line."""
    chi = susceptibility_spectrum(sys)
    s = correlation_spectrum(sys)
    shifted = shifted_correlation_spectrum(sys)
    residual = np.abs(chi.weights - (s.weights - shifted.weights))
    scale = max(np.abs(s.weights).max(), np.finfo(float).tiny)
    return float(residual.max() / scale)


def verify_fdt_reduction(sys, temperature=None):
    """Max |S - 2 hbar Im chi [n_B + 1]| over lines with omega != 0, relative to the largest S line.

    Zero-frequency lines carry no dissipation and an undefined n_B; they
    are skipped.
    """
    T = sys.temperature if temperature is None else temperature
    if T is None:
        raise ValueError("temperature required")
    chi = susceptibility_spectrum(sys)
    s = correlation_spectrum(sys)
    x = const.hbar * chi.frequencies / (const.k_B * T)
    keep = chi.frequencies != 0
    factor = -1.0 / np.expm1(-x[keep])
    residual = np.abs(s.weights[keep] - chi.weights[keep] * factor)
    scale = max(np.abs(s.weights).max(), np.finfo(float).tiny)
    return float(residual.max() / scale) if residual.size else 0.0


def random_batch(seed, count=100, kind="arbitrary", dimensions=(2, 8), temperature=0.1):
    """Residuals for ``count`` random systems; returns a list of dicts (reproducible from ``seed``)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        d = int(rng.integers(dimensions[0], dimensions[1] + 1))
        sys = ToySystem.random(rng, d, kind=kind, temperature=temperature)
        row = {"index": i, "dimension": d, "gfdt_residual": verify_gfdt(sys)}
        if kind != "arbitrary":
            row["fdt_residual"] = verify_fdt_reduction(sys)
        out.append(row)
    return out
