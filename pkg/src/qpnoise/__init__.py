"""Quasiparticle-induced dissipation and noise in superconducting circuits.

Mattis-Bardeen conductivity for quasiequilibrium distributions, two-fluid
device admittances, charge and flux noise spectra, coherence estimates and
a finite-dimensional fluctuation-dissipation checker.
"""

from .circuits import (
    Admittance,
    ApproximationError,
    CpwResonator,
    FluxQubit,
    Junction,
    SplitTransmon,
    Transmon,
    WireSegment,
    device_frequency,
)
from .conductivity import (
    ALUMINUM,
    ComplexConductivity,
    DomainError,
    Material,
    QpDistribution,
    Sigma1Table,
    complex_conductivity,
    sigma1_approx,
    sigma1_exact,
    sigma2_exact,
)
from .config import ConfigError, RunConfig, load_config, parse_config
from .decoherence import CoherenceResult, t1_transmon, t2_star
from .fdt import ToySystem, verify_fdt_reduction, verify_gfdt
from .noise import NoiseSpectrum, TlsParameters

__version__ = "0.1.0"

__all__ = [
    "ALUMINUM",
    "Admittance",
    "ApproximationError",
    "CoherenceResult",
    "ComplexConductivity",
    "ConfigError",
    "CpwResonator",
    "DomainError",
    "FluxQubit",
    "Junction",
    "Material",
    "NoiseSpectrum",
    "QpDistribution",
    "RunConfig",
    "Sigma1Table",
    "SplitTransmon",
    "TlsParameters",
    "ToySystem",
    "Transmon",
    "WireSegment",
    "complex_conductivity",
    "device_frequency",
    "load_config",
    "parse_config",
    "sigma1_approx",
    "sigma1_exact",
    "sigma2_exact",
    "t1_transmon",
    "t2_star",
    "verify_fdt_reduction",
    "verify_gfdt",
]
