"""Physical constants (SI) and the unit conversions used by configs."""

import numpy as np
from scipy import constants as _c

hbar = _c.hbar
h = _c.h
k_B = _c.k
e = _c.e
mu_0 = _c.mu_0
c = _c.c
#: Superconducting flux quantum h / 2e (Wb).
Phi_0 = _c.h / (2 * _c.e)
euler_gamma = float(np.euler_gamma)


def gap_from_GHz(gap_GHz):
    """Gap energy (J) from Delta / (2 pi hbar) given in GHz."""
    return h * gap_GHz * 1e9


def gap_to_GHz(gap):
    return gap / h / 1e9


def omega_from_GHz(f_GHz):
    """Angular frequency (rad/s) from a frequency in GHz."""
    return 2 * np.pi * f_GHz * 1e9


def bcs_gap_from_Tc(Tc):
    """Weak-coupling BCS gap 1.764 k_B Tc (J)."""
    return 1.764 * k_B * Tc
