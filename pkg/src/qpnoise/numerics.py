"""Numerical kernels: double-exponential quadrature, K0 and bisection.

The quadrature rules here are the tanh-sinh rule for finite intervals and
the exp-sinh rule for half-infinite ones.  Both map the interval onto the
real line with a change of variables whose Jacobian decays double
exponentially, so integrable endpoint singularities such as ``x**-0.5`` are
absorbed without special treatment, as long as the singular endpoint is
representable to full precision (put it at 0 by shifting the variable).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "integrate_singular",
    "bessel_k0",
    "bessel_k0e",
    "UnderflowWarning",
    "Bracket",
    "BracketError",
    "RootFindingError",
    "find_root",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence controls for :func:`integrate_singular`.

    Parameters
    ----------
    rtol:
        Relative tolerance, in (0, 1e-3].
    atol:
        Absolute floor; convergence is accepted once the level-to-level
        change is below ``max(rtol * |I|, atol)``.
    max_levels:
        Number of step-halvings allowed (at least 6).
    """

    rtol: float = 1e-9
    atol: float = 0.0
    max_levels: int = 12

    def __post_init__(self):
        if not 0.0 < self.rtol <= 1e-3:
            raise ValueError(f"rtol must lie in (0, 1e-3], got {self.rtol}")
        if self.atol < 0.0:
            raise ValueError(f"atol must be non-negative, got {self.atol}")
        if int(self.max_levels) != self.max_levels or self.max_levels < 6:
            raise ValueError(f"max_levels must be an integer >= 6, got {self.max_levels}")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(ArithmeticError):
    """Raised when the quadrature does not converge.

    ``estimate`` holds the last estimate, ``error`` the last level-to-level
    difference.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


# Truncation of the transformed real line.  For a finite interval the node
# offset from an endpoint at |t| = 6 is ~1e-275 of the half-width, so only
# rounding limits how close nodes get; for the exp-sinh rule the left
# offset at t = -5 is ~e^-116.
_T_FINITE = 6.0
_T_LEFT_INF = 5.0
_T_RIGHT_INF = 4.0


def _finite_nodes(a, b, t):
    half = 0.5 * (b - a)
    s = 0.5 * np.pi * np.sinh(t)
    # distance to the nearest endpoint in units of the half-width, 1 - tanh|s|
    q = np.exp(-2.0 * np.abs(s))
    d = 2.0 * q / (1.0 + q)
    x = np.where(t < 0, a + half * d, b - half * d)
    # 1 / cosh(s)^2 = 4 q / (1 + q)^2, no overflow
    w = half * 0.5 * np.pi * np.cosh(t) * 4.0 * q / (1.0 + q) ** 2
    return x, w


def _half_infinite_nodes(a, t):
    g = np.exp(0.5 * np.pi * np.sinh(t))
    return a + g, 0.5 * np.pi * np.cosh(t) * g


def _t_grid(level, lo, hi):
    """Abscissae in t that are new at ``level`` (step 2**-level)."""
    step = 2.0**-level
    if level == 0:
        j = np.arange(math.ceil(-lo), math.floor(hi) + 1)
        return j * 1.0
    j_lo = math.ceil((-lo / step - 1) / 2)
    j_hi = math.floor((hi / step - 1) / 2)
    return (2 * np.arange(j_lo, j_hi + 1) + 1) * step


def integrate_singular(f, a, b, spec=DEFAULT_QUADRATURE):
    """Integrate ``f`` over ``(a, b)``; either limit may be infinite.

    ``f`` must accept a NumPy array of abscissae and return an array of the
    same shape.  It is never evaluated at the endpoints themselves: nodes
    that round onto a finite endpoint are dropped, so an endpoint
    singularity at |a| ~ 1 loses the mass within ~1e-16 of it (about 1e-8
    relative for an inverse square root).  Write singular factors in terms
    of the distance to the endpoint when more is needed.  Infinite limits
    need an exponentially decaying ``f``.

    Raises
    ------
    QuadratureError
        If successive refinements still disagree after ``spec.max_levels``.
    """
    a = float(a)
    b = float(b)
    if not b > a:
        if b == a:
            return 0.0
        return -integrate_singular(f, b, a, spec)
    if math.isinf(a):
        if math.isinf(b):
            return integrate_singular(f, -math.inf, 0.0, spec) + integrate_singular(f, 0.0, math.inf, spec)
        return integrate_singular(lambda x: f(-x), -b, math.inf, spec)
    if math.isinf(b):
        lo, hi = _T_LEFT_INF, _T_RIGHT_INF

        def nodes(t):
            return _half_infinite_nodes(a, t)
    else:
        lo = hi = _T_FINITE

        def nodes(t):
            return _finite_nodes(a, b, t)

    total = 0.0
    previous = None
    error = math.inf
    with np.errstate(over="ignore", under="ignore"):
        for level in range(spec.max_levels + 1):
            t = _t_grid(level, lo, hi)
            x, w = nodes(t)
            keep = (w > 0.0) & (x > a) & (x < b)
            if np.any(keep):
                total += float(np.sum(w[keep] * np.asarray(f(x[keep]), dtype=float)))
            estimate = total * 2.0**-level
            if not math.isfinite(estimate):
                raise QuadratureError("integrand produced a non-finite value", estimate, math.inf)
            if previous is not None:
                error = abs(estimate - previous)
                if level >= 3 and error <= max(spec.rtol * abs(estimate), spec.atol):
                    return estimate
            previous = estimate
    raise QuadratureError(
        f"no convergence after {spec.max_levels} levels (estimate {estimate!r}, change {error!r})",
        estimate,
        error,
    )


class UnderflowWarning(RuntimeWarning):
    """A special function result underflowed to zero."""


def _k0_series(y):
    # K0(y) = -(ln(y/2) + gamma) I0(y) + sum_k (y^2/4)^k / (k!)^2 H_k
    q = 0.25 * y * y
    term = 1.0
    i0 = 1.0
    harmonic_sum = 0.0
    harmonic = 0.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        harmonic += 1.0 / k
        i0 += term
        harmonic_sum += term * harmonic
        if term < 1e-17 * i0:
            break
    return -(math.log(0.5 * y) + np.euler_gamma) * i0 + harmonic_sum


def _k0e_continued_fraction(y):
    """exp(y) K0(y) for y >= 2 via Steed's evaluation of the CF2 fraction.

    This is the x >= 2 branch of Temme's method for modified Bessel
    functions, specialised to order zero.
    """
    b = 2.0 * (1.0 + y)
    d = 1.0 / b
    delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 10000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-16:
            break
    else:  # pragma: no cover - the fraction converges in < 100 terms for y >= 2
        raise ArithmeticError(f"K0 continued fraction failed at y={y}")
    return math.sqrt(math.pi / (2.0 * y)) / s


def _check_positive(y):
    if not y > 0.0:
        raise ValueError(f"K0 is defined for y > 0, got {y}")


def bessel_k0e(y):
    """Exponentially scaled K0: ``exp(y) * K0(y)``, for scalar y > 0."""
    y = float(y)
    _check_positive(y)
    if y < 2.0:
        return math.exp(y) * _k0_series(y)
    return _k0e_continued_fraction(y)


def bessel_k0(y):
    """Modified Bessel function of the second kind, order zero.

    Power series below y = 2, continued fraction above.  Accepts scalars or
    arrays.  Results that underflow are returned as 0 with an
    :class:`UnderflowWarning`.
    """
    if np.ndim(y):
        return np.array([bessel_k0(v) for v in np.ravel(y)]).reshape(np.shape(y))
    y = float(y)
    _check_positive(y)
    if y < 2.0:
        return _k0_series(y)
    value = math.exp(-y) * _k0e_continued_fraction(y) if y < 746.0 else 0.0
    if value == 0.0:
        warnings.warn(f"K0({y}) underflows double precision; returning 0", UnderflowWarning, stacklevel=2)
    return value


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


class BracketError(ValueError):
    """The objective does not change sign over the bracket."""


class RootFindingError(ArithmeticError):
    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


def find_root(objective, bracket, tol=1e-12, max_iter=2000):
    """Bisection for a sign change of ``objective`` inside ``bracket``.

    Stops when the bracket width is at most ``tol * max(1, |x|)`` and
    returns its midpoint.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = float(bracket.lo), float(bracket.hi)
    f_lo = objective(lo)
    f_hi = objective(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * max(1.0, abs(mid)):
            return mid
        if mid in (lo, hi):
            raise RootFindingError(f"tolerance {tol} is below floating-point resolution near {mid}", mid)
        f_mid = objective(mid)
        if f_mid == 0.0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise RootFindingError(f"tolerance {tol} not reached in {max_iter} bisections", 0.5 * (lo + hi))
