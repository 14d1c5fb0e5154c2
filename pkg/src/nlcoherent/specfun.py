"""Real-argument special functions used throughout the package.

Gamma, incomplete gamma and modified Bessel functions are thin, domain-checked
wrappers over :mod:`scipy.special`. The generalized hypergeometric series and
the Meijer G-function ``G^{l,0}_{0,l}`` are implemented here directly.

Every function rejects arguments outside its domain with
:class:`~nlcoherent.DomainError` instead of returning NaN.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, optimize, special

from ._errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SeriesControl",
    "log_gamma",
    "beta",
    "log_beta",
    "upper_incomplete_gamma",
    "lower_incomplete_gamma",
    "bessel_i",
    "bessel_k",
    "log_bessel_i",
    "log_bessel_k",
    "p_f_q",
    "meijer_g_measure",
    "log_meijer_g_measure",
    "mellin_barnes_g",
]

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for power series.

    Parameters
    ----------
    rel_tol : float
        Summation stops once a term is below ``rel_tol`` times the partial sum.
    max_terms : int
        Hard cap on the number of terms.
    """

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


def _require_positive(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return arr


def _require_nonnegative(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return arr


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    x = _require_positive("x", x)
    return _scalar_or_array(special.gammaln(x))


def log_beta(a, b):
    """``ln B(a, b)`` computed from log-gamma values."""
    a = _require_positive("a", a)
    b = _require_positive("b", b)
    return _scalar_or_array(special.gammaln(a) + special.gammaln(b) - special.gammaln(a + b))


def beta(a, b):
    """Euler beta function ``B(a, b) = Γ(a)Γ(b)/Γ(a+b)``.

    Evaluated in log space so that large arguments do not overflow the
    intermediate gamma values.
    """
    return _scalar_or_array(np.exp(log_beta(a, b)))


def upper_incomplete_gamma(s, x):
    """Upper incomplete gamma function ``Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt``."""
    s = _require_positive("s", s)
    x = _require_nonnegative("x", x)
    q = special.gammaincc(s, x)
    with np.errstate(divide="ignore"):
        out = np.exp(np.log(q) + special.gammaln(s))
    return _scalar_or_array(out)


def lower_incomplete_gamma(s, x):
    """Lower incomplete gamma function ``γ(s, x) = Γ(s) - Γ(s, x)``.

    Computed from the regularized form so small ``x`` does not suffer the
    cancellation of the explicit difference.
    """
    s = _require_positive("s", s)
    x = _require_nonnegative("x", x)
    p = special.gammainc(s, x)
    with np.errstate(divide="ignore"):
        out = np.exp(np.log(p) + special.gammaln(s))
    return _scalar_or_array(out)


def log_bessel_i(nu, x):
    """``ln I_ν(x)``; ``-inf`` where ``I_ν(x) = 0`` (``x = 0``, ``ν > 0``)."""
    nu = _require_nonnegative("nu", nu)
    x = _require_nonnegative("x", x)
    with np.errstate(divide="ignore"):
        out = np.log(special.ive(nu, x)) + x
    return _scalar_or_array(out)


def bessel_i(nu, x, scaled=False):
    """Modified Bessel function of the first kind ``I_ν(x)``.

    Parameters
    ----------
    nu, x : float or array_like
        Order ``ν >= 0`` and argument ``x >= 0``.
    scaled : bool
        Return ``e^{-x} I_ν(x)`` instead, which never overflows.

    Raises
    ------
    OverflowError
        If the unscaled value exceeds the double range.
    """
    nu = _require_nonnegative("nu", nu)
    x = _require_nonnegative("x", x)
    ive = special.ive(nu, x)
    if scaled:
        return _scalar_or_array(ive)
    with np.errstate(divide="ignore"):
        log_val = np.log(ive) + x
    if np.any(log_val > _LOG_MAX):
        raise OverflowError(f"I_nu(x) overflows for nu={nu!r}, x={x!r}; use scaled=True")
    return _scalar_or_array(ive * np.exp(x))


def log_bessel_k(nu, x):
    """``ln K_ν(x)`` for ``x > 0``."""
    nu = _require_nonnegative("nu", nu)
    x = _require_positive("x", x)
    return _scalar_or_array(np.log(special.kve(nu, x)) - x)


def bessel_k(nu, x, scaled=False):
    """Modified Bessel function of the second kind ``K_ν(x)``, ``x > 0``.

    With ``scaled=True`` returns ``e^{x} K_ν(x)``.
    """
    nu = _require_nonnegative("nu", nu)
    x = _require_positive("x", x)
    kve = special.kve(nu, x)
    if scaled:
        return _scalar_or_array(kve)
    return _scalar_or_array(kve * np.exp(-x))


def p_f_q(a: Sequence[float], b: Sequence[float], x: float, ctl: SeriesControl = SeriesControl()) -> float:
    """Generalized hypergeometric function ``pFq(a; b; x)`` by term recursion.

    Terms follow ``t_{n+1} = t_n * prod(a_j + n) / prod(b_j + n) * x / (n + 1)``
    and summation stops at the first term, past the point where terms start
    shrinking, whose magnitude is at most ``ctl.rel_tol`` times the partial sum.

    Parameters
    ----------
    a, b : sequence of float
        Upper and lower parameters.
    x : float
        Argument. For ``p = q + 1`` the series requires ``|x| < 1``; for
        ``p > q + 1`` only terminating series are accepted.
    ctl : SeriesControl
        Tolerance and term cap.

    Returns
    -------
    float

    Raises
    ------
    PoleError
        If some ``b_j`` is a nonpositive integer.
    ConvergenceError
        If ``ctl.max_terms`` terms are summed without meeting the tolerance.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    x = float(x)
    for bj in b:
        if bj <= 0 and bj == math.floor(bj):
            raise PoleError(f"lower parameter {bj} is a nonpositive integer")
    terminating = any(aj <= 0 and aj == math.floor(aj) for aj in a)
    p, q = len(a), len(b)
    if not terminating and x != 0.0:
        if p == q + 1 and abs(x) >= 1.0:
            raise DomainError(f"{p}F{q} series diverges for |x| >= 1 (x={x})")
        if p > q + 1:
            raise DomainError(f"{p}F{q} series diverges for x != 0")

    total = 1.0
    term = 1.0
    for n in range(ctl.max_terms):
        num = x
        den = n + 1.0
        for aj in a:
            num *= aj + n
        for bj in b:
            den *= bj + n
        ratio = num / den
        term *= ratio
        total += term
        if term == 0.0:
            return total
        if abs(ratio) < 1.0 and abs(term) <= ctl.rel_tol * abs(total):
            return total
    raise ConvergenceError(f"{p}F{q} did not converge in {ctl.max_terms} terms (x={x})")


def _check_deltas(deltas):
    d = np.asarray(deltas, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise DomainError("deltas must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(d)):
        raise DomainError(f"deltas must be finite, got {deltas!r}")
    return d


def log_meijer_g_measure(y, deltas):
    """Logarithm of :func:`meijer_g_measure`, closed forms only (``l <= 2``).

    Working in log space keeps the moment integrands finite for arguments
    where ``G`` itself underflows.
    """
    y = _require_positive("y", y)
    d = _check_deltas(deltas)
    ln_y = np.log(y)
    if d.size == 1:
        out = -y + d[0] * ln_y
    elif d.size == 2:
        nu = abs(d[0] - d[1])
        t = 2.0 * np.sqrt(y)
        out = math.log(2.0) + 0.5 * (d[0] + d[1]) * ln_y + np.log(special.kve(nu, t)) - t
    else:
        raise DomainError("log_meijer_g_measure has closed forms for 1 or 2 parameters only")
    return _scalar_or_array(out)


def meijer_g_measure(y, deltas, rel_tol=1e-10):
    """Meijer G-function ``G^{l,0}_{0,l}(y | δ_1, ..., δ_l)`` for ``y > 0``.

    Closed forms are used for one parameter (``e^{-y} y^δ``) and two
    parameters (``2 y^{(δ1+δ2)/2} K_{δ1-δ2}(2√y)``). Three or more parameters
    go through :func:`mellin_barnes_g`.

    Its Mellin transform is ``∫_0^∞ G(y) y^{s-1} dy = Π_p Γ(s + δ_p)``.
    """
    d = _check_deltas(deltas)
    if d.size <= 2:
        return _scalar_or_array(np.exp(log_meijer_g_measure(y, d)))
    y = _require_positive("y", y)
    if np.ndim(y) == 0:
        return mellin_barnes_g(float(y), d, rel_tol=rel_tol)
    return np.array([mellin_barnes_g(float(v), d, rel_tol=rel_tol) for v in np.ravel(y)]).reshape(np.shape(y))


def _saddle_abscissa(ln_y, d):
    # real saddle of  sum ln Γ(c + δ_p) - c ln y, where the contour integrand has no phase cancellation
    c_min = -float(d.min())

    def slope(c):
        return float(special.digamma(c + d).sum()) - ln_y

    lo = c_min + 1e-9
    span = 1.0
    while slope(c_min + span) < 0.0:
        span *= 2.0
        if span > 1e8:
            raise ConvergenceError("could not bracket the Mellin-Barnes saddle point")
    if slope(lo) >= 0.0:
        return lo
    return optimize.brentq(slope, lo, c_min + span, xtol=1e-12)


def mellin_barnes_g(y: float, deltas: Sequence[float], rel_tol: float = 1e-10, max_subdivisions: int = 500) -> float:
    """``G^{l,0}_{0,l}(y | δ)`` by quadrature of its Mellin-Barnes integral.

    Integrates ``(1/2π) ∫ Π Γ(c + δ_p + it) y^{-c-it} dt`` along the vertical
    line ``Re s = c``. The abscissa ``c`` is placed at the real saddle point of
    the integrand, clamped to stay at least 0.25 right of the rightmost pole,
    which keeps the cancellation between oscillating contributions small. The
    line is cut where the integrand falls below ``1e-17`` of its peak.

    Raises
    ------
    ConvergenceError
        If the quadrature error estimate exceeds ``rel_tol`` relative to the
        result, e.g. when cancellation has destroyed the significant digits.
    """
    if not (y > 0 and math.isfinite(y)):
        raise DomainError(f"y must be finite and > 0, got {y!r}")
    d = _check_deltas(deltas)
    ln_y = math.log(y)
    c = max(_saddle_abscissa(ln_y, d), -float(d.min()) + 0.25)

    def log_integrand(t):
        return special.loggamma(c + d + 1j * t).sum() - (c + 1j * t) * ln_y

    peak = log_integrand(0.0).real
    cut = peak + math.log(1e-17)
    t_max = 1.0
    while log_integrand(t_max).real > cut:
        t_max *= 2.0
        if t_max > 1e6:
            raise ConvergenceError("Mellin-Barnes integrand does not decay")

    def scaled(t):
        w = log_integrand(t)
        return math.exp(w.real - peak) * math.cos(w.imag)

    # QUADPACK's roundoff warning is superseded by the explicit error check below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(scaled, 0.0, t_max, limit=max_subdivisions, epsabs=1e-16, epsrel=rel_tol * 1e-2)
    if not abs(err) <= rel_tol * abs(val):
        raise ConvergenceError(
            f"Mellin-Barnes quadrature failed at y={y}: value {val:.3e}, error {err:.3e} (relative to peak)"
        )
    return math.exp(peak) * val / math.pi
