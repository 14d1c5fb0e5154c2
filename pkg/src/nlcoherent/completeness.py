"""Closure measures for polynomial E-functions and their moment checks.

For ``E(n) = γ Π_p (n + δ_p)`` the radial density that resolves the identity
is ``Λ(x) = G(x/γ | δ) / (γ Π_p Γ(1 + δ_p))`` with ``G = G^{l,0}_{0,l}``.
It is pinned down by the moment equation ``∫_0^∞ Λ(x) x^n dx = E(n)!``,
which is what :func:`verify_moments` checks by quadrature.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from ._errors import ConvergenceError, DomainError, QuadratureError, UnsupportedVariantError
from .algebra import AlgebraSpec, log_e_factorial, polynomial_form
from .specfun import log_meijer_g_measure, mellin_barnes_g

__all__ = [
    "MomentEntry",
    "MomentReport",
    "measure_parameters",
    "measure_density",
    "log_measure_density",
    "log_moment",
    "verify_moments",
    "closure_matrix",
    "resolution_of_identity_check",
]

# smallest relative tolerance QUADPACK accepts without complaint
_EPS_FLOOR = 5e-14


def measure_parameters(spec: AlgebraSpec):
    """``(γ, δ)`` of the polynomial form, after checking a measure exists.

    Raises
    ------
    UnsupportedVariantError
        For variants without a polynomial E, for ``γ <= 0`` and for any
        ``δ_p <= -1`` (the moments would diverge at the origin).
    """
    form = polynomial_form(spec)
    if form is None:
        raise UnsupportedVariantError(
            f"closure measure is only available for polynomial E-functions, got {spec.variant.value}"
        )
    gamma, deltas = form
    if not gamma > 0:
        raise UnsupportedVariantError(f"closure measure needs a positive leading coefficient, got {gamma}")
    if any(d <= -1 for d in deltas):
        raise UnsupportedVariantError(f"every shift must exceed -1 for finite moments, got {deltas}")
    return float(gamma), tuple(float(d) for d in deltas)


def _log_norm(gamma, deltas):
    return math.log(gamma) + math.fsum(special.gammaln(1.0 + d) for d in deltas)


def log_measure_density(spec: AlgebraSpec, x) -> float:
    """``ln Λ(x)`` for scalar ``x > 0``.

    Closed forms are used up to two shifts. With three or more the value
    comes from the Mellin-Barnes quadrature, and a non-positive result
    (cancellation far in the tail) is reported as a convergence failure.
    """
    gamma, deltas = measure_parameters(spec)
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"x must be finite and > 0, got {x!r}")
    y = x / gamma
    if len(deltas) <= 2:
        g = float(log_meijer_g_measure(y, deltas))
    else:
        val = mellin_barnes_g(y, deltas)
        if not val > 0:
            raise ConvergenceError(f"Mellin-Barnes value {val!r} at y={y!r} is not positive")
        g = math.log(val)
    return g - _log_norm(gamma, deltas)


def measure_density(spec: AlgebraSpec, x):
    """Closure density ``Λ(x)`` for ``x > 0`` (scalar or array).

    Examples
    --------
    >>> from nlcoherent.algebra import AlgebraSpec
    >>> round(measure_density(AlgebraSpec.identity(), 1.0), 12)
    0.367879441171
    """
    if np.ndim(x) == 0:
        return math.exp(log_measure_density(spec, x))
    flat = [math.exp(log_measure_density(spec, v)) for v in np.ravel(x)]
    return np.array(flat).reshape(np.shape(x))


def _log_integrand_factory(spec, s, shift):
    # integrand in t = ln x: Λ(e^t) e^{(s+1)t}, divided by e^{shift}
    def f(t):
        return log_measure_density(spec, math.exp(t)) + (s + 1.0) * t - shift
    return f


def _bracket(spec, s, drop):
    """Find the peak of the log-space integrand and where it falls by ``drop``."""
    gamma, deltas = measure_parameters(spec)
    lead = len(deltas)
    # Λ decays like exp(-l (x/γ)^{1/l}), so the mass sits near γ (s/l)^l
    guess = math.log(gamma) + lead * math.log(max(s + 1.0 + max(deltas), 1.0) / lead + 1.0)
    f = _log_integrand_factory(spec, s, 0.0)
    grid = np.linspace(guess - 8.0, guess + 8.0, 161)
    vals = np.array([f(t) for t in grid])
    i = int(np.argmax(vals))
    while i in (0, grid.size - 1):
        grid = grid + (-8.0 if i == 0 else 8.0)
        vals = np.array([f(t) for t in grid])
        i = int(np.argmax(vals))
    t_peak, peak = grid[i], vals[i]
    lo = t_peak - 1.0
    while f(lo) > peak - drop:
        lo -= max(1.0, 0.5 * (t_peak - lo))
        if lo < -2000.0:
            raise QuadratureError("integrand does not decay towards the origin")
    hi = t_peak + 1.0
    while f(hi) > peak - drop:
        hi += 0.5
    return float(lo), float(t_peak), float(hi), float(peak)


def log_moment(spec: AlgebraSpec, s: float, quad_tol: float = 1e-10) -> float:
    """``ln ∫_0^∞ Λ(x) x^s dx`` by adaptive Gauss-Kronrod quadrature.

    The integral is taken over ``t = ln x``, where the integrand is smooth
    and decays exponentially at both ends even when Λ has an integrable
    singularity at the origin. The range is cut where the integrand falls
    below ``quad_tol * 1e-3`` of its peak.

    Raises
    ------
    QuadratureError
        If QUADPACK reports an error estimate above ``quad_tol``.
    """
    if not quad_tol > 0:
        raise DomainError("quad_tol must be > 0")
    drop = -math.log(quad_tol * 1e-3)
    lo, t_peak, hi, peak = _bracket(spec, s, drop)
    f = _log_integrand_factory(spec, s, peak)
    rel = max(quad_tol, _EPS_FLOOR)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda t: math.exp(f(t)), lo, hi, points=[t_peak],
                                  epsabs=0.0, epsrel=rel, limit=400)
    if not (val > 0 and err <= max(quad_tol, 10 * _EPS_FLOOR) * val):
        raise QuadratureError(f"moment quadrature for power {s} did not converge (estimate {val}, error {err})")
    return peak + math.log(val)


@dataclass(frozen=True)
class MomentEntry:
    n: int
    quadrature_value: float
    target_log: float
    relative_error: float
    status: str = "ok"

    @property
    def target(self) -> float:
        return math.exp(self.target_log) if self.target_log < 709.0 else math.inf


@dataclass(frozen=True)
class MomentReport:
    """Per-order comparison of quadrature moments against ``ln E(n)!``.

    ``relative_error`` is ``|ln(quadrature) - ln E(n)!|``, which for small
    values is the relative error of the moment itself. Entries whose
    density could not be evaluated carry ``status="unsupported"`` and
    ``nan`` values.
    """

    spec: AlgebraSpec
    entries: list = field(default_factory=list)

    @property
    def max_relative_error(self) -> float:
        errs = [e.relative_error for e in self.entries if e.status == "ok"]
        return max(errs) if errs else math.nan

    @property
    def supported(self) -> bool:
        return all(e.status == "ok" for e in self.entries)

    def passes(self, tol: float) -> bool:
        return self.supported and self.max_relative_error <= tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "quadrature_value", "target", "relative_error"])
        for e in self.entries:
            w.writerow([e.n, f"{e.quadrature_value:.17g}", f"{e.target:.17g}", f"{e.relative_error:.17g}"])
        return buf.getvalue()


def verify_moments(spec: AlgebraSpec, n_max: int, quad_tol: float = 1e-10) -> MomentReport:
    """Check ``∫ Λ(x) x^n dx = E(n)!`` for ``n = 0..n_max``.

    Raises
    ------
    UnsupportedVariantError
        If ``spec`` has no polynomial closure measure.
    QuadratureError
        If an integral fails to converge; the offending order is in ``.n``.
    """
    measure_parameters(spec)
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    entries = []
    for n in range(int(n_max) + 1):
        target = log_e_factorial(spec, n)
        try:
            got = log_moment(spec, float(n), quad_tol)
        except ConvergenceError:
            entries.append(MomentEntry(n, math.nan, target, math.nan, "unsupported"))
            continue
        except QuadratureError as exc:
            raise QuadratureError(str(exc), n=n) from exc
        value = math.exp(got) if got < 709.0 else math.inf
        entries.append(MomentEntry(n, value, target, abs(got - target)))
    return MomentReport(spec, entries)


def closure_matrix(spec: AlgebraSpec, cutoff: int, quad_tol: float = 1e-10) -> np.ndarray:
    """``<n| ∫ dσ |z><z| |m>`` on levels ``0..cutoff``.

    With ``z = √x e^{iθ}`` the element factors into the radial integral
    ``∫ Λ(x) x^{(n+m)/2} dx / √(E(n)! E(m)!)`` times the angular average of
    ``e^{i(n-m)θ}``. The angular part is done by the trapezoid rule on
    ``2 cutoff + 2`` nodes, which is exact for these trigonometric
    polynomials; off-diagonal entries therefore vanish up to rounding.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    k = np.arange(2 * cutoff + 1)
    log_radial = np.array([log_moment(spec, 0.5 * float(j), quad_tol) for j in k])
    log_fact = np.array([log_e_factorial(spec, n) for n in range(cutoff + 1)])
    idx = np.arange(cutoff + 1)
    log_mag = log_radial[np.add.outer(idx, idx)] - 0.5 * np.add.outer(log_fact, log_fact)
    nodes = 2 * cutoff + 2
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    diff = np.subtract.outer(idx, idx)
    angular = np.exp(1j * diff[..., None] * theta).mean(axis=-1)
    return np.exp(log_mag) * angular


def resolution_of_identity_check(spec: AlgebraSpec, cutoff: int, quad_tol: float = 1e-10) -> float:
    """Largest deviation of the diagonal of :func:`closure_matrix` from 1."""
    m = closure_matrix(spec, cutoff, quad_tol)
    return float(np.max(np.abs(np.diag(m) - 1.0)))
