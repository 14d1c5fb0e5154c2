"""Nonlinear coherent states, number states and single-mode photon statistics.

A nonlinear coherent state solves ``a_E|z> = z|z>``. Its Fock coefficients
are ``c_n ∝ z^n / sqrt(E(n)!)``. For SUSY-like algebras, where ``E(1) = 0``,
the state lives on the invariant subspace ``span{|1>, |2>, ...}`` and the
factorial is replaced by the shifted product ``Π_{j=1..k} E(1 + j)``.

All series are summed in log space, so large ``|z|`` never overflows.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._errors import ConvergenceError, DegenerateStateError, DomainError
from ._twomode import TwoModeState
from .algebra import AlgebraSpec, annihilation_matrix, base_level, log_e_factorials, log_e_values

__all__ = [
    "TruncatedState",
    "PhotonStatistics",
    "coherent_state",
    "number_state",
    "normalization_constant",
    "log_e_exponential",
    "e_exponential",
    "photon_distribution",
    "photon_statistics",
    "statistics",
    "su2_coherent_state",
    "bargmann_eval",
    "eigen_residual",
]

DEFAULT_TOL = 1e-12
MAX_CUTOFF = 4096


@dataclass(frozen=True, eq=False)
class TruncatedState:
    """Single-mode pure state on Fock levels ``0..cutoff``.

    Attributes
    ----------
    coefficients : ndarray of complex
        ``c_n = <n|ψ>``. Levels below ``base_level`` are zero.
    tail_bound : float
        Upper bound on the probability mass discarded by the truncation.
    base_level : int
        Lowest level of the invariant subspace the state was built on.
    algebra, z :
        Provenance of coherent states; ``None`` otherwise.
    """

    coefficients: np.ndarray
    tail_bound: float = 0.0
    base_level: int = 0
    algebra: AlgebraSpec | None = None
    z: complex | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex).ravel()
        if c.size == 0:
            raise DomainError("a state needs at least one coefficient")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def cutoff(self) -> int:
        return self.coefficients.size - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def to_dict(self) -> dict:
        return {
            "algebra": None if self.algebra is None else self.algebra.to_dict(),
            "z": None if self.z is None else [float(self.z.real), float(self.z.imag)],
            "base_level": int(self.base_level),
            "coefficients": [[float(v.real), float(v.imag)] for v in self.coefficients],
            "tail_bound": float(self.tail_bound),
        }

    @classmethod
    def from_dict(cls, data) -> "TruncatedState":
        algebra = data.get("algebra")
        z = data.get("z")
        return cls(
            coefficients=[complex(re, im) for re, im in data["coefficients"]],
            tail_bound=float(data.get("tail_bound", 0.0)),
            base_level=int(data.get("base_level", 0)),
            algebra=None if algebra is None else AlgebraSpec.from_dict(algebra),
            z=None if z is None else complex(*z),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TruncatedState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PhotonStatistics:
    """Moments of a photon-number distribution.

    ``mandel_q`` is ``variance/mean - 1``, reported as 0 for the vacuum.
    """

    mean: float
    second_factorial: float
    variance: float
    mandel_q: float

    @property
    def g2(self) -> float:
        """Zero-delay second-order coherence ``<n(n-1)>/<n>^2``."""
        if self.mean == 0:
            raise DegenerateStateError("g2 is undefined for zero mean photon number")
        return self.second_factorial / self.mean**2


def _logaddexp(a, b):
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def _log_terms(spec: AlgebraSpec, x: float, tol: float, base: int, max_cutoff: int = MAX_CUTOFF):
    """Log terms ``ln(x^k / Π_{j<=k} E(base+j))`` of the E-exponential series.

    Terms are added until both the last kept term and the geometric tail
    bound ``t_k ρ/(1-ρ)``, with ``ρ = x/E(base+k+1)``, fall below ``tol``
    relative to the partial sum. The bound assumes E is nondecreasing past
    the cut, which holds for every implemented variant.

    Returns the kept log terms, their log-sum and the relative tail bound.
    """
    if x == 0.0:
        return np.zeros(1), 0.0, 0.0
    ln_x = math.log(x)
    log_e = log_e_values(spec, np.arange(base + 1, base + 65))
    terms = [0.0]
    lse = 0.0
    k = 0
    while True:
        if k + 1 >= log_e.size:
            more = np.arange(base + log_e.size + 1, base + 2 * log_e.size + 1)
            log_e = np.concatenate([log_e, log_e_values(spec, more)])
        nxt = terms[-1] + ln_x - log_e[k]
        terms.append(nxt)
        lse = _logaddexp(lse, nxt)
        k += 1
        log_rho = ln_x - log_e[k]
        if log_rho < 0.0:
            rel_last = nxt - lse
            rho = math.exp(log_rho)
            tail = math.exp(rel_last + log_rho) / (1.0 - rho)
            if rel_last <= math.log(tol) and tail <= tol:
                return np.array(terms), lse, tail
        if base + k >= max_cutoff:
            raise ConvergenceError(
                f"E-exponential series at x={x:g} needs more than {max_cutoff} levels for tol={tol:g}"
            )


def _log_terms_fixed(spec, x, base, cutoff):
    k = cutoff - base
    if k < 0:
        raise DomainError(f"cutoff {cutoff} is below the base level {base}")
    lw = log_e_factorials(spec, k, start=base)
    if x == 0.0:
        terms = np.full(k + 1, -np.inf)
        terms[0] = 0.0
        return terms, 0.0, 0.0
    terms = np.arange(k + 1) * math.log(x) - lw
    lse = float(special.logsumexp(terms))
    nxt_log_e = float(log_e_values(spec, np.array([cutoff + 1]))[0])
    log_rho = math.log(x) - nxt_log_e
    tail = math.exp(terms[-1] - lse + log_rho) / (1.0 - math.exp(log_rho)) if log_rho < 0 else math.inf
    return terms, lse, tail


def coherent_state(spec: AlgebraSpec, z: complex, tol: float = DEFAULT_TOL, cutoff: int | None = None,
                   max_cutoff: int = MAX_CUTOFF) -> TruncatedState:
    """Normalized nonlinear coherent state ``|z_E>_N``.

    Parameters
    ----------
    spec : AlgebraSpec
    z : complex
        Eigenvalue of ``a_E``.
    tol : float
        Bound on the discarded probability mass and on the last kept
        probability. The cutoff grows until both hold.
    cutoff : int, optional
        Fixed highest Fock level instead of the adaptive choice. The
        resulting ``tail_bound`` may then exceed ``tol``.
    max_cutoff : int
        Hard cap for the adaptive search.

    Returns
    -------
    TruncatedState
        Normalized on the kept levels; built on ``base_level(spec)``.

    Examples
    --------
    >>> st = coherent_state(AlgebraSpec.identity(), 0.0)
    >>> st.coefficients
    array([1.+0.j])
    """
    z = complex(z)
    r = abs(z)
    base = base_level(spec)
    if cutoff is None:
        terms, lse, tail = _log_terms(spec, r * r, tol, base, max_cutoff)
    else:
        terms, lse, tail = _log_terms_fixed(spec, r * r, base, int(cutoff))
    k = np.arange(terms.size)
    amps = np.exp(0.5 * (terms - lse))
    phase = np.exp(1j * cmath.phase(z) * k) if r > 0 else np.ones(k.size)
    coeffs = np.zeros(base + terms.size, dtype=complex)
    coeffs[base:] = amps * phase
    # a non-shrinking ratio at a fixed cutoff gives no bound beyond the trivial one
    tail_bound = 1.0 if math.isinf(tail) else tail / (1.0 + tail)
    return TruncatedState(coeffs, tail_bound=tail_bound, base_level=base, algebra=spec, z=z)


def number_state(n: int, cutoff: int | None = None) -> TruncatedState:
    """Fock state ``|n>`` on levels ``0..max(n, cutoff)``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    size = max(n, cutoff if cutoff is not None else n) + 1
    c = np.zeros(size, dtype=complex)
    c[n] = 1.0
    return TruncatedState(c)


def log_e_exponential(spec: AlgebraSpec, x: float, tol: float = 1e-16) -> float:
    """``ln e_E^x`` for real ``x >= 0``.

    For SUSY-like algebras the series runs over the invariant subspace,
    ``Σ_k x^k / Π_{j=1..k} E(base+j)``.
    """
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise DomainError(f"log_e_exponential needs finite x >= 0, got {x}")
    _, lse, tail = _log_terms(spec, x, tol, base_level(spec))
    return lse + math.log1p(tail)


def e_exponential(spec: AlgebraSpec, x, tol: float = 1e-16):
    """E-exponential ``e_E^x = Σ_n x^n / E(n)!``.

    Real ``x >= 0`` is summed in log space. Negative or complex ``x`` uses the
    truncation found for ``|x|`` and sums the signed terms directly.
    """
    if isinstance(x, complex) or x < 0:
        x = complex(x)
        terms, _, _ = _log_terms(spec, abs(x), tol, base_level(spec))
        k = np.arange(terms.size)
        if x == 0:
            return complex(1.0)
        return complex(np.sum(np.exp(terms + 1j * cmath.phase(x) * k)))
    return math.exp(log_e_exponential(spec, x, tol))


def normalization_constant(spec: AlgebraSpec, r: float) -> float:
    """``N_E(r) = (e_E^{r^2})^{-1/2}``."""
    if r < 0:
        raise DomainError("r must be >= 0")
    return math.exp(-0.5 * log_e_exponential(spec, r * r))


def photon_distribution(state: TruncatedState) -> np.ndarray:
    """``P(n) = |c_n|^2`` for ``n = 0..cutoff``."""
    return np.abs(state.coefficients) ** 2


def photon_statistics(p) -> PhotonStatistics:
    """Mean, second factorial moment, variance and Mandel Q of a distribution.

    The distribution is renormalized to unit mass first. The variance is
    accumulated around the mean to avoid cancellation.
    """
    p = np.asarray(p, dtype=float)
    total = p.sum()
    if not total > 0:
        raise DomainError("distribution has no mass")
    p = p / total
    n = np.arange(p.size, dtype=float)
    mean = float(np.dot(p, n))
    variance = float(np.dot(p, (n - mean) ** 2))
    fact2 = float(np.dot(p, n * (n - 1.0)))
    q = variance / mean - 1.0 if mean > 0 else 0.0
    return PhotonStatistics(mean, fact2, variance, q)


def statistics(state: TruncatedState) -> PhotonStatistics:
    return photon_statistics(photon_distribution(state))


def su2_coherent_state(n: int, xi: complex) -> TwoModeState:
    """SU(2) coherent state of the two-mode Schwinger realization.

    ``(1+|ξ|^2)^{-n/2} Σ_k C(n,k)^{1/2} ξ^k |k, n-k>``, with the first slot
    the horizontal mode. ``ξ = i`` gives ``BS|0, n>`` and ``ξ = -i`` gives
    ``BS|n, 0>`` up to the global phase ``i^n``.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    xi = complex(xi)
    k = np.arange(n + 1)
    a = np.zeros((n + 1, n + 1), dtype=complex)
    if xi == 0:
        a[0, n] = 1.0
        return TwoModeState(a)
    r = abs(xi)
    with np.errstate(over="ignore", under="ignore"):
        # direct products keep the binomial weights accurate to a few ulp
        mag = np.sqrt(special.comb(n, k)) * np.power(r, k) * (1.0 + r * r) ** (-0.5 * n)
    if not np.all(np.isfinite(mag)) or np.any(mag[[0, -1]] == 0):
        log_binom = special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)
        mag = np.exp(0.5 * log_binom + k * math.log(r) - 0.5 * n * math.log1p(r * r))
    a[k, n - k] = mag * np.exp(1j * cmath.phase(xi) * k)
    return TwoModeState(a)


def bargmann_eval(state: TruncatedState, spec: AlgebraSpec, z: complex) -> complex:
    """Fock-Bargmann function ``ψ(z) = Σ_n z^n ψ_n / sqrt(E(n)!)``.

    On the invariant subspace of SUSY-like algebras the sum starts at the
    base level and uses the shifted products, matching the coherent states.
    """
    z = complex(z)
    base = state.base_level
    psi = state.coefficients[base:]
    if z == 0:
        return complex(psi[0])
    lw = log_e_factorials(spec, psi.size - 1, start=base)
    k = np.arange(psi.size)
    weights = np.exp(k * cmath.log(z) - 0.5 * lw)
    return complex(np.sum(weights * psi))


def eigen_residual(state: TruncatedState, spec: AlgebraSpec, z: complex | None = None,
                   exclude_boundary: bool = True) -> float:
    """``||a_E|ψ> - z|ψ>||`` on the truncated space.

    The last row is cut off by the truncation (``a_E`` cannot reach level
    ``cutoff+1``) and is excluded unless ``exclude_boundary`` is false.
    """
    if z is None:
        if state.z is None:
            raise DomainError("pass z explicitly for states without a stored eigenvalue")
        z = state.z
    c = state.coefficients
    if state.cutoff == 0:
        res = -complex(z) * c
    else:
        res = annihilation_matrix(spec, state.cutoff) @ c - complex(z) * c
    if exclude_boundary:
        res = res[:-1]
    return float(np.linalg.norm(res))
