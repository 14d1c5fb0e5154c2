"""50:50 beam splitter acting on truncated two-mode Fock space.

``BS = exp[i(π/4)(a_H^† a_V + a_H a_V^†)]`` conserves the total photon
number, so it is exponentiated exactly block by block: on the block with
``N`` photons the generator is an ``(N+1)``-dimensional Hermitian tridiagonal
matrix. Closed-form joint distributions for Fock, conventional coherent and
su(1,1) coherent inputs are provided alongside, and are checked against the
exact operator in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg, special

from ._errors import DegenerateChannelError, DomainError
from ._twomode import TwoModeState
from .algebra import AlgebraSpec
from .specfun import log_bessel_i
from .states import (
    DEFAULT_TOL,
    PhotonStatistics,
    TruncatedState,
    coherent_state,
    photon_statistics,
    statistics,
)

__all__ = [
    "TwoModeState",
    "JointDistribution",
    "ChannelReport",
    "FactorizationResult",
    "block_unitary",
    "product_state",
    "bs_oracle",
    "bs_fock_closed_form",
    "joint_from_state",
    "joint_fock",
    "joint_coherent",
    "joint_su11",
    "mutual_information",
    "channel_report",
    "factorization_test",
    "input_g2",
    "channel_marginal",
    "total_variation",
]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint photon-count probabilities ``P(n, m)`` at the two output ports.

    ``n`` counts horizontal photons (rows), ``m`` vertical photons (columns);
    the support is ``n + m <= cutoff_total``.
    """

    probs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DomainError(f"probs must be a square matrix, got shape {p.shape}")
        if np.any(p < 0):
            raise DomainError("probabilities must be nonnegative")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def cutoff_total(self) -> int:
        return self.probs.shape[0] - 1

    def total_mass(self) -> float:
        return float(self.probs.sum())

    def horizontal(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def vertical(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def total_photon_distribution(self) -> np.ndarray:
        """Distribution of ``n + m``."""
        n = self.cutoff_total
        out = np.zeros(n + 1)
        for t in range(n + 1):
            k = np.arange(t + 1)
            out[t] = self.probs[k, t - k].sum()
        return out

    def to_rows(self):
        """``(n, m, p)`` triples over the support ``n + m <= cutoff_total``."""
        n = self.cutoff_total
        return [(i, j, float(self.probs[i, j])) for i in range(n + 1) for j in range(n + 1 - i)]

    def to_dict(self) -> dict:
        return {
            "cutoff_total": self.cutoff_total,
            "tail_bound": float(self.tail_bound),
            "probs": self.probs.tolist(),
        }


@dataclass(frozen=True)
class ChannelReport:
    """Per-port statistics of a joint output distribution.

    ``total_variance`` is the variance of ``n + m`` computed from the joint
    distribution; it equals ``horizontal.variance + vertical.variance +
    2 covariance``. The g2 fields are ``None`` for a port with zero mean.
    """

    horizontal: PhotonStatistics
    vertical: PhotonStatistics
    covariance: float
    total_variance: float
    mutual_information: float
    g2_horizontal: float | None
    g2_vertical: float | None

    def to_dict(self) -> dict:
        out = {}
        for port in ("horizontal", "vertical"):
            for key, val in asdict(getattr(self, port)).items():
                out[f"{port}_{key}"] = val
        out.update(
            covariance=self.covariance,
            total_variance=self.total_variance,
            mutual_information=self.mutual_information,
            g2_horizontal=self.g2_horizontal,
            g2_vertical=self.g2_vertical,
        )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class FactorizationResult:
    separable: bool
    score: float
    singular_value_ratio: float


@lru_cache(maxsize=256)
def _block_unitary_cached(total: int) -> np.ndarray:
    if total == 0:
        u = np.ones((1, 1), dtype=complex)
    else:
        k = np.arange(total)
        # <k+1, N-k-1| a_H^† a_V |k, N-k> = sqrt((k+1)(N-k))
        off = np.sqrt((k + 1.0) * (total - k))
        w, v = linalg.eigh_tridiagonal(np.zeros(total + 1), off)
        u = (v * np.exp(0.25j * math.pi * w)) @ v.T
    u.flags.writeable = False
    return u


def block_unitary(total: int) -> np.ndarray:
    """Beam-splitter unitary restricted to the ``total``-photon block.

    Basis order is ``|k, total-k>`` for ``k = 0..total``.
    """
    if total < 0:
        raise DomainError("total photon number must be >= 0")
    return _block_unitary_cached(int(total))


def product_state(horizontal: TruncatedState, vertical: TruncatedState | None = None,
                  cutoff_total: int | None = None) -> TwoModeState:
    """``|ψ_H> ⊗ |ψ_V>`` truncated to ``n + m <= cutoff_total``.

    With no vertical state the vertical port holds the vacuum. The default
    cutoff keeps every level of the horizontal input.
    """
    ch = horizontal.coefficients
    cv = np.ones(1, dtype=complex) if vertical is None else vertical.coefficients
    if cutoff_total is None:
        cutoff_total = ch.size - 1 if vertical is None else ch.size + cv.size - 2
    n = cutoff_total
    a = np.zeros((n + 1, n + 1), dtype=complex)
    h = ch[: n + 1]
    v = cv[: n + 1]
    a[: h.size, : v.size] = np.outer(h, v)
    a[np.add.outer(np.arange(n + 1), np.arange(n + 1)) > n] = 0.0
    tail = horizontal.tail_bound + (0.0 if vertical is None else vertical.tail_bound)
    dropped = max(0.0, horizontal.norm_squared() * (1.0 if vertical is None else vertical.norm_squared())
                  - float(np.sum(np.abs(a) ** 2)))
    return TwoModeState(a, tail_bound=tail + dropped)


def bs_oracle(state: TwoModeState) -> TwoModeState:
    """Apply the 50:50 beam splitter exactly, one photon-number block at a time."""
    n = state.cutoff_total
    out = np.zeros_like(state.amplitudes)
    for t in range(n + 1):
        k = np.arange(t + 1)
        out[k, t - k] = block_unitary(t) @ state.block(t)
    return TwoModeState(out, tail_bound=state.tail_bound)


def bs_fock_closed_form(n: int) -> TwoModeState:
    """Closed form of ``BS|n, 0>``: binomial amplitudes with phases ``i^j``.

    The amplitude on ``|n-j, j>`` is ``2^{-n/2} C(n,j)^{1/2} e^{iπj/2}``,
    where ``j`` counts the photons sent to the vertical port. This is the
    exact output of :func:`bs_oracle`, with no phase dropped.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    j = np.arange(n + 1)
    log_mag = 0.5 * (special.gammaln(n + 1) - special.gammaln(j + 1) - special.gammaln(n - j + 1)) \
        - 0.5 * n * math.log(2.0)
    a = np.zeros((n + 1, n + 1), dtype=complex)
    a[n - j, j] = np.exp(log_mag) * (1j) ** (j % 4)
    return TwoModeState(a)


def joint_from_state(state: TruncatedState) -> JointDistribution:
    """``|BS(|ψ> ⊗ |0>)|^2`` via the exact operator."""
    out = bs_oracle(product_state(state))
    return JointDistribution(out.probabilities(), tail_bound=out.tail_bound)


def _antidiagonal_mask(n):
    return np.add.outer(np.arange(n + 1), np.arange(n + 1))


def joint_fock(n: int, cutoff_total: int | None = None) -> JointDistribution:
    """Output distribution for ``|n, 0>`` from the gamma/beta closed form.

    ``P(m, r) = Γ(r+½)Γ(m+½) / (Γ(r+1)Γ(m+1)) / (2^{r+m} B(r+½, m+½))`` on
    ``m + r = n``, zero elsewhere.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    size = n if cutoff_total is None else cutoff_total
    if size < n:
        raise DomainError("cutoff_total must be >= n")
    m = np.arange(n + 1, dtype=float)
    r = n - m
    log_beta = special.gammaln(r + 0.5) + special.gammaln(m + 0.5) - special.gammaln(r + m + 1.0)
    log_p = (special.gammaln(r + 0.5) + special.gammaln(m + 0.5) - special.gammaln(r + 1.0)
             - special.gammaln(m + 1.0) - n * math.log(2.0) - log_beta)
    probs = np.zeros((size + 1, size + 1))
    probs[m.astype(int), r.astype(int)] = np.exp(log_p)
    return JointDistribution(probs)


def _cutoff_for(spec: AlgebraSpec, z: complex, tol: float) -> tuple[int, float]:
    st = coherent_state(spec, z, tol=tol)
    return st.cutoff, st.tail_bound


def joint_coherent(z: complex, tol: float = DEFAULT_TOL) -> JointDistribution:
    """Product of two Poisson laws with mean ``|z|^2/2`` for the input ``|z, 0>``."""
    n, tail = _cutoff_for(AlgebraSpec.identity(), z, tol)
    mu = abs(complex(z)) ** 2 / 2.0
    k = np.arange(n + 1, dtype=float)
    if mu == 0:
        log_pois = np.where(k == 0, 0.0, -np.inf)
    else:
        log_pois = -mu + k * math.log(mu) - special.gammaln(k + 1.0)
    log_p = np.add.outer(log_pois, log_pois)
    probs = np.where(_antidiagonal_mask(n) <= n, np.exp(log_p), 0.0)
    return JointDistribution(probs, tail_bound=tail)


def joint_su11(z: complex, tol: float = DEFAULT_TOL) -> JointDistribution:
    """Output distribution for the su(1,1) coherent state (``E(n) = n(n+1)``).

    ``P(n, m) = 2^{-n-m}(n+1)(m+1)B(m+1, n+1)|z|^{2(n+m)+1}
    / [Γ(n+1)Γ(n+2)Γ(m+1)Γ(m+2) I_1(2|z|)]``.
    """
    r = abs(complex(z))
    if r == 0:
        return JointDistribution(np.ones((1, 1)))
    n_max, tail = _cutoff_for(AlgebraSpec.su11(), z, tol)
    n = np.arange(n_max + 1, dtype=float)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    log_beta = special.gammaln(mm + 1) + special.gammaln(nn + 1) - special.gammaln(nn + mm + 2)
    log_p = (
        -(nn + mm) * math.log(2.0)
        + np.log(nn + 1) + np.log(mm + 1) + log_beta
        + (2 * (nn + mm) + 1) * math.log(r)
        - special.gammaln(nn + 1) - special.gammaln(nn + 2)
        - special.gammaln(mm + 1) - special.gammaln(mm + 2)
        - log_bessel_i(1.0, 2.0 * r)
    )
    probs = np.where(nn + mm <= n_max, np.exp(log_p), 0.0)
    return JointDistribution(probs, tail_bound=tail)


def mutual_information(joint: JointDistribution) -> float:
    """``Σ P(n,m) ln[P(n,m) / (P_H(n) P_V(m))]`` in nats."""
    p = joint.probs / joint.probs.sum()
    ph = p.sum(axis=1)
    pv = p.sum(axis=0)
    mask = p > 0
    ratio = p[mask] / np.outer(ph, pv)[mask]
    return max(0.0, float(np.sum(p[mask] * np.log(ratio))))


def channel_report(joint: JointDistribution, strict: bool = True) -> ChannelReport:
    """Marginal statistics, covariance, mutual information and g2 per port.

    Raises
    ------
    DegenerateChannelError
        If ``strict`` and a port has zero mean photon number. With
        ``strict=False`` that port's g2 is reported as ``None`` (its Mandel
        Q is 0 by the vacuum convention either way).
    """
    p = joint.probs / joint.probs.sum()
    h = photon_statistics(p.sum(axis=1))
    v = photon_statistics(p.sum(axis=0))
    idx = np.arange(p.shape[0], dtype=float)
    cov = float(np.sum(p * np.outer(idx - h.mean, idx - v.mean)))
    tot = joint.total_photon_distribution()
    total = photon_statistics(tot).variance
    g2 = []
    for stats in (h, v):
        if stats.mean == 0:
            if strict:
                raise DegenerateChannelError("an output port has zero mean photon number; g2 undefined")
            g2.append(None)
        else:
            g2.append(stats.g2)
    return ChannelReport(h, v, cov, total, mutual_information(joint), g2[0], g2[1])


def factorization_test(joint: JointDistribution, threshold: float = 1e-6) -> FactorizationResult:
    """Decide whether ``P(n, m)`` factorizes as ``p(n) q(m)``.

    The score is the mutual information; the distribution counts as
    separable when it is below ``threshold`` nats. The ratio of the two
    largest singular values of the probability matrix is reported as a
    rank-one diagnostic.
    """
    score = mutual_information(joint)
    s = linalg.svdvals(joint.probs)
    ratio = float(s[1] / s[0]) if s.size > 1 and s[0] > 0 else 0.0
    return FactorizationResult(score < threshold, score, ratio)


def input_g2(state: TruncatedState) -> float:
    """``<n(n-1)>/<n>^2`` of a single-mode state; undefined for the vacuum."""
    return statistics(state).g2


def channel_marginal(p) -> np.ndarray:
    """Photon distribution at one output port for the input ``ρ ⊗ |0><0|``.

    Each input photon exits either port with probability ½, so the marginal
    is the binomial thinning ``P(k) = Σ_n p(n) C(n, k) 2^{-n}``. This gives
    the port statistics without building the two-mode state.
    """
    p = np.asarray(p, dtype=float)
    n = np.arange(p.size, dtype=float)
    k = n[:, None]
    with np.errstate(divide="ignore"):
        log_w = (special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(np.maximum(n - k, 0) + 1)
                 - n * math.log(2.0) + np.log(p))
    log_w = np.where(k <= n, log_w, -np.inf)
    return np.exp(log_w).sum(axis=1)


def total_variation(p, q) -> float:
    """Total-variation distance between two distributions padded to equal length."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    size = max(p.size, q.size)
    p = np.pad(p, (0, size - p.size))
    q = np.pad(q, (0, size - q.size))
    return 0.5 * float(np.abs(p - q).sum())

