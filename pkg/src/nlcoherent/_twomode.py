"""Pure states of two boson modes truncated by total photon number."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import DomainError


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Amplitudes ``a[n, m] = <n, m|ψ>`` over ``n + m <= cutoff_total``.

    The first index counts photons in the horizontal mode, the second in the
    vertical mode. Entries above the anti-diagonal ``n + m = cutoff_total``
    must be zero.
    """

    amplitudes: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"amplitudes must be a square matrix, got shape {a.shape}")
        n = a.shape[0] - 1
        idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
        if np.any(a[idx > n] != 0):
            raise DomainError("amplitudes beyond n + m = cutoff_total must vanish")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @property
    def cutoff_total(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def block(self, total: int) -> np.ndarray:
        """Amplitudes on ``|k, total-k>`` for ``k = 0..total``."""
        k = np.arange(total + 1)
        return self.amplitudes[k, total - k]

    def to_dict(self) -> dict:
        n = self.cutoff_total
        rows = [[k, t - k, [float(v.real), float(v.imag)]]
                for t in range(n + 1) for k, v in enumerate(self.block(t))]
        return {"cutoff_total": n, "tail_bound": float(self.tail_bound), "amplitudes": rows}

    @classmethod
    def from_dict(cls, data) -> "TwoModeState":
        n = int(data["cutoff_total"])
        a = np.zeros((n + 1, n + 1), dtype=complex)
        for i, j, (re, im) in data["amplitudes"]:
            a[i, j] = complex(re, im)
        return cls(a, float(data.get("tail_bound", 0.0)))
