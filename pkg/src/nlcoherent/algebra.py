"""Generalized oscillator algebras defined by an E-function.

The ladder operators act as ``a_E|n> = sqrt(E(n)) |n-1>`` and
``a_E^†|n> = sqrt(E(n+1)) |n+1>``. An algebra is fully described by the
nonnegative function ``E`` on the naturals, which this module represents as
declarative :class:`AlgebraSpec` data.

``E(0)`` is pinned to 0 for every variant so that ``a_E|0> = 0``. Polynomial
specs whose formula does not vanish at 0 are still accepted: only
``E(1), E(2), ...`` enter ``E(n)!`` and the coherent states.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np
from scipy import special

from ._errors import DomainError, VanishingFactorialError

__all__ = [
    "Variant",
    "AlgebraSpec",
    "LadderElement",
    "e_of_n",
    "e_values",
    "log_e_values",
    "log_e_factorial",
    "log_e_factorials",
    "polynomial_form",
    "ladder_elements",
    "annihilation_matrix",
    "creation_matrix",
    "number_matrix",
    "su11_generators",
    "commutator_diagonal",
    "annihilated_levels",
    "base_level",
    "REGISTERED",
    "registered",
    "load_algebra",
]

# polynomial E-functions are checked for E(n) >= 0 on 1..this bound at construction
_VALIDATION_RANGE = 10_000


class Variant(str, Enum):
    IDENTITY = "Identity"
    POLYNOMIAL = "Polynomial"
    F_OSCILLATOR = "FOscillator"
    Q_DEFORMED = "QDeformed"
    SU11 = "Su11"
    SUSY_CUBIC = "SusyCubic"
    DISTORTED = "Distorted"


_ALIASES = {
    "identity": Variant.IDENTITY,
    "polynomial": Variant.POLYNOMIAL,
    "f_oscillator": Variant.F_OSCILLATOR,
    "q_deformed": Variant.Q_DEFORMED,
    "su11": Variant.SU11,
    "susy_cubic": Variant.SUSY_CUBIC,
    "distorted": Variant.DISTORTED,
}

# built-in f^2(n) forms for f-oscillators, with their parameter names
_NAMED_F_SQUARED = {
    "identity": (),
    "q_deformed": ("lambda",),
    "su11": ("alpha1", "alpha2", "beta1"),
}

_REQUIRED_PARAMS = {
    Variant.IDENTITY: (),
    Variant.POLYNOMIAL: ("alphas", "betas"),
    Variant.F_OSCILLATOR: ("f_squared",),
    Variant.Q_DEFORMED: ("lambda",),
    Variant.SU11: ("alpha1", "alpha2", "beta1"),
    Variant.SUSY_CUBIC: ("epsilon",),
    Variant.DISTORTED: ("w",),
}


def _parse_variant(value) -> Variant:
    if isinstance(value, Variant):
        return value
    try:
        return Variant(value)
    except ValueError:
        pass
    key = str(value).strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    raise DomainError(f"unknown algebra variant {value!r}")


def _freeze(value):
    if isinstance(value, (list, tuple, np.ndarray)):
        return tuple(float(v) for v in value)
    if isinstance(value, str):
        return value
    return float(value)


@dataclass(frozen=True)
class AlgebraSpec:
    """Declarative description of an E-function.

    Parameters
    ----------
    variant : Variant or str
        One of the :class:`Variant` members (snake_case aliases accepted).
    params : mapping
        Variant parameters:

        - ``Polynomial``: ``alphas``, ``betas`` with ``E(n) = Π(α_p n + β_p)``
        - ``FOscillator``: ``f_squared`` either a name from
          ``{"identity", "q_deformed", "su11"}`` (plus that form's own
          parameters) or a table ``[f²(1), f²(2), ...]``; ``E(n) = n f²(n)``
        - ``QDeformed``: ``lambda`` (``ln q``), ``E(n) = sinh(λn)/sinh λ``
        - ``Su11``: ``alpha1``, ``alpha2``, ``beta1``,
          ``E(n) = α1 α2 n² + α2 β1 n``
        - ``SusyCubic``: ``epsilon < 1/2``,
          ``E(n+2) = (n+1)(n+1/2-ε)(n+3/2-ε)``, ``E(0) = E(1) = 0``
        - ``Distorted``: ``w >= 0``, ``E(n+2) = w + n``, ``E(0) = E(1) = 0``

    Examples
    --------
    >>> AlgebraSpec.su11().params["beta1"]
    1.0
    """

    variant: Variant
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        variant = _parse_variant(self.variant)
        params = {str(k): _freeze(v) for k, v in dict(self.params).items()}
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "params", MappingProxyType(params))
        self._validate()

    def __hash__(self):
        return hash((self.variant, tuple(sorted(self.params.items()))))

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self.variant == other.variant and dict(self.params) == dict(other.params)

    def _validate(self):
        p = self.params
        missing = [k for k in _REQUIRED_PARAMS[self.variant] if k not in p]
        if missing:
            raise DomainError(f"{self.variant.value} requires parameters {missing}")
        v = self.variant
        if v is Variant.POLYNOMIAL:
            if len(p["alphas"]) != len(p["betas"]) or not p["alphas"]:
                raise DomainError("alphas and betas must be nonempty and of equal length")
            n = np.arange(1, _VALIDATION_RANGE + 1, dtype=float)
            vals = np.prod([a * n + b for a, b in zip(p["alphas"], p["betas"])], axis=0)
            if np.any(vals < 0):
                bad = int(n[np.argmax(vals < 0)])
                raise DomainError(f"polynomial E-function is negative at n={bad}")
        elif v is Variant.F_OSCILLATOR:
            f2 = p["f_squared"]
            if isinstance(f2, str):
                if f2 not in _NAMED_F_SQUARED:
                    raise DomainError(f"unknown named f^2 {f2!r}; choose from {sorted(_NAMED_F_SQUARED)}")
                missing = [k for k in _NAMED_F_SQUARED[f2] if k not in p]
                if missing:
                    raise DomainError(f"f_squared={f2!r} requires parameters {missing}")
                if f2 == "su11":
                    _check_su11(p)
            elif any(val < 0 for val in f2):
                raise DomainError("tabulated f^2 values must be nonnegative")
        elif v is Variant.SU11:
            _check_su11(p)
        elif v is Variant.SUSY_CUBIC:
            if not p["epsilon"] < 0.5:
                raise DomainError(f"epsilon must be < 1/2, got {p['epsilon']}")
        elif v is Variant.DISTORTED:
            if not p["w"] >= 0:
                raise DomainError(f"distortion w must be >= 0, got {p['w']}")

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls):
        return cls(Variant.IDENTITY, {})

    @classmethod
    def polynomial(cls, alphas, betas):
        return cls(Variant.POLYNOMIAL, {"alphas": alphas, "betas": betas})

    @classmethod
    def f_oscillator(cls, f_squared, **params):
        return cls(Variant.F_OSCILLATOR, {"f_squared": f_squared, **params})

    @classmethod
    def q_deformed(cls, lam):
        return cls(Variant.Q_DEFORMED, {"lambda": lam})

    @classmethod
    def su11(cls, alpha1=1.0, alpha2=1.0, beta1=1.0):
        return cls(Variant.SU11, {"alpha1": alpha1, "alpha2": alpha2, "beta1": beta1})

    @classmethod
    def susy_cubic(cls, epsilon):
        return cls(Variant.SUSY_CUBIC, {"epsilon": epsilon})

    @classmethod
    def distorted(cls, w):
        return cls(Variant.DISTORTED, {"w": w})

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        return {"variant": self.variant.value, "params": params}

    @classmethod
    def from_dict(cls, data: Mapping) -> "AlgebraSpec":
        if "variant" not in data:
            raise DomainError("algebra definition needs a 'variant' field")
        return cls(data["variant"], data.get("params", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AlgebraSpec":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"AlgebraSpec({self.variant.value}{', ' if args else ''}{args})"


def _check_su11(p):
    n = np.arange(1, _VALIDATION_RANGE + 1, dtype=float)
    if np.any(p["alpha2"] * (p["alpha1"] * n + p["beta1"]) < 0):
        raise DomainError("su(1,1) parameters give a negative E-function")


def _log_sinh(x):
    x = np.abs(x)
    with np.errstate(divide="ignore"):
        return x + np.log1p(-np.exp(-2.0 * x)) - math.log(2.0)


def _raw_values(spec: AlgebraSpec, n: np.ndarray) -> np.ndarray:
    p = spec.params
    v = spec.variant
    if v is Variant.IDENTITY:
        return n.astype(float)
    if v is Variant.POLYNOMIAL:
        return np.prod([a * n + b for a, b in zip(p["alphas"], p["betas"])], axis=0)
    if v is Variant.SU11:
        return p["alpha1"] * p["alpha2"] * n**2 + p["alpha2"] * p["beta1"] * n
    if v is Variant.Q_DEFORMED:
        lam = p["lambda"]
        if lam == 0.0:
            return n.astype(float)
        with np.errstate(over="ignore"):
            return np.where(n > 0, np.exp(_log_sinh(lam * n) - _log_sinh(lam)), 0.0)
    if v is Variant.F_OSCILLATOR:
        return n * _f_squared(spec, n)
    if v is Variant.SUSY_CUBIC:
        eps = p["epsilon"]
        m = n - 2.0
        return np.where(n >= 2, (m + 1) * (m + 0.5 - eps) * (m + 1.5 - eps), 0.0)
    if v is Variant.DISTORTED:
        return np.where(n >= 2, p["w"] + n - 2.0, 0.0)
    raise AssertionError(v)


def _f_squared(spec, n):
    p = spec.params
    f2 = p["f_squared"]
    if f2 == "identity":
        return np.ones_like(n, dtype=float)
    if f2 == "q_deformed":
        lam = p["lambda"]
        if lam == 0.0:
            return np.ones_like(n, dtype=float)
        safe = np.where(n > 0, n, 1)
        with np.errstate(over="ignore"):
            return np.where(n > 0, np.exp(_log_sinh(lam * safe) - _log_sinh(lam)) / safe, 1.0)
    if f2 == "su11":
        return p["alpha2"] * (p["alpha1"] * n + p["beta1"])
    table = np.asarray(f2, dtype=float)
    if np.any(n > len(table)):
        raise DomainError(f"f^2 table covers n <= {len(table)}, requested n={int(np.max(n))}")
    # n = 0 multiplies f^2(0) by zero, any finite placeholder works
    return np.where(n >= 1, table[np.clip(n.astype(int) - 1, 0, len(table) - 1)], 0.0)


def e_values(spec: AlgebraSpec, n) -> np.ndarray:
    """Vectorized ``E(n)`` over an integer array, with ``E(0) = 0``."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise DomainError("E(n) is defined for n >= 0 only")
    vals = np.asarray(_raw_values(spec, n), dtype=float)
    return np.where(n == 0, 0.0, vals)


def e_of_n(spec: AlgebraSpec, n: int) -> float:
    """``E(n)`` for a single natural ``n``."""
    return float(e_values(spec, np.asarray(int(n))))


def polynomial_form(spec: AlgebraSpec):
    """Return ``(γ_l, δ)`` with ``E(n) = γ_l Π_p (n + δ_p)`` for n >= 1.

    Defined for Identity, Polynomial (all ``α_p != 0``) and Su11.
    Returns ``None`` for the other variants.
    """
    v = spec.variant
    p = spec.params
    if v is Variant.IDENTITY:
        return 1.0, (0.0,)
    if v is Variant.SU11:
        return p["alpha1"] * p["alpha2"], (p["beta1"] / p["alpha1"], 0.0)
    if v is Variant.POLYNOMIAL and all(a != 0 for a in p["alphas"]):
        gamma = math.prod(p["alphas"])
        return gamma, tuple(b / a for a, b in zip(p["alphas"], p["betas"]))
    return None


def log_e_values(spec: AlgebraSpec, n) -> np.ndarray:
    """``ln E(n)`` over an integer array, without overflow for sinh-type E.

    Raises
    ------
    VanishingFactorialError
        If ``E(n) = 0`` for some requested ``n``.
    """
    n = np.asarray(n)
    vals = e_values(spec, n)
    if np.any(vals < 0):
        raise DomainError(f"E-function is negative at n={int(n.flat[np.argmax(vals < 0)])}")
    if np.any(vals == 0):
        raise VanishingFactorialError(
            f"E({int(n.flat[np.argmax(vals == 0)])}) = 0; use the invariant subspace above the annihilated levels"
        )
    return _log_e_values(spec, n, vals)


def _closed_form_ok(form):
    return form is not None and form[0] > 0 and all(1.0 + d > 0 for d in form[1])


def log_e_factorials(spec: AlgebraSpec, n_max: int, start: int = 0) -> np.ndarray:
    """``ln Π_{k=start+1}^{start+j} E(k)`` for ``j = 0..n_max``.

    With ``start = 0`` this is ``ln E(j)!``. A larger ``start`` gives the
    shifted products used on the invariant subspace of SUSY-like algebras.

    Raises
    ------
    VanishingFactorialError
        If some ``E(k)`` in range is zero.
    """
    k = np.arange(start + 1, start + n_max + 1)
    vals = e_values(spec, k)
    if np.any(vals < 0):
        raise DomainError(f"E-function is negative at n={int(k[np.argmax(vals < 0)])}")
    if np.any(vals == 0):
        raise VanishingFactorialError(
            f"E({int(k[np.argmax(vals == 0)])}) = 0; use the invariant subspace above the annihilated levels"
        )
    logs = _log_e_values(spec, k, vals)
    out = np.empty(n_max + 1)
    out[0] = 0.0
    np.cumsum(logs, out=out[1:])
    return out


def _log_e_values(spec, k, vals):
    # sinh-type E grows like e^{λn}; take logs analytically so E(n)! never overflows
    p = spec.params
    q_like = spec.variant is Variant.Q_DEFORMED or (
        spec.variant is Variant.F_OSCILLATOR and p["f_squared"] == "q_deformed"
    )
    if q_like and p["lambda"] != 0.0:
        return _log_sinh(p["lambda"] * k) - _log_sinh(p["lambda"])
    return np.log(vals)


def log_e_factorial(spec: AlgebraSpec, n: int, method: str = "auto") -> float:
    """``ln E(n)!`` with ``E(0)! = 1``.

    Parameters
    ----------
    method : {"auto", "direct", "closed"}
        ``"direct"`` sums ``ln E(k)``. ``"closed"`` uses
        ``n ln γ + Σ_p [ln Γ(n+1+δ_p) - ln Γ(1+δ_p)]`` and needs a polynomial
        form with ``γ > 0`` and every ``δ_p > -1``. ``"auto"`` picks the
        closed form when available.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return 0.0
    form = polynomial_form(spec)
    if method == "closed" or (method == "auto" and _closed_form_ok(form)):
        if not _closed_form_ok(form):
            raise DomainError(f"no gamma-function closed form for {spec!r}")
        gamma, deltas = form
        return n * math.log(gamma) + math.fsum(
            special.gammaln(n + 1 + d) - special.gammaln(1 + d) for d in deltas
        )
    if method not in ("auto", "direct", "closed"):
        raise DomainError(f"unknown method {method!r}")
    k = np.arange(1, n + 1)
    vals = e_values(spec, k)
    if np.any(vals == 0):
        raise VanishingFactorialError(
            f"E({int(k[np.argmax(vals == 0)])}) = 0; use the invariant subspace above the annihilated levels"
        )
    return math.fsum(_log_e_values(spec, k, vals))


@dataclass(frozen=True)
class LadderElement:
    """Matrix element ``<n-1| a_E |n> = sqrt(E(n))``."""

    n: int
    value: float


def ladder_elements(spec: AlgebraSpec, cutoff: int) -> list[LadderElement]:
    """``sqrt(E(n))`` for ``n = 1..cutoff``."""
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    n = np.arange(1, cutoff + 1)
    vals = e_values(spec, n)
    if np.any(vals < 0):
        raise DomainError(f"E-function is negative at n={int(n[np.argmax(vals < 0)])}")
    return [LadderElement(int(k), float(v)) for k, v in zip(n, np.sqrt(vals))]


def annihilation_matrix(spec: AlgebraSpec, cutoff: int) -> np.ndarray:
    """``a_E`` on levels ``0..cutoff`` as a ``(cutoff+1)`` square matrix."""
    elems = ladder_elements(spec, cutoff)
    return np.diag([e.value for e in elems], k=1)


def creation_matrix(spec: AlgebraSpec, cutoff: int) -> np.ndarray:
    """``a_E^†``; its last column is cut by the truncation."""
    return annihilation_matrix(spec, cutoff).T.copy()


def number_matrix(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff + 1, dtype=float))


def su11_generators(spec: AlgebraSpec, cutoff: int):
    """``(K_-, K_+, K_0)`` for an Su11 spec.

    ``K_- = a_E``, ``K_+ = a_E^†`` and
    ``K_0 = α1 α2 n + (α2 β1 + α1 α2)/2``.
    """
    if spec.variant is not Variant.SU11:
        raise DomainError("su(1,1) generators need an Su11 spec")
    p = spec.params
    k_minus = annihilation_matrix(spec, cutoff)
    k_plus = k_minus.T.copy()
    n = np.arange(cutoff + 1, dtype=float)
    a1a2 = p["alpha1"] * p["alpha2"]
    k_zero = np.diag(a1a2 * n + 0.5 * (p["alpha2"] * p["beta1"] + a1a2))
    return k_minus, k_plus, k_zero


def commutator_diagonal(spec: AlgebraSpec, n: int) -> float:
    """Eigenvalue ``E(n+1) - E(n)`` of ``[a_E, a_E^†]`` on ``|n>``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    vals = e_values(spec, np.array([n, n + 1]))
    return float(vals[1] - vals[0])


def annihilated_levels(spec: AlgebraSpec, cutoff: int = 64) -> set[int]:
    """Levels ``n <= cutoff`` with ``E(n) = 0``; always contains 0."""
    n = np.arange(cutoff + 1)
    return {int(k) for k in n[e_values(spec, n) == 0]}


def base_level(spec: AlgebraSpec) -> int:
    """Lowest level of the subspace on which coherent states are built.

    This is the highest annihilated level: 0 for ordinary algebras and 1 for
    the SUSY-like ones, where ``|n+2>`` is generated from ``|1>``.
    """
    return max(annihilated_levels(spec))


def _registered_from_package() -> dict[str, AlgebraSpec]:
    out = {}
    folder = resources.files("nlcoherent") / "algebras"
    for entry in sorted(folder.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = AlgebraSpec.from_json(entry.read_text())
    return out


REGISTERED: Mapping[str, AlgebraSpec] = MappingProxyType(_registered_from_package())


def registered(name: str) -> AlgebraSpec:
    """Look up one of the algebra definitions shipped with the package."""
    try:
        return REGISTERED[name]
    except KeyError:
        raise DomainError(f"no registered algebra {name!r}; known: {sorted(REGISTERED)}") from None


def load_algebra(source) -> AlgebraSpec:
    """Read an algebra from a JSON file, or by registered name."""
    path = Path(source)
    if path.is_file():
        try:
            return AlgebraSpec.from_json(path.read_text())
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    if str(source) in REGISTERED:
        return REGISTERED[str(source)]
    raise DomainError(f"{source!r} is neither an algebra file nor a registered name")
