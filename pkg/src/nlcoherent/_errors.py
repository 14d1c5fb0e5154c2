"""Exception hierarchy shared by every module of the package."""


class NLCoherentError(Exception):
    """Base class for all errors raised by :mod:`nlcoherent`."""


class DomainError(NLCoherentError, ValueError):
    """An argument lies outside the domain of a function."""


class PoleError(DomainError):
    """A lower hypergeometric parameter is a nonpositive integer."""


class ConvergenceError(NLCoherentError, RuntimeError):
    """A series, contour integral or cutoff search did not converge."""


class QuadratureError(NLCoherentError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    n : int or None
        Moment order at which the failure happened, when applicable.
    """

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class VanishingFactorialError(NLCoherentError, ZeroDivisionError):
    """``E(n)!`` vanishes because ``E(k) = 0`` for some ``1 <= k <= n``.

    Raised for SUSY-like algebras; build states on the invariant subspace
    above the annihilated levels instead.
    """


class UnsupportedVariantError(NLCoherentError, ValueError):
    """The operation is not defined for this algebra variant."""


class DegenerateStateError(NLCoherentError, ValueError):
    """A normalized quantity is undefined because the mean photon number is 0."""


class DegenerateChannelError(DegenerateStateError):
    """An output port of the beam splitter carries no photons on average."""
