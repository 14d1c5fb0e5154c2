"""Nonlinear coherent states of deformed oscillator algebras.

Build coherent states for E-function algebras (``a_E|n> = sqrt(E(n))|n-1>``),
check the moment equation of their closure measures, and send them through
a 50:50 beam splitter to study photon statistics at the output ports.
"""

__version__ = "0.1.0"

from ._errors import (
    ConvergenceError,
    DegenerateChannelError,
    DegenerateStateError,
    DomainError,
    NLCoherentError,
    PoleError,
    QuadratureError,
    UnsupportedVariantError,
    VanishingFactorialError,
)
from .algebra import AlgebraSpec, Variant, load_algebra, log_e_factorial, registered
from .beamsplitter import (
    ChannelReport,
    JointDistribution,
    TwoModeState,
    bs_oracle,
    channel_report,
    joint_coherent,
    joint_fock,
    joint_from_state,
    joint_su11,
    mutual_information,
)
from .completeness import MomentReport, measure_density, resolution_of_identity_check, verify_moments
from .states import (
    PhotonStatistics,
    TruncatedState,
    coherent_state,
    number_state,
    photon_distribution,
    photon_statistics,
    statistics,
)

__all__ = [
    "__version__",
    "AlgebraSpec",
    "Variant",
    "load_algebra",
    "registered",
    "log_e_factorial",
    "TruncatedState",
    "PhotonStatistics",
    "coherent_state",
    "number_state",
    "photon_distribution",
    "photon_statistics",
    "statistics",
    "TwoModeState",
    "JointDistribution",
    "ChannelReport",
    "bs_oracle",
    "joint_fock",
    "joint_coherent",
    "joint_su11",
    "joint_from_state",
    "channel_report",
    "mutual_information",
    "MomentReport",
    "measure_density",
    "verify_moments",
    "resolution_of_identity_check",
    "NLCoherentError",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "QuadratureError",
    "VanishingFactorialError",
    "UnsupportedVariantError",
    "DegenerateStateError",
    "DegenerateChannelError",
]
