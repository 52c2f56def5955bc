"""Constants of motion, curvature, and trajectory checks for four families of
3-dimensional Hamiltonian systems on conformally Euclidean spaces."""

from .core import (
    DomainSample,
    Family,
    PhasePoint,
    SystemSpec,
    hamiltonian,
    in_domain,
    mu,
    sample_domain,
)
from .dual import GradientVector, gradient, hamiltonian_vector_field, poisson_bracket
from .dynamics import IntegratorConfig, Termination, Trajectory, drift_report, integrate
from .errors import (
    ConfigError,
    ConfhamError,
    DomainError,
    FamilyMismatch,
    ParameterError,
    SamplingError,
)
from .observables import Observable, ComplexObservable, angular_momentum, catalog
from .verify import VerificationReport, VerifyConfig, run_full_suite

__all__ = [
    "ComplexObservable",
    "ConfigError",
    "ConfhamError",
    "DomainError",
    "DomainSample",
    "Family",
    "FamilyMismatch",
    "GradientVector",
    "IntegratorConfig",
    "Observable",
    "ParameterError",
    "PhasePoint",
    "SamplingError",
    "SystemSpec",
    "Termination",
    "Trajectory",
    "VerificationReport",
    "VerifyConfig",
    "angular_momentum",
    "catalog",
    "drift_report",
    "gradient",
    "hamiltonian",
    "hamiltonian_vector_field",
    "in_domain",
    "integrate",
    "mu",
    "poisson_bracket",
    "run_full_suite",
    "sample_domain",
]
