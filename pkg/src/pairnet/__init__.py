"""Pairwise SIS epidemic models on heterogeneous networks.

A ladder of closed ODE models (traditional, compact, heterogeneous and the
4-equation super compact model with its moment-based closure), validated
against exact Gillespie simulation on configuration-model graphs.
"""

from .degree_model import (
    DegreeDistribution,
    EpidemicParams,
    Moments,
    default_tau,
    make_bimodal,
    make_regular,
    make_truncated_powerlaw,
    moments,
    sample_degree_sequence,
    tau_critical,
)
from .closures import (
    ClosureErrorReport,
    DegenerateStateError,
    SusceptibleDegreeApprox,
    Q_factor,
    closure_error_E,
    compact_P,
    homogeneous_triple,
    linear_susceptible_approx,
    mean_degree_susceptibles,
    new_closure_triple,
)
from .ode_models import (
    MODELS,
    aggregate,
    conserved_quantities,
    initial_conditions,
    make_rhs,
    rhs_compact,
    rhs_heterogeneous,
    rhs_supercompact,
    rhs_traditional,
)
from .integrator import IntegrationSpec, TimeSeries, integrate, solve_to_plateau

__version__ = "0.1.0"
