"""Triple closures for pairwise SIS models.

Covers the homogeneous closure factor, the compact model's P factor, the
linear-interpolant approximation of the susceptible degree distribution, the
moment-based Q factor used by the 4-equation model, and the closure-error
functional E that scores Q against a degree-resolved reference state.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .degree_model import moments

__all__ = [
    "DegenerateStateError",
    "SusceptibleDegreeApprox",
    "ClosureErrorReport",
    "VARIANCE_EPS_REL",
    "homogeneous_triple",
    "compact_P",
    "mean_degree_susceptibles",
    "linear_susceptible_approx",
    "Q_factor",
    "new_closure_triple",
    "closure_error_E",
]

# Relative threshold on n2 - n1^2 below which a network is treated as
# homogeneous and the analytic limit of Q is used instead of the 0/0-prone
# closed form.
VARIANCE_EPS_REL = 1e-9


class DegenerateStateError(ValueError):
    """Raised when a closure quantity is undefined ([S] = 0 or no S stubs)."""


@dataclass
class SusceptibleDegreeApprox:
    """Linear-interpolant approximation s_k of the susceptible degree mix.

    n_S is the mean degree of susceptible nodes, q1/qK the endpoint ratios
    s_k/p_k of the interpolant, s the approximate probabilities and Q the
    resulting closure factor (None until attached by Q_factor).
    """

    n_S: float
    q1: float
    qK: float
    s: np.ndarray
    Q: float = None


@dataclass
class ClosureErrorReport:
    """Closure error E = (S2 - S1)/S1^2 - Q at one state, plus E/Q."""

    t: float
    E: float
    relative: float
    n_S: float
    Q: float
    # Gap between S1/[S] and ([SI]+[SS])/[S]; nonzero only through
    # integration drift of the compact model's stub identity.
    n_S_drift: float = 0.0


def homogeneous_triple(AS, SI, S, n):
    """Homogeneous closure [ASI] ~= ((n-1)/n) [AS][SI]/[S]."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    if S <= 0.0:
        return 0.0
    return (n - 1.0) / n * AS * SI / S


def compact_P(Sk, degrees):
    """Compact-model factor P = sum_k (d_k - 1) d_k [S_k] / S_s^2."""
    Sk = np.asarray(Sk, dtype=float)
    d = np.asarray(degrees, dtype=float)
    S_s = float(d @ Sk)
    if S_s <= 0.0:
        return 0.0
    return float(((d - 1.0) * d) @ Sk) / (S_s * S_s)


def mean_degree_susceptibles(SI, SS, S):
    """Mean degree of susceptibles n_S = ([SI] + [SS]) / [S]."""
    if S <= 0.0:
        raise DegenerateStateError("no susceptible nodes: n_S undefined")
    return (SI + SS) / S


def linear_susceptible_approx(dist, n_S):
    """Solve the two-constraint system for s_k under the linear ansatz.

    The ratio q_k = s_k / p_k is assumed linear in the degree; the endpoint
    values q1, qK then follow from sum(s) = 1 and sum(d s) = n_S.  Refuses
    homogeneous distributions (K = 1 or negligible variance), where the
    system is singular and the caller must take the homogeneous limit.
    """
    m = moments(dist)
    var = m.n2 - m.n1 ** 2
    if dist.K == 1 or var <= VARIANCE_EPS_REL * m.n1 ** 2:
        raise DegenerateStateError(
            "homogeneous distribution: linear interpolant is singular"
        )
    d = dist.degree_array
    p = dist.prob_array
    d1, dK = d[0], d[-1]
    q1 = (m.n2 - m.n1 * n_S + d1 * (n_S - m.n1)) / var
    qK = (m.n2 - m.n1 * n_S + dK * (n_S - m.n1)) / var
    s = (p * (d - d1) * qK + p * (dK - d) * q1) / (dK - d1)
    if np.any(s < 0):
        warnings.warn(
            "linear susceptible approximation produced negative s_k "
            f"(n_S={n_S:g}); Q uses the closed form regardless",
            RuntimeWarning,
            stacklevel=2,
        )
    return SusceptibleDegreeApprox(n_S=n_S, q1=q1, qK=qK, s=s)


def Q_factor(S, SI, SS, dist):
    """Closure factor of the 4-equation model.

    Q = 1/(n_S [S]) * ( (n2 (n2 - n_S n1) + n3 (n_S - n1)) / (n_S (n2 - n1^2)) - 1 )

    with n_S = ([SI] + [SS]) / [S].  For homogeneous distributions the
    bracket degenerates to 0/0 and the analytic limit n2/n_S - 1 is used.
    Degenerate states ([S] = 0 or no susceptible stubs) return 0: every use
    of Q carries a factor [SI], so this keeps the right-hand sides continuous
    at the absorbing boundaries.
    """
    if S <= 0.0:
        return 0.0
    S1 = SI + SS
    if S1 <= 0.0:
        return 0.0
    n_S = S1 / S
    m = moments(dist)
    var = m.n2 - m.n1 ** 2
    if dist.K == 1 or var <= VARIANCE_EPS_REL * m.n1 ** 2:
        bracket = m.n2 / n_S - 1.0
    else:
        bracket = (m.n2 * (m.n2 - n_S * m.n1) + m.n3 * (n_S - m.n1)) / (n_S * var) - 1.0
    return bracket / (n_S * S)


def new_closure_triple(AS, SI, S, SS, dist):
    """Moment-based closure [ASI] ~= [AS][SI] Q."""
    return AS * SI * Q_factor(S, SI, SS, dist)


def closure_error_E(state, dist, t=0.0):
    """Score Q against the degree-resolved truth of a compact-model state.

    Takes any object exposing per-degree susceptible counts ``Sk`` plus pair
    counts ``SI`` and ``SS``.  S1 and S2 are computed from Sk directly, n_S is
    taken as S1/[S] (the degree-resolved value, which the compact dynamics
    keep equal to ([SI]+[SS])/[S]) and the report carries both E and E/Q.
    """
    Sk = np.asarray(state.Sk, dtype=float)
    d = dist.degree_array
    S = float(np.sum(Sk))
    S1 = float(d @ Sk)
    if S <= 0.0 or S1 <= 0.0:
        raise DegenerateStateError("closure error undefined without S stubs")
    S2 = float((d * d) @ Sk)
    n_S = S1 / S
    # Q evaluated at the same n_S: feed SI+SS = S1 so the two n_S definitions
    # cannot drift apart and E isolates the interpolant error.
    Q = Q_factor(S, 0.0, S1, dist)
    E = (S2 - S1) / (S1 * S1) - Q
    rel = E / Q if Q != 0.0 else float("inf") if E != 0.0 else 0.0
    drift = n_S - (float(state.SI) + float(state.SS)) / S
    return ClosureErrorReport(t=t, E=E, relative=rel, n_S=n_S, Q=Q, n_S_drift=drift)
