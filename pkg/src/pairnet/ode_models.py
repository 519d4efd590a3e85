"""Right-hand sides and state layouts for the four closed pairwise models.

All models use directed pair counting ([XY] = [YX], [XX] twice the number of
unique X-X edges).  States are flat float vectors with a fixed layout per
model:

    traditional / supercompact : [S, I, SI, SS, II]                (5)
    compact                    : [S_1..S_K, SI, SS, II]            (K + 3)
    heterogeneous              : [S_1..S_K, SS(KxK), SI(KxK),
                                  II(KxK)] row-major               (K + 3K^2)

The compact and heterogeneous models recover infected counts through
[I_k] = N_k - [S_k].
"""

from dataclasses import dataclass

import numpy as np

from . import closures
from .degree_model import moments

__all__ = [
    "MODELS",
    "PairwiseState",
    "CompactState",
    "HetState",
    "rhs_traditional",
    "rhs_compact",
    "rhs_supercompact",
    "rhs_heterogeneous",
    "make_rhs",
    "state_size",
    "initial_conditions",
    "unpack",
    "aggregate",
    "conserved_quantities",
]

MODELS = ("traditional", "compact", "heterogeneous", "supercompact")


@dataclass
class PairwiseState:
    S: float
    I: float
    SI: float
    SS: float
    II: float

    def to_array(self):
        return np.array([self.S, self.I, self.SI, self.SS, self.II])

    @classmethod
    def from_array(cls, y):
        return cls(*(float(v) for v in y))


@dataclass
class CompactState:
    Sk: np.ndarray
    SI: float
    SS: float
    II: float

    def to_array(self):
        return np.concatenate([self.Sk, [self.SI, self.SS, self.II]])

    @classmethod
    def from_array(cls, y, K):
        return cls(np.array(y[:K]), float(y[K]), float(y[K + 1]), float(y[K + 2]))


@dataclass
class HetState:
    Sk: np.ndarray
    SSmat: np.ndarray
    SImat: np.ndarray
    IImat: np.ndarray

    def to_array(self):
        return np.concatenate(
            [self.Sk, self.SSmat.ravel(), self.SImat.ravel(), self.IImat.ravel()]
        )

    @classmethod
    def from_array(cls, y, K):
        Sk = np.array(y[:K])
        blocks = y[K:].reshape(3, K, K)
        return cls(Sk, blocks[0].copy(), blocks[1].copy(), blocks[2].copy())


def state_size(model, K):
    if model in ("traditional", "supercompact"):
        return 5
    if model == "compact":
        return K + 3
    if model == "heterogeneous":
        return K + 3 * K * K
    raise ValueError(f"unknown model {model!r}")


def rhs_traditional(y, params, n):
    """Homogeneous-closure pairwise system with mean degree n."""
    S, I, SI, SS, II = y
    tau, gamma = params.tau, params.gamma
    SSI = closures.homogeneous_triple(SS, SI, S, n)
    ISI = closures.homogeneous_triple(SI, SI, S, n)
    return np.array([
        gamma * I - tau * SI,
        tau * SI - gamma * I,
        gamma * (II - SI) + tau * (SSI - ISI) - tau * SI,
        2.0 * gamma * SI - 2.0 * tau * SSI,
        -2.0 * gamma * II + 2.0 * tau * (ISI + SI),
    ])


def rhs_compact(y, params, dist):
    """K+3-equation model: per-degree susceptibles plus aggregate pairs."""
    K = dist.K
    Sk = y[:K]
    SI, SS, II = y[K], y[K + 1], y[K + 2]
    tau, gamma = params.tau, params.gamma
    d = dist.degree_array
    Nk = params.N * dist.prob_array
    Ik = Nk - Sk

    S_s = float(d @ Sk)
    if S_s > 0.0:
        dSk = gamma * Ik - tau * d * Sk * (SI / S_s)
    else:
        dSk = gamma * Ik
    P = closures.compact_P(Sk, d)
    dSI = gamma * (II - SI) + tau * (SS - SI) * SI * P - tau * SI
    dSS = 2.0 * gamma * SI - 2.0 * tau * SS * SI * P
    dII = 2.0 * tau * SI - 2.0 * gamma * II + 2.0 * tau * SI * SI * P
    return np.concatenate([dSk, [dSI, dSS, dII]])


def rhs_supercompact(y, params, dist):
    """4+1-equation model closed with the moment-based Q factor.

    For homogeneous distributions Q reduces exactly to the traditional
    closure factor, so the traditional right-hand side is reused verbatim
    (identical floating-point expression, as the reduction demands).
    """
    m = moments(dist)
    var = m.n2 - m.n1 ** 2
    if dist.K == 1 or var <= closures.VARIANCE_EPS_REL * m.n1 ** 2:
        return rhs_traditional(y, params, m.n1)
    S, I, SI, SS, II = y
    tau, gamma = params.tau, params.gamma
    Q = closures.Q_factor(S, SI, SS, dist)
    return np.array([
        gamma * I - tau * SI,
        tau * SI - gamma * I,
        gamma * (II - SI) + tau * SI * (SS - SI) * Q - tau * SI,
        2.0 * gamma * SI - 2.0 * tau * SI * SS * Q,
        -2.0 * gamma * II + 2.0 * tau * SI * SI * Q + 2.0 * tau * SI,
    ])


def rhs_heterogeneous(y, params, dist):
    """Degree-resolved pair model, triples closed on the middle node's degree.

    [A_m S_k B_l] ~= ((d_k - 1)/d_k) [A_m S_k][S_k B_l]/[S_k]; classes with
    [S_k] = 0 contribute no S_k-centered triples.
    """
    K = dist.K
    tau, gamma = params.tau, params.gamma
    d = dist.degree_array
    Nk = params.N * dist.prob_array
    Sk = y[:K]
    blocks = y[K:].reshape(3, K, K)
    SSm, SIm, IIm = blocks[0], blocks[1], blocks[2]
    Ik = Nk - Sk

    SIk = SIm.sum(axis=1)  # [S_k I]
    # Infection pressure per S_k-centered triple: ((d_k-1)/d_k) [S_k I]/[S_k].
    g = np.zeros(K)
    pos = Sk > 0.0
    g[pos] = (d[pos] - 1.0) / d[pos] * SIk[pos] / Sk[pos]

    dSk = -tau * SIk + gamma * Ik
    gsum = g[:, None] + g[None, :]
    dSS = -tau * SSm * gsum + gamma * (SIm + SIm.T)
    dSI = (
        tau * (SSm * g[None, :] - SIm * g[:, None])
        - (tau + gamma) * SIm
        + gamma * IIm
    )
    A = g[:, None] * SIm
    dII = tau * (A + A.T) + tau * (SIm + SIm.T) - 2.0 * gamma * IIm
    return np.concatenate([dSk, dSS.ravel(), dSI.ravel(), dII.ravel()])


def make_rhs(model, dist, params):
    """Bind a model's RHS into the f(t, y) signature used by the integrator."""
    if model == "traditional":
        n = moments(dist).n1
        return lambda t, y: rhs_traditional(y, params, n)
    if model == "compact":
        return lambda t, y: rhs_compact(y, params, dist)
    if model == "supercompact":
        return lambda t, y: rhs_supercompact(y, params, dist)
    if model == "heterogeneous":
        return lambda t, y: rhs_heterogeneous(y, params, dist)
    raise ValueError(f"unknown model {model!r}")


def initial_conditions(dist, params, i0, model):
    """Degree-uniform seeding with stub-proportional pair mixing.

    [I_k](0) = i0 N_k and [S_k](0) = (1-i0) N_k; pair blocks assume stubs
    connect independently: [X_k Y_l](0) = d_k [X_k] d_l [Y_l] / (n1 N).
    Aggregated models receive the exact sums of the same seeding.
    """
    if not 0.0 <= i0 < 1.0:
        raise ValueError("initial infected fraction must lie in [0, 1)")
    N = params.N
    n1 = moments(dist).n1
    d = dist.degree_array
    Nk = N * dist.prob_array
    Sk0 = (1.0 - i0) * Nk
    Ik0 = i0 * Nk

    stubs = n1 * N
    sS = d * Sk0  # susceptible stubs per class
    sI = d * Ik0
    SI0 = float(sS.sum() * sI.sum() / stubs)
    SS0 = float(sS.sum() ** 2 / stubs)
    II0 = float(sI.sum() ** 2 / stubs)

    if model in ("traditional", "supercompact"):
        return np.array([(1.0 - i0) * N, i0 * N, SI0, SS0, II0])
    if model == "compact":
        return np.concatenate([Sk0, [SI0, SS0, II0]])
    if model == "heterogeneous":
        SSmat = np.outer(sS, sS) / stubs
        SImat = np.outer(sS, sI) / stubs
        IImat = np.outer(sI, sI) / stubs
        return np.concatenate([Sk0, SSmat.ravel(), SImat.ravel(), IImat.ravel()])
    raise ValueError(f"unknown model {model!r}")


def unpack(model, y, dist):
    """Flat vector -> typed state object."""
    if model in ("traditional", "supercompact"):
        return PairwiseState.from_array(y)
    if model == "compact":
        return CompactState.from_array(np.asarray(y, dtype=float), dist.K)
    if model == "heterogeneous":
        return HetState.from_array(np.asarray(y, dtype=float), dist.K)
    raise ValueError(f"unknown model {model!r}")


def aggregate(model, y, dist, N):
    """Aggregate counts (S, I, SI, SS, II) of any model state."""
    if model in ("traditional", "supercompact"):
        return tuple(float(v) for v in y[:5])
    K = dist.K
    if model == "compact":
        S = float(np.sum(y[:K]))
        return S, N - S, float(y[K]), float(y[K + 1]), float(y[K + 2])
    if model == "heterogeneous":
        S = float(np.sum(y[:K]))
        blocks = np.asarray(y[K:]).reshape(3, K, K)
        return (
            S,
            N - S,
            float(blocks[1].sum()),
            float(blocks[0].sum()),
            float(blocks[2].sum()),
        )
    raise ValueError(f"unknown model {model!r}")


def conserved_quantities(model, y, dist, N):
    """Node total S+I and pair total SS + 2 SI + II (integration monitors)."""
    S, I, SI, SS, II = aggregate(model, y, dist, N)
    return {"node_total": S + I, "pair_total": SS + 2.0 * SI + II}
