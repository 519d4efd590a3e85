"""Degree distributions, their moments and epidemic parameter defaults.

A network is described by its distinct degrees d_1 < d_2 < ... < d_K and the
probability p_k that a uniformly chosen node has degree d_k.  Everything else
(moments, critical transmission rate, realized degree sequences) derives from
that pair of vectors.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegreeDistribution",
    "Moments",
    "EpidemicParams",
    "make_bimodal",
    "make_regular",
    "make_truncated_powerlaw",
    "moments",
    "tau_critical",
    "default_tau",
    "sample_degree_sequence",
    "distribution_from_config",
    "distribution_to_config",
]

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class DegreeDistribution:
    """Distinct degrees with their probabilities.

    degrees must be strictly increasing positive integers; probs must be
    nonnegative and sum to one within 1e-12.
    """

    degrees: tuple
    probs: tuple

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "probs", probs)
        if len(degrees) == 0 or len(degrees) != len(probs):
            raise ValueError("degrees and probs must be non-empty and equal length")
        if degrees[0] < 1:
            raise ValueError("smallest degree must be >= 1")
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ValueError("degrees must be strictly increasing")
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > _PROB_TOL:
            raise ValueError("probabilities must sum to 1 within 1e-12")

    @property
    def K(self):
        return len(self.degrees)

    @property
    def degree_array(self):
        return np.asarray(self.degrees, dtype=float)

    @property
    def prob_array(self):
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class Moments:
    """First three raw moments n_i = sum_k d_k^i p_k."""

    n1: float
    n2: float
    n3: float

    @property
    def variance(self):
        return self.n2 - self.n1 ** 2

    @property
    def std(self):
        return math.sqrt(max(self.variance, 0.0))


@dataclass(frozen=True)
class EpidemicParams:
    """Transmission rate per S-I edge, recovery rate per node, node count."""

    tau: float
    gamma: float
    N: int

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.N < 1:
            raise ValueError("N must be >= 1")


def make_bimodal(d1, d2, frac1):
    """Two degree classes: degree d1 with probability frac1, d2 with 1 - frac1."""
    if not 1 <= d1 < d2:
        raise ValueError("require 1 <= d1 < d2 (use make_regular for one class)")
    if not 0.0 < frac1 < 1.0:
        raise ValueError("frac1 must lie strictly between 0 and 1")
    return DegreeDistribution((d1, d2), (frac1, 1.0 - frac1))


def make_regular(n):
    """Single degree class (homogeneous network)."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    return DegreeDistribution((n,), (1.0,))


def make_truncated_powerlaw(kmin, kmax, alpha):
    """p(k) = C k^(-alpha) on the integer range kmin..kmax inclusive."""
    if not 1 <= kmin <= kmax:
        raise ValueError("require 1 <= kmin <= kmax")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    degrees = range(kmin, kmax + 1)
    weights = [float(k) ** (-alpha) for k in degrees]
    norm = math.fsum(weights)
    return DegreeDistribution(tuple(degrees), tuple(w / norm for w in weights))


def moments(dist):
    """Raw moments by compensated direct summation."""
    n1 = math.fsum(d * p for d, p in zip(dist.degrees, dist.probs))
    n2 = math.fsum(d * d * p for d, p in zip(dist.degrees, dist.probs))
    n3 = math.fsum(d * d * d * p for d, p in zip(dist.degrees, dist.probs))
    return Moments(n1, n2, n3)


def tau_critical(dist, gamma):
    """Critical transmission rate gamma * <k> / <k^2>."""
    m = moments(dist)
    return gamma * m.n1 / m.n2


def default_tau(dist, gamma, multiple=3.0):
    """Transmission rate as a multiple of the critical rate (default 3)."""
    if multiple <= 0:
        raise ValueError("multiple must be > 0")
    return multiple * tau_critical(dist, gamma)


def sample_degree_sequence(dist, N):
    """Deterministic realization of N node degrees.

    Counts are N * p_k rounded by the largest-remainder method so they sum to
    N exactly.  If the resulting stub total is odd, the count of the
    smallest-degree class whose degree is odd is bumped by one (taking from
    the largest class) so stub matching is possible.  Returns a sorted list.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    targets = [N * p for p in dist.probs]
    counts = [int(math.floor(t)) for t in targets]
    remainders = [t - c for t, c in zip(targets, counts)]
    deficit = N - sum(counts)
    # Largest remainders win the leftover slots; ties go to smaller degrees.
    order = sorted(range(dist.K), key=lambda k: (-remainders[k], k))
    for k in order[:deficit]:
        counts[k] += 1

    stub_sum = sum(d * c for d, c in zip(dist.degrees, counts))
    if stub_sum % 2 == 1:
        # Moving one node between an odd-degree class and any other class of
        # different parity flips the stub-sum parity.  Prefer the smallest
        # odd-degree class with nonzero remainder, falling back to the
        # smallest odd-degree class outright.
        odd = [k for k in range(dist.K) if dist.degrees[k] % 2 == 1]
        if not odd:
            raise ValueError("cannot even out stub sum: all degrees even")
        pick = next((k for k in odd if remainders[k] > 0), odd[0])
        donor = next(
            (k for k in range(dist.K) if k != pick and counts[k] > 0
             and (dist.degrees[k] - dist.degrees[pick]) % 2 == 1),
            None,
        )
        if donor is None:
            counts[pick] += 1  # K == 1 odd-degree corner: grow N by one node
        else:
            counts[pick] += 1
            counts[donor] -= 1

    sequence = []
    for d, c in zip(dist.degrees, counts):
        sequence.extend([d] * c)
    return sequence


def distribution_from_config(cfg):
    """Build a distribution from the scenario-file network spec."""
    kind = cfg.get("kind")
    if kind == "bimodal":
        return make_bimodal(cfg["d1"], cfg["d2"], cfg["frac1"])
    if kind == "powerlaw":
        return make_truncated_powerlaw(cfg["kmin"], cfg["kmax"], cfg["alpha"])
    if kind == "regular":
        return make_regular(cfg["n"])
    if kind == "explicit":
        return DegreeDistribution(tuple(cfg["degrees"]), tuple(cfg["probs"]))
    raise ValueError(f"unknown distribution kind: {kind!r}")


def distribution_to_config(dist):
    """Serialize a distribution as an explicit scenario-file spec."""
    return {
        "kind": "explicit",
        "degrees": list(dist.degrees),
        "probs": list(dist.probs),
    }
