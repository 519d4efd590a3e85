"""Supercompact closure quality on truncated power-law networks.

The supercompact model replaces the K per-degree susceptible counts of the
compact model with a single closure factor Q built from the first three
degree moments.  For two degree classes this is exact; for a power law it
is an approximation.  The error functional

    E(t) = (S2 - S1)/S1^2 - Q

measures, along the compact trajectory, how far the moment-based Q is from
the degree-resolved truth.  This demo integrates both models on a sparse
(5..30) and a dense (10..140) truncated power law and reports E alongside
the prevalence gap it induces.
"""

import numpy as np

from pairnet import closures, degree_model as dm, ode_models as om
from pairnet.degree_model import EpidemicParams
from pairnet.integrator import IntegrationSpec, integrate

N = 1000
grid = np.linspace(0.0, 15.0, 201)

for label, (kmin, kmax) in (("sparse", (5, 30)), ("dense", (10, 140))):
    dist = dm.make_truncated_powerlaw(kmin, kmax, 2.0)
    m = dm.moments(dist)
    params = EpidemicParams(tau=dm.default_tau(dist, 1.0), gamma=1.0, N=N)
    print(f"--- {label} power law k^-2 on [{kmin}, {kmax}]  "
          f"<k>={m.n1:.2f} std={m.std:.2f} tau={params.tau:.4f}")

    curves = {}
    compact_states = None
    for model in ("compact", "supercompact"):
        rhs = om.make_rhs(model, dist, params)
        y0 = om.initial_conditions(dist, params, 0.01, model)
        spec = IntegrationSpec(0.0, 15.0, grid, rtol=1e-8, atol=1e-7,
                               scale=float(N))
        ts = integrate(rhs, y0, spec)
        agg = np.array([om.aggregate(model, y, dist, N) for y in ts.states])
        curves[model] = agg[:, 1]
        if model == "compact":
            compact_states = ts.states

    E = np.empty(grid.size)
    for i, y in enumerate(compact_states):
        state = om.unpack("compact", y, dist)
        E[i] = closures.closure_error_E(state, dist, t=grid[i]).E

    gap = np.abs(curves["supercompact"] - curves["compact"])
    print(f"  sup_t |I_super - I_compact| = {gap.max():.3f} nodes "
          f"({100 * gap.max() / N:.2f}% of N)")
    print(f"  max_t |E| = {np.max(np.abs(E)):.3g}, "
          f"E at plateau = {E[-1]:.3g}")
    print(f"  plateau [I]: compact {curves['compact'][-1]:.2f}, "
          f"supercompact {curves['supercompact'][-1]:.2f}\n")

print("Even on the dense power law the moment closure stays within a few")
print("nodes of the K-class compact model, at a fixed cost of 5 equations")
print(f"instead of K+3 (dense power law: K = {dist.K} classes).")
