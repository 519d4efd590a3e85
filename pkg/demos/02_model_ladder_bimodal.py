"""The four closed pairwise SIS models on one heterogeneous network.

Integrates the traditional (mean-degree closure), compact (per-degree
susceptibles, aggregate pairs), heterogeneous (fully degree-resolved pairs),
and supercompact (4 equations + moment closure Q) models on the 50/50
bimodal network and compares prevalence curves and endemic plateaus.

For a bimodal network (two degree classes) the supercompact closure is
exact relative to the compact model, so those two curves coincide to
integration accuracy; the traditional model visibly overshoots.
"""

import numpy as np

from pairnet import degree_model as dm, ode_models as om
from pairnet.degree_model import EpidemicParams
from pairnet.integrator import IntegrationSpec, integrate, solve_to_plateau

dist = dm.make_bimodal(5, 35, 0.5)
N = 1000
params = EpidemicParams(tau=dm.default_tau(dist, 1.0), gamma=1.0, N=N)
grid = np.linspace(0.0, 15.0, 201)
print(f"bimodal(5, 35, 50/50), N={N}, tau={params.tau:.4f} (=3*tau_cr), "
      f"gamma=1, i0=0.01\n")

curves = {}
for model in om.MODELS:
    rhs = om.make_rhs(model, dist, params)
    y0 = om.initial_conditions(dist, params, 0.01, model)
    spec = IntegrationSpec(0.0, 15.0, grid, rtol=1e-8, atol=1e-7,
                           scale=float(N))
    ts = integrate(rhs, y0, spec)
    agg = np.array([om.aggregate(model, y, dist, N) for y in ts.states])
    curves[model] = agg[:, 1]
    plateau = solve_to_plateau(rhs, y0, params)
    I_inf = om.aggregate(model, plateau["state"], dist, N)[1]
    print(f"{model:<14} {ts.n_steps:>4} steps   plateau [I] = {I_inf:7.2f}")

print("\nsup-norm differences in [I](t):")
names = list(om.MODELS)
for i, a in enumerate(names):
    for b in names[i + 1:]:
        sup = float(np.max(np.abs(curves[a] - curves[b])))
        print(f"  {a:<14} vs {b:<14} {sup:10.3g}")

print("\nsupercompact vs compact is at integration tolerance; the")
print("traditional model differs by tens of nodes because one mean degree")
print("cannot represent the 5/35 split.")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for model in om.MODELS:
        ax.plot(grid, curves[model], label=model)
    ax.set_xlabel("t")
    ax.set_ylabel("[I](t)")
    ax.set_title("Pairwise SIS models, bimodal(5, 35) network")
    ax.legend()
    fig.tight_layout()
    fig.savefig("model_ladder_bimodal.png", dpi=130)
    print("\nwrote model_ladder_bimodal.png")
except ImportError:
    print("\n(matplotlib not installed; skipping the plot)")
