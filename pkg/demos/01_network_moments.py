"""Degree distributions, their moments, and the epidemic threshold.

Builds the benchmark networks (three bimodal mixes, two truncated power
laws, one regular graph), prints their first three moments, and shows how
the critical transmission rate tau_cr = gamma*n1/n2 varies with degree
heterogeneity at fixed mean degree.
"""

from pairnet import degree_model as dm

GAMMA = 1.0

networks = [
    ("bimodal 10/90", dm.make_bimodal(5, 35, 0.1)),
    ("bimodal 50/50", dm.make_bimodal(5, 35, 0.5)),
    ("bimodal 90/10", dm.make_bimodal(5, 35, 0.9)),
    ("powerlaw 5..30", dm.make_truncated_powerlaw(5, 30, 2.0)),
    ("powerlaw 10..140", dm.make_truncated_powerlaw(10, 140, 2.0)),
    ("regular 20", dm.make_regular(20)),
]

print(f"{'network':<18} {'<k>':>8} {'std':>8} {'n2':>10} {'n3':>12} "
      f"{'tau_cr':>9} {'tau=3tau_cr':>12}")
for name, dist in networks:
    m = dm.moments(dist)
    tc = dm.tau_critical(dist, GAMMA)
    print(f"{name:<18} {m.n1:>8.3f} {m.std:>8.3f} {m.n2:>10.2f} "
          f"{m.n3:>12.1f} {tc:>9.5f} {dm.default_tau(dist, GAMMA):>12.5f}")

print()
print("Same mean degree, different variance: the 50/50 bimodal network and")
print("the regular-20 network both have <k> = 20, but the bimodal second")
print("moment (625 vs 400) lowers the threshold from 0.05 to 0.032 —")
print("heterogeneity makes the epidemic easier to sustain.")

# A realized degree sequence matches the target distribution exactly
# (largest-remainder rounding with an even stub sum).
seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 1000)
print(f"\nSampled sequence for bimodal 50/50, N=1000: "
      f"{seq.count(5)} nodes of degree 5, {seq.count(35)} of degree 35, "
      f"stub sum {sum(seq)} (even: {sum(seq) % 2 == 0})")
