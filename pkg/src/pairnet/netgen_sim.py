"""Configuration-model graphs and exact stochastic SIS simulation.

Graphs are built by uniform stub matching with defect removal by edge
swapping, so the prescribed degree sequence is realized exactly.  The
epidemic engine is an exact Gillespie process (recovery at rate gamma per
infected node, transmission at rate tau per S-I edge) with incremental pair
counting; the hot loop is compiled with numba.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

__all__ = [
    "Graph",
    "SimResult",
    "build_configuration_graph",
    "recount_pairs",
    "gillespie_sis",
    "ensemble",
]


@dataclass
class Graph:
    N: int
    indptr: np.ndarray
    indices: np.ndarray
    degrees: np.ndarray

    def neighbors(self, u):
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @property
    def n_edges(self):
        return self.indices.size // 2


@dataclass
class SimResult:
    """Gridded counts of one run or an ensemble (directed pair convention)."""

    times: np.ndarray
    S: np.ndarray
    I: np.ndarray
    SI: np.ndarray
    SS: np.ndarray
    II: np.ndarray
    std_I: np.ndarray = None
    runs: int = 1
    excluded: int = 0
    events: list = field(default_factory=list)


def build_configuration_graph(degree_sequence, seed=None, max_sweeps=200):
    """Uniform stub matching, then swap away self-loops and multi-edges.

    Raises ValueError when the defect-removal sweeps fail to produce a
    simple graph (pathological sequences).
    """
    deg = np.asarray(degree_sequence, dtype=np.int64)
    N = deg.size
    if deg.sum() % 2 != 0:
        raise ValueError("stub sum must be even")
    if N and deg.max() >= N:
        raise ValueError("max degree must be below N")
    rng = np.random.default_rng(seed)

    stubs = np.repeat(np.arange(N), deg)
    rng.shuffle(stubs)
    u, v = stubs[0::2], stubs[1::2]

    edges = []
    edge_set = set()
    defects = []
    for a, b in zip(u.tolist(), v.tolist()):
        key = (a, b) if a < b else (b, a)
        if a == b or key in edge_set:
            defects.append((a, b))
        else:
            edge_set.add(key)
            edges.append(key)

    sweeps = 0
    while defects:
        sweeps += 1
        if sweeps > max_sweeps:
            raise ValueError(
                f"failed to simplify configuration graph after {max_sweeps} "
                f"sweeps (degree sequence starts {deg[:10].tolist()})"
            )
        still_bad = []
        for a, b in defects:
            placed = False
            for _ in range(50):
                j = int(rng.integers(len(edges)))
                x, y = edges[j]
                if rng.integers(2):
                    x, y = y, x
                # Propose replacing (x, y) by (a, x) and (b, y).
                e1 = (a, x) if a < x else (x, a)
                e2 = (b, y) if b < y else (y, b)
                if a == x or b == y or e1 == e2 or e1 in edge_set or e2 in edge_set:
                    continue
                edge_set.discard((min(x, y), max(x, y)))
                edge_set.add(e1)
                edge_set.add(e2)
                edges[j] = e1
                edges.append(e2)
                placed = True
                break
            if not placed:
                still_bad.append((a, b))
        defects = still_bad

    adj = [[] for _ in range(N)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    indptr = np.zeros(N + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(nb) for nb in adj])
    indices = np.empty(indptr[-1], dtype=np.int64)
    for a, nb in enumerate(adj):
        nb.sort()
        indices[indptr[a]:indptr[a + 1]] = nb
    realized = np.diff(indptr)
    if not np.array_equal(realized, deg):
        raise AssertionError("degree sequence not preserved by rewiring")
    return Graph(N=N, indptr=indptr, indices=indices, degrees=realized)


def recount_pairs(graph, state):
    """From-scratch directed pair counts ([SI], [SS], [II]) for a 0/1 state."""
    state = np.asarray(state, dtype=np.int8)
    src = np.repeat(np.arange(graph.N), graph.degrees)
    s_src = state[src]
    s_dst = state[graph.indices]
    SI = int(np.sum((s_src == 0) & (s_dst == 1)))
    SS = int(np.sum((s_src == 0) & (s_dst == 0)))
    II = int(np.sum((s_src == 1) & (s_dst == 1)))
    return SI, SS, II


@njit(cache=True)
def _gillespie_core(indptr, indices, deg, tau, gamma, state, t_end, out_times,
                    seed, audit_mask, record_events, max_events):
    np.random.seed(seed)
    N = deg.size
    dmax = float(deg.max())

    inf_nodes = np.empty(N, dtype=np.int64)
    inf_pos = np.full(N, -1, dtype=np.int64)
    ninf = 0
    for u in range(N):
        if state[u] == 1:
            inf_nodes[ninf] = u
            inf_pos[u] = ninf
            ninf += 1

    # Directed pair counts: SI counts ordered (S, I) pairs, which equals the
    # number of ordered (I, S) pairs; SS and II are twice the edge counts.
    SI = 0
    SS = 0
    II = 0
    for u in range(N):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if state[u] == 0:
                if state[v] == 0:
                    SS += 1
                else:
                    SI += 1
            else:
                if state[v] == 1:
                    II += 1

    nt = out_times.size
    outS = np.empty(nt, dtype=np.float64)
    outI = np.empty(nt, dtype=np.float64)
    outSI = np.empty(nt, dtype=np.float64)
    outSS = np.empty(nt, dtype=np.float64)
    outII = np.empty(nt, dtype=np.float64)
    audit_fail = 0

    ev_t = np.empty(max_events if record_events else 1, dtype=np.float64)
    ev_node = np.empty(max_events if record_events else 1, dtype=np.int64)
    ev_kind = np.empty(max_events if record_events else 1, dtype=np.int8)
    n_events = 0

    t = 0.0
    g = 0
    while True:
        rate_rec = gamma * ninf
        rate_inf = tau * SI
        total = rate_rec + rate_inf
        if total <= 0.0:
            t_next = t_end + 1.0
        else:
            t_next = t - math.log(np.random.random()) / total

        while g < nt and out_times[g] < t_next:
            outS[g] = N - ninf
            outI[g] = ninf
            outSI[g] = SI
            outSS[g] = SS
            outII[g] = II
            if audit_mask[g]:
                aSI = 0
                aSS = 0
                aII = 0
                for u in range(N):
                    for j in range(indptr[u], indptr[u + 1]):
                        v = indices[j]
                        if state[u] == 0:
                            if state[v] == 0:
                                aSS += 1
                            else:
                                aSI += 1
                        elif state[v] == 1:
                            aII += 1
                if aSI != SI or aSS != SS or aII != II:
                    audit_fail += 1
            g += 1
        if g >= nt or t_next > t_end:
            break
        t = t_next

        if np.random.random() * total < rate_rec:
            # Recovery: uniform infected node flips I -> S.
            u = inf_nodes[int(np.random.random() * ninf)]
            ninf -= 1
            last = inf_nodes[ninf]
            inf_nodes[inf_pos[u]] = last
            inf_pos[last] = inf_pos[u]
            inf_pos[u] = -1
            state[u] = 0
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if state[v] == 1:
                    II -= 2
                    SI += 1
                else:
                    SI -= 1
                    SS += 2
            kind = 1
        else:
            # Infection: uniform S-I edge, sampled by degree-weighted
            # rejection over infected sources then a uniform neighbor.
            while True:
                u = inf_nodes[int(np.random.random() * ninf)]
                if np.random.random() * dmax >= deg[u]:
                    continue
                v = indices[indptr[u] + int(np.random.random() * deg[u])]
                if state[v] == 0:
                    break
            u = v
            state[u] = 1
            inf_nodes[ninf] = u
            inf_pos[u] = ninf
            ninf += 1
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if state[v] == 1:
                    SI -= 1
                    II += 2
                else:
                    SS -= 2
                    SI += 1
            kind = 0
        if record_events and n_events < max_events:
            ev_t[n_events] = t
            ev_node[n_events] = u
            ev_kind[n_events] = kind
            n_events += 1

    return (outS, outI, outSI, outSS, outII, audit_fail,
            ev_t[:n_events], ev_node[:n_events], ev_kind[:n_events])


def gillespie_sis(graph, params, initial_infected, t_end, output_times,
                  seed=None, audit_points=0, record_events=False,
                  max_events=2_000_000):
    """One exact SIS run sampled on output_times.

    initial_infected is an iterable of node ids.  audit_points > 0 recounts
    the incrementally maintained pair counts from scratch at that many grid
    times and raises on any mismatch.  With record_events=True the result
    carries (time, node, kind) tuples, kind "S->I" or "I->S".
    """
    out_times = np.asarray(output_times, dtype=float)
    state = np.zeros(graph.N, dtype=np.int8)
    state[np.asarray(list(initial_infected), dtype=np.int64)] = 1

    audit_mask = np.zeros(out_times.size, dtype=np.bool_)
    if audit_points > 0 and out_times.size:
        rng = np.random.default_rng(seed)
        picks = rng.choice(out_times.size, size=min(audit_points, out_times.size),
                           replace=False)
        audit_mask[picks] = True

    core_seed = int(np.random.SeedSequence(seed).generate_state(1)[0]) % (2 ** 32 - 1)
    outS, outI, outSI, outSS, outII, audit_fail, ev_t, ev_node, ev_kind = (
        _gillespie_core(
            graph.indptr, graph.indices, graph.degrees,
            float(params.tau), float(params.gamma),
            state, float(t_end), out_times, core_seed,
            audit_mask, record_events, max_events,
        )
    )
    if audit_fail:
        raise AssertionError(f"pair-count audit failed at {audit_fail} sample times")
    events = [
        (float(tt), int(nn), "S->I" if kk == 0 else "I->S")
        for tt, nn, kk in zip(ev_t, ev_node, ev_kind)
    ]
    return SimResult(times=out_times, S=outS, I=outI, SI=outSI, SS=outSS,
                     II=outII, events=events)


def ensemble(dist, params, i0, t_end, output_times, runs, seed=None,
             fresh_graph_per_run=True, condition_on_survival=False,
             survival_time=None, audit_points=0):
    """Independent runs aggregated pointwise (mean, and std of I).

    A realized degree sequence is drawn deterministically from dist; each run
    gets its own derived seed (and its own graph unless
    fresh_graph_per_run=False).  With condition_on_survival=True, runs whose
    epidemic is extinct at survival_time (default t_end/2) are excluded and
    the exclusion count reported.
    """
    from .degree_model import sample_degree_sequence

    if runs < 1:
        raise ValueError("runs must be >= 1")
    out_times = np.asarray(output_times, dtype=float)
    sequence = sample_degree_sequence(dist, params.N)
    N = len(sequence)
    n0 = max(1, int(round(i0 * N)))
    if survival_time is None:
        survival_time = t_end / 2.0

    ss = np.random.SeedSequence(seed)
    children = ss.spawn(runs + 1)
    shared_graph = None
    if not fresh_graph_per_run:
        shared_graph = build_configuration_graph(
            sequence, seed=int(children[-1].generate_state(1)[0])
        )

    acc = {k: np.zeros(out_times.size) for k in ("S", "I", "SI", "SS", "II")}
    acc_I2 = np.zeros(out_times.size)
    kept_runs = []
    for r in range(runs):
        child = children[r]
        run_rng = np.random.default_rng(child)
        graph = shared_graph
        if graph is None:
            graph = build_configuration_graph(
                sequence, seed=int(child.generate_state(1)[0]) + 1
            )
        infected = run_rng.choice(N, size=n0, replace=False)
        result = gillespie_sis(
            graph, params, infected, t_end, out_times,
            seed=int(child.generate_state(1)[0]) + 2, audit_points=audit_points,
        )
        kept_runs.append(result)

    excluded = 0
    if condition_on_survival:
        idx = int(np.searchsorted(out_times, survival_time))
        idx = min(idx, out_times.size - 1)
        surviving = [res for res in kept_runs if res.I[idx] > 0]
        excluded = len(kept_runs) - len(surviving)
        if surviving:
            kept_runs = surviving

    n_kept = len(kept_runs)
    for res in kept_runs:
        for k in ("S", "I", "SI", "SS", "II"):
            acc[k] += getattr(res, k)
        acc_I2 += res.I ** 2
    mean = {k: v / n_kept for k, v in acc.items()}
    var_I = np.maximum(acc_I2 / n_kept - mean["I"] ** 2, 0.0)
    return SimResult(
        times=out_times, S=mean["S"], I=mean["I"], SI=mean["SI"],
        SS=mean["SS"], II=mean["II"], std_I=np.sqrt(var_I),
        runs=n_kept, excluded=excluded,
    )
