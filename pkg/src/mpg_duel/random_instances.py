"""Seeded random game instances for property suites and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

from mpg_duel.graph_core import DirectedGraph, Edge, GameInstance


@dataclass(frozen=True)
class RandomSpec:
    max_vertices: int = 3
    max_edges: int = 6
    score_range: tuple = (-3, 3)
    irreducible: bool = False


def random_graph(rng: random.Random, n_vertices: int, n_edges: int, prefix: str, irreducible: bool) -> DirectedGraph:
    names = [f"{prefix.upper()}{i}" for i in range(n_vertices)]
    arcs = []
    if irreducible:
        # a Hamiltonian cycle guarantees strong connectivity
        order = list(range(n_vertices))
        rng.shuffle(order)
        arcs = [(order[i], order[(i + 1) % n_vertices]) for i in range(n_vertices)]
    else:
        arcs = [(v, rng.randrange(n_vertices)) for v in range(n_vertices)]
    while len(arcs) < n_edges:
        arcs.append((rng.randrange(n_vertices), rng.randrange(n_vertices)))
    edges = tuple(Edge(f"{prefix}{k}", names[s], names[t]) for k, (s, t) in enumerate(arcs))
    return DirectedGraph(tuple(names), edges)


def random_instance(rng: random.Random, spec: RandomSpec = RandomSpec()) -> GameInstance:
    graphs = []
    for prefix in ("g", "h"):
        nv = rng.randint(1, spec.max_vertices)
        ne = rng.randint(nv, max(nv, spec.max_edges))
        graphs.append(random_graph(rng, nv, ne, prefix, spec.irreducible))
    g, h = graphs
    lo, hi = spec.score_range
    entries = {(e.id, f.id): rng.randint(lo, hi) for e in g.edges for f in h.edges}
    return GameInstance(g, h, 0, entries)


def random_cycle_h_instance(rng: random.Random, spec: RandomSpec = RandomSpec()) -> GameInstance:
    """G random irreducible, H a single directed cycle (Bob never has a choice)."""
    nv = rng.randint(1, spec.max_vertices)
    g = random_graph(rng, nv, rng.randint(nv, max(nv, spec.max_edges)), "g", True)
    m = rng.randint(1, spec.max_vertices)
    names = [f"H{i}" for i in range(m)]
    h = DirectedGraph(tuple(names), tuple(Edge(f"h{i}", names[i], names[(i + 1) % m]) for i in range(m)))
    lo, hi = spec.score_range
    entries = {(e.id, f.id): rng.randint(lo, hi) for e in g.edges for f in h.edges}
    return GameInstance(g, h, 0, entries)


def brute_feasible(instance: GameInstance, horizon: int, guard: int) -> bool:
    from mpg_duel.finite_solver import count_walks

    g, h = instance.graph_g, instance.graph_h
    worst_g = max(count_walks(g, [v], horizon) for v in range(len(g.vertices)))
    worst_h = max(count_walks(h, [u], horizon) for u in range(len(h.vertices)))
    return worst_g * worst_h <= guard


def random_suite(
    seed: int, count: int, spec: RandomSpec = RandomSpec(), oracle_horizon: int = 6, guard: int = 10**7
) -> list[GameInstance]:
    """``count`` instances whose brute-force oracle stays under ``guard`` up to ``oracle_horizon``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_instance(rng, spec)
        if brute_feasible(inst, oracle_horizon, guard):
            out.append(inst)
    return out
