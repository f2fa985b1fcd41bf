"""Hypothesis strategies for small game instances."""

import random

from hypothesis import strategies as st

from mpg_duel.random_instances import RandomSpec, brute_feasible, random_instance


@st.composite
def instances(draw, max_vertices=3, max_edges=5, irreducible=False, horizon=4):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    spec = RandomSpec(max_vertices=max_vertices, max_edges=max_edges, irreducible=irreducible)
    while True:
        inst = random_instance(rng, spec)
        if brute_feasible(inst, horizon, 10**6):
            return inst


def vertex_start(draw_fn, inst):
    from mpg_duel.graph_core import StartSpec

    v = draw_fn(st.sampled_from(inst.graph_g.vertices))
    u = draw_fn(st.sampled_from(inst.graph_h.vertices))
    return StartSpec.vertices(v, u)
