"""Nodes expanded by the Pareto-pruned search against the unpruned search and brute force.

Usage: python3 scripts/frontier_growth.py [--horizon 8] [--seed 5]
"""

import argparse
import random
import time

from mpg_duel.finite_solver import SolverConfig, count_walks, value_nonalt_finite
from mpg_duel.gallery import chase_instance
from mpg_duel.graph_core import StartSpec
from mpg_duel.random_instances import RandomSpec, random_instance


def report(name, inst, start, horizon):
    g_start = [inst.graph_g.vertex_index[start.g_vertex]]
    print(f"{name}")
    print(f"  {'n':>3} {'value':>8} {'pruned':>9} {'plain':>9} {'G walks':>9} {'ms':>8}")
    for n in range(1, horizon + 1):
        t0 = time.perf_counter()
        res = value_nonalt_finite(inst, n, start)
        ms = 1000 * (time.perf_counter() - t0)
        plain = value_nonalt_finite(inst, n, start, SolverConfig(prune=False)).nodes_expanded if n <= 7 else None
        walks = count_walks(inst.graph_g, g_start, n)
        print(f"  {n:>3} {str(res.value):>8} {res.nodes_expanded:>9} {str(plain or '-'):>9} {walks:>9} {ms:>8.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=8)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    report("chase", chase_instance(), StartSpec.vertices("W", "W"), args.horizon)
    rng = random.Random(args.seed)
    inst = random_instance(rng, RandomSpec(irreducible=True, max_vertices=4, max_edges=8))
    start = StartSpec.vertices(inst.graph_g.vertices[0], inst.graph_h.vertices[0])
    report(f"random (seed {args.seed})", inst, start, args.horizon)


if __name__ == "__main__":
    main()
