"""Exact values of the n-round games.

The non-alternating value is a max over Alice walks of Bob's best-response
minimum. Bob's minimum is a forward DP whose state after a fixed Alice prefix
is a cost vector over H vertices; Alice's max is a layered search over
``(step, G vertex, cost vector)`` nodes in which Pareto-dominated cost vectors
are discarded. Dominance is lossless because every later step is monotone in
the cost vector.

Exact-mode scores are scaled to integers once per instance so the hot loops
run on Python ints; results are scaled back to :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from mpg_duel.errors import ResourceLimitError
from mpg_duel.graph_core import DirectedGraph, GameInstance, StartSpec, Walk

log = logging.getLogger(__name__)

BIG = 1 << 62  # "unreachable" cost in integer mode
DEFAULT_NODE_CAP = 5_000_000


@dataclass(frozen=True)
class SolverConfig:
    node_cap: int = DEFAULT_NODE_CAP
    prune: bool = True
    canonical_witness: bool = True


@dataclass(frozen=True)
class FiniteValueResult:
    value: object
    witness_alice: Walk
    witness_bob: Walk
    nodes_expanded: int
    mode: str
    exact: bool = True


# scaled score tables -------------------------------------------------------


class _Scaled:
    """Integer (or float) view of an instance's score table."""

    def __init__(self, instance: GameInstance):
        self.instance = instance
        if instance.exact:
            dens = [x.denominator for row in instance.table for x in row if isinstance(x, Fraction)]
            scale = 1
            for d in dens:
                scale = scale * d // math.gcd(scale, d)
            self.scale = scale
            self.rows = tuple(tuple(int(x * scale) for x in row) for row in instance.table)
            self.inf = BIG
        else:
            self.scale = 1
            self.rows = tuple(tuple(float(x) for x in row) for row in instance.table)
            self.inf = math.inf
        self.norm = max((abs(x) for row in self.rows for x in row), default=0)
        h = instance.graph_h
        self.h_edges = tuple(zip(h.src_idx, h.dst_idx, range(len(h.edges))))
        self.n_h = len(h.vertices)

    def out(self, x):
        """Convert an internal accumulated value back to the public number type."""
        if self.instance.exact:
            return Fraction(x, self.scale)
        return float(x)

    def initial(self, h_starts) -> tuple:
        cost = [self.inf] * self.n_h
        for u in h_starts:
            cost[u] = 0 if self.instance.exact else 0.0
        return tuple(cost)

    def advance(self, cost: tuple, e: int) -> tuple:
        row = self.rows[e]
        inf = self.inf
        new = [inf] * self.n_h
        for s, t, f in self.h_edges:
            c = cost[s]
            if c != inf:
                x = c + row[f]
                if x < new[t]:
                    new[t] = x
        return tuple(new)


_SCALED_CACHE: dict = {}


def scaled(instance: GameInstance) -> _Scaled:
    key = id(instance)
    hit = _SCALED_CACHE.get(key)
    if hit is None or hit.instance is not instance:
        hit = _Scaled(instance)
        if len(_SCALED_CACHE) > 256:
            _SCALED_CACHE.clear()
        _SCALED_CACHE[key] = hit
    return hit


# exact-length optimal walks ----------------------------------------------


def optimal_walk(
    graph: DirectedGraph,
    starts: Sequence[int],
    weights: Sequence[Sequence],
    *,
    end_vertex: Optional[int] = None,
    end_edge: Optional[int] = None,
    maximize: bool = False,
    inf=BIG,
):
    """Best walk with one edge per weight row, lexicographically smallest on ties.

    ``weights[j][f]`` is the cost of using edge ``f`` at step ``j``. The walk
    starts at any vertex in ``starts``; optionally it must end at
    ``end_vertex`` or use ``end_edge`` as its last edge. Returns
    ``(value, edge_indices)`` or ``None`` if no such walk exists.
    """
    sign = -1 if maximize else 1
    n_v = len(graph.vertices)
    src, dst = graph.src_idx, graph.dst_idx
    steps = len(weights)
    zero = 0 if inf == BIG else 0.0
    last = [inf] * n_v
    if end_vertex is None:
        last = [zero] * n_v
    else:
        last[end_vertex] = zero
    best = [None] * (steps + 1)
    best[steps] = last
    n_e = len(graph.edges)
    for j in range(steps - 1, -1, -1):
        cur = [inf] * n_v
        nxt = best[j + 1]
        w = weights[j]
        edge_range = (end_edge,) if (end_edge is not None and j == steps - 1) else range(n_e)
        for f in edge_range:
            b = nxt[dst[f]]
            if b == inf:
                continue
            x = sign * w[f] + b
            if x < cur[src[f]]:
                cur[src[f]] = x
        best[j] = cur
    if steps == 0:
        if end_edge is not None:
            return None
        ok = [u for u in starts if best[0][u] != inf]
        return (zero, []) if ok else None
    value = min(best[0][u] for u in starts)
    if value == inf:
        return None
    rank = graph.edge_rank
    walk = []
    start_set = set(starts)
    current = None
    for j in range(steps):
        w = weights[j]
        if j == 0:
            cands = [f for u in start_set if best[0][u] == value for f in graph.out_edges[u]]
        else:
            cands = graph.out_edges[current]
        if end_edge is not None and j == steps - 1:
            cands = [f for f in cands if f == end_edge]
        target = value if j == 0 else best[j][current]
        chosen = None
        for f in sorted(cands, key=lambda f: rank[f]):
            b = best[j + 1][dst[f]]
            if b != inf and sign * w[f] + b == target:
                chosen = f
                break
        assert chosen is not None, "optimal walk reconstruction failed"
        walk.append(chosen)
        current = dst[chosen]
    return sign * value, walk


def bob_best_response(instance: GameInstance, alice_walk, start_h=None):
    """Bob's minimal total score against a fixed Alice walk.

    ``start_h`` is an H vertex id, or ``None`` to let Bob start anywhere.
    Returns ``(value, Walk)``; the walk is the lexicographically smallest
    optimal response.
    """
    g, h = instance.graph_g, instance.graph_h
    alice = alice_walk.edges if isinstance(alice_walk, Walk) else tuple(alice_walk)
    Walk(g, alice)
    sc = scaled(instance)
    if start_h is None:
        starts = list(range(len(h.vertices)))
    else:
        starts = [h.vertex_index[start_h]]
    weights = [sc.rows[g.edge_index[e]] for e in alice]
    value, walk = optimal_walk(h, starts, weights, inf=sc.inf)
    return sc.out(value), Walk(h, tuple(h.edges[f].id for f in walk))


# non-alternating layered search -------------------------------------------


def _pareto_keep(costs: list) -> list[bool]:
    """Flags for the Pareto-maximal vectors; among equal vectors the first wins.

    Vectors are swept in order of decreasing finite sum, so any dominator of a
    vector is seen before it and only already-kept vectors need checking.
    """
    n = len(costs)
    if n == 1:
        return [True]
    order = sorted(range(n), key=lambda i: (-sum(x for x in costs[i] if x < BIG), i))
    kept: list = []
    keep = [False] * n
    for i in order:
        c = costs[i]
        for k in kept:
            if all(a >= b for a, b in zip(k, c)):
                break
        else:
            kept.append(c)
            keep[i] = True
    return keep


def _walk_of(node) -> list[int]:
    edges = []
    while node is not None and node[3] is not None:
        edges.append(node[3])
        node = node[2]
    edges.reverse()
    return edges


class _Search:
    """Layered max-min search; nodes are ``(g_vertex, cost, parent, edge)``."""

    def __init__(self, instance: GameInstance, config: SolverConfig):
        self.instance = instance
        self.config = config
        self.sc = scaled(instance)
        self.g = instance.graph_g
        self.expanded = 0

    def run(self, frontier: list, steps: int, record_layers: bool = False):
        """Advance ``steps`` layers. Returns ``(best_value, best_node, layers)``
        where ``layers[k]`` is ``(value, node)`` after ``k`` steps."""
        g, sc = self.g, self.sc
        layers = []
        if record_layers:
            layers.append(self._best(frontier))
        retained = len(frontier)
        for k in range(steps):
            children = []
            for node in frontier:
                v, cost = node[0], node[1]
                for e in g.out_edges[v]:
                    children.append((g.dst_idx[e], sc.advance(cost, e), node, e))
            self.expanded += len(children)
            if self.config.prune:
                children = self._prune(children)
            frontier = children
            retained += len(frontier)
            if retained > self.config.node_cap:
                lb = self._salvage(frontier, steps - k - 1)
                raise ResourceLimitError(
                    f"node cap {self.config.node_cap} exceeded at layer {k + 1}; best-so-far lower bound reported",
                    best_lower_bound=sc.out(lb),
                )
            if record_layers:
                layers.append(self._best(frontier))
        best = self._best(frontier)
        return best[0], best[1], layers

    @staticmethod
    def _best(frontier):
        best_val, best_node = None, None
        for node in frontier:
            m = min(node[1])
            if best_val is None or m > best_val:
                best_val, best_node = m, node
        return best_val, best_node

    @staticmethod
    def _prune(children: list) -> list:
        groups: dict = {}
        for i, ch in enumerate(children):
            groups.setdefault(ch[0], []).append(i)
        keep = [False] * len(children)
        for idxs in groups.values():
            flags = _pareto_keep([children[i][1] for i in idxs])
            for i, f in zip(idxs, flags):
                keep[i] = f
        return [ch for ch, k in zip(children, keep) if k]

    def _salvage(self, frontier, remaining) -> object:
        """Value of the best frontier node completed by lexicographically smallest edges."""
        g, sc = self.g, self.sc
        _, node = self._best(frontier)
        v, cost = node[0], node[1]
        for _ in range(remaining):
            e = g.out_edges[v][0]
            cost = sc.advance(cost, e)
            v = g.dst_idx[e]
        return min(cost)


def _root(instance: GameInstance, start: StartSpec):
    v0, us = start.resolve(instance)
    return (v0, scaled(instance).initial(us), None, None), us


def nonalt_profile(instance: GameInstance, start: StartSpec, horizon: int, config: SolverConfig = SolverConfig()):
    """Values ``r_0..r_horizon`` of the non-alternating game from one search.

    Pruning is lossless at every layer, so the best node of layer ``k`` gives
    ``V(k)`` and an optimal Alice walk of length ``k``. Returns
    ``(values, witnesses)`` with witnesses as tuples of G edge ids.
    """
    root, _ = _root(instance, start)
    search = _Search(instance, config)
    _, _, layers = search.run([root], horizon, record_layers=True)
    sc, g = search.sc, instance.graph_g
    values = [sc.out(v) for v, _ in layers]
    witnesses = [tuple(g.edges[e].id for e in _walk_of(node)) for _, node in layers]
    return values, witnesses


def value_nonalt_finite(
    instance: GameInstance, n: int, start: StartSpec, config: SolverConfig = SolverConfig()
) -> FiniteValueResult:
    """Exact n-round non-alternating value with witness walks for both players."""
    if n < 0:
        raise ValueError("round count must be nonnegative")
    g, h = instance.graph_g, instance.graph_h
    root, us = _root(instance, start)
    search = _Search(instance, config)
    best_val, best_node, _ = search.run([root], n)
    if config.canonical_witness and n > 0:
        alice = _canonical_walk(search, root, n, best_val)
    else:
        alice = _walk_of(best_node)
    alice_ids = tuple(g.edges[e].id for e in alice)
    sc = search.sc
    weights = [sc.rows[e] for e in alice]
    bob_val, bob = optimal_walk(h, us, weights, inf=sc.inf)
    assert bob_val == best_val, "witness replay disagrees with search value"
    return FiniteValueResult(
        value=sc.out(best_val),
        witness_alice=Walk(g, alice_ids),
        witness_bob=Walk(h, tuple(h.edges[f].id for f in bob)),
        nodes_expanded=search.expanded,
        mode=instance.numeric_mode,
    )


def _canonical_walk(search: _Search, root, n: int, target) -> list[int]:
    """Lexicographically smallest Alice walk whose value reaches ``target``.

    Fixes one edge at a time, keeping the smallest edge whose subtree still
    attains the optimum (checked by a pruned sub-search).
    """
    g, sc = search.g, search.sc
    node = root
    walk = []
    for j in range(n):
        remaining = n - j - 1
        v, cost = node[0], node[1]
        for e in g.out_edges[v]:
            child = (g.dst_idx[e], sc.advance(cost, e), None, None)
            val, _, _ = search.run([child], remaining)
            if val >= target:
                walk.append(e)
                node = child
                break
        else:  # pragma: no cover - the optimum is attained by construction
            raise AssertionError("no edge attains the optimal value")
    return walk


# alternating game ----------------------------------------------------------


def alt_value_table(instance: GameInstance, n: int) -> list[list]:
    """Backward induction ``V_k(v,u) = max_e min_f P(e,f) + V_{k-1}(t e, t f)``.

    Returns the internal (scaled) table for ``k = n``.
    """
    g, h = instance.graph_g, instance.graph_h
    sc = scaled(instance)
    zero = 0 if instance.exact else 0.0
    cur = [[zero] * len(h.vertices) for _ in g.vertices]
    for _ in range(n):
        nxt = [[None] * len(h.vertices) for _ in g.vertices]
        for v in range(len(g.vertices)):
            for u in range(len(h.vertices)):
                best = None
                for e in g.out_edges[v]:
                    row, te = sc.rows[e], g.dst_idx[e]
                    worst = min(row[f] + cur[te][h.dst_idx[f]] for f in h.out_edges[u])
                    if best is None or worst > best:
                        best = worst
                nxt[v][u] = best
        cur = nxt
    return cur


def value_alt_finite(instance: GameInstance, n: int, start: StartSpec):
    """Exact n-round alternating value (free Bob start means Bob picks the best start)."""
    if n < 0:
        raise ValueError("round count must be nonnegative")
    v0, us = start.resolve(instance)
    table = alt_value_table(instance, n)
    return scaled(instance).out(min(table[v0][u] for u in us))


# brute-force oracles ------------------------------------------------------

BRUTE_GUARD = 10**7


def enumerate_walks(graph: DirectedGraph, starts: Sequence[int], n: int) -> list[tuple[int, ...]]:
    walks = [((), u) for u in starts]
    for _ in range(n):
        walks = [(w + (e,), graph.dst_idx[e]) for w, v in walks for e in graph.out_edges[v]]
    return [w for w, _ in walks]


def count_walks(graph: DirectedGraph, starts: Sequence[int], n: int) -> int:
    counts = [0] * len(graph.vertices)
    for u in starts:
        counts[u] += 1
    for _ in range(n):
        nxt = [0] * len(counts)
        for f, (s, t) in enumerate(zip(graph.src_idx, graph.dst_idx)):
            nxt[t] += counts[s]
        counts = nxt
    return sum(counts)


def brute_nonalt(instance: GameInstance, n: int, start: StartSpec, guard: int = BRUTE_GUARD):
    """Non-alternating value by enumerating every pair of walks."""
    g, h = instance.graph_g, instance.graph_h
    v0, us = start.resolve(instance)
    na, nb = count_walks(g, [v0], n), count_walks(h, us, n)
    if na * nb > guard:
        raise ResourceLimitError(f"enumeration guard exceeded: {na} x {nb} walk pairs")
    if n == 0:
        return instance.zero() if not instance.exact else Fraction(0)
    alice = enumerate_walks(g, [v0], n)
    bob = np.array(enumerate_walks(h, us, n), dtype=np.int64)
    table = np.array(instance.table, dtype=object if instance.exact and not instance.integral else None)
    if instance.exact and instance.integral:
        table = table.astype(np.int64)
    best = None
    for walk in alice:
        totals = table[walk[0], bob[:, 0]].copy()
        for j in range(1, n):
            totals = totals + table[walk[j], bob[:, j]]
        worst = totals.min()
        if best is None or worst > best:
            best = worst
    return Fraction(best) if instance.exact else float(best)


def brute_alt(instance: GameInstance, n: int, start: StartSpec, guard: int = BRUTE_GUARD):
    """Alternating value by minimax over the explicit game tree (alpha-beta cut-offs)."""
    g, h = instance.graph_g, instance.graph_h
    v0, us = start.resolve(instance)
    na, nb = count_walks(g, [v0], n), count_walks(h, us, n)
    if na * nb > guard:
        raise ResourceLimitError(f"enumeration guard exceeded: {na} x {nb} walk pairs")
    P = instance.table
    inf = math.inf

    def alice_turn(k, v, u, alpha, beta):
        if k == n:
            return 0
        best = -inf
        for e in g.out_edges[v]:
            val = bob_turn(k, e, u, max(alpha, best), beta)
            if val > best:
                best = val
            if best >= beta:
                break
        return best

    def bob_turn(k, e, u, alpha, beta):
        best = inf
        for f in h.out_edges[u]:
            val = P[e][f] + alice_turn(k + 1, g.dst_idx[e], h.dst_idx[f], alpha - P[e][f], beta - P[e][f])
            if val < best:
                best = val
            if best <= alpha:
                break
        return best

    value = min(alice_turn(0, v0, u, -inf, inf) for u in us)
    return Fraction(value) if instance.exact else float(value)


def brute_values(instance: GameInstance, n: int, start: StartSpec, guard: int = BRUTE_GUARD):
    """``(nonalt, alt)`` by exhaustive enumeration; an oracle for the fast solvers."""
    return brute_nonalt(instance, n, start, guard), brute_alt(instance, n, start, guard)
