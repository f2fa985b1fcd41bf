"""Infinite-round values: certified bounds, block strategies and traces.

For the non-alternating game on irreducible graphs the value is the limit of
``r_n / n`` with ``r_n`` the n-round value. We bracket it with

* an upper bound from approximate subadditivity, ``min_n (r_n + C) / n``,
  intersected with the infinite alternating value (Alice never does better
  without seeing Bob's moves);
* a lower bound from Alice walks that are eventually periodic, evaluated
  exactly: against a fixed periodic Alice walk Bob's best long-run average is
  a minimum mean cycle of ``H x Z_T``. Candidates are the stationary block
  walks (optimal finite segment plus a fixed-length connector back to the
  start) and the G-projection of the best reachable product cycle.

Both sides are sound whenever ``C`` really is a subadditivity constant; ``C``
starts from an analytic default and is escalated by an explicit audit.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from mpg_duel.errors import DomainError
from mpg_duel.finite_solver import BIG, SolverConfig, nonalt_profile, optimal_walk, scaled
from mpg_duel.graph_core import (
    DirectedGraph,
    Edge,
    GameInstance,
    ProductComponent,
    StartSpec,
    lcm,
    product_component,
    reachable_pairs,
    strongly_connected_components,
)
from mpg_duel.numbers import rationals_in_interval

log = logging.getLogger(__name__)

MAX_ALT_ITERATIONS = 400_000
IRREDUCIBLE_MSG = "the non-alternating infinite value requires irreducible graphs G and H"


@dataclass(frozen=True)
class BoundsConfig:
    audit_horizon: int = 12
    max_audit_pairs: int = 64
    alt_iterations: Optional[int] = None
    solver: SolverConfig = SolverConfig(canonical_witness=False)


@dataclass(frozen=True)
class Escalation:
    kind: str
    detail: str
    needed: object


@dataclass(frozen=True)
class SubadditiveConstant:
    value: object
    analytic: object
    escalations: tuple = ()


@dataclass(frozen=True)
class ValueBounds:
    lower: object
    upper: object
    horizon_used: int
    constant_C: object = None
    value: object = None
    mode: str = "exact"
    sources: Mapping = field(default_factory=dict)
    escalations: tuple = ()

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, x, slack=0) -> bool:
        return self.lower - slack <= x <= self.upper + slack


@dataclass(frozen=True)
class BlockSchedule:
    """Block boundaries ``a_1 = 0``, ``b_k = a_k + p k``, ``a_{k+1} = b_k + p D``."""

    p: int
    D: int

    def a(self, k: int) -> int:
        return self.p * (k - 1) * k // 2 + (k - 1) * self.p * self.D

    def b(self, k: int) -> int:
        return self.a(k) + self.p * k

    def boundaries(self, k_max: int) -> list[tuple[int, int]]:
        return [(self.a(k), self.b(k)) for k in range(1, k_max + 1)]


@dataclass(frozen=True)
class MeanCycle:
    value: object
    cycle: tuple


@dataclass(frozen=True)
class TraceRecord:
    step: int
    alice_edge: object
    bob_edge: object
    cumulative: object
    average: object


# max mean cycle -------------------------------------------------------------


def max_mean_cycle(graph: DirectedGraph, weights) -> MeanCycle:
    """Maximum mean cycle by Karp's recurrence, run per strongly connected component.

    ``weights`` maps edge id to weight (or is a sequence indexed like
    ``graph.edges``). Exact weights give a :class:`Fraction`; float weights
    give a float.
    """
    w = _weight_list(graph, weights)
    is_float = any(isinstance(x, float) for x in w)
    best: Optional[MeanCycle] = None
    for comp in strongly_connected_components(graph):
        if not comp.nontrivial:
            continue
        found = _karp(graph, w, comp.vertices, is_float)
        if best is None or found.value > best.value:
            best = found
    if best is None:
        raise DomainError("graph has no cycle")
    return best


def _weight_list(graph, weights) -> list:
    if isinstance(weights, Mapping):
        return [weights[e.id] for e in graph.edges]
    return list(weights)


def _karp(graph: DirectedGraph, w: list, members: frozenset, is_float: bool) -> MeanCycle:
    vi = graph.vertex_index
    verts = sorted(vi[v] for v in members)
    local = {v: i for i, v in enumerate(verts)}
    s = len(verts)
    inner = [e for e in range(len(graph.edges)) if graph.src_idx[e] in local and graph.dst_idx[e] in local]
    neg = -math.inf
    dist = [[neg] * s for _ in range(s + 1)]
    parent = [[None] * s for _ in range(s + 1)]
    dist[0] = [0] * s
    for k in range(1, s + 1):
        prev, cur, par = dist[k - 1], dist[k], parent[k]
        for e in inner:
            a, b = local[graph.src_idx[e]], local[graph.dst_idx[e]]
            if prev[a] == neg:
                continue
            x = prev[a] + w[e]
            if x > cur[b]:
                cur[b] = x
                par[b] = e
    best_val, best_v = None, None
    for v in range(s):
        if dist[s][v] == neg:
            continue
        worst = None
        for k in range(s):
            if dist[k][v] == neg:
                continue
            num = dist[s][v] - dist[k][v]
            q = num / (s - k) if is_float else Fraction(num) / (s - k)
            if worst is None or q < worst:
                worst = q
        if best_val is None or worst > best_val:
            best_val, best_v = worst, v
    # walk of length s ending at best_v; its first contiguous cycle is optimal
    edges = []
    v = best_v
    for k in range(s, 0, -1):
        e = parent[k][v]
        edges.append(e)
        v = local[graph.src_idx[e]]
    edges.reverse()
    seen = {local[graph.src_idx[edges[0]]]: 0}
    cycle = None
    for j, e in enumerate(edges):
        t = local[graph.dst_idx[e]]
        if t in seen:
            cycle = edges[seen[t] : j + 1]
            break
        seen[t] = j + 1
    mean = sum(w[e] for e in cycle)
    mean = mean / len(cycle) if is_float else Fraction(mean) / len(cycle)
    if is_float:
        assert math.isclose(mean, best_val, rel_tol=1e-9, abs_tol=1e-9)
    else:
        assert mean == best_val, "Karp witness cycle does not attain the maximum mean"
    return MeanCycle(best_val, tuple(graph.edges[e].id for e in cycle))


def min_mean_cycle(graph: DirectedGraph, weights) -> MeanCycle:
    w = _weight_list(graph, weights)
    res = max_mean_cycle(graph, [-x for x in w])
    return MeanCycle(-res.value, res.cycle)


def _restrict(graph: DirectedGraph, weights: list, roots: Iterable) -> tuple[DirectedGraph, list]:
    """Subgraph reachable from ``roots`` (vertex ids)."""
    seen = set(roots)
    queue = deque(seen)
    vi = graph.vertex_index
    while queue:
        v = queue.popleft()
        for e in graph.out_edges[vi[v]]:
            t = graph.edges[e].dst
            if t not in seen:
                seen.add(t)
                queue.append(t)
    keep = [i for i, e in enumerate(graph.edges) if e.src in seen]
    sub = DirectedGraph(tuple(v for v in graph.vertices if v in seen), tuple(graph.edges[i] for i in keep))
    return sub, [weights[i] for i in keep]


def weighted_product(instance: GameInstance, start: StartSpec) -> tuple[DirectedGraph, list]:
    """Reachable part of ``G x H`` from the start, with score weights."""
    g, h = instance.graph_g, instance.graph_h
    v0, us = start.resolve(instance)
    pairs = reachable_pairs(instance, v0, us)
    pset = set(pairs)
    verts = tuple((g.vertices[v], h.vertices[u]) for v, u in pairs)
    edges, weights = [], []
    for v, u in pairs:
        for e in g.out_edges[v]:
            for f in h.out_edges[u]:
                if (g.dst_idx[e], h.dst_idx[f]) in pset:
                    ge, he = g.edges[e], h.edges[f]
                    edges.append(Edge((ge.id, he.id), (ge.src, he.src), (ge.dst, he.dst)))
                    weights.append(instance.table[e][f])
    return DirectedGraph(verts, tuple(edges)), weights


def degenerate_value(instance: GameInstance, start: StartSpec) -> MeanCycle:
    """Best reachable product cycle: the game value when one player has no choices."""
    graph, weights = weighted_product(instance, start)
    return max_mean_cycle(graph, weights)


# exact value of an eventually periodic Alice walk ------------------------------


def alice_periodic_value(instance: GameInstance, prefix: Sequence, cycle: Sequence, start: StartSpec):
    """Bob's optimal long-run average against Alice's walk ``prefix + cycle^inf``.

    Bob's state is his H vertex plus the phase in Alice's cycle; his best
    liminf average is the minimum mean cycle reachable in that graph from the
    positions he can occupy when Alice's cycle begins.
    """
    g, h = instance.graph_g, instance.graph_h
    v0, us = start.resolve(instance)
    walk = list(prefix) + list(cycle)
    _check_g_walk(g, walk, v0)
    cyc = [g.edge_index[e] for e in cycle]
    if not cyc:
        raise ValueError("empty cycle")
    if g.src_idx[cyc[0]] != g.dst_idx[cyc[-1]]:
        raise ValueError("cycle part does not close")
    # Bob positions after the prefix
    here = set(us)
    for _ in prefix:
        here = {h.dst_idx[f] for u in here for f in h.out_edges[u]}
    T = len(cyc)
    verts = tuple((u, ph) for u in range(len(h.vertices)) for ph in range(T))
    edges, weights = [], []
    for u in range(len(h.vertices)):
        for ph in range(T):
            row = instance.table[cyc[ph]]
            for f in h.out_edges[u]:
                edges.append(Edge((f, ph), (u, ph), (h.dst_idx[f], (ph + 1) % T)))
                weights.append(row[f])
    graph = DirectedGraph(verts, tuple(edges))
    sub, sw = _restrict(graph, weights, [(u, 0) for u in sorted(here)])
    return min_mean_cycle(sub, sw).value


def _check_g_walk(g: DirectedGraph, walk: Sequence, v0: int):
    cur = v0
    for k, eid in enumerate(walk):
        e = g.edge_index[eid]
        if g.src_idx[e] != cur:
            raise ValueError(f"Alice walk breaks at index {k}")
        cur = g.dst_idx[e]


# alternating infinite value --------------------------------------------------


def value_alt_infinite(instance: GameInstance, start: StartSpec, iterations: Optional[int] = None) -> ValueBounds:
    """Value iteration on the vertex-pair game.

    After ``K`` rounds the interval ``v_K/K +- 2 m ||P|| / K`` (``m`` reachable
    pairs) contains the value. In exact mode, when a single rational with
    denominator at most ``m`` lies inside, it is the value.
    """
    g, h = instance.graph_g, instance.graph_h
    sc = scaled(instance)
    v0, us = start.resolve(instance)
    pairs = reachable_pairs(instance, v0, us)
    m = len(pairs)
    idx = {p: i for i, p in enumerate(pairs)}
    norm = sc.norm
    if iterations is None:
        if instance.exact:
            iterations = min(4 * m**3 * max(int(math.ceil(norm)), 1) + 1, MAX_ALT_ITERATIONS)
        else:
            iterations = max(64, 64 * m)
    K = iterations
    dg = max(len(g.out_edges[v]) for v, _ in pairs)
    dh = max(len(h.out_edges[u]) for _, u in pairs)
    exact = instance.exact
    dtype = np.int64 if exact else np.float64
    big = BIG // 4 if exact else np.inf
    W = np.zeros((m, dg, dh), dtype=dtype)
    N = np.zeros((m, dg, dh), dtype=np.int64)
    fmask = np.zeros((m, dg, dh), dtype=bool)  # missing Bob moves
    emask = np.zeros((m, dg), dtype=bool)  # missing Alice moves
    for i, (v, u) in enumerate(pairs):
        outs_g, outs_h = g.out_edges[v], h.out_edges[u]
        for a in range(dg):
            if a >= len(outs_g):
                emask[i, a] = True
                fmask[i, a, :] = True
                continue
            e = outs_g[a]
            for b in range(dh):
                if b >= len(outs_h):
                    fmask[i, a, b] = True
                    continue
                f = outs_h[b]
                W[i, a, b] = sc.rows[e][f]
                N[i, a, b] = idx[(g.dst_idx[e], h.dst_idx[f])]
    vals = np.zeros(m, dtype=dtype)
    for _ in range(K):
        cand = W + vals[N]
        cand = np.where(fmask, big, cand)
        worst = cand.min(axis=2)
        worst = np.where(emask, -big, worst)
        vals = worst.max(axis=1)
    starts = [idx[(v0, u)] for u in us]
    radius = 2 * m * norm
    if exact:
        los = [Fraction(int(vals[i]) - radius, K) for i in starts]
        his = [Fraction(int(vals[i]) + radius, K) for i in starts]
        exact_vals = []
        for lo, hi in zip(los, his):
            cands = rationals_in_interval(lo, hi, m)
            exact_vals.append(cands[0] if len(cands) == 1 else None)
        lo, hi = min(los) / sc.scale, min(his) / sc.scale
        value = None
        if all(x is not None for x in exact_vals):
            value = min(exact_vals) / sc.scale
            lo = hi = value
    else:
        lo = min((float(vals[i]) - radius) / K for i in starts)
        hi = min((float(vals[i]) + radius) / K for i in starts)
        value = None
    return ValueBounds(lo, hi, K, None, value, instance.numeric_mode, {"pairs": m, "iterations": K})


# structure checks --------------------------------------------------------------


def require_irreducible(instance: GameInstance) -> None:
    bad = [name for name, gr in (("G", instance.graph_g), ("H", instance.graph_h)) if not gr.is_irreducible()]
    if bad:
        raise DomainError(f"{IRREDUCIBLE_MSG} ({' and '.join(bad)} reducible)")


def start_components(instance: GameInstance, start: StartSpec) -> list[ProductComponent]:
    v0, us = start.resolve(instance)
    g, h = instance.graph_g, instance.graph_h
    if start.is_edge_form or len(us) == 1:
        return [product_component(instance, start)]
    comps, seen = [], set()
    for u in us:
        try:
            comp = product_component(instance, StartSpec.vertices(g.vertices[v0], h.vertices[u]))
        except DomainError:
            continue
        if comp.pairs not in seen:
            seen.add(comp.pairs)
            comps.append(comp)
    if not comps:
        raise DomainError("transient start: no start pair lies in a nontrivial component of G x H")
    return comps


def block_schedule(instance: GameInstance, component) -> BlockSchedule:
    comps = component if isinstance(component, (list, tuple)) else [component]
    p = 1
    for c in comps:
        p = lcm(p, c.period)
    return BlockSchedule(p, max(c.padding for c in comps))


# subadditivity constant -----------------------------------------------------


def subadditive_constant(
    instance: GameInstance,
    component,
    horizon: int = 12,
    max_pairs: int = 64,
    extra_profiles: Sequence[Sequence] = (),
    config: SolverConfig = SolverConfig(canonical_witness=False),
) -> SubadditiveConstant:
    """``C = 3 p D ||P||``, escalated until every audited triple and spread holds.

    The audit computes ``r_n`` for ``n <= horizon`` from up to ``max_pairs``
    start pairs of the component, then checks ``r_{n+m} <= r_n + r_m + C`` for
    each profile and ``|r_n(x) - r_n(y)| <= C`` across pairs.
    """
    comps = component if isinstance(component, (list, tuple)) else [component]
    sched = block_schedule(instance, comps)
    norm = instance.score_norm
    analytic = 3 * sched.p * sched.D * norm
    if instance.exact:
        analytic = Fraction(analytic)
    C = analytic
    escalations = []
    profiles = [list(p) for p in extra_profiles]
    pair_profiles = []
    for comp in comps:
        for v, u in sorted(comp.pairs)[:max_pairs]:
            vals, _ = nonalt_profile(instance, StartSpec.vertices(v, u), horizon, config)
            pair_profiles.append(((v, u), vals))
    profiles.extend(vals for _, vals in pair_profiles)
    for r in profiles:
        top = min(horizon, len(r) - 1)
        for n in range(1, top):
            for m in range(1, top - n + 1):
                need = r[n + m] - r[n] - r[m]
                if need > C:
                    escalations.append(Escalation("subadditivity", f"n={n}, m={m}", need))
                    C = need
    for comp in comps:
        rows = [vals for (pair, vals) in pair_profiles if pair in comp.pairs]
        for n in range(1, horizon + 1):
            col = [vals[n] for vals in rows]
            if col:
                spread = max(col) - min(col)
                if spread > C:
                    escalations.append(Escalation("spread", f"n={n}", spread))
                    C = spread
    for esc in escalations:
        log.info("subadditive constant escalated (%s at %s) to %s", esc.kind, esc.detail, esc.needed)
    return SubadditiveConstant(C, analytic, tuple(escalations))


def block_yield_bound(profile: Sequence, schedule: BlockSchedule, norm, k0: int):
    """Guaranteed total at horizon ``b_{k0}`` of the growing-block Alice walk,
    divided by ``b_{k0}``: block values minus connector and restart overheads."""
    p, D = schedule.p, schedule.D
    total = sum(profile[p * k] for k in range(1, k0 + 1))
    total -= (k0 - 1) * p * D * norm + 2 * k0 * p * D * norm
    b = schedule.b(k0)
    return Fraction(total) / b if not isinstance(total, float) else total / b


# non-alternating bounds -----------------------------------------------------


def value_nonalt_bounds(
    instance: GameInstance, start: StartSpec, budget: int = 12, config: BoundsConfig = BoundsConfig()
) -> ValueBounds:
    """Certified interval for the infinite-round non-alternating value."""
    require_irreducible(instance)
    comps = start_components(instance, start)
    sched = block_schedule(instance, comps)
    p, D = sched.p, sched.D
    exact = instance.exact
    norm = instance.score_norm
    conv = (lambda x: Fraction(x)) if exact else float
    if budget < p:
        return ValueBounds(conv(-norm), conv(norm), budget, None, None, instance.numeric_mode, {"reason": "budget below one block"})
    horizon = max(budget, config.audit_horizon)
    profile, witnesses = nonalt_profile(instance, start, horizon, config.solver)
    extra = [profile] if not start.is_edge_form and start.free_h else []
    sub = subadditive_constant(
        instance, comps, config.audit_horizon, config.max_audit_pairs, extra, config.solver
    )
    C = sub.value
    sources = {}

    fekete = min(conv(profile[n] + C) / n for n in range(1, budget + 1))
    alt = value_alt_infinite(instance, start, config.alt_iterations)
    alt_upper = alt.value if alt.value is not None else alt.upper
    upper = min(fekete, conv(alt_upper), conv(norm))
    sources["upper_subadditive"] = fekete
    sources["upper_alternating"] = conv(alt_upper)

    lowers = {}
    for k in range(1, budget // p + 1):
        L = p * k
        lowers[f"analytic_L{L}"] = conv(profile[L] - 3 * p * D * norm) / (L + p * D)
        cyc = list(witnesses[L]) + _connector(instance, start, witnesses[L], p * D)
        lowers[f"block_L{L}"] = conv(alice_periodic_value(instance, [], cyc, start))
    pre, cyc = _best_product_cycle_walk(instance, start)
    lowers["product_cycle"] = conv(alice_periodic_value(instance, pre, cyc, start))
    best_key = max(lowers, key=lambda key: lowers[key])
    lower = max(lowers[best_key], conv(-norm))
    sources["lower_source"] = best_key
    sources["lower_candidates"] = len(lowers)
    k0 = budget // p
    if k0 >= 1:
        sources["block_yield"] = block_yield_bound(profile, sched, norm, k0)
    escalations = sub.escalations
    if lower > upper:
        # only possible if C undershoots the true subadditivity constant
        need = max(lower * n - conv(profile[n]) for n in range(1, budget + 1))
        escalations = escalations + (Escalation("consistency", "lower bound above subadditive upper", need),)
        C = max(C, need)
        fekete = min(conv(profile[n] + C) / n for n in range(1, budget + 1))
        upper = min(fekete, conv(alt_upper), conv(norm))
        sources["upper_subadditive"] = fekete
    value = lower if lower == upper else None
    return ValueBounds(lower, upper, budget, C, value, instance.numeric_mode, sources, escalations)


def _connector(instance: GameInstance, start: StartSpec, segment: Sequence, length: int) -> list:
    """Lexicographically smallest G walk of exactly ``length`` edges from the end
    of ``segment`` back to the start (ending with the start edge if given)."""
    g = instance.graph_g
    v0, _ = start.resolve(instance)
    here = g.dst_idx[g.edge_index[segment[-1]]] if segment else v0
    zero = [[0] * len(g.edges)] * length
    if start.is_edge_form:
        found = optimal_walk(g, [here], zero, end_edge=g.edge_index[start.g_edge])
    else:
        found = optimal_walk(g, [here], zero, end_vertex=v0)
    if found is None:
        raise RuntimeError(f"no connecting walk of length {length}; padding constant property violated")
    return [g.edges[e].id for e in found[1]]


def _best_product_cycle_walk(instance: GameInstance, start: StartSpec) -> tuple[list, list]:
    """G-projection of a path to, and around, the best reachable product cycle."""
    graph, weights = weighted_product(instance, start)
    best = max_mean_cycle(graph, weights)
    g, h = instance.graph_g, instance.graph_h
    v0, us = start.resolve(instance)
    target = graph.edge(best.cycle[0]).src
    roots = [(g.vertices[v0], h.vertices[u]) for u in us]
    prev = {r: None for r in roots}
    queue = deque(roots)
    vi = graph.vertex_index
    while queue and target not in prev:
        x = queue.popleft()
        for e in graph.out_edges[vi[x]]:
            y = graph.edges[e].dst
            if y not in prev:
                prev[y] = e
                queue.append(y)
    path = []
    x = target
    while prev[x] is not None:
        e = prev[x]
        path.append(graph.edges[e].id[0])
        x = graph.edges[e].src
    path.reverse()
    return path, [eid[0] for eid in best.cycle]


# equilibrium strategy streams ----------------------------------------------


class AliceEquilibriumStream:
    """Alice's block strategy as a replayable lazy stream of G edge ids.

    Block ``k`` is an optimal walk for the ``p k``-round game from the start;
    between blocks a connector of exactly ``p D`` edges returns to the start
    edge, so ``e_{a_k} = e_0`` for every block start.
    """

    def __init__(self, instance: GameInstance, start: StartSpec, schedule: BlockSchedule, config: SolverConfig = SolverConfig(canonical_witness=False)):
        if not start.is_edge_form:
            raise ValueError("equilibrium streams need an edge start (e0, f0)")
        self.instance = instance
        self.start = start
        self.schedule = schedule
        self.config = config
        self._witnesses: list = []

    def segment(self, k: int) -> tuple:
        L = self.schedule.p * k
        if L >= len(self._witnesses):
            horizon = max(L, 2 * max(len(self._witnesses) - 1, 1))
            _, self._witnesses = nonalt_profile(self.instance, self.start, horizon, self.config)
        return self._witnesses[L]

    def connector(self, segment: Sequence) -> list:
        return _connector(self.instance, self.start, segment, self.schedule.p * self.schedule.D)

    def __iter__(self) -> Iterator:
        for k in itertools.count(1):
            seg = self.segment(k)
            yield from seg
            yield from self.connector(seg)


class BobEquilibriumResponse:
    """Bob's block response: best response per block pinned to ``f_{a_k} = f_0``,
    cheapest connector of exactly ``p D`` edges back to ``f_0`` in between."""

    def __init__(self, instance: GameInstance, start: StartSpec, schedule: BlockSchedule, alice: Iterable):
        if not start.is_edge_form:
            raise ValueError("equilibrium streams need an edge start (e0, f0)")
        self.instance = instance
        self.start = start
        self.schedule = schedule
        self.alice = alice

    def __iter__(self) -> Iterator:
        inst = self.instance
        g, h = inst.graph_g, inst.graph_h
        sc = scaled(inst)
        f0 = h.edge_index[self.start.h_edge]
        home = h.dst_idx[f0]
        p, D = self.schedule.p, self.schedule.D
        source = iter(self.alice)
        for k in itertools.count(1):
            seg = list(itertools.islice(source, p * k))
            rows = [sc.rows[g.edge_index[e]] for e in seg]
            _, walk = optimal_walk(h, [home], rows, inf=sc.inf)
            yield from (h.edges[f].id for f in walk)
            here = h.dst_idx[walk[-1]] if walk else home
            conn = list(itertools.islice(source, p * D))
            rows = [sc.rows[g.edge_index[e]] for e in conn]
            found = optimal_walk(h, [here], rows, end_edge=f0, inf=sc.inf)
            if found is None:
                raise RuntimeError(f"no H connector of length {p * D}; padding constant property violated")
            yield from (h.edges[f].id for f in found[1])


def alice_equilibrium_stream(instance, start, schedule, config: SolverConfig = SolverConfig(canonical_witness=False)):
    require_irreducible(instance)
    return AliceEquilibriumStream(instance, start, schedule, config)


def bob_equilibrium_response(instance, start, schedule, alice_prefix):
    require_irreducible(instance)
    return BobEquilibriumResponse(instance, start, schedule, alice_prefix)


# simulation -----------------------------------------------------------------


def simulate(instance: GameInstance, alice_stream: Iterable, bob_stream: Iterable, steps: int, start: Optional[StartSpec] = None) -> list[TraceRecord]:
    """Replay two streams for ``steps`` rounds, recording running totals.

    Raises ``ValueError`` naming the step at which either stream stops chaining.
    """
    g, h = instance.graph_g, instance.graph_h
    sc = scaled(instance)
    cur_g = cur_h = None
    if start is not None:
        v0, us = start.resolve(instance)
        cur_g = v0
        cur_h = us[0] if len(us) == 1 else None
    total = 0 if instance.exact else 0.0
    out = []
    pairs = zip(itertools.islice(alice_stream, steps), itertools.islice(bob_stream, steps))
    for step, (ae, be) in enumerate(pairs, start=1):
        e, f = g.edge_index.get(ae), h.edge_index.get(be)
        if e is None or f is None:
            raise ValueError(f"step {step}: unknown edge {ae if e is None else be!r}")
        if cur_g is not None and g.src_idx[e] != cur_g:
            raise ValueError(f"step {step}: Alice edge {ae!r} does not chain")
        if cur_h is not None and h.src_idx[f] != cur_h:
            raise ValueError(f"step {step}: Bob edge {be!r} does not chain")
        cur_g, cur_h = g.dst_idx[e], h.dst_idx[f]
        total += sc.rows[e][f]
        if instance.exact:
            cum = Fraction(total, sc.scale)
            avg = Fraction(total, sc.scale * step)
        else:
            cum, avg = total, total / step
        out.append(TraceRecord(step, ae, be, cum, avg))
    return out
