"""Directed multigraphs, game instances and the structure of product graphs.

Graphs are immutable multigraphs with explicit edge ids so parallel edges and
self-loops are representable. Solvers work on integer indices internally; the
index order of out-edges follows sorted edge ids, which is what makes every
"lexicographically smallest" tie-break in the package well defined.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field, replace
from decimal import Decimal
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

from mpg_duel.errors import DomainError, InstanceError
from mpg_duel.numbers import Number, parse_float, parse_rational, render, simplify

EXACT = "exact"
FLOAT = "float64"


@dataclass(frozen=True)
class Edge:
    id: Hashable
    src: Hashable
    dst: Hashable
    label: Optional[int] = None


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Finite directed multigraph.

    Construction checks structural consistency (unique ids, no dangling
    endpoints). Sink-freeness is checked separately by
    :meth:`require_sink_free` because intermediate graphs, e.g. untrimmed
    follower graphs, may legitimately contain sinks.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            dup = _first_duplicate(self.vertices)
            raise InstanceError(f"duplicate vertex id {dup!r}")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InstanceError(f"duplicate edge id {_first_duplicate(ids)!r}")
        vset = set(self.vertices)
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in vset:
                    raise InstanceError(f"dangling edge reference: edge {e.id!r} uses unknown vertex {end!r}")
            if e.label not in (None, 0, 1):
                raise InstanceError(f"edge {e.id!r} label must be 0 or 1")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "DirectedGraph":
        """Build from ``(id, src, dst)`` or ``(id, src, dst, label)`` tuples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    # index views -------------------------------------------------------

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def src_idx(self) -> tuple:
        vi = self.vertex_index
        return tuple(vi[e.src] for e in self.edges)

    @cached_property
    def dst_idx(self) -> tuple:
        vi = self.vertex_index
        return tuple(vi[e.dst] for e in self.edges)

    @cached_property
    def out_edges(self) -> tuple:
        """Per vertex index: tuple of outgoing edge indices sorted by edge id."""
        buckets = [[] for _ in self.vertices]
        for i, s in enumerate(self.src_idx):
            buckets[s].append(i)
        return tuple(tuple(sorted(b, key=lambda i: _sort_key(self.edges[i].id))) for b in buckets)

    @cached_property
    def in_edges(self) -> tuple:
        buckets = [[] for _ in self.vertices]
        for i, t in enumerate(self.dst_idx):
            buckets[t].append(i)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def edge_rank(self) -> tuple:
        """Position of each edge in the global sorted-by-id order."""
        order = sorted(range(len(self.edges)), key=lambda i: _sort_key(self.edges[i].id))
        rank = [0] * len(self.edges)
        for r, i in enumerate(order):
            rank[i] = r
        return tuple(rank)

    def sinks(self) -> list:
        return [v for v, out in zip(self.vertices, self.out_edges) if not out]

    def require_sink_free(self, name: str = "graph") -> None:
        sinks = self.sinks()
        if sinks:
            raise InstanceError(f"sink vertex {sinks[0]!r} in {name}: every vertex needs an outgoing edge")

    def edge(self, edge_id) -> Edge:
        try:
            return self.edges[self.edge_index[edge_id]]
        except KeyError:
            raise InstanceError(f"unknown edge id {edge_id!r}") from None

    def is_irreducible(self) -> bool:
        comps = strongly_connected_components(self)
        return len(comps) == 1 and comps[0].nontrivial

    def __repr__(self):
        return f"DirectedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


def _first_duplicate(items):
    seen = set()
    for x in items:
        if x in seen:
            return x
        seen.add(x)
    return None


def _sort_key(x):
    # ids are strings in documents but tuples inside product graphs
    if isinstance(x, tuple):
        return tuple(_sort_key(y) for y in x)
    return (0, x) if isinstance(x, str) else (1, repr(x))


@dataclass(frozen=True)
class Walk:
    graph: DirectedGraph
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        validate_walk(self.graph, self.edges)

    def __len__(self):
        return len(self.edges)

    @property
    def start(self):
        return self.graph.edge(self.edges[0]).src if self.edges else None

    @property
    def end(self):
        return self.graph.edge(self.edges[-1]).dst if self.edges else None


def validate_walk(graph: DirectedGraph, edge_ids: Sequence, start_vertex=None) -> None:
    """Raise :class:`InstanceError` naming the first index where chaining breaks."""
    prev_dst = start_vertex
    for k, eid in enumerate(edge_ids):
        e = graph.edge(eid)
        if prev_dst is not None and e.src != prev_dst:
            raise InstanceError(
                f"walk breaks at index {k}: edge {eid!r} starts at {e.src!r}, expected {prev_dst!r}"
            )
        prev_dst = e.dst


# game instances ---------------------------------------------------------


@dataclass(frozen=True)
class StartSpec:
    """Initial position, either as a pair of edges or a pair of vertices.

    Edge starts are resolved to the terminal vertices of the edges. A vertex
    start may leave ``h_vertex`` as ``None`` to let Bob choose his start freely
    (used by the covering-radius reduction).
    """

    g_edge: Optional[Hashable] = None
    h_edge: Optional[Hashable] = None
    g_vertex: Optional[Hashable] = None
    h_vertex: Optional[Hashable] = None
    free_h: bool = False

    def __post_init__(self):
        edge_form = self.g_edge is not None or self.h_edge is not None
        vertex_form = self.g_vertex is not None or self.h_vertex is not None
        if edge_form and (vertex_form or self.free_h):
            raise InstanceError("start must use either edges or vertices, not both")
        if edge_form and (self.g_edge is None or self.h_edge is None):
            raise InstanceError("edge start needs both g_edge and h_edge")
        if not edge_form:
            if self.g_vertex is None:
                raise InstanceError("start needs a G vertex")
            if self.h_vertex is None and not self.free_h:
                raise InstanceError("start needs an H vertex")

    @classmethod
    def edges(cls, g_edge, h_edge) -> "StartSpec":
        return cls(g_edge=g_edge, h_edge=h_edge)

    @classmethod
    def vertices(cls, g_vertex, h_vertex) -> "StartSpec":
        return cls(g_vertex=g_vertex, h_vertex=h_vertex)

    @classmethod
    def free_bob(cls, g_vertex) -> "StartSpec":
        return cls(g_vertex=g_vertex, free_h=True)

    @property
    def is_edge_form(self) -> bool:
        return self.g_edge is not None

    def resolve(self, instance: "GameInstance") -> tuple[int, tuple[int, ...]]:
        """Return ``(g_vertex_index, h_vertex_indices)``."""
        g, h = instance.graph_g, instance.graph_h
        if self.is_edge_form:
            v0 = g.dst_idx[g.edge_index[_known(g, self.g_edge, "G")]]
            u0 = h.dst_idx[h.edge_index[_known(h, self.h_edge, "H")]]
            return v0, (u0,)
        if self.g_vertex not in g.vertex_index:
            raise InstanceError(f"unknown G vertex {self.g_vertex!r}")
        v0 = g.vertex_index[self.g_vertex]
        if self.free_h:
            return v0, tuple(range(len(h.vertices)))
        if self.h_vertex not in h.vertex_index:
            raise InstanceError(f"unknown H vertex {self.h_vertex!r}")
        return v0, (h.vertex_index[self.h_vertex],)

    def to_document(self) -> dict:
        if self.is_edge_form:
            return {"g_edge": self.g_edge, "h_edge": self.h_edge}
        if self.free_h:
            return {"g_vertex": self.g_vertex}
        return {"g_vertex": self.g_vertex, "h_vertex": self.h_vertex}


def _known(graph, edge_id, name):
    if edge_id not in graph.edge_index:
        raise InstanceError(f"unknown {name} edge {edge_id!r}")
    return edge_id


@dataclass(frozen=True, eq=False)
class GameInstance:
    """Two sink-free graphs plus a sparse score table ``P(g_edge, h_edge)``."""

    graph_g: DirectedGraph
    graph_h: DirectedGraph
    score_default: Number = 0
    score_entries: Mapping = field(default_factory=dict)
    numeric_mode: str = EXACT
    start: Optional[StartSpec] = None

    def __post_init__(self):
        if self.numeric_mode not in (EXACT, FLOAT):
            raise InstanceError(f"unknown numeric mode {self.numeric_mode!r}")
        self.graph_g.require_sink_free("graph_g")
        self.graph_h.require_sink_free("graph_h")
        conv = self._convert
        object.__setattr__(self, "score_default", conv(self.score_default))
        entries = {}
        for (ge, he), val in dict(self.score_entries).items():
            if ge not in self.graph_g.edge_index:
                raise InstanceError(f"dangling edge reference: score entry uses unknown G edge {ge!r}")
            if he not in self.graph_h.edge_index:
                raise InstanceError(f"dangling edge reference: score entry uses unknown H edge {he!r}")
            entries[(ge, he)] = conv(val)
        object.__setattr__(self, "score_entries", entries)

    def _convert(self, val):
        if self.numeric_mode == FLOAT:
            return parse_float(val) if not isinstance(val, float) else val
        if isinstance(val, float):
            raise InstanceError("float score in exact mode")
        return simplify(parse_rational(val)) if not isinstance(val, int) else val

    @property
    def exact(self) -> bool:
        return self.numeric_mode == EXACT

    @cached_property
    def table(self) -> tuple:
        """``table[g_idx][h_idx]`` score; ints where integral in exact mode."""
        g, h = self.graph_g, self.graph_h
        rows = [[self.score_default] * len(h.edges) for _ in g.edges]
        for (ge, he), val in self.score_entries.items():
            rows[g.edge_index[ge]][h.edge_index[he]] = val
        return tuple(tuple(r) for r in rows)

    def score(self, g_edge, h_edge) -> Number:
        return self.table[self.graph_g.edge_index[g_edge]][self.graph_h.edge_index[h_edge]]

    @cached_property
    def score_norm(self) -> Number:
        """max |P| over all pairs, including the default."""
        vals = [abs(self.score_default)] + [abs(v) for v in self.score_entries.values()]
        return max(vals)

    @cached_property
    def integral(self) -> bool:
        return self.exact and all(isinstance(x, int) for row in self.table for x in row)

    def zero(self) -> Number:
        return 0.0 if self.numeric_mode == FLOAT else 0

    def with_start(self, start: Optional[StartSpec]) -> "GameInstance":
        return replace(self, start=start)

    def replay(self, alice: Sequence, bob: Sequence) -> Number:
        """Sum of paired scores of two equal-length walks given by edge id."""
        if len(alice) != len(bob):
            raise ValueError("walks differ in length")
        total = self.zero()
        for e, f in zip(alice, bob):
            total += self.score(e, f)
        return total


def _graph_from_doc(doc, name) -> DirectedGraph:
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise InstanceError(f"{name} must have 'vertices' and 'edges'")
    edges = []
    for rec in doc["edges"]:
        try:
            edges.append(Edge(rec["id"], rec["src"], rec["dst"], rec.get("label")))
        except (KeyError, TypeError):
            raise InstanceError(f"malformed edge record in {name}: {rec!r}") from None
    return DirectedGraph(tuple(doc["vertices"]), tuple(edges))


def instance_from_document(doc: dict) -> GameInstance:
    try:
        g = _graph_from_doc(doc["graph_g"], "graph_g")
        h = _graph_from_doc(doc["graph_h"], "graph_h")
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from None
    mode = doc.get("numeric_mode", EXACT)
    score = doc.get("score", {})
    default = score.get("default", "0")
    entries = {}
    for rec in score.get("entries", []):
        try:
            key = (rec["g"], rec["h"])
            val = rec["value"]
        except (KeyError, TypeError):
            raise InstanceError(f"malformed score entry {rec!r}") from None
        if key in entries:
            raise InstanceError(f"duplicate score entry for {key!r}")
        entries[key] = val
    start = None
    if doc.get("start"):
        start = _start_from_doc(doc["start"])
    try:
        return GameInstance(g, h, default, entries, mode, start)
    except ValueError as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(str(exc)) from None


def _start_from_doc(s: dict) -> StartSpec:
    h_edge = s.get("h_edge", s.get("f_edge"))
    if "g_edge" in s:
        return StartSpec.edges(s["g_edge"], h_edge)
    if "g_vertex" in s:
        if "h_vertex" not in s:
            return StartSpec.free_bob(s["g_vertex"])
        return StartSpec.vertices(s["g_vertex"], s["h_vertex"])
    raise InstanceError(f"malformed start {s!r}")


def parse_instance(text: str) -> GameInstance:
    """Parse and validate a JSON instance document.

    Bare JSON numbers are read through :class:`~decimal.Decimal`, so ``0.1``
    means exactly one tenth.
    """
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from None
    return instance_from_document(doc)


def instance_to_document(instance: GameInstance) -> dict:
    def graph_doc(g):
        edges = []
        for e in g.edges:
            rec = {"id": e.id, "src": e.src, "dst": e.dst}
            if e.label is not None:
                rec["label"] = e.label
            edges.append(rec)
        return {"vertices": list(g.vertices), "edges": edges}

    doc = {
        "graph_g": graph_doc(instance.graph_g),
        "graph_h": graph_doc(instance.graph_h),
        "score": {
            "default": render(instance.score_default),
            "entries": [
                {"g": ge, "h": he, "value": render(v)} for (ge, he), v in instance.score_entries.items()
            ],
        },
    }
    if instance.numeric_mode != EXACT:
        doc["numeric_mode"] = instance.numeric_mode
    if instance.start is not None:
        doc["start"] = instance.start.to_document()
    return doc


# strongly connected structure -------------------------------------------


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    nontrivial: bool


def strongly_connected_components(graph: DirectedGraph) -> list[Component]:
    """Tarjan's algorithm, iterative. Components come in topological order of
    the condensation (a component precedes every component it can reach)."""
    n = len(graph.vertices)
    succ = [[graph.dst_idx[e] for e in out] for out in graph.out_edges]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    found: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(comp)
    found.reverse()
    out = []
    for comp in found:
        members = set(comp)
        nontrivial = len(comp) > 1 or any(graph.dst_idx[e] == comp[0] for e in graph.out_edges[comp[0]])
        out.append(Component(frozenset(graph.vertices[i] for i in members), nontrivial))
    return out


def _bfs_depths(succ, root) -> dict:
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    return depth


def period(graph: DirectedGraph, component: Component) -> int:
    """gcd of cycle lengths inside a nontrivial strongly connected component."""
    if not component.nontrivial:
        raise ValueError("period undefined for a trivial component (no cycle)")
    vi = graph.vertex_index
    members = {vi[v] for v in component.vertices}
    root = min(members)

    def succ(v):
        return (graph.dst_idx[e] for e in graph.out_edges[v] if graph.dst_idx[e] in members)

    depth = _bfs_depths(succ, root)
    g = 0
    for v in members:
        for e in graph.out_edges[v]:
            w = graph.dst_idx[e]
            if w in members:
                g = math.gcd(g, depth[v] + 1 - depth[w])
    return abs(g)


# product graphs -----------------------------------------------------------


def product_graph(instance: GameInstance) -> DirectedGraph:
    """G x H: vertices are vertex pairs, edges are edge pairs."""
    g, h = instance.graph_g, instance.graph_h
    vertices = tuple((v, u) for v in g.vertices for u in h.vertices)
    edges = tuple(
        Edge((eg.id, eh.id), (eg.src, eh.src), (eg.dst, eh.dst)) for eg in g.edges for eh in h.edges
    )
    return DirectedGraph(vertices, edges)


@dataclass(frozen=True)
class ProductComponent:
    """A nontrivial strongly connected component of ``G x H``.

    ``members`` are the edge pairs whose endpoints both lie in the component;
    ``diameter`` is the longest shortest walk between members and ``padding``
    is the block-padding constant ``D``.
    """

    pairs: frozenset
    members: tuple
    member_src: tuple
    member_dst: tuple
    period: int
    diameter: int
    padding: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.members)

    def contains_pair(self, v, u) -> bool:
        return (v, u) in self.pairs

    def contains_edge_pair(self, e, f) -> bool:
        return (e, f) in set(self.members)


def product_components(instance: GameInstance) -> list[ProductComponent]:
    """All nontrivial components of the product graph, in topological order."""
    pg = product_graph(instance)
    out = []
    for comp in strongly_connected_components(pg):
        if comp.nontrivial:
            out.append(_make_component(pg, comp))
    return out


def product_component(instance: GameInstance, start: StartSpec) -> ProductComponent:
    """Nontrivial component of ``G x H`` containing the start (terminal) vertex pair."""
    v0, us = start.resolve(instance)
    if len(us) != 1:
        raise ValueError("product_component needs a single H start")
    target = (instance.graph_g.vertices[v0], instance.graph_h.vertices[us[0]])
    pg = product_graph(instance)
    for comp in strongly_connected_components(pg):
        if target in comp.vertices:
            if not comp.nontrivial:
                raise DomainError(f"transient start: pair {target!r} lies in a trivial component of G x H")
            return _make_component(pg, comp)
    raise AssertionError("start pair missing from product graph")


def _make_component(pg: DirectedGraph, comp: Component) -> ProductComponent:
    pairs = comp.vertices
    members, msrc, mdst = [], [], []
    for e in pg.edges:
        if e.src in pairs and e.dst in pairs:
            members.append(e.id)
            msrc.append(e.src)
            mdst.append(e.dst)
    order = sorted(range(len(members)), key=lambda i: _sort_key(members[i]))
    members = tuple(members[i] for i in order)
    msrc = tuple(msrc[i] for i in order)
    mdst = tuple(mdst[i] for i in order)
    p = period(pg, comp)
    succ = _member_successors(msrc, mdst)
    diam = 0
    for i in range(len(members)):
        depth = _bfs_depths(lambda v: succ[v], i)
        diam = max(diam, max(depth.values()))
    pc = ProductComponent(frozenset(pairs), members, msrc, mdst, p, diam)
    return replace(pc, padding=padding_constant(pc))


def _member_successors(msrc, mdst) -> list[list[int]]:
    by_src: dict = {}
    for j, s in enumerate(msrc):
        by_src.setdefault(s, []).append(j)
    return [by_src.get(d, []) for d in mdst]


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def padding_constant(component: ProductComponent) -> int:
    """Smallest ``D`` such that member pairs joined by some walk of length
    divisible by ``p`` are joined by a walk of length exactly ``p*D``.

    Works on the edge-to-edge relation of the component: the p-step relation
    is raised to successive powers until its support covers every pair in the
    same cyclic class. Wielandt's bound ``(m-1)^2 + 1`` caps the search.
    """
    m = len(component.members)
    p = component.period
    succ = _member_successors(component.member_src, component.member_dst)
    adj = np.zeros((m, m), dtype=bool)
    for i, js in enumerate(succ):
        adj[i, js] = True
    depth = _bfs_depths(lambda v: succ[v], 0)
    cls = np.array([depth[i] % p for i in range(m)])
    target = cls[:, None] == cls[None, :]
    step = np.eye(m, dtype=bool)
    for _ in range(p):
        step = _bool_matmul(step, adj)
    reach = step.copy()
    bound = (m - 1) ** 2 + 1
    for d in range(1, bound + 1):
        if np.array_equal(reach, target):
            return d
        reach = _bool_matmul(reach, step)
    raise AssertionError(f"padding constant exceeded Wielandt bound {bound}; component relation is inconsistent")


def reachable_pairs(instance: GameInstance, v0: int, u_starts: Iterable[int]) -> list[tuple[int, int]]:
    """Vertex-index pairs reachable in G x H from ``{v0} x u_starts``, BFS order."""
    g, h = instance.graph_g, instance.graph_h
    seen = {(v0, u) for u in u_starts}
    order = sorted(seen)
    queue = deque(order)
    while queue:
        v, u = queue.popleft()
        for e in g.out_edges[v]:
            for f in h.out_edges[u]:
                nxt = (g.dst_idx[e], h.dst_idx[f])
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
    return order


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
