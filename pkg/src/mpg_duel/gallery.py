"""Small named instances with executable expectation checklists.

* ``fig2``: reducible pair where Alice's switch time decides which of Bob's
  two branches wins; finite values stay in ``{-1, 0, 1}``.
* ``chase``: complete G against H missing the diagonal moves; Alice scores
  every round when she sees Bob's move first, at most twice when she commits.
* ``irrational``: scores ``+-alpha``, ``+-beta`` with rationally independent
  weights; no eventually periodic Alice walk reaches value 0.
* ``integer``: integer scores where periodic walks pay for transition edges.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Optional, Sequence

from mpg_duel.finite_solver import count_walks, value_alt_finite, value_nonalt_finite
from mpg_duel.asymptotic_solver import value_alt_infinite
from mpg_duel.numbers import render
from mpg_duel.graph_core import EXACT, FLOAT, DirectedGraph, GameInstance, StartSpec, Walk

ALPHA = 1.0
BETA = math.sqrt(2.0)
NAMES = ("fig2", "chase", "irrational", "integer")
SWITCH_EDGES = ("ea", "eb")


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], tuple]  # returns (passed, detail)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    instance: GameInstance
    start: StartSpec
    reducible: bool
    checks: tuple = field(default=(), repr=False)

    def run_checklist(self) -> list[CheckResult]:
        out = []
        for check in self.checks:
            passed, detail = check.run()
            out.append(CheckResult(check.name, bool(passed), str(detail)))
        return out


@dataclass(frozen=True)
class WalkStatistics:
    n: int
    p_plus: Fraction
    p_minus: Fraction
    p_zero: Fraction


# instances ------------------------------------------------------------------


def fig2_instance() -> GameInstance:
    g = DirectedGraph.from_edges(("P", "M"), [("e+", "P", "P"), ("e0", "P", "M"), ("e-", "M", "M")])
    h = DirectedGraph.from_edges(
        ("X", "Y", "Z"), [("f1", "Y", "X"), ("f2", "Y", "Z"), ("f+", "X", "X"), ("f-", "Z", "Z")]
    )
    scores = {("e+", "f+"): 1, ("e-", "f-"): 1, ("e+", "f-"): -1, ("e-", "f+"): -1}
    return GameInstance(g, h, 0, scores, start=StartSpec.vertices("P", "Y"))


def chase_instance() -> GameInstance:
    vs = ("W", "X", "Y", "Z")
    missing = {("W", "Y"), ("Y", "W"), ("X", "Z"), ("Z", "X")}
    g = DirectedGraph.from_edges(vs, [(a + b, a, b) for a in vs for b in vs])
    h = DirectedGraph.from_edges(vs, [(a + b, a, b) for a in vs for b in vs if (a, b) not in missing])
    scores = {(e.id, f.id): (1 if e.dst != f.dst else -1) for e in g.edges for f in h.edges}
    return GameInstance(g, h, 0, scores, start=StartSpec.edges("WW", "WW"))


def _branch_graph_h() -> DirectedGraph:
    return DirectedGraph.from_edges(
        ("X", "Y", "Z"), [("fa", "Y", "X"), ("fb", "Y", "Z"), ("f-", "X", "X"), ("f+", "Z", "Z")]
    )


def irrational_instance(alpha: float = ALPHA, beta: float = BETA) -> GameInstance:
    g = DirectedGraph.from_edges(("O",), [("e+", "O", "O"), ("e-", "O", "O")])
    scores = {("e+", "f+"): alpha, ("e+", "f-"): -alpha, ("e-", "f-"): beta, ("e-", "f+"): -beta}
    return GameInstance(g, _branch_graph_h(), 0.0, scores, FLOAT, StartSpec.vertices("O", "Y"))


def integer_instance() -> GameInstance:
    g = DirectedGraph.from_edges(
        ("M", "P"), [("e-", "M", "M"), ("e+", "P", "P"), ("ea", "M", "P"), ("eb", "P", "M")]
    )
    scores = {("e+", "f+"): 1, ("e-", "f-"): 1}
    return GameInstance(g, _branch_graph_h(), -1, scores, EXACT, StartSpec.vertices("M", "Y"))


# walk generators and statistics ----------------------------------------------


def integer_walk() -> Iterator[str]:
    for n in itertools.count(1):
        yield from ["e-"] * n
        yield "ea"
        yield from ["e+"] * n
        yield "eb"


def irrational_walk(alpha: float = ALPHA, beta: float = BETA) -> Iterator[str]:
    """Balanced schedule: take ``e+`` whenever it keeps ``alpha c+ <= beta c-``."""
    plus = minus = 0
    while True:
        if alpha * plus <= beta * minus:
            plus += 1
            yield "e+"
        else:
            minus += 1
            yield "e-"


def nonperiodic_walk(name: str, length: int) -> Walk:
    if length < 1:
        raise ValueError("length must be positive")
    if name == "integer":
        gen, inst = integer_walk(), integer_instance()
    elif name == "irrational":
        gen, inst = irrational_walk(), irrational_instance()
    else:
        raise ValueError(f"no non-periodic walk for {name!r}")
    return Walk(inst.graph_g, tuple(itertools.islice(gen, length)))


def walk_statistics(walk: Sequence, classes: Mapping[str, str]) -> WalkStatistics:
    """Exact frequencies of edges classified as ``plus``, ``minus`` or ``zero``."""
    edges = walk.edges if isinstance(walk, Walk) else tuple(walk)
    counts = {"plus": 0, "minus": 0, "zero": 0}
    for e in edges:
        kind = classes.get(e)
        if kind not in counts:
            raise ValueError(f"edge {e!r} is not classified as plus, minus or zero")
        counts[kind] += 1
    n = len(edges)
    if n == 0:
        raise ValueError("empty walk")
    return WalkStatistics(n, Fraction(counts["plus"], n), Fraction(counts["minus"], n), Fraction(counts["zero"], n))


CLASSES = {"e+": "plus", "e-": "minus", "ea": "zero", "eb": "zero", "e0": "zero"}

# Bob's two infinite walks from Y in the irrational and integer examples
BRANCHES = {"fa": "f-", "fb": "f+"}


def branch_averages(instance: GameInstance, walk: Sequence) -> dict:
    """Average score of ``walk`` against each of Bob's two branches from Y."""
    n = len(walk)
    out = {}
    for first, loop in BRANCHES.items():
        total = instance.score(walk[0], first) + sum(instance.score(e, loop) for e in walk[1:])
        out[first] = total / n if not instance.exact else Fraction(total, n)
    return out


# eventually periodic Alice walks ------------------------------------------------


@dataclass(frozen=True)
class PeriodicWalk:
    prefix: tuple
    cycle: tuple

    def prefix_of(self, n: int) -> list:
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.cycle[: n - len(out)])
        return out


def periodic_walks(graph: DirectedGraph, start_vertex, max_period: int = 6, max_preperiod: int = 4) -> list[PeriodicWalk]:
    """Every walk ``prefix + cycle^inf`` from the start with short prefix and cycle."""
    out = []
    vi = graph.vertex_index
    for pre_len in range(max_preperiod + 1):
        for prefix in _walks(graph, vi[start_vertex], pre_len):
            at = graph.dst_idx[prefix[-1]] if prefix else vi[start_vertex]
            for per in range(1, max_period + 1):
                for cyc in _walks(graph, at, per):
                    if graph.dst_idx[cyc[-1]] == at:
                        ids = lambda seq: tuple(graph.edges[e].id for e in seq)
                        out.append(PeriodicWalk(ids(prefix), ids(cyc)))
    return out


def _walks(graph: DirectedGraph, v: int, n: int):
    if n == 0:
        yield ()
        return
    for e in graph.out_edges[v]:
        for rest in _walks(graph, graph.dst_idx[e], n - 1):
            yield (e,) + rest


def periodic_branch_average(instance: GameInstance, walk: PeriodicWalk, steps: int) -> dict:
    """Average over ``steps`` rounds against each branch, by counting whole cycles."""
    out = {}
    for first, loop in BRANCHES.items():
        pre = walk.prefix[:steps]
        total = sum(instance.score(e, loop) for e in pre)
        rest = steps - len(pre)
        q, r = divmod(rest, len(walk.cycle))
        total += q * sum(instance.score(e, loop) for e in walk.cycle)
        total += sum(instance.score(e, loop) for e in walk.cycle[:r])
        e1 = walk.prefix_of(1)[0]
        total += instance.score(e1, first) - instance.score(e1, loop)
        out[first] = Fraction(total, steps) if instance.exact else total / steps
    return out


def periodic_limit_value(instance: GameInstance, walk: PeriodicWalk):
    """min over branches of the limit average: determined by the cycle alone."""
    vals = []
    for loop in BRANCHES.values():
        s = sum(instance.score(e, loop) for e in walk.cycle)
        vals.append(Fraction(s, len(walk.cycle)) if instance.exact else s / len(walk.cycle))
    return min(vals)


def integer_formula_value(walk: PeriodicWalk) -> Fraction:
    """``-p0 - |p+ - p-|`` from the cycle's edge frequencies."""
    st = walk_statistics(walk.cycle, CLASSES)
    return -st.p_zero - abs(st.p_plus - st.p_minus)


# switch-time family for fig2 -----------------------------------------------------


def fig2_switch_walk(T: Optional[int]) -> PeriodicWalk:
    """Alice plays ``e+`` until round ``T``, takes ``e0`` then, and ``e-`` forever.
    ``T = None`` means she never switches."""
    if T is None:
        return PeriodicWalk((), ("e+",))
    return PeriodicWalk(("e+",) * (T - 1) + ("e0",), ("e-",))


FIG2_BRANCHES = {"f1": "f+", "f2": "f-"}


def fig2_switch_value(T: Optional[int]):
    """min over Bob's two branches of the limit average against the switch walk."""
    inst = fig2_instance()
    walk = fig2_switch_walk(T)
    vals = []
    for loop in FIG2_BRANCHES.values():
        s = sum(inst.score(e, loop) for e in walk.cycle)
        vals.append(Fraction(s, len(walk.cycle)))
    return min(vals)


def _fmt(vals) -> str:
    return "[" + ", ".join(render(v) for v in vals) + "]"


# checklists -----------------------------------------------------------------------


def _fig2_checks(inst: GameInstance) -> tuple:
    start = StartSpec.vertices("P", "Y")

    def values_bounded():
        vals = [value_nonalt_finite(inst, n, start).value for n in range(1, 25)]
        ok = all(v in (-1, 0, 1) and abs(Fraction(v, n)) <= Fraction(2, n) for n, v in enumerate(vals, 1))
        return ok, f"values n=1..24: {_fmt(vals)}"

    def two_bob_walks():
        counts = [count_walks(inst.graph_h, [inst.graph_h.vertex_index["Y"]], n) for n in range(1, 25)]
        return all(c == 2 for c in counts), f"Bob walk counts {sorted(set(counts))}"

    def switch_family():
        vals = {T: fig2_switch_value(T) for T in list(range(1, 51)) + [None]}
        return all(v == -1 for v in vals.values()), f"limit values {_fmt(sorted(set(vals.values())))}"

    return (
        Check("nonalt values in {-1,0,1}, |V/n| <= 2/n for n <= 24", values_bounded),
        Check("Bob has exactly two walks from Y at every length", two_bob_walks),
        Check("every switch time T in 1..50 or never gives limit -1", switch_family),
    )


def _chase_checks(inst: GameInstance) -> tuple:
    start = StartSpec.edges("WW", "WW")

    def alt_scores_every_round():
        vals = [value_alt_finite(inst, n, start) for n in range(1, 11)]
        return vals == list(range(1, 11)), f"alt values {_fmt(vals)}"

    def nonalt_at_most_two():
        vals = [value_nonalt_finite(inst, n, start).value for n in range(1, 11)]
        return all(v <= 2 for v in vals), f"nonalt values {_fmt(vals)}"

    def gap():
        gaps = [
            value_alt_finite(inst, n, start) - value_nonalt_finite(inst, n, start).value for n in range(1, 11)
        ]
        return all(d >= n - 2 for n, d in enumerate(gaps, 1)), f"gaps {_fmt(gaps)}"

    def alt_infinite():
        res = value_alt_infinite(inst, start)
        return res.value == 1, f"alternating infinite value {res.value}"

    return (
        Check("alternating value equals n for n <= 10", alt_scores_every_round),
        Check("non-alternating value at most 2 for n <= 10", nonalt_at_most_two),
        Check("gap at least n - 2", gap),
        Check("alternating infinite value is exactly 1", alt_infinite),
    )


def _obstruction_checks(inst: GameInstance, name: str, steps: int = 10**5) -> tuple:
    def periodic_negative():
        walks = periodic_walks(inst.graph_g, inst.start.g_vertex)
        worst = max(min(periodic_branch_average(inst, w, steps).values()) for w in walks)
        return worst <= -1e-3, f"{len(walks)} periodic walks, best simulated value {float(worst):.6f}"

    def nonperiodic_zero():
        walk = nonperiodic_walk(name, steps).edges
        avgs = branch_averages(inst, walk)
        return all(abs(v) <= 1e-2 for v in avgs.values()), "averages " + ", ".join(
            f"{k}: {float(v):.6f}" for k, v in avgs.items()
        )

    checks = [
        Check("every periodic walk (period <= 6, preperiod <= 4) loses >= 1e-3", periodic_negative),
        Check("non-periodic walk averages within 1e-2 of 0 against both branches", nonperiodic_zero),
    ]
    if name == "integer":

        def formula():
            walks = periodic_walks(inst.graph_g, inst.start.g_vertex)
            bad = [w for w in walks if periodic_limit_value(inst, w) != integer_formula_value(w)]
            worst = max(integer_formula_value(w) for w in walks)
            return not bad and worst < 0, f"formula agrees on {len(walks) - len(bad)}/{len(walks)}, max {worst}"

        checks.append(Check("limit value equals -p0 - |p+ - p-| exactly, always negative", formula))
    return tuple(checks)


def build_example(name: str) -> GalleryEntry:
    if name == "fig2":
        inst = fig2_instance()
        checks = _fig2_checks(inst)
    elif name == "chase":
        inst = chase_instance()
        checks = _chase_checks(inst)
    elif name == "irrational":
        inst = irrational_instance()
        checks = _obstruction_checks(inst, name)
    elif name == "integer":
        inst = integer_instance()
        checks = _obstruction_checks(inst, name)
    else:
        raise KeyError(f"unknown gallery example {name!r}; known: {', '.join(NAMES)}")
    reducible = not (inst.graph_g.is_irreducible() and inst.graph_h.is_irreducible())
    return GalleryEntry(name, inst, inst.start, reducible, checks)
