import json
import math
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mpg_duel.errors import DomainError, InstanceError
from mpg_duel.gallery import chase_instance, fig2_instance
from mpg_duel.graph_core import (
    DirectedGraph,
    GameInstance,
    StartSpec,
    Walk,
    instance_to_document,
    parse_instance,
    period,
    product_component,
    product_components,
    strongly_connected_components,
    validate_walk,
)
from mpg_duel.numbers import parse_rational, rationals_in_interval, render
from strategies import instances


def loop_doc(default=0):
    return {
        "graph_g": {"vertices": ["a"], "edges": [{"id": "g", "src": "a", "dst": "a"}]},
        "graph_h": {"vertices": ["b"], "edges": [{"id": "h", "src": "b", "dst": "b"}]},
        "score": {"default": default, "entries": []},
    }


def cycle(n, prefix="c"):
    vs = [f"{prefix}{i}" for i in range(n)]
    return DirectedGraph.from_edges(vs, [(f"{prefix}e{i}", vs[i], vs[(i + 1) % n]) for i in range(n)])


def loop_graph(name="a", edge="g"):
    return DirectedGraph.from_edges([name], [(edge, name, name)])


# parsing ----------------------------------------------------------------------


def test_minimal_instance_parses():
    inst = parse_instance(json.dumps(loop_doc()))
    assert inst.score("g", "h") == 0
    assert inst.graph_g.is_irreducible()


def test_sink_vertex_rejected():
    doc = loop_doc()
    doc["graph_g"]["vertices"].append("z")
    with pytest.raises(InstanceError, match="sink vertex"):
        parse_instance(json.dumps(doc))


def test_dangling_score_entry_rejected():
    doc = loop_doc()
    doc["score"]["entries"].append({"g": "g", "h": "nope", "value": 1})
    with pytest.raises(InstanceError, match="dangling edge reference"):
        parse_instance(json.dumps(doc))


def test_dangling_edge_endpoint_rejected():
    doc = loop_doc()
    doc["graph_h"]["edges"].append({"id": "x", "src": "b", "dst": "q"})
    with pytest.raises(InstanceError, match="dangling"):
        parse_instance(json.dumps(doc))


def test_duplicate_ids_rejected():
    with pytest.raises(InstanceError, match="duplicate edge"):
        DirectedGraph.from_edges(["a"], [("g", "a", "a"), ("g", "a", "a")])


def test_malformed_json():
    with pytest.raises(InstanceError, match="malformed JSON"):
        parse_instance("{")


def test_rational_scores_exact():
    doc = loop_doc()
    doc["score"]["entries"].append({"g": "g", "h": "h", "value": "2/3"})
    inst = parse_instance(json.dumps(doc))
    assert inst.score("g", "h") == Fraction(2, 3)
    doc["score"]["entries"][0]["value"] = 0.1
    assert parse_instance(json.dumps(doc)).score("g", "h") == Fraction(1, 10)


def test_fig2_document_counts():
    inst = parse_instance(json.dumps(instance_to_document(fig2_instance())))
    assert len(inst.graph_g.edges) == 3 and len(inst.graph_h.edges) == 4
    assert {e.id for e in inst.graph_g.edges} == {"e+", "e0", "e-"}
    assert inst.start == StartSpec.vertices("P", "Y")


@given(instances())
def test_document_round_trip(inst):
    back = parse_instance(json.dumps(instance_to_document(inst)))
    assert back.table == inst.table
    for a, b in ((back.graph_g, inst.graph_g), (back.graph_h, inst.graph_h)):
        assert (a.vertices, a.edges) == (b.vertices, b.edges)


def test_numbers():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(Decimal("0.25")) == Fraction(1, 4)
    assert render(Fraction(-3, 4)) == "-3/4" and render(Fraction(4, 2)) == "2"
    for bad in (True, float("nan"), "1/0", "x"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational(bad)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7), st.integers(1, 7))
def test_rationals_in_interval_finds_point(x, q):
    found = rationals_in_interval(x, x, 7)
    assert found == [x]
    eps = Fraction(1, 4 * 49)
    assert rationals_in_interval(x - eps, x + eps, 7) == [x]


# walks ------------------------------------------------------------------------


def test_walk_validation():
    g = fig2_instance().graph_g
    validate_walk(g, ["e+", "e0", "e-"], "P")
    with pytest.raises(InstanceError, match="index 1"):
        validate_walk(g, ["e0", "e+"])
    with pytest.raises(InstanceError):
        Walk(g, ("e-", "e0"))
    assert Walk(g, ()).edges == ()


# components and periods -----------------------------------------------------


def test_scc_examples():
    comps = strongly_connected_components(cycle(3))
    assert len(comps) == 1 and comps[0].nontrivial
    h = fig2_instance().graph_h
    by = {frozenset(c.vertices): c.nontrivial for c in strongly_connected_components(h)}
    assert by == {frozenset("X"): True, frozenset("Z"): True, frozenset("Y"): False}
    g = chase_instance().graph_g
    assert len(strongly_connected_components(g)) == 1


def test_scc_topological_order():
    comps = strongly_connected_components(fig2_instance().graph_g)
    assert [sorted(c.vertices) for c in comps] == [["P"], ["M"]]


def test_period_examples():
    g = loop_graph()
    assert period(g, strongly_connected_components(g)[0]) == 1
    c3 = cycle(3)
    assert period(c3, strongly_connected_components(c3)[0]) == 3
    # cycles of lengths 4 and 6 sharing vertex 0
    edges = [("a%d" % i, f"a{i}", f"a{(i + 1) % 4}") for i in range(4)]
    vs = [f"a{i}" for i in range(4)] + [f"b{i}" for i in range(1, 6)]
    ring = ["a0"] + [f"b{i}" for i in range(1, 6)] + ["a0"]
    edges += [(f"b_e{i}", ring[i], ring[i + 1]) for i in range(6)]
    g46 = DirectedGraph.from_edges(vs, edges)
    assert period(g46, strongly_connected_components(g46)[0]) == 2


def test_period_of_trivial_component():
    h = fig2_instance().graph_h
    trivial = [c for c in strongly_connected_components(h) if not c.nontrivial][0]
    with pytest.raises(ValueError, match="period undefined"):
        period(h, trivial)


def test_single_loop_product():
    inst = GameInstance(loop_graph(), loop_graph("b", "h"))
    comp = product_component(inst, StartSpec.edges("g", "h"))
    assert (comp.size, comp.period, comp.diameter, comp.padding) == (1, 1, 0, 1)


def test_chase_product_component():
    comp = product_component(chase_instance(), StartSpec.edges("WW", "WW"))
    assert comp.size == 16 * 12 and comp.period == 1
    assert comp.padding == 3


def test_cycle_product_period():
    inst = GameInstance(cycle(3, "g"), cycle(3, "h"))
    comp = product_component(inst, StartSpec.edges("ge0", "he0"))
    assert comp.period == 3 and comp.padding == 1
    assert len(product_components(inst)) == 3


def test_complete_with_loops_padding():
    vs = ["a", "b", "c"]
    g = DirectedGraph.from_edges(vs, [(x + y, x, y) for x in vs for y in vs])
    comp = product_component(GameInstance(g, loop_graph("z", "h")), StartSpec.edges("aa", "h"))
    # one step only links (x,y) to (y,z); two steps link every pair of edges
    assert comp.padding == 2


def test_transient_start():
    with pytest.raises(DomainError, match="transient start"):
        product_component(fig2_instance(), StartSpec.vertices("P", "Y"))


def brute_padding(comp):
    """Smallest D with exact-length p*D walks between all same-class member pairs."""
    succ = {}
    for j, s in enumerate(comp.member_src):
        succ.setdefault(s, []).append(j)
    nxt = [succ.get(d, []) for d in comp.member_dst]
    m, p = comp.size, comp.period

    def reach(i, L):
        cur = {i}
        for _ in range(L):
            cur = {k for j in cur for k in nxt[j]}
        return cur

    ever = [set().union(*(reach(i, p * d) for d in range(1, m * m + 2))) for i in range(m)]
    for D in range(1, m * m + 2):
        if all(reach(i, p * D) == ever[i] for i in range(m)):
            return D


@given(instances(max_vertices=3, max_edges=5, irreducible=True))
def test_padding_matches_brute(inst):
    for comp in product_components(inst)[:2]:
        if comp.size <= 12:
            assert comp.padding == brute_padding(comp)


@given(instances(irreducible=True))
def test_product_period_divides_lcm(inst):
    pg = period(inst.graph_g, strongly_connected_components(inst.graph_g)[0])
    ph = period(inst.graph_h, strongly_connected_components(inst.graph_h)[0])
    for comp in product_components(inst):
        assert comp.period % math.gcd(pg, ph) == 0
        assert math.lcm(pg, ph) % comp.period == 0
