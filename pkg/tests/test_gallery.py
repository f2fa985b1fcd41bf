from fractions import Fraction

import pytest

from mpg_duel.gallery import (
    BETA,
    CLASSES,
    NAMES,
    branch_averages,
    build_example,
    fig2_switch_value,
    integer_formula_value,
    integer_instance,
    irrational_instance,
    nonperiodic_walk,
    periodic_branch_average,
    periodic_limit_value,
    periodic_walks,
    walk_statistics,
)
from mpg_duel.asymptotic_solver import alice_periodic_value
from mpg_duel.graph_core import FLOAT, StartSpec


def test_shapes():
    fig2 = build_example("fig2")
    g, h = fig2.instance.graph_g, fig2.instance.graph_h
    assert (len(g.vertices), len(g.edges), len(h.vertices), len(h.edges)) == (2, 3, 3, 4)
    assert fig2.reducible
    chase = build_example("chase")
    assert len(chase.instance.graph_g.edges) == 16 and len(chase.instance.graph_h.edges) == 12
    assert {x for row in chase.instance.table for x in row} == {-1, 1}
    assert not chase.reducible
    assert build_example("irrational").instance.numeric_mode == FLOAT


def test_integer_score_table():
    inst = integer_instance()
    for e in inst.graph_g.edges:
        for f in inst.graph_h.edges:
            want = 1 if (e.id, f.id) in {("e+", "f+"), ("e-", "f-")} else -1
            assert inst.score(e.id, f.id) == want


def test_irrational_scores():
    inst = irrational_instance()
    assert inst.score("e-", "f-") == BETA and inst.score("e+", "f-") == -1.0
    assert inst.score("e+", "fa") == 0.0


def test_unknown_example():
    with pytest.raises(KeyError):
        build_example("nope")


@pytest.mark.parametrize("name", NAMES)
def test_checklists_pass(name):
    results = build_example(name).run_checklist()
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]


def test_integer_walk_prefix():
    assert nonperiodic_walk("integer", 4).edges == ("e-", "ea", "e+", "eb")
    assert nonperiodic_walk("integer", 10).edges[4:10] == ("e-", "e-", "ea", "e+", "e+", "eb")


def test_statistics_trivial():
    st = walk_statistics(["e+"] * 7, CLASSES)
    assert st.p_plus == 1
    st = walk_statistics(["e+", "e-"] * 5, CLASSES)
    assert st.p_plus == st.p_minus == Fraction(1, 2)
    with pytest.raises(ValueError):
        walk_statistics(["zz"], CLASSES)


def test_integer_walk_statistics_by_count():
    st = walk_statistics(nonperiodic_walk("integer", 22), CLASSES)
    # blocks n = 1, 2, 3 use 4 + 6 + 8 = 18 edges; then e-, e-, e-, e-
    assert (st.p_plus, st.p_minus, st.p_zero) == (Fraction(6, 22), Fraction(10, 22), Fraction(6, 22))
    assert st.p_plus + st.p_minus + st.p_zero == 1


def test_integer_walk_statistics_long():
    # transition edges are about sqrt(2N)/N of the walk, so at N = 10^4 the
    # frequencies still miss 1/2, 1/2, 0 by more than 10^-2; counted exactly here
    st = walk_statistics(nonperiodic_walk("integer", 10**4), CLASSES)
    assert (st.p_plus, st.p_minus, st.p_zero) == (Fraction(4853, 10000), Fraction(99, 200), Fraction(197, 10000))
    st = walk_statistics(nonperiodic_walk("integer", 10**5), CLASSES)
    assert abs(st.p_plus - Fraction(1, 2)) <= Fraction(1, 100)
    assert abs(st.p_minus - Fraction(1, 2)) <= Fraction(1, 100)
    assert st.p_zero <= Fraction(1, 100)


def test_irrational_walk_balance():
    st = walk_statistics(nonperiodic_walk("irrational", 10**5), CLASSES)
    assert abs(float(st.p_plus) - BETA * float(st.p_minus)) <= 1e-3


def test_fig2_switch_family():
    assert all(fig2_switch_value(T) == -1 for T in list(range(1, 51)) + [None])


def test_fig2_switch_matches_general_evaluator():
    inst = build_example("fig2").instance
    start = StartSpec.vertices("P", "Y")
    for T in (1, 2, 5):
        pre = ("e+",) * (T - 1) + ("e0",)
        assert alice_periodic_value(inst, pre, ["e-"], start) == fig2_switch_value(T)


def test_periodic_count_matches_replay():
    inst = integer_instance()
    walks = periodic_walks(inst.graph_g, "M")
    for w in walks[:: max(1, len(walks) // 25)]:
        steps = 997
        direct = branch_averages(inst, w.prefix_of(steps))
        assert periodic_branch_average(inst, w, steps) == direct


def test_integer_formula_matches_exact_evaluator():
    inst = integer_instance()
    start = StartSpec.vertices("M", "Y")
    for w in periodic_walks(inst.graph_g, "M", max_period=4, max_preperiod=2):
        assert periodic_limit_value(inst, w) == integer_formula_value(w)
        assert alice_periodic_value(inst, w.prefix, w.cycle, start) == integer_formula_value(w)


def test_periodic_family_size():
    inst = irrational_instance()
    # one vertex, two loops: (2^5 - 1) prefixes times (2^7 - 2) cycles
    assert len(periodic_walks(inst.graph_g, "O")) == 31 * 126
