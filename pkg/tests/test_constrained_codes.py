import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mpg_duel.constrained_codes import (
    ForbiddenSet,
    allowed_words,
    asymptotic_covering_radius_bounds,
    brute_covering_radius,
    build_constrained_system,
    covering_radius,
)
from mpg_duel.errors import DomainError, InstanceError
from mpg_duel.finite_solver import enumerate_walks

# frozen from brute_covering_radius (exhaustive max-min over all words)
RADIUS_11 = [0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6]


def test_parse():
    assert ForbiddenSet.parse("00,11") == ForbiddenSet(2, frozenset({"00", "11"}))
    assert ForbiddenSet.parse("").k == 1
    assert ForbiddenSet.parse("", k=3).patterns == frozenset()
    with pytest.raises(InstanceError):
        ForbiddenSet.parse("0,11")
    with pytest.raises(InstanceError):
        ForbiddenSet.parse("12")


def test_follower_graphs():
    full = build_constrained_system(ForbiddenSet.parse("", k=2)).follower
    assert len(full.vertices) == 2 and len(full.edges) == 4
    h = build_constrained_system(ForbiddenSet.parse("11")).follower
    assert sorted(h.vertices) == ["0", "1"]
    assert sorted(e.id for e in h.edges) == ["00", "01", "10"]
    alt = build_constrained_system(ForbiddenSet.parse("00,11")).follower
    assert sorted(e.id for e in alt.edges) == ["01", "10"]


def test_score_table_is_mismatch_indicator():
    system = build_constrained_system(ForbiddenSet.parse("11"))
    inst = system.instance
    for e in inst.graph_g.edges:
        for f in inst.graph_h.edges:
            assert inst.score(e.id, f.id) == int(e.label != f.label)


def test_empty_system():
    with pytest.raises(DomainError, match="empty constrained system"):
        build_constrained_system(ForbiddenSet.parse("0,1"))


def test_trimming_keeps_bi_extendable_part():
    # after a 0 nothing may follow, so vertex 0 is trimmed away
    system = build_constrained_system(ForbiddenSet.parse("00,01"))
    assert system.trimmed and system.follower.vertices == ("1",)


@pytest.mark.parametrize("text", ["11", "00,11", "10", "011", "000,111"])
def test_walks_spell_allowed_words(text):
    F = ForbiddenSet.parse(text)
    system = build_constrained_system(F)
    h = system.follower
    for n in range(F.k - 1, 11):
        spelled = set()
        starts = range(len(h.vertices))
        for walk in enumerate_walks(h, starts, n - (F.k - 1)):
            start = h.vertices[h.src_idx[walk[0]]] if walk else None
            if start is None:
                spelled.update(v for v in h.vertices)
                continue
            spelled.add(start + "".join(str(h.edges[e].label) for e in walk))
        words = {format(x, f"0{n}b") if n else "" for x in allowed_words(F, n)}
        assert spelled == words


def test_trivial_radii():
    for n in range(6):
        assert covering_radius(ForbiddenSet.parse("", k=2), n).radius == 0
        res = covering_radius(ForbiddenSet.parse("1"), n)
        assert res.radius == n and res.witness_u == "1" * n
    assert brute_covering_radius(ForbiddenSet.parse(""), 5).radius == 0
    assert brute_covering_radius(ForbiddenSet.parse("1"), 5).radius == 5


def test_radius_table_11():
    F = ForbiddenSet.parse("11")
    assert [brute_covering_radius(F, n).radius for n in range(13)] == RADIUS_11
    assert [covering_radius(F, n).radius for n in range(13)] == RADIUS_11


def test_short_words_use_brute():
    res = covering_radius(ForbiddenSet.parse("011"), 1)
    assert res.mode == "brute"


def test_brute_guard():
    from mpg_duel.errors import ResourceLimitError

    with pytest.raises(ResourceLimitError):
        brute_covering_radius(ForbiddenSet.parse("", k=1), 12, guard=1000)


patterns = st.integers(1, 3).flatmap(
    lambda k: st.sets(st.sampled_from(["".join(b) for b in itertools.product("01", repeat=k)]), max_size=2**k - 1)
    .map(lambda s: (k, frozenset(s)))
)


def bi_extendable(F):
    """True when trimming removed nothing, so game mode covers the full system."""
    try:
        return not build_constrained_system(F).trimmed
    except DomainError:
        return False


@settings(max_examples=30)
@given(patterns, st.integers(0, 9))
def test_game_matches_brute_when_untrimmed(kp, n):
    F = ForbiddenSet(*kp)
    if not bi_extendable(F) or not allowed_words(F, n):
        return
    game, brute = covering_radius(F, n), brute_covering_radius(F, n)
    assert (game.radius, game.witness_u) == (brute.radius, brute.witness_u)
    assert 0 <= game.radius <= n


@settings(max_examples=30)
@given(patterns, st.integers(1, 9), st.data())
def test_radius_monotone_in_patterns(kp, n, data):
    k, pats = kp
    extra = data.draw(st.sampled_from(["".join(b) for b in itertools.product("01", repeat=k)]))
    small, big = ForbiddenSet(k, pats), ForbiddenSet(k, pats | {extra})
    if not allowed_words(big, n):
        return
    assert brute_covering_radius(big, n).radius >= brute_covering_radius(small, n).radius


def test_asymptotic_bounds():
    assert asymptotic_covering_radius_bounds(ForbiddenSet.parse("", k=1), 12).value == 0
    ones = asymptotic_covering_radius_bounds(ForbiddenSet.parse("1"), 12)
    assert (ones.lower, ones.upper) == (1, 1)


def test_asymptotic_11_brackets_table():
    b = asymptotic_covering_radius_bounds(ForbiddenSet.parse("11"), 14)
    assert b.upper - b.lower <= 0.25
    # finite ratios sit within 1/n of the limit (odd n give (n-1)/2n)
    for n in range(8, 13):
        r = Fraction(RADIUS_11[n], n)
        assert b.lower - Fraction(1, n) <= r <= b.upper + Fraction(1, n)


def test_asymptotic_reducible_rejected():
    # 0*1*: components {0} and {1}
    with pytest.raises(DomainError, match="per-component analysis unsupported"):
        asymptotic_covering_radius_bounds(ForbiddenSet.parse("10"), 12)
