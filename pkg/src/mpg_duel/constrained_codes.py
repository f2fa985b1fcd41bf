"""Covering radii of binary constrained systems via the non-alternating game.

Alice's graph is a single vertex with loops labeled 0 and 1, so her walks are
arbitrary words ``u``. Bob walks the follower graph of the constraint, whose
edge labels spell allowed words ``w``. Scoring 1 on a label mismatch makes the
n-round total the Hamming distance, so the n-round value is
``max_u min_w d(u, w)``, the covering radius of the length-n allowed words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from mpg_duel.asymptotic_solver import BoundsConfig, ValueBounds, value_nonalt_bounds
from mpg_duel.errors import DomainError, InstanceError, ResourceLimitError
from mpg_duel.finite_solver import SolverConfig, value_nonalt_finite
from mpg_duel.graph_core import DirectedGraph, Edge, GameInstance, StartSpec, strongly_connected_components

ALICE_VERTEX = "a"
BRUTE_GUARD = 10**8


@dataclass(frozen=True)
class ForbiddenSet:
    k: int
    patterns: frozenset

    def __post_init__(self):
        if self.k < 1:
            raise InstanceError("pattern length k must be at least 1")
        for w in self.patterns:
            if len(w) != self.k or set(w) - {"0", "1"}:
                raise InstanceError(f"forbidden pattern {w!r} is not a bit string of length {self.k}")

    @classmethod
    def parse(cls, text: str, k: Optional[int] = None) -> "ForbiddenSet":
        """Parse ``"11"`` or ``"00,11"``; an empty list needs ``k`` (default 1)."""
        pats = [p.strip() for p in text.split(",") if p.strip()]
        lengths = {len(p) for p in pats}
        if len(lengths) > 1:
            raise InstanceError("forbidden patterns must share one length")
        if pats:
            k_found = lengths.pop()
            if k is not None and k != k_found:
                raise InstanceError(f"patterns have length {k_found}, expected {k}")
            k = k_found
        return cls(k if k is not None else 1, frozenset(pats))

    def allows(self, word: str) -> bool:
        k = self.k
        return not any(word[j : j + k] in self.patterns for j in range(len(word) - k + 1))

    def __str__(self):
        return ",".join(sorted(self.patterns)) or "(none)"


@dataclass(frozen=True)
class ConstrainedSystem:
    forbidden: ForbiddenSet
    follower: DirectedGraph
    alice: DirectedGraph
    instance: GameInstance
    trimmed: bool


@dataclass(frozen=True)
class CoveringRadiusResult:
    n: int
    radius: int
    witness_u: str
    mode: str
    note: Optional[str] = None


def alice_bit_graph() -> DirectedGraph:
    return DirectedGraph(
        (ALICE_VERTEX,), (Edge("a0", ALICE_VERTEX, ALICE_VERTEX, 0), Edge("a1", ALICE_VERTEX, ALICE_VERTEX, 1))
    )


def build_constrained_system(forbidden: ForbiddenSet) -> ConstrainedSystem:
    """Follower graph on (k-1)-bit words, trimmed to its bi-extendable part."""
    k = forbidden.k
    verts = ["".join(b) for b in itertools.product("01", repeat=k - 1)]
    windows = ["".join(b) for b in itertools.product("01", repeat=k) if "".join(b) not in forbidden.patterns]
    arcs = [(w, w[:-1], w[1:]) for w in windows]
    alive = set(verts)
    while True:
        has_out = {s for _, s, t in arcs if s in alive and t in alive}
        has_in = {t for _, s, t in arcs if s in alive and t in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
    if not alive:
        raise DomainError(f"empty constrained system for forbidden set {forbidden}")
    edges = tuple(Edge(w, s, t, int(w[-1])) for w, s, t in arcs if s in alive and t in alive)
    h = DirectedGraph(tuple(v for v in verts if v in alive), edges)
    g = alice_bit_graph()
    scores = {(e.id, f.id): int(e.label != f.label) for e in g.edges for f in h.edges}
    inst = GameInstance(g, h, 0, scores, start=StartSpec.free_bob(ALICE_VERTEX))
    return ConstrainedSystem(forbidden, h, g, inst, trimmed=len(alive) < len(verts))


def allowed_words(forbidden: ForbiddenSet, n: int) -> list[int]:
    """Length-n words avoiding every pattern, as integers (first bit most significant)."""
    return [x for x in range(1 << n) if forbidden.allows(format(x, f"0{n}b") if n else "")]


def brute_covering_radius(forbidden: ForbiddenSet, n: int, guard: int = BRUTE_GUARD) -> CoveringRadiusResult:
    """Exhaustive ``max_u min_w d(u, w)``; the witness is the smallest maximizing ``u``."""
    words = allowed_words(forbidden, n)
    if not words:
        raise DomainError(f"no allowed words of length {n} for forbidden set {forbidden}")
    if (1 << n) * len(words) > guard:
        raise ResourceLimitError(f"brute covering radius needs {(1 << n) * len(words)} comparisons (guard {guard})")
    w = np.array(words, dtype=np.uint64)
    best, best_u = -1, 0
    chunk = max(1, guard // max(len(words), 1) // 64)
    for lo in range(0, 1 << n, chunk):
        u = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.uint64)
        d = np.bitwise_count(u[:, None] ^ w[None, :]).min(axis=1)
        i = int(d.argmax())
        if int(d[i]) > best:
            best, best_u = int(d[i]), lo + i
    return CoveringRadiusResult(n, best, format(best_u, f"0{n}b") if n else "", "brute")


def covering_radius(forbidden: ForbiddenSet, n: int, config: SolverConfig = SolverConfig()) -> CoveringRadiusResult:
    """Covering radius of the length-n allowed words, computed as a game value.

    Bob's walks of n edges from any follower vertex spell exactly the length-n
    words of the bi-extendable system. Below ``n = k - 1`` the brute oracle is
    used instead.
    """
    if n < 0:
        raise InstanceError("word length must be nonnegative")
    if n < forbidden.k - 1:
        res = brute_covering_radius(forbidden, n)
        return CoveringRadiusResult(n, res.radius, res.witness_u, "brute", "n below k-1: brute mode")
    system = build_constrained_system(forbidden)
    res = value_nonalt_finite(system.instance, n, StartSpec.free_bob(ALICE_VERTEX), config)
    labels = {e.id: str(e.label) for e in system.alice.edges}
    note = None
    if system.trimmed:
        note = "computed on the bi-extendable (trimmed) system; short or edge-only words may differ"
    return CoveringRadiusResult(n, int(res.value), "".join(labels[e] for e in res.witness_alice.edges), "game", note)


def asymptotic_covering_radius_bounds(
    forbidden: ForbiddenSet, budget: int = 12, config: BoundsConfig = BoundsConfig()
) -> ValueBounds:
    """Certified bounds on ``liminf R(C_n) / n`` for an irreducible constrained system."""
    system = build_constrained_system(forbidden)
    comps = [c for c in strongly_connected_components(system.follower)]
    if len(comps) != 1 or not comps[0].nontrivial:
        listing = "; ".join(sorted(",".join(sorted(c.vertices)) or "(empty word)" for c in comps))
        raise DomainError(f"per-component analysis unsupported: follower graph has components {listing}")
    return value_nonalt_bounds(system.instance, StartSpec.free_bob(ALICE_VERTEX), budget, config)


def radius_table(forbidden: ForbiddenSet, ns: Iterable[int]) -> list[CoveringRadiusResult]:
    return [covering_radius(forbidden, n) for n in ns]
