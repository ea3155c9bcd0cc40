"""Brute-force reference implementations and random sampling.

The enumeration here is deliberately naive: list every admissible order of
the interior vertices and count.  It exists so that the closed-form routines
in the rest of the package can be tested against an independent computation,
and it refuses trees large enough to make that pointless.

Sampling is exactly uniform and fully deterministic given a 64-bit seed.  The
generator is a self-contained splitmix64 so that sequences never depend on
the platform or the Python version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ranks import JointRankTable, RankDistribution, _require_interior
from .tree import PhyloTree, TreeError

DEFAULT_ENUMERATION_LIMIT = 10


@dataclass(frozen=True)
class RankFunction:
    """One admissible order: ``order[k]`` is the vertex holding rank k + 1."""

    order: tuple[int, ...]

    def rank_of(self, v: int) -> int:
        try:
            return self.order.index(v) + 1
        except ValueError:
            raise TreeError(f"vertex {v} is not ranked") from None

    def as_mapping(self) -> dict:
        return {v: k + 1 for k, v in enumerate(self.order)}


def enumerate_rank_functions(tree: PhyloTree, limit: int = DEFAULT_ENUMERATION_LIMIT):
    """Yield every admissible order, in lexicographic order of the vertex-id
    sequence.  Trees with more than ``limit`` interior vertices are refused."""
    k = tree.interior_count
    if k == 0:
        raise TreeError("tree has no interior vertex")
    if k > limit:
        raise TreeError(
            f"enumeration limit exceeded: {k} interior vertices, limit {limit}"
        )

    interior_children = {
        v: [c for c in tree.children[v] if tree.children[c]]
        for v in tree.interior_vertices()
    }
    prefix: list[int] = []

    def walk(available: list[int]):
        if not available:
            yield RankFunction(order=tuple(prefix))
            return
        for idx, v in enumerate(available):
            prefix.append(v)
            opened = sorted(available[:idx] + available[idx + 1:] + interior_children[v])
            yield from walk(opened)
            prefix.pop()

    yield from walk([tree.root])


def brute_rank_probabilities(
    tree: PhyloTree, v: int, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> RankDistribution:
    """rank_probabilities recomputed by full enumeration."""
    _require_interior(tree, v)
    counts = [0] * (tree.interior_count + 1)
    total = 0
    for rf in enumerate_rank_functions(tree, limit):
        counts[rf.rank_of(v)] += 1
        total += 1
    return RankDistribution(vertex=v, p=tuple(Fraction(c, total) for c in counts[1:]))


def brute_compare(
    tree: PhyloTree, u: int, v: int, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> Fraction:
    """P(u ranked before v) recomputed by full enumeration."""
    _require_interior(tree, u)
    _require_interior(tree, v)
    if u == v:
        raise TreeError("compare needs two distinct vertices")
    hits = 0
    total = 0
    for rf in enumerate_rank_functions(tree, limit):
        if rf.rank_of(u) < rf.rank_of(v):
            hits += 1
        total += 1
    return Fraction(hits, total)


def brute_joint(
    tree: PhyloTree, u: int, v: int, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> JointRankTable:
    """joint_rank_prob recomputed by full enumeration."""
    _require_interior(tree, v)
    tree.check_vertex(u)
    if u == v or not tree.is_strict_ancestor(u, v):
        raise TreeError(f"{tree.name(u)} must be a proper ancestor of {tree.name(v)}")
    counts: dict[tuple[int, int], int] = {}
    total = 0
    for rf in enumerate_rank_functions(tree, limit):
        key = (rf.rank_of(u), rf.rank_of(v))
        counts[key] = counts.get(key, 0) + 1
        total += 1
    q = {key: Fraction(c, total) for key, c in sorted(counts.items())}
    return JointRankTable(u=u, v=v, q=q)


# ---------------------------------------------------------------------------
# deterministic randomness
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: tiny, fast, identical output everywhere.

    Used for all sampling in this package so that seeded test vectors are
    stable across machines and Python releases.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            draw = self.next_u64()
            if draw < threshold:
                return draw % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def exponential(self, rate: float) -> float:
        return -math.log(1.0 - self.random()) / rate


def _merge_orders(rng: SplitMix64, sequences: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Uniformly random interleaving of fixed sequences, preserving each one's
    internal order.  Picking the source of the next element with probability
    remaining_i / remaining_total makes all interleavings equally likely."""
    remaining = [len(s) for s in sequences]
    positions = [0] * len(sequences)
    total = sum(remaining)
    out = []
    while total:
        draw = rng.below(total)
        idx = 0
        while draw >= remaining[idx]:
            draw -= remaining[idx]
            idx += 1
        out.append(sequences[idx][positions[idx]])
        positions[idx] += 1
        remaining[idx] -= 1
        total -= 1
    return tuple(out)


def _sample_order(tree: PhyloTree, rng: SplitMix64) -> RankFunction:
    suborder: dict[int, tuple[int, ...]] = {}
    for v in _postorder_vertices(tree):
        if not tree.children[v]:
            suborder[v] = ()
            continue
        parts = [suborder[c] for c in tree.children[v] if suborder[c]]
        merged = _merge_orders(rng, parts) if parts else ()
        suborder[v] = (v,) + merged
    return RankFunction(order=suborder[tree.root])


def _postorder_vertices(tree: PhyloTree):
    out = []
    stack = [(tree.root, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            out.append(v)
            continue
        stack.append((v, True))
        for c in reversed(tree.children[v]):
            stack.append((c, False))
    return out


def sample_rank_function(tree: PhyloTree, seed: int) -> RankFunction:
    """One uniformly random admissible order, deterministic in the seed."""
    if tree.interior_count == 0:
        raise TreeError("tree has no interior vertex")
    return _sample_order(tree, SplitMix64(seed))


def sample_rank_functions(tree: PhyloTree, count: int, seed: int):
    """Yield ``count`` independent uniform orders from one seeded stream."""
    if tree.interior_count == 0:
        raise TreeError("tree has no interior vertex")
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = SplitMix64(seed)
    for _ in range(count):
        yield _sample_order(tree, rng)


def sample_yule_times(tree: PhyloTree, rank: RankFunction, seed: int) -> dict:
    """Random edge durations for a binary tree under a rate-1 Yule process,
    conditioned on the given order of the splits.

    Between the k-th and (k+1)-th split there are k + 1 lineages, so that gap
    is exponential with rate k + 1.  The clock stops at the last split, which
    is also where pendant edges are truncated.  Returns a map from
    (parent, child) vertex pairs to float durations covering every edge.
    """
    if not tree.is_binary():
        raise TreeError("Yule process times require a binary tree")
    _check_rank_function(tree, rank)
    rng = SplitMix64(seed)
    n = tree.leaf_count
    # elapsed[k] = time from the first split to split k + 1
    elapsed = [0.0] * (n - 1)
    for k in range(1, n - 1):
        elapsed[k] = elapsed[k - 1] + rng.exponential(float(k + 1))
    ranks = rank.as_mapping()
    out = {}
    for parent, child in tree.edges():
        start = elapsed[ranks[parent] - 1]
        end = elapsed[ranks[child] - 1] if tree.children[child] else elapsed[n - 2]
        out[(parent, child)] = end - start
    return out


def _check_rank_function(tree: PhyloTree, rank: RankFunction) -> None:
    if sorted(rank.order) != sorted(tree.interior_vertices()):
        raise TreeError("rank function does not cover the interior vertices")
    position = rank.as_mapping()
    for v in tree.interior_vertices():
        p = tree.parent[v]
        if p is not None and position[p] >= position[v]:
            raise TreeError("rank function puts a vertex before its ancestor")
