import math
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankdate import (
    RankFunction,
    SplitMix64,
    TreeError,
    brute_compare,
    brute_joint,
    brute_rank_probabilities,
    enumerate_rank_functions,
    parse_newick,
    sample_rank_function,
    sample_rank_functions,
    sample_yule_times,
)
from rankdate.oracle import _merge_orders
from treegen import caterpillar, random_binary_tree, random_tree, star

F = Fraction


# ---------------------------------------------------------------------------
# exhaustive enumeration
# ---------------------------------------------------------------------------


def test_enumeration_golden_t5(t5):
    orders = [rf.order for rf in enumerate_rank_functions(t5)]
    assert orders == [(0, 1, 4, 5), (0, 4, 1, 5), (0, 4, 5, 1)]


def test_enumeration_respects_ancestry(t5, poly5):
    for tree in (t5, poly5):
        for rf in enumerate_rank_functions(tree):
            pos = rf.as_mapping()
            assert sorted(pos.values()) == list(range(1, tree.interior_count + 1))
            for v in tree.interior_vertices():
                p = tree.parent[v]
                if p is not None:
                    assert pos[p] < pos[v]


def test_enumeration_limit():
    big = parse_newick(caterpillar(13))  # 12 interior vertices
    with pytest.raises(TreeError):
        next(enumerate_rank_functions(big))
    assert len(list(enumerate_rank_functions(big, limit=12))) == 1
    with pytest.raises(TreeError):
        next(enumerate_rank_functions(parse_newick("a;")))


def test_rank_function_accessors(t5):
    rf = next(enumerate_rank_functions(t5))
    assert rf.order == (0, 1, 4, 5)
    assert rf.rank_of(0) == 1
    assert rf.rank_of(5) == 4
    assert rf.as_mapping() == {0: 1, 1: 2, 4: 3, 5: 4}
    with pytest.raises(TreeError):
        rf.rank_of(2)


def test_brute_helpers_match_t5(t5):
    assert dict(brute_rank_probabilities(t5, 4).support()) == {2: F(2, 3), 3: F(1, 3)}
    assert brute_compare(t5, 1, 5) == F(2, 3)
    assert brute_joint(t5, 0, 5).q == {(1, 3): F(1, 3), (1, 4): F(2, 3)}
    with pytest.raises(TreeError):
        brute_joint(t5, 1, 4)


# ---------------------------------------------------------------------------
# deterministic PRNG
# ---------------------------------------------------------------------------


def test_splitmix_reference_vector():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]
    assert SplitMix64(1234567).next_u64() == 6457827717110365317


def test_splitmix_seed_masking():
    assert SplitMix64(2**64 + 5).next_u64() == SplitMix64(5).next_u64()
    assert SplitMix64(3).next_u64() != SplitMix64(4).next_u64()


def test_splitmix_below():
    rng = SplitMix64(42)
    draws = [rng.below(5) for _ in range(2000)]
    assert set(draws) == {0, 1, 2, 3, 4}
    assert draws[:5] == [3, 1, 3, 4, 0]
    with pytest.raises(ValueError):
        rng.below(0)


def test_splitmix_random_unit_interval():
    rng = SplitMix64(7)
    values = [rng.random() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert abs(sum(values) / len(values) - 0.5) < 0.05


def test_splitmix_exponential_matches_inverse_cdf():
    a, b = SplitMix64(7), SplitMix64(7)
    for _ in range(100):
        expect = -math.log(1.0 - b.random()) / 2.5
        assert a.exponential(2.5) == expect


# ---------------------------------------------------------------------------
# uniform order sampling
# ---------------------------------------------------------------------------


def test_merge_orders_is_complete_and_uniform():
    rng = SplitMix64(99)
    seqs = [(1, 2), (3, 4, 5)]
    tally = Counter(_merge_orders(rng, seqs) for _ in range(20_000))
    assert len(tally) == math.comb(5, 2)
    for hits in tally.values():
        assert abs(hits / 20_000 - 0.1) < 0.02


def test_sample_rank_function_valid(t5, poly5):
    for tree in (t5, poly5):
        for seed in range(25):
            rf = sample_rank_function(tree, seed)
            pos = rf.as_mapping()
            assert sorted(pos.values()) == list(range(1, tree.interior_count + 1))
            for v in tree.interior_vertices():
                p = tree.parent[v]
                if p is not None:
                    assert pos[p] < pos[v]


def test_sample_rank_function_deterministic(t5):
    assert sample_rank_function(t5, 42).order == sample_rank_function(t5, 42).order
    stream = [rf.order for rf in sample_rank_functions(t5, 4, seed=7)]
    again = [rf.order for rf in sample_rank_functions(t5, 4, seed=7)]
    assert stream == again
    assert len(stream) == 4


def test_sample_stream_differs_from_repeated_single_seed(t5):
    # one stream advances its own state; fresh seeds restart it
    stream = [rf.order for rf in sample_rank_functions(t5, 10, seed=3)]
    assert len(set(stream)) > 1


def test_sample_requires_interior():
    with pytest.raises(TreeError):
        sample_rank_function(parse_newick("a;"), 1)
    with pytest.raises(ValueError):
        list(sample_rank_functions(parse_newick("(a,b);"), -1, 0))


@given(st.integers(0, 10**6), st.integers(3, 10))
@settings(max_examples=25, deadline=None)
def test_sample_valid_on_random_trees(seed, n):
    tree = random_tree(random.Random(seed), n)
    rf = sample_rank_function(tree, seed)
    pos = rf.as_mapping()
    for v in tree.interior_vertices():
        p = tree.parent[v]
        if p is not None:
            assert pos[p] < pos[v]


def test_sampler_frequencies_match_exact_law(t5):
    draws = 30_000
    tally = Counter(rf.order for rf in sample_rank_functions(t5, draws, seed=42))
    assert set(tally) == {(0, 1, 4, 5), (0, 4, 1, 5), (0, 4, 5, 1)}
    for hits in tally.values():
        assert abs(hits / draws - 1 / 3) < 0.01


# ---------------------------------------------------------------------------
# Yule process times
# ---------------------------------------------------------------------------


def test_yule_times_cover_all_edges(t5):
    rank = sample_rank_function(t5, 5)
    times = sample_yule_times(t5, rank, seed=11)
    assert set(times) == set(t5.edges())
    assert all(v >= 0.0 for v in times.values())


def test_yule_times_are_ultrametric():
    rng = random.Random(13)
    for trial in range(10):
        tree = random_binary_tree(rng, rng.randint(3, 12))
        rank = sample_rank_function(tree, trial)
        times = sample_yule_times(tree, rank, seed=trial + 100)
        depths = set()
        for leaf in tree.leaves():
            total, v = 0.0, leaf
            while v != tree.root:
                total += times[(tree.parent[v], v)]
                v = tree.parent[v]
            depths.add(round(total, 9))
        assert len(depths) == 1


def test_yule_times_deterministic(t5):
    rank = sample_rank_function(t5, 0)
    assert sample_yule_times(t5, rank, 9) == sample_yule_times(t5, rank, 9)


def test_yule_times_gap_mean():
    # the comb on four leaves has a forced order, so the middle edge is a
    # single exponential gap with rate 3
    tree = parse_newick(caterpillar(4))
    rank = next(enumerate_rank_functions(tree))
    total = 0.0
    draws = 100_000
    for k in range(draws):
        total += sample_yule_times(tree, rank, seed=k)[(1, 2)]
    assert abs(total / draws - 1 / 3) < 0.005


def test_yule_times_validation(t5, poly5):
    rank = sample_rank_function(t5, 1)
    with pytest.raises(TreeError):
        sample_yule_times(poly5, sample_rank_function(poly5, 1), 0)
    with pytest.raises(TreeError):
        sample_yule_times(t5, RankFunction(order=(0, 1)), 0)
    with pytest.raises(TreeError):
        sample_yule_times(t5, RankFunction(order=(1, 0, 4, 5)), 0)
    assert sample_yule_times(t5, rank, 0)


def test_star_tree_single_rank():
    tree = parse_newick(star(6))
    assert [rf.order for rf in enumerate_rank_functions(tree)] == [(0,)]
    assert sample_rank_function(tree, 3).order == (0,)
