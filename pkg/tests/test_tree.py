import math

import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from rankdate import (
    NewickParseError,
    PhyloTree,
    TreeError,
    decimal_string,
    extract_subtree,
    parse_newick,
    prune_below,
    write_newick,
)
from treegen import caterpillar, random_tree

import random


def test_parse_t5_layout(t5):
    assert t5.vertex_count == 9
    assert t5.leaf_count == 5
    assert t5.interior_count == 4
    assert [t5.name(v) for v in range(9)] == [
        "#0", "#1", "a", "b", "#4", "#5", "c", "d", "e",
    ]
    assert t5.leaves_below == (5, 2, 1, 1, 3, 2, 1, 1, 1)
    assert t5.interior_below == (4, 1, 0, 0, 2, 1, 0, 0, 0)
    assert t5.depth == (0, 1, 2, 2, 1, 2, 3, 3, 2)
    assert t5.parent[0] is None
    assert t5.parent[5] == 4
    assert t5.root == 0


def test_parse_discards_lengths_and_reads_quotes():
    t = parse_newick("('sp one':1.5,(b:2e-3,c)x:0.5)root;")
    assert t.labels[t.vertex("sp one")] == "sp one"
    assert t.name(t.root) == "root"
    assert t.name(t.vertex("x")) == "x"
    assert t.leaf_count == 3


def test_parse_quoted_escape():
    t = parse_newick("('it''s a leaf',b);")
    assert t.vertex("it's a leaf") is not None


def test_interior_labels_and_lookup(t5):
    assert t5.vertex("#4") == 4
    assert t5.vertex("a") == 2
    with pytest.raises(TreeError):
        t5.vertex("zz")
    with pytest.raises(TreeError):
        t5.vertex("#99")


def test_single_leaf_tree():
    t = parse_newick("only;")
    assert t.vertex_count == 1
    assert t.leaf_count == 1
    assert t.interior_count == 0
    assert t.is_binary()


@pytest.mark.parametrize(
    "text",
    [
        "",
        "   ",
        ";",
        "(a,b",
        "(a,b))",
        "(a,b));",
        "a,b;",
        "((a,b),(a,c));",
        "(a);",
        "((a));",
        "(a,b);x",
        "('oops,b);",
        "('',b);",
        "(a,b;",
        "(,a);",
        "(a,,b);",
        "(a:,b);",
    ],
)
def test_parse_errors(text):
    with pytest.raises(NewickParseError) as err:
        parse_newick(text)
    assert isinstance(err.value.position, int)


def test_parse_error_is_not_tree_error_subclass():
    # the CLI maps the two to different exit codes, so they must stay siblings
    assert not issubclass(NewickParseError, TreeError)
    assert issubclass(NewickParseError, ValueError)
    assert issubclass(TreeError, ValueError)


def test_duplicate_label_position():
    with pytest.raises(NewickParseError) as err:
        parse_newick("((a,b),(a,c));")
    assert "a" in str(err.value)


def test_edges_and_kind_queries(t5):
    edges = list(t5.edges())
    assert edges == [(0, 1), (1, 2), (1, 3), (0, 4), (4, 5), (5, 6), (5, 7), (4, 8)]
    assert all(t5.parent[c] == p for p, c in edges)
    assert sorted(t5.leaves()) == [2, 3, 6, 7, 8]
    assert sorted(t5.interior_vertices()) == [0, 1, 4, 5]
    assert t5.is_interior(5) and not t5.is_interior(6)
    assert t5.is_leaf(8) and not t5.is_leaf(0)
    with pytest.raises(TreeError):
        t5.check_vertex(9)
    with pytest.raises(TreeError):
        t5.check_vertex(-1)


def test_mrca_and_ancestry(t5):
    a, b, c, e = t5.vertex("a"), t5.vertex("b"), t5.vertex("c"), t5.vertex("e")
    assert t5.mrca(a, b) == 1
    assert t5.mrca(c, e) == 4
    assert t5.mrca(a, c) == 0
    assert t5.mrca(5, 5) == 5
    assert t5.is_strict_ancestor(0, 5)
    assert not t5.is_strict_ancestor(5, 0)
    assert not t5.is_strict_ancestor(5, 5)
    assert not t5.is_strict_ancestor(1, 4)
    assert t5.path_to_root(6) == (6, 5, 4, 0)
    assert t5.child_toward(0, 6) == 4
    assert t5.child_toward(4, 6) == 5
    with pytest.raises(TreeError):
        t5.child_toward(1, 6)


def test_is_binary(t5, star3, poly5):
    assert t5.is_binary()
    assert not star3.is_binary()
    assert not poly5.is_binary()


def test_structure_roundtrip(t5):
    rebuilt = PhyloTree.from_structure(t5.structure())
    assert rebuilt.structure() == t5.structure()
    assert rebuilt.labels == t5.labels
    sub = t5.structure(at=4)
    assert sub == (None, ((None, (("c", ()), ("d", ()))), ("e", ())))


def test_write_plain_roundtrip(t5, poly5):
    for tree in (t5, poly5):
        text = write_newick(tree)
        again = parse_newick(text)
        assert again.structure() == tree.structure()


def test_write_with_lengths(cat4):
    lengths = {edge: Fraction(1, 3) for edge in cat4.edges()}
    text = write_newick(cat4, lengths)
    assert text == "(((a:0.333333,b:0.333333):0.333333,c:0.333333):0.333333,d:0.333333);"
    with pytest.raises(TreeError):
        write_newick(cat4, {(0, 1): Fraction(1)})
    partial = write_newick(cat4, {(0, 1): Fraction(1)}, allow_partial=True)
    assert partial == "(((a,b),c):1,d);"


def test_write_quotes_awkward_labels():
    t = parse_newick("('sp one','x:y');")
    text = write_newick(t)
    assert text == "('sp one','x:y');"
    assert parse_newick(text).structure() == t.structure()


def test_deep_caterpillar_parse_write():
    n = 2001  # 2000 interior vertices
    tree = parse_newick(caterpillar(n))
    assert tree.interior_count == 2000
    assert max(tree.depth) == 2000
    # compare flat arrays: preorder numbering makes them canonical, and
    # equality on 2000-deep nested tuples would blow the recursion limit
    again = parse_newick(write_newick(tree))
    assert again.children == tree.children
    assert again.labels == tree.labels


def test_extract_subtree(t5):
    sub, mapping = extract_subtree(t5, 4)
    assert sub.leaf_count == 3
    assert sub.interior_count == 2
    assert sub.name(mapping[6]) == "c"
    assert sub.structure() == t5.structure(at=4)


def test_prune_below(t5):
    pruned, mapping = prune_below(t5, 4)
    assert pruned.leaf_count == 3  # a, b, and the collapsed vertex
    assert pruned.is_leaf(mapping[4])
    assert pruned.interior_count == 2
    with pytest.raises(TreeError):
        prune_below(t5, t5.root)


def test_unary_rejected_via_from_structure():
    with pytest.raises(TreeError):
        PhyloTree.from_structure((None, (("a", ()),)))


@given(st.integers(0, 10**6), st.integers(3, 14))
@settings(max_examples=40, deadline=None)
def test_roundtrip_random_trees(seed, n):
    tree = random_tree(random.Random(seed), n)
    assert parse_newick(write_newick(tree)).structure() == tree.structure()
    # leaves_below / interior_below are consistent with each other
    for v in range(tree.vertex_count):
        kids = tree.children[v]
        if kids:
            assert tree.leaves_below[v] == sum(tree.leaves_below[c] for c in kids)
            assert tree.interior_below[v] == 1 + sum(
                tree.interior_below[c] for c in kids
            )
        else:
            assert tree.leaves_below[v] == 1
            assert tree.interior_below[v] == 0


@pytest.mark.parametrize(
    "value,digits,expect",
    [
        (Fraction(7, 18), 6, "0.388889"),
        (Fraction(1, 3), 3, "0.333"),
        (Fraction(5, 6), 6, "0.833333"),
        (Fraction(0), 6, "0"),
        (Fraction(1, 2), 6, "0.5"),
        (Fraction(13, 12), 6, "1.08333"),
        (Fraction(10**12), 6, "1000000000000"),
        (Fraction(1, 10**8), 4, "0.00000001"),
        (Fraction(2, 3), 12, "0.666666666667"),
    ],
)
def test_decimal_string(value, digits, expect):
    assert decimal_string(value, digits) == expect
    if value:
        assert math.isclose(float(expect), float(value), rel_tol=10 ** (1 - digits))
