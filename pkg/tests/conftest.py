import pytest

from rankdate import parse_newick


@pytest.fixture
def t5():
    """Five leaves: root #0, cherry (a,b) = #1, ((c,d),e) = #4, (c,d) = #5."""
    return parse_newick("((a,b),((c,d),e));")


@pytest.fixture
def cat4():
    """Comb on four leaves; its interior order is forced."""
    return parse_newick("(((a,b),c),d);")


@pytest.fixture
def bal4():
    return parse_newick("((a,b),(c,d));")


@pytest.fixture
def cherry():
    return parse_newick("(a,b);")


@pytest.fixture
def star3():
    return parse_newick("(a,b,c);")


@pytest.fixture
def poly5():
    """Binary root over a cherry and a three-leaf multifurcation."""
    return parse_newick("((a,b),(c,d,e));")
