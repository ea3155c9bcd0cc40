"""Rooted phylogenetic trees with Newick input and output.

Vertices are dense 0-based integers assigned in preorder (root = 0, children
visited in their stored order), so two parses of the same text always produce
the same numbering.  A tree is immutable once built and safe to share between
threads; every derived quantity (leaf counts, interior counts, depths, the
label index) is computed at construction time.

The Newick dialect accepted here:

    tree    :=  subtree ';'
    subtree :=  label                          (a leaf)
             |  '(' subtree (',' subtree)+ ')' [label]
    label   :=  run of characters outside  ( ) , : ;  and whitespace,
                or a single-quoted string with '' as the escaped quote

Any completed subtree may be followed by ':' and a number; such branch
lengths are syntax-checked and then discarded, since all lengths produced by
this package are model-derived.  Interior vertices must have at least two
children and labels must be unique across the whole tree.
"""

from __future__ import annotations

import decimal
import re
from dataclasses import dataclass
from fractions import Fraction


class TreeError(ValueError):
    """A structural or usage contract was violated."""


class NewickParseError(ValueError):
    """Malformed Newick text; ``position`` is a 0-based offset into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_LABEL_TERMINATORS = frozenset("(),:;'")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_PREORDER_NAME_RE = re.compile(r"^#(\d+)$")


@dataclass(frozen=True, eq=False)
class PhyloTree:
    """Immutable rooted tree.  Compare by identity, never by value.

    Fields are parallel tuples indexed by vertex id:

    * ``children``        child ids, in stored order
    * ``parent``          parent id, ``None`` for the root
    * ``labels``          explicit label or ``None``
    * ``leaves_below``    number of leaves in the subtree at each vertex
    * ``interior_below``  number of interior vertices in the subtree at each
                          vertex (the vertex itself included when interior)
    * ``depth``           edge count from the root
    """

    children: tuple[tuple[int, ...], ...]
    parent: tuple[int | None, ...]
    labels: tuple[str | None, ...]
    leaves_below: tuple[int, ...]
    interior_below: tuple[int, ...]
    depth: tuple[int, ...]
    _name_index: dict

    root = 0

    # -- basic size queries -------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.children)

    @property
    def leaf_count(self) -> int:
        return self.leaves_below[self.root]

    @property
    def interior_count(self) -> int:
        return self.interior_below[self.root]

    def is_leaf(self, v: int) -> bool:
        self.check_vertex(v)
        return not self.children[v]

    def is_interior(self, v: int) -> bool:
        return not self.is_leaf(v)

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < len(self.children):
            raise TreeError(f"no vertex with id {v!r}")

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if not self.children[v])

    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if self.children[v])

    def edges(self):
        """Yield (parent, child) pairs in preorder of the child."""
        for v in range(1, self.vertex_count):
            yield (self.parent[v], v)

    def is_binary(self) -> bool:
        return all(len(c) in (0, 2) for c in self.children)

    # -- names --------------------------------------------------------------

    def name(self, v: int) -> str:
        """Display name: the label when present, otherwise '#<preorder id>'."""
        self.check_vertex(v)
        return self.labels[v] if self.labels[v] is not None else f"#{v}"

    def vertex(self, name: str) -> int:
        """Resolve a label or '#<id>' name to a vertex id."""
        hit = self._name_index.get(name)
        if hit is not None:
            return hit
        m = _PREORDER_NAME_RE.match(name)
        if m:
            v = int(m.group(1))
            if v < len(self.children):
                return v
        raise TreeError(f"unknown vertex {name!r}")

    # -- topology queries ---------------------------------------------------

    def path_to_root(self, v: int) -> tuple[int, ...]:
        """Vertices from v up to and including the root."""
        self.check_vertex(v)
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return tuple(out)

    def mrca(self, a: int, b: int) -> int:
        """Most recent common ancestor of two vertices."""
        self.check_vertex(a)
        self.check_vertex(b)
        da, db = self.depth[a], self.depth[b]
        while da > db:
            a = self.parent[a]
            da -= 1
        while db > da:
            b = self.parent[b]
            db -= 1
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
        return a

    def is_strict_ancestor(self, a: int, b: int) -> bool:
        """True when a is a proper ancestor of b."""
        self.check_vertex(a)
        self.check_vertex(b)
        if self.depth[a] >= self.depth[b]:
            return False
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        return a == b

    def child_toward(self, ancestor: int, descendant: int) -> int:
        """The child of ``ancestor`` lying on the path to ``descendant``."""
        if not self.is_strict_ancestor(ancestor, descendant):
            raise TreeError(
                f"{self.name(ancestor)} is not a proper ancestor of {self.name(descendant)}"
            )
        v = descendant
        while self.parent[v] != ancestor:
            v = self.parent[v]
        return v

    def structure(self, at: int | None = None):
        """Nested (label, children) tuples for the subtree at ``at`` (default root)."""
        top = self.root if at is None else at
        self.check_vertex(top)
        built: dict[int, tuple] = {}
        for v in _postorder(self.children, top):
            built[v] = (self.labels[v], tuple(built[c] for c in self.children[v]))
        return built[top]

    @classmethod
    def from_structure(cls, structure) -> "PhyloTree":
        """Build a tree from nested (label, children) tuples."""
        children: list[list[int]] = []
        labels: list[str | None] = []
        stack = [(structure, None)]
        while stack:
            (label, kids), parent_id = stack.pop()
            vid = len(children)
            children.append([])
            labels.append(label)
            if parent_id is not None:
                children[parent_id].append(vid)
            # push in reverse so children end up numbered left to right
            for kid in reversed(kids):
                stack.append((kid, vid))
        tree, _ = assemble(children, labels)
        return tree


def _postorder(children, top):
    """Iterative postorder vertex sequence below ``top``."""
    out = []
    stack = [(top, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            out.append(v)
            continue
        stack.append((v, True))
        for c in reversed(children[v]):
            stack.append((c, False))
    return out


def assemble(
    children: list[list[int]] | list[tuple[int, ...]],
    labels: list[str | None],
    root: int = 0,
) -> tuple[PhyloTree, dict[int, int]]:
    """Construct a validated PhyloTree from adjacency lists.

    Vertices are renumbered in preorder.  Returns the tree together with the
    mapping from the caller's ids to the new ids.  Raises TreeError on
    structural violations (unary vertices, duplicate labels, unreachable
    vertices).
    """
    count = len(children)
    if count == 0 or len(labels) != count:
        raise TreeError("empty tree")

    order: list[int] = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for c in reversed(children[v]):
            stack.append(c)
    if len(order) != count:
        raise TreeError("tree structure is not connected below the root")

    new_id = {old: new for new, old in enumerate(order)}
    new_children = tuple(tuple(new_id[c] for c in children[old]) for old in order)
    new_labels = tuple(labels[old] for old in order)

    parent: list[int | None] = [None] * count
    depth = [0] * count
    for v in range(count):
        for c in new_children[v]:
            if parent[c] is not None or c == 0:
                raise TreeError("vertex has more than one parent")
            parent[c] = v
            depth[c] = depth[v] + 1

    leaves_below = [0] * count
    interior_below = [0] * count
    for v in range(count - 1, -1, -1):
        kids = new_children[v]
        if len(kids) == 1:
            raise TreeError(f"vertex with exactly one child (id {v})")
        if not kids:
            leaves_below[v] = 1
        else:
            leaves_below[v] = sum(leaves_below[c] for c in kids)
            interior_below[v] = 1 + sum(interior_below[c] for c in kids)

    name_index: dict[str, int] = {}
    for v, lab in enumerate(new_labels):
        if lab is None:
            continue
        if lab in name_index:
            raise TreeError(f"duplicate label {lab!r}")
        name_index[lab] = v

    tree = PhyloTree(
        children=new_children,
        parent=tuple(parent),
        labels=new_labels,
        leaves_below=tuple(leaves_below),
        interior_below=tuple(interior_below),
        depth=tuple(depth),
        _name_index=name_index,
    )
    return tree, new_id


# ---------------------------------------------------------------------------
# Newick reading
# ---------------------------------------------------------------------------


def parse_newick(text: str) -> PhyloTree:
    """Parse one Newick tree.  See the module docstring for the dialect."""
    n = len(text)
    children: list[list[int]] = []
    labels: list[str | None] = []
    seen: set[str] = set()
    stack: list[int] = []  # open interior vertices
    have_root = False

    def skip_ws(j: int) -> int:
        while j < n and text[j].isspace():
            j += 1
        return j

    def read_label(j: int) -> tuple[str, int]:
        if text[j] == "'":
            k = j + 1
            parts: list[str] = []
            while True:
                if k >= n:
                    raise NewickParseError("unterminated quoted label", j)
                ch = text[k]
                if ch == "'":
                    if k + 1 < n and text[k + 1] == "'":
                        parts.append("'")
                        k += 2
                        continue
                    k += 1
                    break
                parts.append(ch)
                k += 1
            label = "".join(parts)
            if not label:
                raise NewickParseError("empty quoted label", j)
            return label, k
        k = j
        while k < n and not text[k].isspace() and text[k] not in _LABEL_TERMINATORS:
            k += 1
        if k == j:
            raise NewickParseError(f"expected a label, found {text[j]!r}", j)
        return text[j:k], k

    def new_vertex(label: str | None, pos: int) -> int:
        nonlocal have_root
        if label is not None:
            if label in seen:
                raise NewickParseError(f"duplicate label {label!r}", pos)
            seen.add(label)
        vid = len(children)
        children.append([])
        labels.append(label)
        if stack:
            children[stack[-1]].append(vid)
        elif have_root:
            raise NewickParseError("multiple top-level subtrees", pos)
        else:
            have_root = True
        return vid

    i = skip_ws(0)
    if i >= n or text[i] == ";":
        raise NewickParseError("empty tree", i)

    expect_subtree = True
    length_seen = False
    while True:
        i = skip_ws(i)
        if i >= n:
            raise NewickParseError("unexpected end of input", i)
        c = text[i]
        if expect_subtree:
            if c == "(":
                stack.append(new_vertex(None, i))
                i += 1
            elif c in "),:;":
                raise NewickParseError(f"expected a subtree, found {c!r}", i)
            else:
                pos = i
                label, i = read_label(i)
                new_vertex(label, pos)
                expect_subtree = False
                length_seen = False
        elif c == ",":
            if not stack:
                raise NewickParseError("comma outside parentheses", i)
            i += 1
            expect_subtree = True
        elif c == ")":
            if not stack:
                raise NewickParseError("unbalanced ')'", i)
            vid = stack.pop()
            if len(children[vid]) == 1:
                raise NewickParseError("vertex with exactly one child", i)
            i = skip_ws(i + 1)
            if i < n and text[i] not in "(),:;":
                pos = i
                label, i = read_label(i)
                if label in seen:
                    raise NewickParseError(f"duplicate label {label!r}", pos)
                seen.add(label)
                labels[vid] = label
            length_seen = False
        elif c == ":":
            # branch length: checked for shape, then thrown away
            if length_seen:
                raise NewickParseError("repeated branch length", i)
            i = skip_ws(i + 1)
            m = _NUMBER_RE.match(text, i)
            if not m:
                raise NewickParseError("expected a branch length after ':'", i)
            i = m.end()
            length_seen = True
        elif c == ";":
            if stack:
                raise NewickParseError("unbalanced '(': missing ')'", i)
            i += 1
            break
        else:
            raise NewickParseError(f"unexpected character {c!r}", i)

    i = skip_ws(i)
    if i < n:
        raise NewickParseError("trailing characters after ';'", i)

    try:
        tree, _ = assemble(children, labels)
    except TreeError as exc:
        raise NewickParseError(str(exc), n) from exc
    return tree


# ---------------------------------------------------------------------------
# Newick writing
# ---------------------------------------------------------------------------


def decimal_string(value, sig_digits: int) -> str:
    """Render a rational (or int) as a correctly rounded plain decimal
    with the given number of significant digits."""
    if sig_digits < 1:
        raise ValueError("need at least one significant digit")
    f = Fraction(value)
    if f == 0:
        return "0"
    with decimal.localcontext() as ctx:
        ctx.prec = sig_digits
        d = decimal.Decimal(f.numerator) / decimal.Decimal(f.denominator)
    return format(d, "f")


def _quoted_if_needed(label: str) -> str:
    if label and not any(ch.isspace() or ch in _LABEL_TERMINATORS for ch in label):
        return label
    return "'" + label.replace("'", "''") + "'"


def write_newick(tree: PhyloTree, lengths=None, precision: int = 6, *, allow_partial: bool = False) -> str:
    """Serialize a tree to Newick.

    ``lengths`` may be an EdgeLengthReport or any mapping from (parent, child)
    vertex pairs to rationals; when given it must cover every edge unless
    ``allow_partial`` is set, in which case uncovered edges are written bare.
    Lengths are rendered as decimals with ``precision`` significant digits.
    """
    if lengths is not None and hasattr(lengths, "edge_lengths"):
        lengths = lengths.edge_lengths()

    rendered: list[str | None] = [None] * tree.vertex_count
    # children always have larger preorder ids than their parent
    for v in range(tree.vertex_count - 1, -1, -1):
        kids = tree.children[v]
        if kids:
            core = "(" + ",".join(rendered[c] for c in kids) + ")"
            if tree.labels[v] is not None:
                core += _quoted_if_needed(tree.labels[v])
        else:
            core = _quoted_if_needed(tree.labels[v]) if tree.labels[v] is not None else f"#{v}"
        if lengths is not None and v != tree.root:
            key = (tree.parent[v], v)
            if key in lengths:
                core += ":" + decimal_string(lengths[key], precision)
            elif not allow_partial:
                raise TreeError(
                    f"edge lengths missing edge {tree.name(tree.parent[v])} -> {tree.name(v)}"
                )
        rendered[v] = core
    return rendered[tree.root] + ";"


def extract_subtree(tree: PhyloTree, v: int) -> tuple[PhyloTree, dict[int, int]]:
    """The subtree rooted at v as a fresh tree, plus the old-to-new id map."""
    tree.check_vertex(v)
    keep = []
    stack = [v]
    while stack:
        w = stack.pop()
        keep.append(w)
        for c in reversed(tree.children[w]):
            stack.append(c)
    local = {old: i for i, old in enumerate(keep)}
    children = [[local[c] for c in tree.children[old]] for old in keep]
    labels = [tree.labels[old] for old in keep]
    sub, renum = assemble(children, labels)
    return sub, {old: renum[local[old]] for old in keep}


def prune_below(tree: PhyloTree, v: int) -> tuple[PhyloTree, dict[int, int]]:
    """A copy of the tree with everything below v removed; v becomes a leaf.

    Returns the new tree and the old-to-new id map for surviving vertices.
    """
    tree.check_vertex(v)
    if v == tree.root:
        raise TreeError("cannot prune below the root: nothing would remain")
    keep = []
    stack = [tree.root]
    while stack:
        w = stack.pop()
        keep.append(w)
        if w == v:
            continue
        for c in reversed(tree.children[w]):
            stack.append(c)
    local = {old: i for i, old in enumerate(keep)}
    children = [
        [] if old == v else [local[c] for c in tree.children[old]] for old in keep
    ]
    labels = [tree.labels[old] for old in keep]
    pruned, renum = assemble(children, labels)
    return pruned, {old: renum[local[old]] for old in keep}
