"""Rooted planar binary trees with ordered leaves.

A tree of degree n has leaves labelled 1..n (each exactly once) and a fixed
planar order (left before right) at every internal vertex.  Canonical text
form is the fully parenthesised bracket grammar

    TREE  := LEAF | "[" TREE "," TREE "]"
    LEAF  := INT DECOR?
    DECOR := "{" WORD "}"

where WORD is a free-group word over whitespace-separated generators with
optional integer exponents ("a^-1 b").  An empty DECOR "{}" denotes the
identity word; it is printed for identity decorations so that decorated and
undecorated trees never serialise to the same string.

Internal vertices are addressed by strings over {"L", "R"} read from the
root ("" is the root).
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

from .words import Word, parse_word

#: Largest degree enumerate_trees will serve.  |Tree(8)| = 17 297 280 already
#: calls for streaming consumers; single-digit labels also keep the
#: lexicographic order on serialisations unambiguous.
ENUMERATION_CAP = 8


class TreeError(ValueError):
    """Domain error for tree construction and parsing."""


@dataclass(frozen=True, slots=True)
class Tree:
    """A leaf (label set, children None) or an internal node (label None)."""

    label: int | None
    left: "Tree | None" = None
    right: "Tree | None" = None

    def __post_init__(self):
        if self.label is None:
            if self.left is None or self.right is None:
                raise TreeError("internal node needs two children")
        else:
            if self.left is not None or self.right is not None:
                raise TreeError("leaf cannot have children")
            if self.label < 1:
                raise TreeError("leaf labels must be positive")

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def labels(self) -> frozenset[int]:
        if self.is_leaf:
            return frozenset((self.label,))
        return self.left.labels() | self.right.labels()

    @property
    def degree(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.degree + self.right.degree

    def serialize(self) -> str:
        if self.is_leaf:
            return str(self.label)
        return f"[{self.left.serialize()},{self.right.serialize()}]"

    def __str__(self) -> str:
        return self.serialize()

    def internal_addresses(self) -> Iterator[str]:
        """Addresses of internal vertices, root first, in L-to-R order."""
        if self.is_leaf:
            return
        yield ""
        for side, child in (("L", self.left), ("R", self.right)):
            for addr in child.internal_addresses():
                yield side + addr

    def subtree(self, address: str) -> "Tree":
        node = self
        for i, step in enumerate(address):
            if node.is_leaf:
                raise TreeError(f"address {address!r} leaves the tree at step {i}")
            node = node.left if step == "L" else node.right
        return node

    def to_json_obj(self):
        if self.is_leaf:
            return {"leaf": self.label}
        return {"node": [self.left.to_json_obj(), self.right.to_json_obj()]}


def leaf(k: int) -> Tree:
    return Tree(label=k)


def graft(t1: Tree, t2: Tree) -> Tree:
    """Glue two trees at a new root, t1 on the left."""
    common = t1.labels() & t2.labels()
    if common:
        raise TreeError(f"duplicate leaf labels: {sorted(common)}")
    return Tree(label=None, left=t1, right=t2)


def swap_at(t: Tree, address: str) -> Tree:
    """Exchange the two children of the internal vertex at `address`."""
    target = t.subtree(address)
    if target.is_leaf:
        raise TreeError(f"address {address!r} is a leaf, not an internal vertex")

    def rebuild(node: Tree, rest: str) -> Tree:
        if not rest:
            return Tree(label=None, left=node.right, right=node.left)
        if rest[0] == "L":
            return Tree(label=None, left=rebuild(node.left, rest[1:]), right=node.right)
        return Tree(label=None, left=node.left, right=rebuild(node.right, rest[1:]))

    return rebuild(t, address)


@dataclass(frozen=True, slots=True)
class DecoratedTree:
    """A tree whose i-th leaf carries a reduced free-group word."""

    tree: Tree
    decorations: tuple[tuple[int, Word], ...]  # sorted by leaf label

    def __post_init__(self):
        labels = sorted(self.tree.labels())
        deco_labels = [k for k, _ in self.decorations]
        if deco_labels != labels:
            raise TreeError(
                f"decorations must cover leaf labels {labels}, got {deco_labels}"
            )

    @property
    def degree(self) -> int:
        return self.tree.degree

    def decoration_map(self) -> dict[int, Word]:
        return dict(self.decorations)

    def serialize(self) -> str:
        deco = self.decoration_map()

        def go(node: Tree) -> str:
            if node.is_leaf:
                return f"{node.label}{{{deco[node.label]}}}"
            return f"[{go(node.left)},{go(node.right)}]"

        return go(self.tree)

    def __str__(self) -> str:
        return self.serialize()

    def to_json_obj(self):
        deco = self.decoration_map()

        def go(node: Tree):
            if node.is_leaf:
                return {"leaf": node.label, "dec": str(deco[node.label])}
            return {"node": [go(node.left), go(node.right)]}

        return go(self.tree)


def decorate(tree: Tree, decorations: Mapping[int, Word]) -> DecoratedTree:
    items = tuple(sorted((int(k), w) for k, w in decorations.items()))
    return DecoratedTree(tree=tree, decorations=items)


AnyTree = Union[Tree, DecoratedTree]


# ---------------------------------------------------------------------------
# enumeration


def tree_count(n: int) -> int:
    """|Tree(n)| = (2n-2)!/(n-1)!."""
    if n < 1:
        raise TreeError("degree must be >= 1")
    return math.factorial(2 * n - 2) // math.factorial(n - 1)


def _stream_over(labels: tuple[int, ...]) -> Iterator[Tree]:
    """All planar binary trees on `labels`, lazily, ordered by serialisation."""
    if len(labels) == 1:
        yield leaf(labels[0])
        return
    label_set = set(labels)

    def left_streams() -> Iterator[Iterator[tuple[str, Tree]]]:
        # proper nonempty subsets as left-label sets, one sorted stream each
        items = sorted(label_set)
        m = len(items)
        for mask in range(1, (1 << m) - 1):
            part = tuple(items[i] for i in range(m) if mask >> i & 1)
            yield ((t.serialize(), t) for t in _stream_over(part))

    for _, lt in heapq.merge(*left_streams(), key=lambda st: st[0]):
        rest = tuple(sorted(label_set - lt.labels()))
        for rt in _stream_over(rest):
            yield Tree(label=None, left=lt, right=rt)


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Stream Tree(n) in increasing order of canonical serialisation."""
    if n < 1 or n > ENUMERATION_CAP:
        raise TreeError(
            f"degree must be in 1..{ENUMERATION_CAP} (enumeration cap), got {n}"
        )
    return _stream_over(tuple(range(1, n + 1)))


@lru_cache(maxsize=8)
def tree_list(n: int) -> tuple[Tree, ...]:
    """Materialised Tree(n) in canonical order; cached for reuse as a basis."""
    if n > 7:
        raise TreeError(f"refusing to materialise Tree({n}); stream instead")
    return tuple(enumerate_trees(n))


@lru_cache(maxsize=8)
def tree_index(n: int) -> dict[Tree, int]:
    """Position of each tree of degree n in the canonical order."""
    return {t: i for i, t in enumerate(tree_list(n))}


# ---------------------------------------------------------------------------
# parsing


class ParseError(TreeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected a leaf label", start)
        return int(self.text[start : self.pos])

    def parse_tree(self) -> tuple[Tree, dict[int, Word]]:
        ch = self.peek()
        if ch == "[":
            self.expect("[")
            lt, ldeco = self.parse_tree()
            self.expect(",")
            rt, rdeco = self.parse_tree()
            self.expect("]")
            try:
                node = graft(lt, rt)
            except TreeError as exc:
                raise ParseError(str(exc), self.pos) from exc
            return node, {**ldeco, **rdeco}
        if ch.isdigit():
            k = self.parse_int()
            deco: dict[int, Word] = {}
            if self.peek() == "{":
                self.expect("{")
                start = self.pos
                depth_end = self.text.find("}", self.pos)
                if depth_end < 0:
                    raise ParseError("unterminated decoration", start)
                raw = self.text[self.pos : depth_end]
                self.pos = depth_end + 1
                try:
                    deco[k] = parse_word(raw)
                except ValueError as exc:
                    raise ParseError(f"bad decoration word: {exc}", start) from exc
            return leaf(k), deco
        raise ParseError("expected '[' or a leaf label", self.pos)


def parse_tree(text: str) -> AnyTree:
    """Parse the bracket grammar; returns DecoratedTree iff any leaf has {…}.

    Leaves without braces in a decorated tree get the identity word.
    """
    p = _Parser(text)
    tree, deco = p.parse_tree()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError("trailing input", p.pos)
    labels = tree.labels()
    if len(labels) != tree.degree:
        raise ParseError("duplicate leaf label", len(text))
    expected = set(range(1, tree.degree + 1))
    if set(labels) != expected:
        raise ParseError(
            f"leaf labels must be 1..{tree.degree}, got {sorted(labels)}", len(text)
        )
    if not deco:
        return tree
    full = {k: deco.get(k, Word.identity()) for k in labels}
    return decorate(tree, full)


def serialize(t: AnyTree) -> str:
    return t.serialize()


def to_json(t: AnyTree) -> str:
    return json.dumps(t.to_json_obj(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# integer linear combinations of trees


@dataclass(frozen=True)
class TreeVector:
    """Formal Z-linear combination of trees of one common degree.

    All terms are Tree or all are DecoratedTree; zero coefficients are never
    stored.  Instances are immutable; arithmetic returns new vectors.
    """

    terms: tuple[tuple[AnyTree, int], ...]
    degree: int
    decorated: bool

    @staticmethod
    def from_dict(d: Mapping[AnyTree, int]) -> "TreeVector":
        clean = {t: c for t, c in d.items() if c != 0}
        if not clean:
            raise TreeError("empty tree vector needs an explicit degree; use zero()")
        degrees = {t.degree for t in clean}
        if len(degrees) != 1:
            raise TreeError(f"mixed degrees in tree vector: {sorted(degrees)}")
        modes = {isinstance(t, DecoratedTree) for t in clean}
        if len(modes) != 1:
            raise TreeError("mixed decorated/undecorated terms")
        items = tuple(sorted(clean.items(), key=lambda kv: kv[0].serialize()))
        return TreeVector(terms=items, degree=degrees.pop(), decorated=modes.pop())

    @staticmethod
    def zero(degree: int, decorated: bool = False) -> "TreeVector":
        return TreeVector(terms=(), degree=degree, decorated=decorated)

    @staticmethod
    def single(t: AnyTree, coeff: int = 1) -> "TreeVector":
        return TreeVector.from_dict({t: coeff})

    def as_dict(self) -> dict[AnyTree, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TreeVector") -> "TreeVector":
        if other.degree != self.degree or other.decorated != self.decorated:
            raise TreeError("cannot add vectors of different degree or mode")
        d = self.as_dict()
        for t, c in other.terms:
            d[t] = d.get(t, 0) + c
        d = {t: c for t, c in d.items() if c != 0}
        if not d:
            return TreeVector.zero(self.degree, self.decorated)
        return TreeVector.from_dict(d)

    def __neg__(self) -> "TreeVector":
        return self.scale(-1)

    def __sub__(self, other: "TreeVector") -> "TreeVector":
        return self + (-other)

    def scale(self, c: int) -> "TreeVector":
        if c == 0:
            return TreeVector.zero(self.degree, self.decorated)
        return TreeVector(
            terms=tuple((t, c * k) for t, k in self.terms),
            degree=self.degree,
            decorated=self.decorated,
        )

    def serialize(self) -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for t, c in self.terms:
            sign = "+" if c > 0 else "-"
            chunks.append(f"{sign}{abs(c)}*{t.serialize()}")
        return " ".join(chunks)

    def __str__(self) -> str:
        return self.serialize()


def parse_tree_vector(text: str) -> TreeVector:
    """Parse "±c*TREE ±c*TREE ..." (also accepts bare TREE terms, coeff 1)."""
    tokens = text.split()
    if not tokens:
        raise TreeError("empty tree vector text")
    acc: dict[AnyTree, int] = {}
    for tok in tokens:
        sign = 1
        body = tok
        if body and body[0] in "+-":
            if body[0] == "-":
                sign = -1
            body = body[1:]
        if "*" in body:
            coeff_s, _, tree_s = body.partition("*")
            try:
                coeff = int(coeff_s)
            except ValueError as exc:
                raise TreeError(f"bad coefficient {coeff_s!r}") from exc
        else:
            coeff, tree_s = 1, body
        t = parse_tree(tree_s)
        acc[t] = acc.get(t, 0) + sign * coeff
    acc = {t: c for t, c in acc.items() if c != 0}
    if not acc:
        degree = parse_tree(tokens[0].rpartition("*")[2].lstrip("+-")).degree
        return TreeVector.zero(degree)
    return TreeVector.from_dict(acc)


def brute_force_trees(labels: Iterable[int]) -> list[Tree]:
    """Independent tree generation by right-to-left recursion; for oracles.

    Splits on the right subtree first and recurses in a different order than
    the canonical enumerator, so agreement of the two outputs as sets is a
    meaningful check.
    """
    labels = tuple(labels)
    if len(labels) == 1:
        return [leaf(labels[0])]
    out = []
    items = sorted(labels, reverse=True)
    m = len(items)
    for mask in range(1, (1 << m) - 1):
        right_part = tuple(items[i] for i in range(m) if mask >> i & 1)
        left_part = tuple(x for x in items if x not in right_part)
        for rt in brute_force_trees(right_part):
            for lt in brute_force_trees(left_part):
                out.append(Tree(label=None, left=lt, right=rt))
    return out
