"""Decorated quotients: trees with free-group decorations per leaf.

The decorated group is the tensor product of the undecorated quotient with
the group ring on decoration tuples, so normal forms split per tuple:
group the terms by (reduced) decoration tuple and take Lyndon coordinates
of each undecorated piece.  decorated_rank computes the quotient honestly
as a cokernel over (tree, tuple) columns, which is what the tensor law
tests exercise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intlinalg import SnfResult, snf_from_rows
from .lie import to_lyndon_coordinates
from .relations import as_relations, decorate_relations, ihx_relations
from .trees import DecoratedTree, Tree, TreeVector, tree_list
from .words import Word, parse_word


class DecorationError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated free group, named generators."""

    generators: tuple[str, ...]

    def __post_init__(self):
        if not self.generators:
            raise DecorationError("group needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise DecorationError("generator names must be distinct")
        for g in self.generators:
            if not g or not g[0].isalpha() and g[0] != "_":
                raise DecorationError(f"bad generator name {g!r}")

    def word(self, text: str) -> Word:
        w = parse_word(text)
        unknown = w.generators() - set(self.generators)
        if unknown:
            raise DecorationError(f"unknown generators {sorted(unknown)}")
        return w


@dataclass(frozen=True)
class DecoratedVector:
    """A decorated TreeVector over a declared free group."""

    vector: TreeVector
    group: GroupSpec

    def __post_init__(self):
        if not self.vector.decorated:
            raise DecorationError("vector must be in decorated mode")
        allowed = set(self.group.generators)
        for t, _ in self.vector.terms:
            for _, w in t.decorations:
                unknown = w.generators() - allowed
                if unknown:
                    raise DecorationError(
                        f"decoration uses generators {sorted(unknown)} "
                        f"outside the group"
                    )


def _tuple_of(t: DecoratedTree) -> tuple[Word, ...]:
    deco = t.decoration_map()
    return tuple(deco[k] for k in sorted(deco))


def decorated_normal_form(
    v: DecoratedVector,
) -> dict[tuple[Word, ...], list[int]]:
    """Lyndon coordinates of each decoration-tuple block; v = 0 iff all zero."""
    n = v.vector.degree
    blocks: dict[tuple[Word, ...], dict[Tree, int]] = {}
    for t, c in v.vector.terms:
        key = _tuple_of(t)
        blocks.setdefault(key, {})
        blocks[key][t.tree] = blocks[key].get(t.tree, 0) + c
    return {
        key: to_lyndon_coordinates(TreeVector.from_dict(terms), n)
        for key, terms in blocks.items()
    }


def is_zero_decorated(v: DecoratedVector) -> bool:
    return all(not any(c) for c in decorated_normal_form(v).values())


def decorated_rank(
    n: int, tuples: Sequence[Sequence[Word]], group: GroupSpec | None = None
) -> SnfResult:
    """Cokernel of decorated AS+IHX on trees decorated from the given tuples.

    Rank must come out (n-1)! per distinct reduced tuple, torsion-free.
    """
    norm_tuples: list[tuple[Word, ...]] = []
    seen = set()
    for tup in tuples:
        tup = tuple(tup)
        if len(tup) != n:
            raise DecorationError(f"tuple arity {len(tup)} != degree {n}")
        if tup in seen:
            continue  # compared after reduction: Word is reduced already
        seen.add(tup)
        norm_tuples.append(tup)
    basis_trees = tree_list(n)
    index: dict[tuple[int, tuple[Word, ...]], int] = {}
    for ti, tup in enumerate(norm_tuples):
        for bi in range(len(basis_trees)):
            index[(bi, tup)] = ti * len(basis_trees) + bi
    tree_pos = {t: i for i, t in enumerate(basis_trees)}

    def rows():
        for rs in (as_relations(n), ihx_relations(n)):
            decorated = decorate_relations(rs, norm_tuples)
            for vec in decorated.vectors():
                row: dict[int, int] = {}
                for t, c in vec.terms:
                    key = (tree_pos[t.tree], _tuple_of(t))
                    j = index[key]
                    row[j] = row.get(j, 0) + c
                yield {j: c for j, c in row.items() if c}

    return snf_from_rows(rows(), cols=len(basis_trees) * len(norm_tuples))
