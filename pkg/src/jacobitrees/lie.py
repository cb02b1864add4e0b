"""Trees inside the free Lie ring on letters X1..Xn.

Two independent routes from trees to Lyndon coordinates live here:

* expansion: leaf i -> Xi, graft -> commutator, then strip leading words
  against the unitriangular expansions of the Lyndon bracketings;
* straightening: rewrite a bracketing into the Lyndon basis using only
  antisymmetry flips and Jacobi steps (the classical Lyndon-basis product).

The second route never divides and each of its steps is an AS or IHX lattice
move, so agreement of the two certifies that the span of AS and IHX
relations exhausts the kernel of expansion over the integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .trees import Tree, TreeVector, graft, leaf

WordT = tuple[int, ...]


class LieError(ValueError):
    pass


class NcPoly:
    """Truncated noncommutative polynomial with integer coefficients.

    terms maps words (tuples over 1..n) to nonzero integers; words longer
    than the truncation bound are dropped on construction and in products.
    """

    __slots__ = ("n", "bound", "terms")

    def __init__(self, n: int, bound: int, terms: dict[WordT, int] | None = None):
        self.n = n
        self.bound = bound
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c != 0 and len(w) <= bound:
                    self.terms[w] = c

    @staticmethod
    def zero(n: int, bound: int) -> "NcPoly":
        return NcPoly(n, bound)

    @staticmethod
    def one(n: int, bound: int) -> "NcPoly":
        return NcPoly(n, bound, {(): 1})

    @staticmethod
    def letter(i: int, n: int, bound: int) -> "NcPoly":
        return NcPoly(n, bound, {(i,): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def copy_terms(self) -> dict[WordT, int]:
        return dict(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NcPoly)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NcPoly(self.n, min(self.bound, other.bound), out)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + other.scale(-1)

    def scale(self, c: int) -> "NcPoly":
        return NcPoly(self.n, self.bound, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: "NcPoly") -> "NcPoly":
        bound = min(self.bound, other.bound)
        out: dict[WordT, int] = {}
        for w1, c1 in self.terms.items():
            if len(w1) > bound:
                continue
            for w2, c2 in other.terms.items():
                if len(w1) + len(w2) > bound:
                    continue
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NcPoly(self.n, bound, out)

    def homogeneous_part(self, degree: int) -> "NcPoly":
        return NcPoly(
            self.n, self.bound, {w: c for w, c in self.terms.items() if len(w) == degree}
        )

    def max_degree_present(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        chunks = []
        for w, c in ordered:
            sign = "+" if c > 0 else "-"
            body = " ".join(f"X{i}" for i in w) if w else "1"
            chunks.append(f"{sign}{abs(c)}*{body}" if w else f"{sign}{abs(c)}")
        return " ".join(chunks)


@dataclass(frozen=True)
class GradedConfig:
    """Loop-degree datum for graded commutator signs; only parity matters."""

    generator_degree: int

    def __post_init__(self):
        if self.generator_degree < 0:
            raise LieError("generator degree must be >= 0")

    @property
    def odd(self) -> bool:
        return self.generator_degree % 2 == 1


def _expand_node(t: Tree, n: int, bound: int, odd: bool) -> NcPoly:
    if t.is_leaf:
        return NcPoly.letter(t.label, n, bound)
    a = _expand_node(t.left, n, bound, odd)
    b = _expand_node(t.right, n, bound, odd)
    ab = a * b
    ba = b * a
    if odd and (t.left.degree * t.right.degree) % 2 == 1:
        return ab + ba
    return ab - ba


@lru_cache(maxsize=200_000)
def _expand_cached(t: Tree, n: int, odd: bool) -> NcPoly:
    return _expand_node(t, n, n, odd)


def expand(v: Tree | TreeVector, n: int | None = None) -> NcPoly:
    """Commutator expansion: leaf i -> Xi, graft -> xy - yx."""
    if isinstance(v, Tree):
        nn = n if n is not None else v.degree
        return _expand_cached(v, nn, False)
    if v.decorated:
        raise LieError("expand applies to undecorated vectors")
    nn = n if n is not None else v.degree
    acc = NcPoly.zero(nn, nn)
    for t, c in v.terms:
        acc = acc + _expand_cached(t, nn, False).scale(c)
    return acc


def expand_graded(v: Tree | TreeVector, cfg: GradedConfig, n: int | None = None) -> NcPoly:
    """Koszul-signed expansion: graft -> xy - (-1)^(pm*qm) yx.

    For even generator degree this coincides with expand.
    """
    if isinstance(v, Tree):
        nn = n if n is not None else v.degree
        return _expand_cached(v, nn, cfg.odd)
    if v.decorated:
        raise LieError("expand applies to undecorated vectors")
    nn = n if n is not None else v.degree
    acc = NcPoly.zero(nn, nn)
    for t, c in v.terms:
        acc = acc + _expand_cached(t, nn, cfg.odd).scale(c)
    return acc


# ---------------------------------------------------------------------------
# Lyndon basis of the multilinear component


def is_lyndon(w: WordT) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: WordT) -> tuple[WordT, WordT]:
    """w = u·v with v the lexicographically smallest proper suffix."""
    if len(w) < 2:
        raise LieError("cannot factor a single letter")
    v = min(w[i:] for i in range(1, len(w)))
    return w[: len(w) - len(v)], v


@lru_cache(maxsize=100_000)
def standard_bracketing(w: WordT) -> Tree:
    """The standard Lyndon bracketing as a planar tree."""
    if len(w) == 1:
        return leaf(w[0])
    u, v = standard_factorization(w)
    return graft(standard_bracketing(u), standard_bracketing(v))


@lru_cache(maxsize=16)
def lyndon_basis(n: int) -> tuple[tuple[WordT, Tree], ...]:
    """Multilinear Lyndon words on 1..n with standard bracketings, lex order.

    A multilinear word is Lyndon iff it starts with the letter 1, so there
    are (n-1)! of them.
    """
    if n < 1:
        raise LieError("degree must be >= 1")
    out = []
    for perm in itertools.permutations(range(2, n + 1)):
        w = (1,) + perm
        out.append((w, standard_bracketing(w)))
    out.sort(key=lambda pair: pair[0])
    return tuple(out)


@lru_cache(maxsize=16)
def _lyndon_expansions(n: int) -> tuple[tuple[WordT, dict[WordT, int]], ...]:
    return tuple((w, _expand_cached(t, n, False).copy_terms()) for w, t in lyndon_basis(n))


def to_lyndon_coordinates(v: Tree | TreeVector, n: int | None = None) -> list[int]:
    """Exact integer coordinates of expand(v) in the Lyndon basis.

    Solved by stripping lexicographically-leading words; the expansion of the
    bracketing of a Lyndon word w is w plus lex-larger words, so the system
    is unitriangular over Z.
    """
    if isinstance(v, Tree):
        nn = n if n is not None else v.degree
    else:
        nn = n if n is not None else v.degree
    poly = expand(v, nn).copy_terms()
    basis = {w: i for i, (w, _) in enumerate(lyndon_basis(nn))}
    expansions = _lyndon_expansions(nn)
    coords = [0] * len(basis)
    while poly:
        w = min(poly)
        c = poly[w]
        if w not in basis:
            raise LieError(f"expansion not in the multilinear Lie span: word {w}")
        idx = basis[w]
        coords[idx] = c
        for ww, cc in expansions[idx][1].items():
            nv = poly.get(ww, 0) - c * cc
            if nv:
                poly[ww] = nv
            else:
                poly.pop(ww, None)
    return coords


# ---------------------------------------------------------------------------
# straightening route (AS/Jacobi rewriting into the Lyndon basis)


@lru_cache(maxsize=500_000)
def _lyndon_product(u: WordT, v: WordT) -> tuple[tuple[WordT, int], ...]:
    """[lambda(u), lambda(v)] in the Lyndon basis, for Lyndon words u, v.

    Classical recursion: antisymmetry orients u < v; if the standard
    factorization of uv is (u, v) the product is the basis element uv,
    otherwise u = u1·u2 splits and Jacobi recurses.  Every step is an AS
    flip or a Jacobi move, so coefficients stay integral.
    """
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in _lyndon_product(v, u))
    w = u + v
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((w, 1),)
    u1, u2 = standard_factorization(u)
    acc: dict[WordT, int] = {}
    # [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
    for mid, c1 in _lyndon_product(u2, v):
        for res, c2 in _lyndon_product(u1, mid):
            acc[res] = acc.get(res, 0) + c1 * c2
    for mid, c1 in _lyndon_product(u1, v):
        for res, c2 in _lyndon_product(u2, mid):
            acc[res] = acc.get(res, 0) - c1 * c2
    return tuple(sorted((w, c) for w, c in acc.items() if c != 0))


def straighten(t: Tree) -> dict[WordT, int]:
    """Rewrite a tree into the Lyndon basis by AS/IHX moves only.

    Returns {lyndon word: coefficient}.  The difference between t and the
    returned combination of standard bracketings lies in the lattice spanned
    by AS and IHX relation vectors, by construction.
    """
    if t.is_leaf:
        return {(t.label,): 1}
    left = straighten(t.left)
    right = straighten(t.right)
    acc: dict[WordT, int] = {}
    for u, cu in left.items():
        for v, cv in right.items():
            for w, c in _lyndon_product(u, v):
                acc[w] = acc.get(w, 0) + cu * cv * c
    return {w: c for w, c in acc.items() if c != 0}


def straighten_vector(v: TreeVector) -> dict[WordT, int]:
    acc: dict[WordT, int] = {}
    for t, c in v.terms:
        for w, cc in straighten(t).items():
            acc[w] = acc.get(w, 0) + c * cc
    return {w: c for w, c in acc.items() if c != 0}
