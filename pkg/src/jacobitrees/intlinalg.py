"""Exact sparse linear algebra over Z.

The workhorse is IntLattice, an incremental row-Hermite-form accumulator
(xgcd pivoting, arbitrary precision).  Smith normal form is computed by
first accumulating the rows into a fully reduced Hermite basis: rows with
unit pivots then split off structurally (their pivot columns carry no other
entries), and only the small non-unit residue goes through generic
minimum-pivot elimination.  Everything is deterministic.
"""

from __future__ import annotations

import json
import hashlib
import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .trees import Tree, TreeVector

#: Columns beyond which exact elimination is refused and callers should use
#: modular rank instead.
EXACT_COLUMN_THRESHOLD = 200_000

#: Default primes for modular rank (31-bit).
DEFAULT_PRIMES = (2147483629, 2147483587)


class LinalgError(ValueError):
    pass


Row = dict[int, int]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return x, y, g


@dataclass
class SparseIntMatrix:
    """Coordinate-listed integer matrix; zero entries are never stored."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise LinalgError(f"entry ({i},{j}) out of range")
            if v == 0:
                del self.entries[(i, j)]

    @staticmethod
    def from_rows(rows: Sequence[Row], cols: int) -> "SparseIntMatrix":
        entries = {
            (i, j): v for i, row in enumerate(rows) for j, v in row.items() if v
        }
        return SparseIntMatrix(rows=len(rows), cols=cols, entries=entries)

    def row_dicts(self) -> list[Row]:
        out: list[Row] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def dump(self) -> str:
        lines = [f"{self.rows} {self.cols} {len(self.entries)}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"{i} {j} {self.entries[(i, j)]}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def load(text: str) -> "SparseIntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        r, c, nnz = map(int, lines[0].split())
        entries = {}
        for ln in lines[1 : nnz + 1]:
            i, j, v = ln.split()
            entries[(int(i), int(j))] = int(v)
        return SparseIntMatrix(rows=r, cols=c, entries=entries)


@dataclass
class SnfResult:
    """Invariant factors and cokernel structure of an integer matrix."""

    invariant_factors: list[int]
    rank: int
    cols: int
    probabilistic: bool = False

    def __post_init__(self):
        if self.rank != len(self.invariant_factors):
            raise LinalgError("rank must equal the number of invariant factors")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise LinalgError("invariant factors must form a divisibility chain")

    @property
    def free_rank(self) -> int:
        return self.cols - self.rank

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]

    def cokernel_text(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}" if self.free_rank > 1 else "Z")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json_obj(self) -> dict:
        return {
            "invariant_factors": self.invariant_factors,
            "rank": self.rank,
            "cols": self.cols,
            "free_rank": self.free_rank,
            "torsion": self.torsion,
            "probabilistic": self.probabilistic,
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "SnfResult":
        return SnfResult(
            invariant_factors=list(obj["invariant_factors"]),
            rank=int(obj["rank"]),
            cols=int(obj["cols"]),
            probabilistic=bool(obj.get("probabilistic", False)),
        )


class IntLattice:
    """Row-style Hermite accumulator for a sublattice of Z^n."""

    def __init__(self, ambient: int):
        if ambient > EXACT_COLUMN_THRESHOLD:
            raise LinalgError(
                f"{ambient} columns exceeds the exact threshold "
                f"{EXACT_COLUMN_THRESHOLD}; use modular rank"
            )
        self.n = ambient
        self.pivot_rows: dict[int, Row] = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def add(self, vec: Row) -> None:
        vec = {j: v for j, v in vec.items() if v}
        for j, v in vec.items():
            if not 0 <= j < self.n:
                raise LinalgError(f"coordinate {j} out of range 0..{self.n - 1}")
        while vec:
            j = min(vec)
            if j not in self.pivot_rows:
                lead = vec[j]
                if lead < 0:
                    vec = {c: -v for c, v in vec.items()}
                self.pivot_rows[j] = vec
                return
            row = self.pivot_rows[j]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = _row_sub(vec, row, q)
            else:
                x, y, g = _xgcd(a, b)
                new_row = _row_comb(row, x, vec, y)
                new_vec = _row_comb(row, -(b // g), vec, a // g)
                self.pivot_rows[j] = new_row
                vec = new_vec

    def add_many(self, vecs: Iterable[Row]) -> None:
        for v in vecs:
            self.add(v)

    def normalize(self) -> None:
        """Fully reduce: entries above each pivot taken into [0, pivot)."""
        for j in sorted(self.pivot_rows, reverse=True):
            row = self.pivot_rows[j]
            a = row[j]
            for k, other in self.pivot_rows.items():
                if k < j and j in other:
                    q = other[j] // a
                    if q:
                        self.pivot_rows[k] = _row_sub(other, row, q)

    def reduce(self, vec: Row) -> Row:
        """Canonical representative of vec modulo the lattice."""
        vec = {j: v for j, v in vec.items() if v}
        for j in sorted(self.pivot_rows):
            if j in vec:
                row = self.pivot_rows[j]
                q = vec[j] // row[j]
                if q:
                    vec = _row_sub(vec, row, q)
        return vec

    def contains(self, vec: Row) -> bool:
        return not self.reduce(vec)

    def basis_rows(self) -> list[Row]:
        return [dict(self.pivot_rows[j]) for j in sorted(self.pivot_rows)]


def _row_sub(vec: Row, row: Row, q: int) -> Row:
    out = dict(vec)
    for c, v in row.items():
        nv = out.get(c, 0) - q * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def _row_comb(r1: Row, c1: int, r2: Row, c2: int) -> Row:
    out: Row = {}
    if c1:
        for c, v in r1.items():
            out[c] = c1 * v
    for c, v in r2.items():
        nv = out.get(c, 0) + c2 * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def _generic_snf(rows: list[Row]) -> list[int]:
    """Minimum-pivot integer diagonalisation; returns unsorted diagonal."""
    mat: dict[int, Row] = {i: dict(r) for i, r in enumerate(rows) if r}
    col_index: dict[int, set[int]] = {}
    for i, r in mat.items():
        for j in r:
            col_index.setdefault(j, set()).add(i)

    def set_entry(i: int, j: int, v: int):
        row = mat[i]
        if v:
            if j not in row:
                col_index.setdefault(j, set()).add(i)
            row[j] = v
        else:
            if j in row:
                del row[j]
                col_index[j].discard(i)

    diagonal: list[int] = []
    while mat:
        pivot = min(
            ((abs(v), i, j) for i, r in mat.items() for j, v in r.items()),
            default=None,
        )
        if pivot is None:
            break
        _, pi, pj = pivot
        a = mat[pi][pj]
        # clear the pivot column with row operations
        dirty = False
        for i in list(col_index.get(pj, ())):
            if i == pi or i not in mat:
                continue
            q = mat[i][pj] // a
            if q:
                for j, v in list(mat[pi].items()):
                    set_entry(i, j, mat[i].get(j, 0) - q * v)
            if mat[i].get(pj):
                dirty = True  # remainder left; pivot will shrink next pass
        if dirty:
            continue
        # clear the pivot row with column operations
        dirty = False
        for j in list(mat[pi].keys()):
            if j == pj:
                continue
            q = mat[pi][j] // a
            if q:
                for i in list(col_index.get(pj, ())):
                    if i in mat:
                        set_entry(i, j, mat[i].get(j, 0) - q * mat[i][pj])
            if mat[pi].get(j):
                dirty = True
        if dirty:
            continue
        diagonal.append(abs(a))
        for j in list(mat[pi]):
            col_index[j].discard(pi)
        del mat[pi]
    return diagonal


def _divisibility_chain(diagonal: list[int]) -> list[int]:
    import math

    ds = [d for d in diagonal if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if ds[j] % ds[i] != 0:
                    g = math.gcd(ds[i], ds[j])
                    ds[i], ds[j] = g, ds[i] * ds[j] // g
                    changed = True
    return sorted(ds)


def snf_from_rows(rows: Iterable[Row], cols: int) -> SnfResult:
    """Smith normal form data of the lattice spanned by the given rows."""
    lat = IntLattice(cols)
    lat.add_many(rows)
    lat.normalize()
    basis = lat.basis_rows()
    # unit pivots split off: in the reduced Hermite form their pivot columns
    # carry no other entries, so they contribute invariant factor 1
    units = 0
    residue: list[Row] = []
    unit_cols = set()
    for row in basis:
        j = min(row)
        if abs(row[j]) == 1:
            units += 1
            unit_cols.add(j)
        else:
            residue.append(row)
    residue = [
        {c: v for c, v in row.items() if c not in unit_cols} for row in residue
    ]
    diagonal = [1] * units + _generic_snf(residue)
    factors = _divisibility_chain(diagonal)
    return SnfResult(invariant_factors=factors, rank=len(factors), cols=cols)


def smith_normal_form(m: SparseIntMatrix) -> SnfResult:
    return snf_from_rows(m.row_dicts(), m.cols)


# ---------------------------------------------------------------------------
# tree-basis wrappers


def vector_to_row(v: TreeVector, index: dict) -> Row:
    row: Row = {}
    for t, c in v.terms:
        if t not in index:
            raise LinalgError(f"vector term {t} not in the given basis")
        row[index[t]] = row.get(index[t], 0) + c
    return {j: c for j, c in row.items() if c}


def cokernel(relations: Iterable[TreeVector], basis: Sequence[Tree]) -> SnfResult:
    """Structure of Z[basis] / <relations>."""
    index = {t: i for i, t in enumerate(basis)}
    return snf_from_rows(
        (vector_to_row(v, index) for v in relations), cols=len(basis)
    )


def rank_modp_rows(
    rows: Iterable[Row], cols: int, primes: Sequence[int] = DEFAULT_PRIMES
) -> dict[int, int]:
    """Rank of the row span modulo each prime, by streaming echelon."""
    primes = tuple(primes)
    if len(set(primes)) != len(primes):
        raise LinalgError("primes must be distinct")
    for p in primes:
        if p <= 2:
            raise LinalgError("primes must exceed 2")
    echelons: dict[int, dict[int, Row]] = {p: {} for p in primes}
    for row in rows:
        for p in primes:
            vec = {j: v % p for j, v in row.items() if v % p}
            ech = echelons[p]
            while vec:
                j = min(vec)
                if j not in ech:
                    inv = pow(vec[j], -1, p)
                    ech[j] = {c: (v * inv) % p for c, v in vec.items()}
                    break
                piv = ech[j]
                f = vec[j]
                for c, v in piv.items():
                    nv = (vec.get(c, 0) - f * v) % p
                    if nv:
                        vec[c] = nv
                    else:
                        vec.pop(c, None)
    return {p: len(ech) for p, ech in echelons.items()}


def rank_modp(
    relations: Iterable[TreeVector],
    basis: Sequence[Tree],
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> dict[int, int]:
    index = {t: i for i, t in enumerate(basis)}
    return rank_modp_rows(
        (vector_to_row(v, index) for v in relations), len(basis), primes
    )


#: ~2^20 primes: c*R entries stay below 2^40, so a full elimination pass
#: of < 2^12 pivot subtractions fits in int64 without intermediate mods.
DENSE_PRIMES = (1048573, 1048583)


def rank_modp_rows_dense(
    rows: Iterable[Row], cols: int, primes: Sequence[int] = DENSE_PRIMES
) -> dict[int, int]:
    """Vectorised variant of rank_modp_rows for wide, filling problems.

    Same contract; needs numpy.  Pivot rows are kept dense and normalised,
    incoming rows are reduced with lazily deferred mods (hence the smaller
    default primes).
    """
    import bisect

    import numpy as np

    for p in primes:
        if p <= 2 or p * p * cols >= 2**62:
            raise LinalgError(f"prime {p} unsafe for lazy int64 reduction")
    # pivots iterated in column order; each basis row starts with its pivot,
    # so a single forward pass fully reduces an incoming vector
    states = {
        p: {"mat": np.zeros((cols, cols), dtype=np.int64), "piv": [], "count": 0}
        for p in primes
    }
    for row in rows:
        for p, st in states.items():
            vec = np.zeros(cols, dtype=np.int64)
            for j, v in row.items():
                vec[j] = v % p
            mat = st["mat"]
            for pc, idx in st["piv"]:
                c = int(vec[pc]) % p
                if c:
                    vec -= c * mat[idx]
            vec %= p
            nz = np.flatnonzero(vec)
            if nz.size == 0:
                continue
            j = int(nz[0])
            count = st["count"]
            if count >= cols:
                raise LinalgError("rank exceeded column count")
            mat[count] = (vec * pow(int(vec[j]), -1, p)) % p
            bisect.insort(st["piv"], (j, count))
            st["count"] = count + 1
    return {p: st["count"] for p, st in states.items()}


def normal_form(
    v: TreeVector, relations: Iterable[TreeVector], basis: Sequence[Tree]
) -> TreeVector:
    """Canonical representative of v modulo the relation lattice."""
    index = {t: i for i, t in enumerate(basis)}
    lat = IntLattice(len(basis))
    lat.add_many(vector_to_row(r, index) for r in relations)
    lat.normalize()
    reduced = lat.reduce(vector_to_row(v, index))
    if not reduced:
        return TreeVector.zero(v.degree, v.decorated)
    return TreeVector.from_dict({basis[j]: c for j, c in reduced.items()})


# ---------------------------------------------------------------------------
# result cache


def cache_key(**kwargs) -> str:
    blob = json.dumps(kwargs, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def cache_load(cache_dir: str, key: str) -> SnfResult | None:
    path = os.path.join(cache_dir, f"{key}.json")
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        return SnfResult.from_json_obj(json.load(fh))


def cache_store(cache_dir: str, key: str, result: SnfResult) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"{key}.json")
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(result.to_json_obj(), fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
