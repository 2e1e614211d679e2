"""Exact integral simplicial homology via Smith normal form.

The chain complex is augmented: the empty face generates degree -1, so the
complex consisting of only the empty face has one reduced homology class in
degree -1.  All arithmetic is exact.  Elimination runs in two phases: a fast
int64 phase that only ever uses +-1 pivots and aborts if any entry grows past
a fixed cap, and an arbitrary-precision sparse phase for whatever remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .complexes import SimplicialComplex

# Entries are capped well below 2**63 so that a single +-1 pivot update
# (value + multiplier * value) can never wrap around in int64.
_ENTRY_CAP = 1 << 30


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int]

    def __post_init__(self):
        if any(v == 0 for v in self.entries.values()):
            object.__setattr__(
                self,
                "entries",
                {k: v for k, v in self.entries.items() if v != 0},
            )

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {
            (i, j): int(v)
            for i, row in enumerate(dense)
            for j, v in enumerate(row)
            if v != 0
        }
        return cls(rows, cols, entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def nnz(self) -> int:
        return len(self.entries)


def boundary_matrix(k: SimplicialComplex, d: int) -> IntegerMatrix:
    """Boundary operator from d-faces to (d-1)-faces of the augmented complex.

    Rows are indexed by the (d-1)-faces in their stored order (the single
    empty face when d = 0), columns by the d-faces.  The column of a face
    carries (-1)^j at the face obtained by removing its j-th smallest vertex.
    """
    if d < 0:
        raise ValueError("boundary operators are indexed by d >= 0")
    col_faces = k.faces(d)
    if d == 0:
        return IntegerMatrix(1, len(col_faces), {(0, j): 1 for j in range(len(col_faces))})
    row_index = {f: i for i, f in enumerate(k.faces(d - 1))}
    entries: dict[tuple[int, int], int] = {}
    for j, face in enumerate(col_faces):
        sign = 1
        for pos in range(len(face)):
            entries[(row_index[face[:pos] + face[pos + 1 :]], j)] = sign
            sign = -sign
    return IntegerMatrix(len(row_index), len(col_faces), entries)


def _unit_pivot_phase(m: IntegerMatrix):
    """Eliminate +-1 pivots with numpy int64 arithmetic.

    Returns (number of unit pivots, leftover nonzero entries) or None when
    an entry would exceed the cap, in which case the caller must redo the
    whole matrix exactly.
    """
    if any(abs(v) > _ENTRY_CAP for v in m.entries.values()):
        return None
    a = np.zeros((m.rows, m.cols), dtype=np.int64)
    for (i, j), v in m.entries.items():
        a[i, j] = v
    row_active = np.ones(m.rows, dtype=bool)
    col_active = np.ones(m.cols, dtype=bool)
    col_nnz = np.count_nonzero(a, axis=0)
    row_nnz = np.count_nonzero(a, axis=1)
    big = m.rows + m.cols + 1
    unit_rank = 0

    while True:
        scores = np.where(col_active & (col_nnz > 0), col_nnz, big)
        c = int(np.argmin(scores))
        if scores[c] == big:
            return unit_rank, {}
        col = a[:, c]
        rows_nz = np.nonzero((col != 0) & row_active)[0]
        unit_rows = rows_nz[np.abs(col[rows_nz]) == 1]
        if unit_rows.size == 0:
            # rare: the sparsest column has no unit entry; take any unit entry
            mask = (np.abs(a) == 1) & row_active[:, None] & col_active[None, :]
            hits = np.argwhere(mask)
            if hits.size == 0:
                leftover = {}
                for i in np.nonzero(row_active)[0]:
                    for j in np.nonzero(a[i] != 0)[0]:
                        if col_active[j]:
                            leftover[(int(i), int(j))] = int(a[i, j])
                return unit_rank, leftover
            r, c = (int(x) for x in min(hits, key=lambda h: (col_nnz[h[1]], row_nnz[h[0]])))
            col = a[:, c]
            rows_nz = np.nonzero((col != 0) & row_active)[0]
        else:
            r = int(min(unit_rows, key=lambda i: (row_nnz[i], i)))
        s = int(a[r, c])
        others = rows_nz[rows_nz != r]
        cols_sup = np.nonzero((a[r] != 0) & col_active)[0]
        if others.size:
            mult = a[others, c] * s
            block = a[np.ix_(others, cols_sup)]
            new_block = block - mult[:, None] * a[r, cols_sup][None, :]
            if np.abs(new_block).max() > _ENTRY_CAP:
                return None
            nz_delta = (new_block != 0).astype(np.int64) - (block != 0).astype(np.int64)
            col_nnz[cols_sup] += nz_delta.sum(axis=0)
            row_nnz[others] += nz_delta.sum(axis=1)
            a[np.ix_(others, cols_sup)] = new_block
        row_active[r] = False
        col_active[c] = False
        col_nnz[cols_sup] -= 1
        unit_rank += 1


def _exact_snf(entries: dict[tuple[int, int], int]):
    """Textbook sparse Smith elimination over arbitrary-precision integers.

    Pivot selection: smallest nonzero absolute value, ties broken by lowest
    row then lowest column.  Returns (rank, list of diagonal values); the
    divisibility chain is restored by the caller.
    """
    rows: dict[int, dict[int, int]] = {}
    col_index: dict[int, set[int]] = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            col_index.setdefault(j, set()).add(i)

    def set_entry(i: int, j: int, v: int):
        if v:
            rows.setdefault(i, {})[j] = v
            col_index.setdefault(j, set()).add(i)
        else:
            row = rows.get(i)
            if row and j in row:
                del row[j]
                if not row:
                    del rows[i]
                col_index[j].discard(i)
                if not col_index[j]:
                    del col_index[j]

    diagonal: list[int] = []
    while rows:
        r, c = min(
            ((i, j) for i, row in rows.items() for j in row),
            key=lambda rc: (abs(rows[rc[0]][rc[1]]), rc[0], rc[1]),
        )
        while True:
            p = rows[r][c]
            col_rows = [i for i in col_index[c] if i != r]
            if col_rows:
                i = col_rows[0]
                q = rows[i][c] // p
                for j, v in list(rows[r].items()):
                    set_entry(i, j, rows.get(i, {}).get(j, 0) - q * v)
                if rows.get(i, {}).get(c, 0):
                    r = i  # remainder became the new, smaller pivot
                continue
            row_cols = [j for j in rows[r] if j != c]
            if row_cols:
                j = row_cols[0]
                q = rows[r][j] // p
                for i in list(col_index[c]):
                    set_entry(i, j, rows.get(i, {}).get(j, 0) - q * rows[i][c])
                if rows.get(r, {}).get(j, 0):
                    c = j
                continue
            break
        diagonal.append(abs(rows[r][c]))
        set_entry(r, c, 0)
    return len(diagonal), diagonal


def _divisibility_fix(values: list[int]) -> tuple[int, ...]:
    """Turn a diagonal multiset into the invariant factor chain d1 | d2 | ..."""
    f = sorted(abs(v) for v in values)
    changed = True
    while changed:
        changed = False
        for i in range(len(f)):
            for j in range(i + 1, len(f)):
                if f[j] % f[i]:
                    g = math.gcd(f[i], f[j])
                    f[i], f[j] = g, f[i] * f[j] // g
                    changed = True
        f.sort()
    return tuple(f)


def smith_normal_form(m: IntegerMatrix) -> tuple[int, tuple[int, ...]]:
    """Rank and invariant factors d1 | d2 | ... | d_rank of an integer matrix."""
    if not m.entries:
        return 0, ()
    fast = _unit_pivot_phase(m)
    if fast is None:
        rank, diagonal = _exact_snf(m.entries)
        return rank, _divisibility_fix(diagonal)
    unit_rank, leftover = fast
    extra_rank, diagonal = _exact_snf(leftover) if leftover else (0, [])
    return unit_rank + extra_rank, _divisibility_fix([1] * unit_rank + diagonal)


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Betti numbers and torsion, keyed by dimension.

    Only nonzero Betti numbers and nonempty torsion lists are stored.
    Dimension -1 is the class of the empty face: betti[-1] = 1 exactly when
    the complex has no vertices at all.
    """

    betti: dict[int, int] = field(default_factory=dict)
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion


def reduced_homology(k: SimplicialComplex) -> HomologyProfile:
    """Exact reduced integral homology of the augmented chain complex."""
    top = k.dim
    f = {-1: 1}
    for d in range(top + 1):
        f[d] = len(k.faces(d))
    ranks = {d: 0 for d in range(-1, top + 3)}
    torsion: dict[int, tuple[int, ...]] = {}
    for d in range(0, top + 1):
        rank, factors = smith_normal_form(boundary_matrix(k, d))
        ranks[d] = rank
        nontrivial = tuple(x for x in factors if x > 1)
        if nontrivial:
            torsion[d - 1] = nontrivial
    betti = {}
    for d in range(-1, top + 1):
        b = f[d] - ranks[d] - ranks[d + 1]
        if b:
            betti[d] = b
    return HomologyProfile(betti, torsion)


def wedge_profile(h: HomologyProfile) -> Optional[dict[int, int]]:
    """Sphere multiplicities when homology is that of a wedge of spheres.

    Torsion-free homology pins the wedge: the count in dimension d is the
    d-th reduced Betti number (dimension -1 marks the empty complex, the
    all-zero profile a contractible one).  Any torsion means the complex is
    not homotopy equivalent to a wedge of spheres; that is reported as None.
    """
    if h.torsion:
        return None
    return dict(h.betti)
