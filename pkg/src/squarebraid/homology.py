"""Exact integer homology through Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Optional, Sequence

from . import kernels
from .errors import DomainError


class IntegerMatrix:
    """Sparse integer matrix stored by columns (``{row: value}`` per column)."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Optional[list] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        m = cls(nrows, ncols)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v:
                    m.cols[c][r] = int(v)
        return m

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def column(self, c: int) -> dict:
        return self.cols[c]

    def transpose(self) -> "IntegerMatrix":
        t = IntegerMatrix(self.ncols, self.nrows)
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                t.cols[r][c] = v
        return t

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntegerMatrix":
        """Row ``r`` moves to ``row_perm[r]``; column ``c`` moves to ``col_perm[c]``."""
        out = IntegerMatrix(self.nrows, self.ncols)
        for c, col in enumerate(self.cols):
            out.cols[col_perm[c]] = {row_perm[r]: v for r, v in col.items()}
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise DomainError("shape mismatch")
        out = IntegerMatrix(self.nrows, other.ncols)
        for c, ocol in enumerate(other.cols):
            acc: dict = {}
            for k, v in ocol.items():
                for r, w in self.cols[k].items():
                    acc[r] = acc.get(r, 0) + v * w
            out.cols[c] = {r: v for r, v in acc.items() if v}
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def csc(self) -> tuple:
        colptr = [0]
        rowidx: list = []
        vals: list = []
        for col in self.cols:
            for r in sorted(col):
                rowidx.append(r)
                vals.append(col[r])
            colptr.append(len(rowidx))
        return colptr, rowidx, vals

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntegerMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.cols == other.cols)

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _snf_residual(residual: list) -> list:
    """Diagonal (unsorted, unnormalised) of a small residual via gcd elimination."""
    rows: dict = {}
    cols: dict = {}
    for c, entries in residual:
        for r, v in entries:
            if v:
                rows.setdefault(r, {})[c] = v
                cols.setdefault(c, {})[r] = v
    diag = []

    def put(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v
        else:
            if r in rows and c in rows[r]:
                del rows[r][c]
                if not rows[r]:
                    del rows[r]
            if c in cols and r in cols[c]:
                del cols[c][r]
                if not cols[c]:
                    del cols[c]

    while cols:
        # smallest magnitude pivot, ties broken by position for determinism
        best = None
        for c, col in cols.items():
            for r, v in col.items():
                key = (abs(v), r, c)
                if best is None or key < best:
                    best = key
        _, pr, pc = best
        while True:
            piv = rows[pr][pc]
            changed = False
            # clear the pivot column with row operations
            for r, v in list(cols[pc].items()):
                if r == pr:
                    continue
                k = v // piv
                if k:
                    for c, w in list(rows[pr].items()):
                        put(r, c, rows.get(r, {}).get(c, 0) - k * w)
                if pc in rows.get(r, {}):
                    changed = True
            # clear the pivot row with column operations
            for c, v in list(rows[pr].items()):
                if c == pc:
                    continue
                k = v // piv
                if k:
                    for r, w in list(cols[pc].items()):
                        put(r, c, cols.get(c, {}).get(r, 0) - k * w)
                if c in rows.get(pr, {}):
                    changed = True
            if not changed:
                break
            # a remainder survived: move the pivot to the smallest entry in its row/column
            cand = [(abs(v), r, pc) for r, v in cols[pc].items()]
            cand += [(abs(v), pr, c) for c, v in rows[pr].items()]
            _, pr, pc = min(cand)
        piv = rows[pr][pc]
        # pivot is alone in its row and column now
        put(pr, pc, 0)
        diag.append(abs(piv))
    return diag


def _normalise(diag: list) -> list:
    """Turn a diagonal into the divisibility chain d1 | d2 | ..."""
    d = sorted(x for x in diag if x)
    n = len(d)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a // g * b
                    changed = True
        d.sort()
    return d


def smith_normal_form(m: IntegerMatrix, backend: Optional[str] = None) -> tuple:
    """Return ``(diagonal, rank)`` with each diagonal entry dividing the next."""
    if m.nrows == 0 or m.ncols == 0:
        return (), 0
    colptr, rowidx, vals = m.csc()
    npiv, residual = kernels.eliminate_units(m.nrows, m.ncols, colptr, rowidx, vals, backend=backend)
    diag = [1] * npiv + _snf_residual(residual)
    d = _normalise(diag)
    return tuple(d), len(d)


@dataclass
class HomologySummary:
    betti: tuple
    torsion: tuple
    euler: int
    hdim_observed: int
    ranks: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion],
                "euler": self.euler, "hdim_observed": self.hdim_observed}


def homology_from_boundaries(dims: Sequence[int], boundaries: dict, backend: Optional[str] = None) -> HomologySummary:
    """``dims[k]`` cells in degree k; ``boundaries[k]`` maps degree k to k-1."""
    top = len(dims) - 1
    ranks = [0] * (top + 2)
    factors: list = [()] * (top + 2)
    for k in range(1, top + 1):
        diag, rk = smith_normal_form(boundaries[k], backend=backend)
        ranks[k] = rk
        factors[k] = tuple(d for d in diag if d > 1)
    betti = tuple(dims[k] - ranks[k] - ranks[k + 1] for k in range(top + 1))
    torsion = tuple(factors[k + 1] for k in range(top + 1))
    euler = sum((-1) ** k * dims[k] for k in range(top + 1))
    hdim = 0
    for k in range(top + 1):
        if betti[k] or torsion[k]:
            hdim = k
    return HomologySummary(betti, torsion, euler, hdim, tuple(ranks[1:top + 1]))


def homology(c, backend: Optional[str] = None) -> HomologySummary:
    """Integer homology of a cube complex."""
    dims = c.f_vector
    bd = {k: c.boundary_matrix(k) for k in range(1, len(dims))}
    return homology_from_boundaries(dims, bd, backend=backend)


def _check_pq(p: int, q: int) -> None:
    if q < 3 or p < q:
        raise DomainError(f"need p >= q >= 3, got p={p}, q={q}")


def predict_betti(p: int, q: int) -> tuple:
    """Closed-form first and second Betti numbers for n = pq - 2."""
    _check_pq(p, q)
    beta1 = (p - 1) * (q - 1) + 1
    twice = (p * p + 1) * (q * q + 1) - p * q * (2 * p + 2 * q + 3) + 7 * (p + q - 1)
    expanded = (p * p * q * q + p * p + q * q - 2 * p * q * q - 2 * p * p * q - 3 * p * q
                + 7 * p + 7 * q - 6)
    if twice % 2 or twice != expanded:
        raise AssertionError(f"beta2 forms disagree at ({p},{q}): {twice} vs {expanded}")
    return beta1, twice // 2


def predict_hdim(p: int, q: int) -> int:
    _check_pq(p, q)
    return 1 if p == q == 3 else 2


def predict_wedge_betti(p: int, q: int) -> tuple:
    """Betti numbers for n = pq - 1, a wedge of (p-1)(q-1) circles."""
    return 1, (p - 1) * (q - 1)


def rank_over_rationals(m: IntegerMatrix) -> int:
    """Rank by Gaussian elimination over the rationals; an independent check on SNF."""
    rows = [[Fraction(v) for v in r] for r in m.to_dense()]
    rank = 0
    for c in range(m.ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
