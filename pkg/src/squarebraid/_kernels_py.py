"""Pure-Python unit-pivot elimination, the fallback for the compiled kernel.

Both implementations follow the same deterministic pivot rule so that they
return identical residual matrices, not merely equivalent ones.
"""

from __future__ import annotations


def eliminate_units(nrows: int, ncols: int, colptr, rowidx, vals):
    """Pivot on +-1 entries until none is left.

    The input is a CSC matrix.  Columns are visited in order of initial
    density; inside a column the unit entry whose row is currently sparsest
    wins (ties to the smaller row).  Passes repeat until a pass makes no
    progress.  Returns ``(npivots, residual)`` where residual is a list of
    ``(col, [(row, value), ...])`` for surviving nonzero columns, rows sorted.
    """
    cols = []
    rowsets = [set() for _ in range(nrows)]
    for c in range(ncols):
        col = {}
        for k in range(colptr[c], colptr[c + 1]):
            v = int(vals[k])
            if v:
                r = int(rowidx[k])
                col[r] = col.get(r, 0) + v
                if col[r] == 0:
                    del col[r]
        for r in col:
            rowsets[r].add(c)
        cols.append(col)
    rowcount = [len(s) for s in rowsets]
    alive = [True] * ncols
    order = sorted(range(ncols), key=lambda c: (len(cols[c]), c))
    pivots = 0
    progress = True
    while progress:
        progress = False
        for c in order:
            if not alive[c]:
                continue
            col = cols[c]
            best = None
            for r, v in col.items():
                if v == 1 or v == -1:
                    key = (rowcount[r], r)
                    if best is None or key < best:
                        best = key
            if best is None:
                continue
            r = best[1]
            piv = col[r]
            for c2 in list(rowsets[r]):
                if c2 == c:
                    continue
                col2 = cols[c2]
                k = col2[r] * piv
                for r2, v in col.items():
                    nv = col2.get(r2, 0) - k * v
                    if nv == 0:
                        if r2 in col2:
                            del col2[r2]
                            rowsets[r2].discard(c2)
                            rowcount[r2] -= 1
                    else:
                        if r2 not in col2:
                            rowsets[r2].add(c2)
                            rowcount[r2] += 1
                        col2[r2] = nv
            for r2 in col:
                rowsets[r2].discard(c)
                rowcount[r2] -= 1
            alive[c] = False
            cols[c] = {}
            pivots += 1
            progress = True
    residual = [(c, sorted(cols[c].items())) for c in range(ncols) if alive[c] and cols[c]]
    return pivots, residual
