# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled unit-pivot elimination over int64 with overflow detection.

Mirrors ``_kernels_py.eliminate_units`` pivot for pivot.
"""

from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort as cpp_sort

ctypedef long long i64
ctypedef pair[int, i64] entry

cdef extern from *:
    bint __builtin_mul_overflow(i64 a, i64 b, i64* res) nogil
    bint __builtin_sub_overflow(i64 a, i64 b, i64* res) nogil


cdef i64 axpy(i64 y, i64 m, i64 x) except? -1:
    """Return y - m*x, raising OverflowError instead of wrapping."""
    cdef i64 prod, out
    if __builtin_mul_overflow(m, x, &prod) or __builtin_sub_overflow(y, prod, &out):
        raise OverflowError("entry exceeds int64 range")
    return out


cdef int find_row(vector[entry]& col, int r) nogil:
    cdef int lo = 0
    cdef int hi = <int>col.size() - 1
    cdef int mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if col[mid].first == r:
            return mid
        if col[mid].first < r:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


def eliminate_units(int nrows, int ncols, colptr, rowidx, vals):
    cdef vector[vector[entry]] cols
    cdef vector[vector[int]] rowlists
    cdef vector[int] rowcount
    cdef vector[int] stamp
    cdef vector[char] alive
    cdef vector[entry] merged
    cdef vector[int] touched
    cdef int c, c2, r, r2, k, a, b, best_r, best_cnt, pos, pivots, stampval
    cdef i64 v, piv, mult, nv
    cdef bint progress

    cols.resize(ncols)
    rowlists.resize(nrows)
    rowcount.assign(nrows, 0)
    stamp.assign(ncols, -1)
    alive.assign(ncols, 1)

    for c in range(ncols):
        for k in range(colptr[c], colptr[c + 1]):
            v = vals[k]
            if v != 0:
                cols[c].push_back(entry(<int>rowidx[k], v))
        cpp_sort(cols[c].begin(), cols[c].end())
        # merge duplicate rows
        merged.clear()
        for a in range(<int>cols[c].size()):
            if merged.size() > 0 and merged.back().first == cols[c][a].first:
                merged.back().second += cols[c][a].second
                if merged.back().second == 0:
                    merged.pop_back()
            else:
                merged.push_back(cols[c][a])
        cols[c] = merged
        for a in range(<int>cols[c].size()):
            rowlists[cols[c][a].first].push_back(c)
            rowcount[cols[c][a].first] += 1

    order = sorted(range(ncols), key=lambda cc: (<int>cols[cc].size(), cc))
    pivots = 0
    stampval = 0
    progress = True
    while progress:
        progress = False
        for c in order:
            if not alive[c]:
                continue
            best_r = -1
            best_cnt = 0
            for a in range(<int>cols[c].size()):
                v = cols[c][a].second
                if v == 1 or v == -1:
                    r = cols[c][a].first
                    if best_r < 0 or rowcount[r] < best_cnt or (rowcount[r] == best_cnt and r < best_r):
                        best_r = r
                        best_cnt = rowcount[r]
            if best_r < 0:
                continue
            r = best_r
            piv = cols[c][find_row(cols[c], r)].second
            stampval += 1
            touched.clear()
            for a in range(<int>rowlists[r].size()):
                c2 = rowlists[r][a]
                if c2 == c or not alive[c2] or stamp[c2] == stampval:
                    continue
                stamp[c2] = stampval
                if find_row(cols[c2], r) >= 0:
                    touched.push_back(c2)
            for b in range(<int>touched.size()):
                c2 = touched[b]
                mult = axpy(0, -cols[c2][find_row(cols[c2], r)].second, piv)
                merged.clear()
                a = 0
                k = 0
                while a < <int>cols[c2].size() or k < <int>cols[c].size():
                    if k >= <int>cols[c].size() or (a < <int>cols[c2].size() and cols[c2][a].first < cols[c][k].first):
                        merged.push_back(cols[c2][a])
                        a += 1
                    elif a >= <int>cols[c2].size() or cols[c][k].first < cols[c2][a].first:
                        r2 = cols[c][k].first
                        nv = axpy(0, mult, cols[c][k].second)
                        merged.push_back(entry(r2, nv))
                        rowlists[r2].push_back(c2)
                        rowcount[r2] += 1
                        k += 1
                    else:
                        r2 = cols[c][k].first
                        nv = axpy(cols[c2][a].second, mult, cols[c][k].second)
                        if nv == 0:
                            rowcount[r2] -= 1
                        else:
                            merged.push_back(entry(r2, nv))
                        a += 1
                        k += 1
                cols[c2] = merged
            for a in range(<int>cols[c].size()):
                rowcount[cols[c][a].first] -= 1
            cols[c].clear()
            alive[c] = 0
            pivots += 1
            progress = True

    residual = []
    for c in range(ncols):
        if alive[c] and cols[c].size() > 0:
            residual.append((c, [(cols[c][a].first, cols[c][a].second) for a in range(<int>cols[c].size())]))
    return pivots, residual
