import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from squarebraid import kernels
from squarebraid._kernels_py import eliminate_units as py_eliminate
from squarebraid.grid import build_grid, enumerate_cells
from squarebraid.homology import (IntegerMatrix, homology, homology_from_boundaries, predict_betti,
                                  rank_over_rationals, smith_normal_form)


def det(rows):
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * det(minor)
    return total


def determinantal_snf(dense):
    """Invariant factors from gcds of k x k minors."""
    m = len(dense)
    n = len(dense[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, det([[dense[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


small = st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(small)
@settings(max_examples=300)
def test_snf_matches_determinantal_divisors(dense):
    diag, rank = smith_normal_form(IntegerMatrix.from_dense(dense))
    assert diag == determinantal_snf(dense)
    assert rank == rank_over_rationals(IntegerMatrix.from_dense(dense))


def test_snf_known_examples():
    assert smith_normal_form(IntegerMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))[0] == (2, 6, 12)
    assert smith_normal_form(IntegerMatrix.from_dense([[0, 0], [0, 0]])) == ((), 0)
    assert smith_normal_form(IntegerMatrix(0, 3)) == ((), 0)


def _boundary_cases():
    out = []
    for p, q, n in ((3, 3, 7), (4, 3, 10), (3, 3, 4)):
        c = enumerate_cells(build_grid(p, q), n)
        for k in range(1, len(c.f_vector)):
            out.append(c.boundary_matrix(k))
    rng = random.Random(7)
    for _ in range(4):
        m = IntegerMatrix.from_dense([[rng.choice([0, 0, 1, -1, 2, 3]) for _ in range(9)] for _ in range(7)])
        out.append(m)
    return out


@pytest.mark.parametrize("m", _boundary_cases())
def test_snf_permutation_invariance_100(m):
    rng = random.Random(m.nrows * 1000 + m.ncols)
    ref = smith_normal_form(m)
    for _ in range(100):
        rp = list(range(m.nrows))
        cp = list(range(m.ncols))
        rng.shuffle(rp)
        rng.shuffle(cp)
        assert smith_normal_form(m.permuted(rp, cp)) == ref


sparse = st.integers(1, 12).flatmap(lambda m: st.integers(1, 12).flatmap(
    lambda n: st.lists(st.lists(st.sampled_from([0, 0, 0, 1, -1, 2, -3]), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernel not built")
@given(sparse)
@settings(max_examples=300)
def test_kernel_parity(dense):
    m = IntegerMatrix.from_dense(dense)
    args = (m.nrows, m.ncols, *m.csc())
    assert kernels.eliminate_units(*args, backend="compiled") == py_eliminate(*args)


def test_compiled_overflow_falls_back():
    big = 2 ** 62
    m = IntegerMatrix.from_dense([[1, big, 0], [big, 3, big], [0, big, 5]])
    a = smith_normal_form(m, backend="python")
    b = smith_normal_form(m)
    assert a == b


def test_rank_nullity_identity():
    c = enumerate_cells(build_grid(3, 3), 7)
    h = homology(c)
    assert sum(h.betti) + 2 * sum(h.ranks) == sum(c.f_vector)


def test_homology_of_circle():
    # one vertex, one loop: H0 = Z, H1 = Z
    d1 = IntegerMatrix.from_dense([[0]])
    h = homology_from_boundaries([1, 1], {1: d1})
    assert h.betti == (1, 1)


def test_torsion_detected():
    # RP2-like chain complex: Z -2-> Z -0-> Z
    h = homology_from_boundaries([1, 1, 1], {1: IntegerMatrix.from_dense([[0]]), 2: IntegerMatrix.from_dense([[2]])})
    assert h.betti == (1, 0, 0)
    assert h.torsion[1] == (2,)


@pytest.mark.parametrize("pq,want", [((3, 3), (5, 0)), ((4, 3), (7, 4)), ((5, 5), (17, 82)), ((6, 6), (26, 237))])
def test_predict_betti(pq, want):
    assert predict_betti(*pq) == want
