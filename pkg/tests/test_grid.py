import pytest

from squarebraid.errors import DomainError
from squarebraid.grid import build_grid, cell_faces, enumerate_cells


def test_grid_graph_sizes():
    g = build_grid(4, 3)
    assert len(g.vertices) == 12
    assert len(g.edges) == 3 * 3 + 4 * 2
    assert len(g.squares) == 6


@pytest.mark.parametrize("p,q,n,f", [(3, 3, 9, (1,)), (3, 3, 8, (9, 12)), (3, 3, 7, (36, 84, 44)),
                                     (4, 3, 10, (66, 170, 102))])
def test_f_vectors(p, q, n, f):
    assert enumerate_cells(build_grid(p, q), n).f_vector == f


@pytest.mark.parametrize("p,q,n", [(3, 3, 7), (3, 3, 4), (3, 3, 5), (4, 3, 10), (4, 3, 6), (4, 4, 14), (3, 3, 2)])
def test_boundary_squares_to_zero(p, q, n):
    c = enumerate_cells(build_grid(p, q), n)
    for k in range(2, len(c.f_vector)):
        assert (c.boundary_matrix(k - 1) @ c.boundary_matrix(k)).is_zero()


def test_faces_of_square_ingredient():
    sq = (((1, 1), (1, 2), (2, 1), (2, 2)),)
    faces = cell_faces(sq)
    assert len(faces) == 4
    assert sorted(s for _, s in faces) == [-1, -1, 1, 1]


def test_bad_sizes():
    with pytest.raises(DomainError):
        build_grid(0, 3)
    with pytest.raises(DomainError):
        enumerate_cells(build_grid(3, 3), 10)
