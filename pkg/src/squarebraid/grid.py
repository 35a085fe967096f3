"""The grid graph, its square complex, and discrete configuration complexes.

A vertex is a lattice point ``(x, y)``.  An ingredient (a closed cell of the
square complex) is the sorted tuple of its corner vertices, so a vertex
ingredient has one entry, an edge two and a square four.  A configuration
cell is the sorted tuple of its ingredients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .errors import DomainError
from .homology import IntegerMatrix

_DIM = {1: 0, 2: 1, 4: 2}


def ingredient_dim(ing: tuple) -> int:
    return _DIM[len(ing)]


def cell_dim(cell: tuple) -> int:
    return sum(_DIM[len(i)] for i in cell)


@dataclass(frozen=True)
class GridGraph:
    p: int
    q: int
    vertices: tuple
    edges: tuple
    squares: tuple

    def neighbours(self, v: tuple) -> list:
        x, y = v
        out = []
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = x + dx, y + dy
            if 1 <= a <= self.p and 1 <= b <= self.q:
                out.append((a, b))
        return out


def build_grid(p: int, q: int) -> GridGraph:
    """Grid on ``[1,p] x [1,q]``; vertices and edges listed row by row."""
    if p < 2 or q < 2:
        raise DomainError(f"grid needs p >= 2 and q >= 2, got ({p},{q})")
    vertices = tuple((x, y) for y in range(1, q + 1) for x in range(1, p + 1))
    edges = []
    for y in range(1, q + 1):
        for x in range(1, p + 1):
            if x < p:
                edges.append(((x, y), (x + 1, y)))
            if y < q:
                edges.append(((x, y), (x, y + 1)))
    squares = tuple(((x, y), (x, y + 1), (x + 1, y), (x + 1, y + 1))
                    for y in range(1, q) for x in range(1, p))
    return GridGraph(p, q, vertices, tuple(edges), squares)


def ingredient_faces(ing: tuple) -> list:
    """Signed codimension-one faces of an edge or square ingredient.

    Edges run from the smaller endpoint (tail, -1) to the larger (head, +1).
    For a square the right and bottom edges count +1, left and top -1.
    """
    if len(ing) == 2:
        a, b = ing
        return [((b,), 1), ((a,), -1)]
    if len(ing) == 4:
        ll, ul, lr, ur = ing
        return [((ll, lr), 1), ((ul, ur), -1), ((ll, ul), -1), ((lr, ur), 1)]
    return []


def canonical(ingredients) -> tuple:
    return tuple(sorted(ingredients))


class CubeComplex:
    """Unordered discrete configuration complex of ``n`` tokens on a grid."""

    def __init__(self, grid: GridGraph, n: int, cells_by_dim: list):
        self.grid = grid
        self.n = n
        self.cells_by_dim = cells_by_dim
        self.index = [{c: i for i, c in enumerate(cells)} for cells in cells_by_dim]
        self._bd: dict = {}

    @property
    def f_vector(self) -> tuple:
        return tuple(len(c) for c in self.cells_by_dim)

    @property
    def top_dim(self) -> int:
        return len(self.cells_by_dim) - 1

    def euler(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def faces(self, cell: tuple) -> list:
        return cell_faces(cell)

    def boundary_matrix(self, k: int) -> IntegerMatrix:
        if k < 1 or k > self.top_dim:
            raise DomainError(f"boundary degree {k} outside 1..{self.top_dim}")
        if k not in self._bd:
            rows = self.index[k - 1]
            m = IntegerMatrix(len(self.cells_by_dim[k - 1]), len(self.cells_by_dim[k]))
            for j, cell in enumerate(self.cells_by_dim[k]):
                col = m.cols[j]
                for face, s in cell_faces(cell):
                    r = rows[face]
                    col[r] = col.get(r, 0) + s
                    if col[r] == 0:
                        del col[r]
            self._bd[k] = m
        return self._bd[k]


def cell_faces(cell: tuple) -> list:
    """Signed codimension-one faces of a configuration cell.

    Replacing the ingredient at position t by one of its faces costs the
    Koszul sign (-1)^(dims before t), and re-sorting the result costs
    (-1)^(dim(face) * dims jumped over).
    """
    out = []
    before = 0
    for t, ing in enumerate(cell):
        d = _DIM[len(ing)]
        if d:
            others = cell[:t] + cell[t + 1:]
            for f, eps in ingredient_faces(ing):
                df = _DIM[len(f)]
                j = 0
                while j < len(others) and others[j] < f:
                    j += 1
                sign = -eps if before % 2 else eps
                if df:
                    lo, hi = (t, j) if j >= t else (j, t)
                    jumped = sum(_DIM[len(x)] for x in others[lo:hi])
                    if (df * jumped) % 2:
                        sign = -sign
                out.append((others[:j] + (f,) + others[j:], sign))
        before += d
    return out


def iter_configurations(g: GridGraph, n: int) -> Iterator[tuple]:
    """Yield canonical cells: non-vertex ingredient subsets first, then vertices."""
    nonvertex = sorted(list(g.edges) + list(g.squares))
    total = len(g.vertices)

    def rec(start: int, chosen: list, used: set):
        free = [v for v in g.vertices if v not in used]
        need = n - len(chosen)
        if need < 0:
            return
        if need <= len(free):
            for vs in combinations(sorted(free), need):
                yield canonical(chosen + [(v,) for v in vs])
        for i in range(start, len(nonvertex)):
            ing = nonvertex[i]
            if any(v in used for v in ing):
                continue
            # each extra ingredient of size s removes s free vertices, gains 1 slot
            if len(chosen) + 1 + total - len(used) - len(ing) < n:
                continue
            chosen.append(ing)
            used.update(ing)
            yield from rec(i + 1, chosen, used)
            chosen.pop()
            used.difference_update(ing)

    yield from rec(0, [], set())


def enumerate_cells(g: GridGraph, n: int) -> CubeComplex:
    """All cells of the unordered discrete configuration complex for ``n`` tokens."""
    if n < 1 or n > g.p * g.q:
        raise DomainError(f"n must lie in 1..{g.p * g.q}, got {n}")
    by_dim: dict = {}
    for cell in iter_configurations(g, n):
        by_dim.setdefault(cell_dim(cell), []).append(cell)
    top = max(by_dim)
    cells = [by_dim.get(k, []) for k in range(top + 1)]
    return CubeComplex(g, n, cells)
