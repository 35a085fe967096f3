"""Discrete gradient fields on configuration complexes relative to a maximal tree.

Tokens move towards the root along tree edges.  A cell is matched with the
cell obtained by moving (or un-moving) its smallest movable token, where
"smallest" refers to the depth-first order of the tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from math import comb
from typing import Optional

from .errors import DomainError
from .grid import CubeComplex, GridGraph, build_grid, cell_dim, cell_faces, enumerate_cells
from .homology import HomologySummary, IntegerMatrix, homology, homology_from_boundaries, predict_betti

# Trees tried, in order, when looking for one whose census matches the
# closed form.  Each entry is (kind, root corner).
TREE_CANDIDATES = (
    ("comb", "ll"), ("comb", "lr"), ("comb", "ul"), ("comb", "ur"),
    ("row_comb", "ll"), ("row_comb", "lr"), ("row_comb", "ul"), ("row_comb", "ur"),
    ("snake", "ll"), ("col_snake", "ll"),
)
DEFAULT_TREE = ("snake", "ll")


@dataclass(frozen=True)
class SpanningTree:
    kind: str
    root: tuple
    parent: dict
    order: tuple
    deleted: tuple

    @property
    def rank(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}

    def tree_edges(self) -> list:
        return sorted(tuple(sorted((v, u))) for v, u in self.parent.items())

    def edge_of(self, v: tuple) -> tuple:
        """The tree edge joining ``v`` to its parent."""
        u = self.parent[v]
        return (v, u) if v < u else (u, v)


def _corner_map(g: GridGraph, corner: str):
    """Reflection taking the chosen corner to (1, 1)."""
    fx = corner[1] == "r"
    fy = corner[0] == "u"

    def f(v):
        x, y = v
        return (g.p + 1 - x if fx else x, g.q + 1 - y if fy else y)

    return f


def build_tree(g: GridGraph, kind: str = DEFAULT_TREE[0], corner: str = DEFAULT_TREE[1]) -> SpanningTree:
    """Spanning tree of the grid graph with depth-first order from its root.

    Kinds, described in the frame where the root corner is (1, 1):
    ``comb`` is row 1 plus every vertical edge; ``row_comb`` is column 1
    plus every horizontal edge; ``snake`` is the boustrophedon path along
    the rows; ``col_snake`` the boustrophedon path along the columns.
    """
    if g.p < g.q:
        raise DomainError(f"build_tree expects p >= q; transpose the grid ({g.p},{g.q})")
    if corner not in ("ll", "lr", "ul", "ur"):
        raise DomainError(f"unknown corner {corner!r}")
    f = _corner_map(g, corner)  # an involution
    p, q = g.p, g.q
    local_parent = {}
    if kind == "comb":
        for x in range(1, p + 1):
            for y in range(1, q + 1):
                if y > 1:
                    local_parent[(x, y)] = (x, y - 1)
                elif x > 1:
                    local_parent[(x, y)] = (x - 1, y)
    elif kind == "row_comb":
        for x in range(1, p + 1):
            for y in range(1, q + 1):
                if x > 1:
                    local_parent[(x, y)] = (x - 1, y)
                elif y > 1:
                    local_parent[(x, y)] = (x, y - 1)
    elif kind in ("snake", "col_snake"):
        path = []
        if kind == "snake":
            for y in range(1, q + 1):
                xs = range(1, p + 1) if y % 2 else range(p, 0, -1)
                path += [(x, y) for x in xs]
        else:
            for x in range(1, p + 1):
                ys = range(1, q + 1) if x % 2 else range(q, 0, -1)
                path += [(x, y) for y in ys]
        for a, b in zip(path, path[1:]):
            local_parent[b] = a
    else:
        raise DomainError(f"unknown tree kind {kind!r}")
    parent = {f(v): f(u) for v, u in local_parent.items()}
    root = f((1, 1))
    children: dict = {}
    for v, u in parent.items():
        children.setdefault(u, []).append(v)
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        # visit children in increasing local coordinates
        stack.extend(sorted(children.get(v, []), key=f, reverse=True))
    tree = {tuple(sorted((v, u))) for v, u in parent.items()}
    deleted = tuple(e for e in g.edges if tuple(sorted(e)) not in tree)
    if len(order) != p * q or len(parent) != p * q - 1:
        raise AssertionError("tree construction does not span the grid")
    return SpanningTree(kind, root, parent, tuple(order), deleted)


@dataclass
class GradientField:
    tree: SpanningTree
    matching: dict
    critical: list
    checks: dict = field(default_factory=dict)

    @property
    def census(self) -> tuple:
        return tuple(len(c) for c in self.critical)

    def is_critical(self, cell: tuple) -> bool:
        return cell not in self.matching


def _partner(cell: tuple, tree: SpanningTree, rank: dict) -> Optional[tuple]:
    verts = [ing[0] for ing in cell if len(ing) == 1]
    closure = {v for ing in cell for v in ing}
    best = None  # (rank, kind, ingredient)
    for v in verts:
        u = tree.parent.get(v)
        if u is not None and u not in closure:
            key = (rank[v], 0, v)
            if best is None or key < best:
                best = key
    for ing in cell:
        if len(ing) != 2:
            continue
        a, b = ing
        if tree.parent.get(a) == b:
            iota, tau = a, b
        elif tree.parent.get(b) == a:
            iota, tau = b, a
        else:
            continue  # deleted edge
        ri, rt = rank[iota], rank[tau]
        if any(tree.parent.get(w) == tau and rt < rank[w] < ri for w in verts):
            continue  # not order-respecting
        key = (ri, 1, ing)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    _, kind, x = best
    if kind == 0:
        rest = [ing for ing in cell if ing != (x,)]
        return tuple(sorted(rest + [tree.edge_of(x)]))
    iota = x[0] if tree.parent.get(x[0]) == x[1] else x[1]
    rest = [ing for ing in cell if ing != x]
    return tuple(sorted(rest + [(iota,)]))


def gradient_field(c: CubeComplex, t: SpanningTree, check: bool = True) -> GradientField:
    """Match cells along the tree and verify the result is a gradient field."""
    g = c.grid
    if set(t.parent) | {t.root} != set(g.vertices):
        raise DomainError("tree and complex come from different grids")
    if any(len(ing) == 4 for cells in c.cells_by_dim for cell in cells for ing in cell):
        raise DomainError("gradient fields are implemented for complexes without square ingredients")
    rank = t.rank
    matching: dict = {}
    critical = [[] for _ in c.cells_by_dim]
    for k, cells in enumerate(c.cells_by_dim):
        for cell in cells:
            other = _partner(cell, t, rank)
            if other is None:
                critical[k].append(cell)
            else:
                matching[cell] = other
    f = GradientField(t, matching, critical)
    if check:
        f.checks = validate_field(f, c)
        bad = [k for k, v in f.checks.items() if not v]
        if bad:
            raise AssertionError(f"gradient field invalid: {bad}")
    return f


def _vpath_graph(f: GradientField, c: CubeComplex, k: int) -> dict:
    """Successor lists on k-cells: sigma -> faces of its upward partner."""
    succ: dict = {}
    for sigma in c.cells_by_dim[k]:
        tau = f.matching.get(sigma)
        if tau is None or cell_dim(tau) != k + 1:
            continue
        succ[sigma] = [face for face, _ in cell_faces(tau) if face != sigma]
    return succ


def validate_field(f: GradientField, c: CubeComplex) -> dict:
    ok_pairs = True
    ok_faces = True
    for a, b in f.matching.items():
        if f.matching.get(b) != a:
            ok_pairs = False
            break
        lo, hi = (a, b) if cell_dim(a) < cell_dim(b) else (b, a)
        if cell_dim(hi) != cell_dim(lo) + 1 or lo not in {x for x, _ in cell_faces(hi)}:
            ok_faces = False
            break
    acyclic = True
    for k in range(c.top_dim):
        try:
            tuple(TopologicalSorter(_vpath_graph(f, c, k)).static_order())
        except CycleError:
            acyclic = False
    h = homology(c)
    census = f.census
    morse_ineq = all(census[k] >= h.betti[k] for k in range(len(census)))
    euler = sum((-1) ** k * x for k, x in enumerate(census)) == c.euler()
    return {"involution": ok_pairs, "face_incidence": ok_faces, "acyclic": acyclic,
            "morse_inequalities": morse_ineq, "euler": euler}


def predict_critical(p: int, q: int) -> tuple:
    """Closed-form critical-cell census for n = pq - 2."""
    if q < 3 or p < q:
        raise DomainError(f"need p >= q >= 3, got ({p},{q})")
    m = (p - 1) * (q - 1)
    c = (1, 3 * m - 2, comb(m, 2) - (p - 2) * (q - 2))
    b1, b2 = predict_betti(p, q)
    if 1 - c[1] + c[2] != 1 - b1 + b2:
        raise AssertionError(f"Euler mismatch between census and Betti forms at ({p},{q})")
    return c


def morse_homology(f: GradientField, c: CubeComplex) -> HomologySummary:
    """Homology of the Morse complex spanned by critical cells."""
    crit_index = [{cell: i for i, cell in enumerate(cr)} for cr in f.critical]
    dims = [len(cr) for cr in f.critical]
    bd = {}
    for k in range(1, len(dims)):
        # flow of each (k-1)-cell onto critical (k-1)-cells
        succ = _vpath_graph(f, c, k - 1)
        graph = {sigma: succ.get(sigma, ()) for sigma in c.cells_by_dim[k - 1]}
        flow: dict = {}
        for sigma in TopologicalSorter(graph).static_order():
            if sigma in crit_index[k - 1]:
                flow[sigma] = {crit_index[k - 1][sigma]: 1}
                continue
            tau = f.matching.get(sigma)
            if tau is None or cell_dim(tau) != k:
                flow[sigma] = {}
                continue
            faces = cell_faces(tau)
            s0 = next(s for face, s in faces if face == sigma)
            acc: dict = {}
            for face, s in faces:
                if face == sigma:
                    continue
                coef = -s * s0
                for j, v in flow[face].items():
                    acc[j] = acc.get(j, 0) + coef * v
            flow[sigma] = {j: v for j, v in acc.items() if v}
        m = IntegerMatrix(dims[k - 1], dims[k])
        for j, tau in enumerate(f.critical[k]):
            col: dict = {}
            for face, s in cell_faces(tau):
                for i, v in flow.get(face, {}).items():
                    col[i] = col.get(i, 0) + s * v
            m.cols[j] = {i: v for i, v in col.items() if v}
        bd[k] = m
    for k in range(2, len(dims)):
        if not (bd[k - 1] @ bd[k]).is_zero():
            raise AssertionError("Morse boundary does not square to zero")
    return homology_from_boundaries(dims, bd)


@dataclass
class TreeAttempt:
    kind: str
    corner: str
    census: tuple
    matches: bool


def select_tree(p: int, q: int, candidates=TREE_CANDIDATES) -> tuple:
    """Try trees in order; return the first whose census matches the closed form.

    Returns ``(tree, attempts)``.  ``tree`` is ``None`` when no candidate
    matches, and every attempt (with its census) is reported either way.
    """
    g = build_grid(p, q)
    c = enumerate_cells(g, p * q - 2)
    want = predict_critical(p, q)
    attempts = []
    for kind, corner in candidates:
        t = build_tree(g, kind, corner)
        fld = gradient_field(c, t, check=False)
        got = fld.census
        ok = got == want
        attempts.append(TreeAttempt(kind, corner, got, ok))
        if ok:
            return t, attempts
    return None, attempts
