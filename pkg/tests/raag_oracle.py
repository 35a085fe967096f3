"""Brute-force rewriting oracle for small RAAGs."""

from itertools import combinations, product

import networkx as nx

from squarebraid.raag import RaagGraph
from squarebraid.words import GenSym


def closure(g: RaagGraph, w: tuple) -> frozenset:
    """Minimal-length words reachable by commuting swaps and adjacent cancellations."""
    seen = {w}
    stack = [w]
    while stack:
        cur = stack.pop()
        for k in range(len(cur) - 1):
            (x, e), (y, f) = cur[k], cur[k + 1]
            if x == y and e == -f:
                nxt = cur[:k] + cur[k + 2:]
            elif x != y and g.commute(x, y):
                nxt = cur[:k] + (cur[k + 1], cur[k]) + cur[k + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    m = min(len(s) for s in seen)
    return frozenset(s for s in seen if len(s) == m)


def small_graphs(max_vertices: int = 4):
    """One graph per isomorphism class on 1..max_vertices vertices."""
    out = []
    for n in range(1, max_vertices + 1):
        vs = [GenSym("g", (i,)) for i in range(n)]
        pairs = list(combinations(range(n), 2))
        reps = []
        for mask in range(1 << len(pairs)):
            es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            h = nx.Graph()
            h.add_nodes_from(range(n))
            h.add_edges_from(es)
            if any(nx.is_isomorphic(h, r) for r in reps):
                continue
            reps.append(h)
            out.append(RaagGraph.from_edges(vs, [(vs[a], vs[b]) for a, b in es]))
    return out


def all_words(vertices, max_len: int):
    letters = [(v, e) for v in vertices for e in (1, -1)]
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def oracle_mismatches(g: RaagGraph, max_len: int, sub=None) -> list:
    """Words where normal-form equality or membership disagrees with brute force.

    Two words are equal iff their closures coincide, so the normal form must
    be a function of the closure and distinct closures must get distinct
    normal forms.
    """
    from squarebraid.raag import raag_normal_form, special_membership

    by_key: dict = {}
    by_nf: dict = {}
    bad = []
    for w in all_words(g.vertices, max_len):
        key = closure(g, w)
        nf = raag_normal_form(g, w)
        if nf not in key:
            bad.append(("not reduced", w))
        if by_key.setdefault(key, nf) != nf or by_nf.setdefault(nf, key) != key:
            bad.append(("partition", w))
        if sub is not None:
            brute = all(x in sub for x, _ in next(iter(key)))
            if brute != special_membership(g, sub, w):
                bad.append(("membership", w))
    return bad
