"""Right-angled Artin groups: normal forms and special-subgroup membership."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError
from .words import GenSym, Word, gensym_sort_key, letter_key


@dataclass(frozen=True)
class RaagGraph:
    vertices: tuple
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise DomainError("duplicate vertex")
        for e in self.edges:
            if len(e) != 2:
                raise DomainError(f"edge {set(e)} is a loop")
            if not e <= vs:
                raise DomainError(f"edge {set(e)} has an unknown endpoint")

    @classmethod
    def from_edges(cls, vertices: Iterable[GenSym], edges: Iterable[tuple]) -> "RaagGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    def commute(self, a: GenSym, b: GenSym) -> bool:
        return a == b or frozenset((a, b)) in self.edges

    def induced(self, sub: Iterable[GenSym]) -> "RaagGraph":
        s = set(sub)
        verts = tuple(v for v in self.vertices if v in s)
        return RaagGraph(verts, frozenset(e for e in self.edges if e <= s))

    def edge_list(self) -> list:
        """Edges as sorted vertex pairs in a fixed order."""
        pairs = [tuple(sorted(e, key=gensym_sort_key)) for e in self.edges]
        return sorted(pairs, key=lambda e: (gensym_sort_key(e[0]), gensym_sort_key(e[1])))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def commutator_relators(self) -> list:
        from .words import commutator, word_of

        return [commutator(word_of(a), word_of(b)) for a, b in self.edge_list()]


def export_edges(g: RaagGraph) -> str:
    """``v1 v2`` per line; isolated vertices appear alone on a line."""
    lines = [f"{a} {b}" for a, b in g.edge_list()]
    touched = {v for e in g.edges for v in e}
    lines += [str(v) for v in g.vertices if v not in touched]
    return "\n".join(lines) + "\n"


def _check_symbols(g: RaagGraph, w: Word) -> None:
    vs = set(g.vertices)
    for x, _ in w:
        if x not in vs:
            raise DomainError(f"{x} is not a vertex")


def raag_reduce(g: RaagGraph, w: Word) -> list:
    """Cancel ``x^e ... x^-e`` pairs whose middle letters all commute with ``x``."""
    out: list = []
    for x, e in w:
        # scan back through letters commuting with x for a cancelling partner
        k = len(out) - 1
        while k >= 0:
            y, f = out[k]
            if y == x:
                break
            if not g.commute(x, y):
                k = -1
                break
            k -= 1
        if k >= 0 and out[k][1] == -e:
            del out[k]
        else:
            out.append((x, e))
    return out


def raag_normal_form(g: RaagGraph, w: Word) -> Word:
    """Reduced word, then the lexicographically least shuffle under commuting swaps."""
    _check_symbols(g, w)
    red = raag_reduce(g, w)
    out = []
    rest = red
    while rest:
        best = None
        for k, x in enumerate(rest):
            # x can move to the front if every earlier letter commutes with it
            if all(g.commute(x[0], y[0]) and y[0] != x[0] for y in rest[:k]):
                if best is None or letter_key(x) < letter_key(rest[best]):
                    best = k
        out.append(rest[best])
        rest = rest[:best] + rest[best + 1:]
    return tuple(out)


def raag_equal(g: RaagGraph, u: Word, v: Word) -> bool:
    return raag_normal_form(g, u) == raag_normal_form(g, v)


def special_membership(g: RaagGraph, sub: Iterable[GenSym], w: Word) -> bool:
    """Whether ``w`` lies in the subgroup generated by ``sub``."""
    s = set(sub)
    return all(x in s for x, _ in raag_normal_form(g, w))
