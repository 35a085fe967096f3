"""Finite presentations, their text format, and the raw presentation of the braid group."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import DomainError, ParseError
from .homology import IntegerMatrix, smith_normal_form
from .words import (GenSym, Word, commutator, cyclic_reduce, format_word, inverse, letter, mul,
                    parse_gensym, parse_token)

STAGES = ("raw", "s1", "s2", "s3", "final", "q3", "abcd", "Hp", "raag", "custom")


@dataclass
class Presentation:
    """Generators and cyclically reduced relators, each relator with a family label.

    Labels are ``(family, indices)`` pairs.  Equality ignores labels and stage.
    """

    generators: list
    relators: list
    labels: list = field(default_factory=list, compare=False)
    stage: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not self.labels:
            self.labels = [("", ())] * len(self.relators)
        if len(self.labels) != len(self.relators):
            raise ValueError("labels and relators differ in length")

    def copy(self, stage: Optional[str] = None) -> "Presentation":
        return Presentation(list(self.generators), list(self.relators), list(self.labels),
                            stage or self.stage)

    def check(self) -> None:
        gs = set(self.generators)
        if len(gs) != len(self.generators):
            raise ValueError("duplicate generator")
        for r in self.relators:
            for g, _ in r:
                if g not in gs:
                    raise ValueError(f"relator uses unlisted generator {g}")

    def hash(self) -> str:
        return hashlib.sha256(render_presentation(self).encode()).hexdigest()[:16]

    def find(self, family: str, idx: tuple) -> int:
        for k, lab in enumerate(self.labels):
            if lab == (family, tuple(idx)):
                return k
        raise KeyError((family, idx))

    def families(self) -> dict:
        out: dict = {}
        for fam, _ in self.labels:
            out[fam] = out.get(fam, 0) + 1
        return out


def render_presentation(pr: Presentation) -> str:
    lines = ["gens: " + " ".join(str(g) for g in pr.generators)]
    for r in pr.relators:
        lines.append("rel: " + format_word(r))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    gens: Optional[list] = None
    rels: list = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError("expected 'gens:' or 'rel:'", lineno, 1)
        head = head.strip()
        col = len(line) - len(body) + 1
        if head == "gens":
            if gens is not None:
                raise ParseError("second 'gens:' line", lineno, 1)
            gens = []
            for tok in body.split():
                try:
                    gens.append(parse_gensym(tok))
                except ParseError:
                    raise ParseError(f"bad generator {tok!r}", lineno, col + body.find(tok)) from None
        elif head == "rel":
            if gens is None:
                raise ParseError("'rel:' before 'gens:'", lineno, 1)
            w = []
            for tok in body.split():
                try:
                    w.append(parse_token(tok))
                except ParseError:
                    raise ParseError(f"bad token {tok!r}", lineno, col + body.find(tok)) from None
            if not w:
                raise ParseError("empty relator", lineno, col)
            rels.append(tuple(w))
        else:
            raise ParseError(f"unknown line kind {head!r}", lineno, 1)
    if gens is None:
        raise ParseError("missing 'gens:' line", 1, 1)
    pr = Presentation(gens, rels)
    try:
        pr.check()
    except ValueError as e:
        raise ParseError(str(e), 1, 1) from None
    return pr


def abelianization(pr: Presentation) -> tuple:
    """``(free rank, torsion invariants)`` of the abelianized group."""
    index = {g: i for i, g in enumerate(pr.generators)}
    m = IntegerMatrix(len(pr.generators), len(pr.relators))
    for j, r in enumerate(pr.relators):
        col: dict = {}
        for g, e in r:
            i = index[g]
            col[i] = col.get(i, 0) + e
        m.cols[j] = {i: v for i, v in col.items() if v}
    diag, rank = smith_normal_form(m)
    return len(pr.generators) - rank, tuple(d for d in diag if d > 1)


def _check_pq(p: int, q: int) -> None:
    if q < 3 or p < q:
        raise DomainError(f"need p >= q >= 3, got ({p},{q})")


def a(l: int, i: int) -> Word:
    return letter("a", l, i)


def b(l: int, i: int) -> Word:
    return letter("b", l, i)


def c(l: int, i: int) -> Word:
    return letter("c", l, i)


def raw_relators(p: int, q: int) -> list:
    """``(family, indices, word)`` triples over the printed index ranges."""
    out = [("trivial_a", (), a(1, 1)), ("trivial_c", (), c(q - 1, 1))]
    for l in range(1, q):
        for i, j in combinations(range(1, p), 2):
            out.append(("conj", (l, i, j), mul(b(l, i), a(l, j), inverse(b(l, i)), inverse(c(l, j)))))
    for l in range(1, q - 1):
        for i in range(1, p):
            for j in range(1, p - i + 1):
                out.append(("link", (l, i, j),
                            mul(c(l, i), a(l + 1, j), inverse(b(l, i)), inverse(b(l + 1, j)))))
    for l in range(1, q - 1):
        for i in range(3, p):
            for j in range(3, p):
                if i + j >= p + 2:
                    out.append(("near", (l, i, j), commutator(c(l, i), a(l + 1, j))))
    for lam in range(1, q):
        for l in range(1, lam - 1):
            for i in range(1, p):
                for j in range(1, p):
                    out.append(("far", (l, lam, i, j), commutator(c(l, i), a(lam, j))))
    return out


def raw_presentation(p: int, q: int) -> Presentation:
    _check_pq(p, q)
    gens = [GenSym(t, (l, i)) for t in ("a", "b", "c") for l in range(1, q) for i in range(1, p)]
    triples = raw_relators(p, q)
    return Presentation(gens, [cyclic_reduce(w) for _, _, w in triples],
                        [(f, idx) for f, idx, _ in triples], "raw")


def raw_family_counts(p: int, q: int) -> dict:
    """Closed-form sizes of the raw relator families."""
    from math import comb

    return {
        "trivial": 2,
        "conj": (q - 1) * comb(p - 1, 2),
        "link": (q - 2) * p * (p - 1) // 2,
        "near": (q - 2) * (p - 3) * (p - 2) // 2,
        "far": comb(q - 2, 2) * (p - 1) ** 2,
    }
