"""Words over signed generator symbols and free-group operations on them.

A letter is a pair ``(GenSym, e)`` with ``e`` in ``{+1, -1}``; a word is a
tuple of letters.  Everything here is a pure function on tuples.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import ParseError


class GenSym(NamedTuple):
    """A generator symbol such as ``a_2_3``, ``u_1`` or ``V``."""

    tag: str
    idx: tuple = ()

    def __str__(self) -> str:
        return self.tag + "".join(f"_{i}" for i in self.idx)


Letter = tuple  # (GenSym, int)
Word = tuple  # tuple[Letter, ...]

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9]*)((?:_[0-9]+)*)(\^-1)?")


def gen(tag: str, *idx: int) -> GenSym:
    return GenSym(tag, tuple(idx))


def letter(tag: str, *idx: int) -> Word:
    """One-letter word ``tag_idx``."""
    return ((GenSym(tag, tuple(idx)), 1),)


def word_of(g: GenSym, e: int = 1) -> Word:
    return ((g, e),)


def parse_gensym(text: str) -> GenSym:
    m = _TOKEN.fullmatch(text)
    if m is None or m.group(3):
        raise ParseError(f"bad generator name {text!r}")
    idx = tuple(int(s) for s in m.group(2).split("_")[1:])
    return GenSym(m.group(1), idx)


def parse_token(text: str) -> Letter:
    m = _TOKEN.fullmatch(text)
    if m is None:
        raise ParseError(f"bad token {text!r}")
    idx = tuple(int(s) for s in m.group(2).split("_")[1:])
    return (GenSym(m.group(1), idx), -1 if m.group(3) else 1)


def format_letter(x: Letter) -> str:
    g, e = x
    return str(g) if e > 0 else f"{g}^-1"


def format_word(w: Word) -> str:
    return " ".join(format_letter(x) for x in w)


def parse_word(text: str) -> Word:
    return tuple(parse_token(t) for t in text.split())


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    out: list = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def mul(*ws: Word) -> Word:
    """Freely reduced product of words."""
    return free_reduce(x for w in ws for x in w)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``, freely reduced."""
    return mul(u, v, inverse(u), inverse(v))


def conjugate(g: Word, w: Word) -> Word:
    """``g w g^-1``, freely reduced."""
    return mul(g, w, inverse(g))


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return mul(*([w] * k))


def cyclic_split(w: Word) -> tuple:
    """Return ``(h, core)`` with ``free_reduce(w) == h core h^-1`` and core cyclically reduced."""
    w = free_reduce(w)
    k = 0
    n = len(w)
    while n - 2 * k >= 2 and w[k][0] == w[n - 1 - k][0] and w[k][1] == -w[n - 1 - k][1]:
        k += 1
    return w[:k], w[k:n - k]


def cyclic_core(w: Word) -> Word:
    return cyclic_split(w)[1]


def letter_key(x: Letter) -> tuple:
    g, e = x
    return (g.tag, g.idx, 0 if e > 0 else 1)


def _least_rotation(w: Word) -> tuple:
    keys = [letter_key(x) for x in w]
    best = None
    best_i = 0
    for i in range(len(keys)):
        cand = keys[i:] + keys[:i]
        if best is None or cand < best:
            best, best_i = cand, i
    return best, best_i


def cyclic_reduce(w: Word) -> Word:
    """Canonical cyclic word: least rotation of the core or of its inverse."""
    core = cyclic_core(w)
    if not core:
        return ()
    inv = inverse(core)
    k1, i1 = _least_rotation(core)
    k2, i2 = _least_rotation(inv)
    if k1 <= k2:
        return core[i1:] + core[:i1]
    return inv[i2:] + inv[:i2]


def cyclically_equal(u: Word, v: Word) -> bool:
    """Equal as cyclic words up to inversion."""
    return cyclic_reduce(u) == cyclic_reduce(v)


def align_conjugator(target: Word, stored: Word) -> Optional[tuple]:
    """Find ``(g, e)`` with ``free_reduce(target) == g stored^e g^-1``.

    ``stored`` must be cyclically reduced.  Only rotations (and inversion)
    are tried, so this is a linear number of candidates, not a search over
    arbitrary conjugators.
    """
    h, core = cyclic_split(target)
    n = len(core)
    if n != len(stored):
        return None
    for e, s in ((1, stored), (-1, inverse(stored))):
        for i in range(max(n, 1)):
            # core = s[i:] + s[:i] = s[:i]^-1 s s[:i]
            if core == s[i:] + s[:i]:
                g = mul(h, inverse(s[:i]))
                return g, e
    return None


def generators_of(w: Word) -> set:
    return {g for g, _ in w}


def occurrences(w: Word, g: GenSym) -> int:
    return sum(1 for x, _ in w if x == g)


def substitute(w: Word, images: dict) -> Word:
    """Replace each generator by its image word; unmapped generators stay."""
    out: list = []
    for g, e in w:
        img = images.get(g)
        if img is None:
            out.append((g, e))
        else:
            out.extend(img if e > 0 else inverse(img))
    return free_reduce(out)


def exponent_sums(w: Word) -> dict:
    out: dict = {}
    for g, e in w:
        out[g] = out.get(g, 0) + e
    return out


class CommutatorWitness(NamedTuple):
    """``rotation`` of the relator equals ``[u, v]`` freely."""

    u: Word
    v: Word
    shift: int
    mode: str  # "literal" or "three-piece"


def _literal_split(r: Word) -> Optional[tuple]:
    n = len(r)
    half = n // 2
    for a in range(1, half):
        u, v = r[:a], r[a:half]
        if r[half:half + a] == inverse(u) and r[half + a:] == inverse(v):
            return u, v
    return None


def _three_piece_split(r: Word) -> Optional[tuple]:
    # x y z x^-1 y^-1 z^-1 == [x y, z x^-1]
    n = len(r)
    half = n // 2
    for a in range(1, half - 1):
        x = r[:a]
        if r[half:half + a] != inverse(x):
            continue
        for b in range(1, half - a):
            y = r[a:a + b]
            z = r[a + b:half]
            if r[half + a:half + a + b] == inverse(y) and r[half + a + b:] == inverse(z):
                return mul(x, y), mul(z, inverse(x))
    return None


def is_commutator_shaped(w: Word) -> Optional[CommutatorWitness]:
    """Return a witness if some rotation of ``w`` is a commutator, else ``None``.

    Literal ``u v u^-1 v^-1`` splits are scanned first over every rotation.
    If none exists the three-piece form ``x y z x^-1 y^-1 z^-1`` is tried,
    which catches the cyclically reduced shape of commutators whose factors
    cancel against each other.
    """
    w = tuple(w)
    n = len(w)
    if n < 4 or n % 2:
        return None
    for finder, mode in ((_literal_split, "literal"), (_three_piece_split, "three-piece")):
        for i in range(n):
            r = w[i:] + w[:i]
            hit = finder(r)
            if hit is not None:
                return CommutatorWitness(hit[0], hit[1], i, mode)
    return None


def gensym_sort_key(g: GenSym) -> tuple:
    return (g.tag, g.idx)


def sorted_gens(gs: Sequence[GenSym]) -> list:
    return sorted(gs, key=gensym_sort_key)
