"""Elementary Tietze moves, each checked in the free group before it is applied.

Moves are plain records; :func:`apply_move` validates a move against a
presentation and returns the new presentation.  A :class:`TietzeEngine`
keeps the current presentation and the log, and a log can be replayed from
its starting presentation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, UnsoundMove
from .presentation import Presentation, parse_presentation, render_presentation
from .words import (GenSym, Word, cyclic_reduce, format_word, free_reduce, inverse, mul,
                    occurrences, parse_gensym, parse_word, substitute)

KINDS = ("add", "eliminate", "replace", "drop")
JUSTIFICATIONS = ("rotation", "inversion", "conjugation", "free_equal", "consequence")


@dataclass(frozen=True)
class Factor:
    """``conj * relators[index]^exp * conj^-1``."""

    index: int
    exp: int
    conj: Word = ()


@dataclass(frozen=True)
class Move:
    kind: str
    gen: Optional[GenSym] = None
    word: Word = ()
    index: int = -1
    label: tuple = ("", ())
    justification: str = ""
    conj: Word = ()
    factors: tuple = ()
    before: str = ""
    after: str = ""

    def to_line(self) -> str:
        rec: dict = {"kind": self.kind}
        if self.gen is not None:
            rec["gen"] = str(self.gen)
        if self.word:
            rec["word"] = format_word(self.word)
        if self.index >= 0:
            rec["index"] = self.index
        if self.label != ("", ()):
            rec["label"] = [self.label[0], list(self.label[1])]
        if self.justification:
            rec["just"] = self.justification
        if self.conj:
            rec["conj"] = format_word(self.conj)
        if self.factors:
            rec["factors"] = [[f.index, f.exp, format_word(f.conj)] for f in self.factors]
        rec["before"] = self.before
        rec["after"] = self.after
        return f"MOVE {self.kind} " + json.dumps(rec, sort_keys=True, ensure_ascii=True)

    @staticmethod
    def from_line(line: str, lineno: int = 0) -> "Move":
        parts = line.split(" ", 2)
        if len(parts) != 3 or parts[0] != "MOVE" or parts[1] not in KINDS:
            raise ParseError("expected 'MOVE <kind> {...}'", lineno, 1)
        try:
            rec = json.loads(parts[2])
        except json.JSONDecodeError as e:
            raise ParseError(f"bad move record: {e.msg}", lineno, len(parts[0]) + len(parts[1]) + 2 + e.colno) from None
        if rec.get("kind") != parts[1]:
            raise ParseError("kind mismatch", lineno, 6)
        lab = rec.get("label")
        return Move(
            kind=rec["kind"],
            gen=parse_gensym(rec["gen"]) if "gen" in rec else None,
            word=parse_word(rec.get("word", "")),
            index=rec.get("index", -1),
            label=(lab[0], tuple(lab[1])) if lab else ("", ()),
            justification=rec.get("just", ""),
            conj=parse_word(rec.get("conj", "")),
            factors=tuple(Factor(i, e, parse_word(cw)) for i, e, cw in rec.get("factors", [])),
            before=rec.get("before", ""),
            after=rec.get("after", ""),
        )


def solve_for(r: Word, g: GenSym) -> Word:
    """Word ``w`` free of ``g`` with ``g = w`` a consequence of relator ``r``."""
    if occurrences(r, g) != 1:
        raise UnsoundMove(f"{g} occurs {occurrences(r, g)} times in the relator; cannot solve")
    k = next(i for i, (x, _) in enumerate(r) if x == g)
    e = r[k][1]
    rest = r[k + 1:] + r[:k]  # g^e * rest is a rotation of r
    return free_reduce(inverse(rest)) if e > 0 else free_reduce(rest)


def _check_consequence(pr: Presentation, m: Move) -> None:
    used = [f for f in m.factors if f.index == m.index]
    if len(used) != 1 or abs(used[0].exp) != 1:
        raise UnsoundMove("consequence must use the replaced relator exactly once with exponent +-1")
    parts = []
    for f in m.factors:
        if not 0 <= f.index < len(pr.relators) or abs(f.exp) != 1:
            raise UnsoundMove(f"bad factor {f}")
        r = pr.relators[f.index]
        parts.append(mul(f.conj, r if f.exp > 0 else inverse(r), inverse(f.conj)))
    prod = mul(*parts)
    if prod != free_reduce(m.word):
        raise UnsoundMove("new relator is not the stated product of conjugates")


def apply_move(pr: Presentation, m: Move) -> Presentation:
    """Validate ``m`` against ``pr`` and return the resulting presentation."""
    out = pr.copy()
    if m.kind == "add":
        g = m.gen
        if g in pr.generators:
            raise UnsoundMove(f"generator {g} already present")
        if any(x == g for x, _ in m.word):
            raise UnsoundMove("definition mentions the new generator")
        unknown = {x for x, _ in m.word} - set(pr.generators)
        if unknown:
            raise UnsoundMove(f"definition uses unknown generators {sorted(map(str, unknown))}")
        out.generators.append(g)
        out.relators.append(cyclic_reduce(mul(((g, -1),), m.word)))
        out.labels.append(m.label if m.label != ("", ()) else ("def", (str(g),)))
    elif m.kind == "eliminate":
        g = m.gen
        if g not in pr.generators:
            raise UnsoundMove(f"unknown generator {g}")
        if not 0 <= m.index < len(pr.relators):
            raise UnsoundMove(f"relator index {m.index} out of range")
        img = solve_for(pr.relators[m.index], g)
        del out.relators[m.index]
        del out.labels[m.index]
        out.generators.remove(g)
        images = {g: img}
        out.relators = [cyclic_reduce(substitute(r, images)) if occurrences(r, g) else r
                        for r in out.relators]
    elif m.kind == "replace":
        if not 0 <= m.index < len(pr.relators):
            raise UnsoundMove(f"relator index {m.index} out of range")
        old = pr.relators[m.index]
        new = free_reduce(m.word)
        j = m.justification
        if j in ("rotation", "inversion"):
            ok = cyclic_reduce(new) == cyclic_reduce(old)
        elif j == "conjugation":
            ok = free_reduce(mul(m.conj, old, inverse(m.conj))) == new
        elif j == "free_equal":
            ok = new == free_reduce(old)
        elif j == "consequence":
            _check_consequence(pr, m)
            ok = True
        else:
            raise UnsoundMove(f"unknown justification {j!r}")
        if not ok:
            raise UnsoundMove(f"replacement of relator {m.index} fails its {j} check")
        unknown = {x for x, _ in new} - set(pr.generators)
        if unknown:
            raise UnsoundMove(f"replacement uses unknown generators {sorted(map(str, unknown))}")
        out.relators[m.index] = cyclic_reduce(new)
        if m.label != ("", ()):
            out.labels[m.index] = m.label
    elif m.kind == "drop":
        if not 0 <= m.index < len(pr.relators):
            raise UnsoundMove(f"relator index {m.index} out of range")
        if pr.relators[m.index]:
            raise UnsoundMove("only empty relators may be dropped")
        del out.relators[m.index]
        del out.labels[m.index]
    else:
        raise UnsoundMove(f"unknown move kind {m.kind!r}")
    return out


class TietzeEngine:
    """Current presentation plus the verified move log that produced it."""

    def __init__(self, start: Presentation):
        self.start = start.copy()
        self.current = start.copy()
        self.log: list = []
        self.marks: list = []  # (stage name, log length, hash)
        self.dropped: list = []

    def apply(self, m: Move) -> Move:
        before = self.current.hash()
        try:
            nxt = apply_move(self.current, m)
        except UnsoundMove as e:
            raise UnsoundMove(str(e), self.log) from None
        rec = Move(m.kind, m.gen, m.word, m.index, m.label, m.justification, m.conj, m.factors,
                   before, nxt.hash())
        self.current = nxt
        self.log.append(rec)
        return rec

    # convenience wrappers

    def add_generator(self, g: GenSym, word: Word, label: tuple = ("", ())) -> int:
        self.apply(Move("add", gen=g, word=word, label=label))
        return len(self.current.relators) - 1

    def eliminate(self, g: GenSym, index: int) -> None:
        self.apply(Move("eliminate", gen=g, index=index))

    def eliminate_by_label(self, g: GenSym, family: str, idx: tuple) -> None:
        self.eliminate(g, self.current.find(family, idx))

    def change_basis(self, new: GenSym, word: Word, old: GenSym) -> None:
        """Introduce ``new := word`` and eliminate ``old`` through that definition."""
        if occurrences(word, old) != 1:
            raise UnsoundMove(f"{old} must occur exactly once in the definition of {new}", self.log)
        k = self.add_generator(new, word)
        self.eliminate(old, k)

    def replace(self, index: int, word: Word, justification: str, label: tuple = ("", ()),
                conj: Word = (), factors: tuple = ()) -> None:
        self.apply(Move("replace", index=index, word=word, label=label,
                        justification=justification, conj=conj, factors=factors))

    def drop_empty(self) -> int:
        n = 0
        k = 0
        while k < len(self.current.relators):
            if not self.current.relators[k]:
                self.dropped.append(self.current.labels[k])
                self.apply(Move("drop", index=k))
                n += 1
            else:
                k += 1
        return n

    def mark(self, stage: str) -> Presentation:
        self.current.stage = stage
        self.marks.append((stage, len(self.log), self.current.hash()))
        return self.current.copy()

    def serialize(self) -> str:
        labels = [[fam, list(idx)] for fam, idx in self.start.labels]
        lines = ["BEGIN " + json.dumps({"stage": self.start.stage, "hash": self.start.hash(),
                                        "labels": labels}, sort_keys=True)]
        lines += ["PRES " + ln for ln in render_presentation(self.start).splitlines()]
        marks = {n: [] for _, n, _ in self.marks}
        for stage, n, h in self.marks:
            marks[n].append((stage, h))
        for i, mv in enumerate(self.log):
            for stage, h in marks.get(i, []):
                lines.append("STAGE " + json.dumps({"stage": stage, "hash": h}, sort_keys=True))
            lines.append(mv.to_line())
        for stage, h in marks.get(len(self.log), []):
            lines.append("STAGE " + json.dumps({"stage": stage, "hash": h}, sort_keys=True))
        lines.append("END " + json.dumps({"hash": self.current.hash(), "moves": len(self.log)}, sort_keys=True))
        return "\n".join(lines) + "\n"


@dataclass
class ReplayResult:
    final: Presentation
    moves: int
    stages: list = field(default_factory=list)
    ok: bool = True
    message: str = ""


def replay(text: str) -> ReplayResult:
    """Re-run a serialized log, checking every move and every recorded hash."""
    pres_lines = []
    moves = []
    stage_marks = []
    end = None
    begin = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        head = line.split(" ", 1)[0]
        if head == "BEGIN":
            begin = json.loads(line[6:])
        elif head == "PRES":
            pres_lines.append(line[5:])
        elif head == "MOVE":
            moves.append(Move.from_line(line, lineno))
        elif head == "STAGE":
            rec = json.loads(line[6:])
            stage_marks.append((len(moves), rec["stage"], rec["hash"]))
        elif head == "END":
            end = json.loads(line[4:])
        else:
            raise ParseError(f"unknown record {head!r}", lineno, 1)
    if begin is None or end is None:
        raise ParseError("log lacks BEGIN or END", 1, 1)
    start = parse_presentation("\n".join(pres_lines) + "\n")
    if start.hash() != begin["hash"]:
        return ReplayResult(start, 0, ok=False, message="start presentation hash mismatch")
    labels = begin.get("labels")
    if labels is not None and len(labels) == len(start.relators):
        start.labels = [(fam, tuple(idx)) for fam, idx in labels]
    start.stage = begin.get("stage", "custom")
    cur = start
    stages = []
    si = 0
    for i, mv in enumerate(moves):
        while si < len(stage_marks) and stage_marks[si][0] == i:
            _, name, h = stage_marks[si]
            stages.append((name, h, cur.hash() == h))
            si += 1
        if cur.hash() != mv.before:
            return ReplayResult(cur, i, stages, False, f"move {i}: before-hash mismatch")
        try:
            cur = apply_move(cur, mv)
        except UnsoundMove as e:
            return ReplayResult(cur, i, stages, False, f"move {i}: {e}")
        if cur.hash() != mv.after:
            return ReplayResult(cur, i + 1, stages, False, f"move {i}: after-hash mismatch")
    while si < len(stage_marks):
        _, name, h = stage_marks[si]
        stages.append((name, h, cur.hash() == h))
        si += 1
    ok = cur.hash() == end["hash"] and all(s[2] for s in stages)
    return ReplayResult(cur, len(moves), stages, ok, "" if ok else "final or stage hash mismatch")
