"""Consolidated verification reports."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .errors import DomainError

GRID_SET = ((3, 3), (4, 3), (5, 3), (6, 3), (4, 4), (5, 4), (5, 5))


@dataclass
class Check:
    name: str
    anchor: str
    predicted: Any
    computed: Any
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "predicted": self.predicted,
                "computed": self.computed, "pass": self.passed}


@dataclass
class VerificationReport:
    p: int
    q: int
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, anchor: str, predicted, computed, passed=None) -> None:
        ok = predicted == computed if passed is None else bool(passed)
        self.checks.append(Check(name, anchor, predicted, computed, ok))

    def to_dict(self, timings: bool = False) -> dict:
        d = {"p": self.p, "q": self.q, "checks": [c.to_dict() for c in self.checks], "pass": self.passed}
        if timings:
            d["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return d

    def to_text(self) -> str:
        lines = [f"report p={self.p} q={self.q}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: computed {c.computed} "
                         f"expected {c.predicted} ({c.anchor})")
        return "\n".join(lines) + "\n"


def _timed(rep: VerificationReport, key: str, fn):
    t = time.perf_counter()
    try:
        return fn()
    finally:
        rep.timings[key] = time.perf_counter() - t


def _guard(rep: VerificationReport, name: str, anchor: str, fn) -> None:
    """Run a block of checks; an exception becomes a failed check."""
    try:
        fn()
    except Exception as e:  # noqa: BLE001 - reported, never swallowed silently
        rep.add(name, anchor, "no error", f"{type(e).__name__}: {e}", False)


def report_all(p: int, q: int) -> VerificationReport:
    from .grid import build_grid, enumerate_cells
    from .homology import homology, predict_betti, predict_hdim, predict_wedge_betti
    from .morse import DEFAULT_TREE, build_tree, gradient_field, morse_homology, predict_critical, select_tree
    from .pipeline import census, pipeline_checks, run_pipeline, table_counts
    from .tietze import replay

    if q < 3 or p < q:
        raise DomainError(f"need p >= q >= 3, got ({p},{q})")
    rep = VerificationReport(p, q)
    b1, b2 = predict_betti(p, q)
    g = build_grid(p, q)
    state: dict = {}

    def homology_block():
        c = _timed(rep, "complex", lambda: enumerate_cells(g, p * q - 2))
        state["complex"] = c
        h = _timed(rep, "homology", lambda: homology(c))
        state["h"] = h
        rep.add("betti", "Betti numbers 1, (p-1)(q-1)+1 and the closed-form beta2",
                [1, b1, b2], list(h.betti[:3]) if len(h.betti) >= 3 else list(h.betti) + [0])
        rep.add("torsion", "homology is torsion-free", [], [list(t) for t in h.torsion if t])
        rep.add("homological_dimension", "homological dimension 1 only for the 3x3 grid",
                predict_hdim(p, q), h.hdim_observed)
        fv = c.f_vector
        c1, c2 = predict_critical(p, q)[1:]
        rep.add("euler", "alternating f-vector sum = 1 - c1 + c2 = 1 - b1 + b2",
                [1 - b1 + b2, 1 - b1 + b2], [c.euler(), 1 - c1 + c2])
        ranks = list(h.ranks)
        rep.add("rank_nullity", "sum of Betti numbers + 2 * sum of ranks = sum of f-vector",
                sum(fv), sum(h.betti) + 2 * sum(ranks))

    def wedge_block():
        cw = _timed(rep, "wedge", lambda: enumerate_cells(g, p * q - 1))
        hw = homology(cw)
        rep.add("wedge_betti", "one fewer square gives a wedge of (p-1)(q-1) circles",
                list(predict_wedge_betti(p, q)), list(hw.betti[:2]))

    def morse_block():
        c = state["complex"]
        t = build_tree(g, *DEFAULT_TREE)
        f = _timed(rep, "morse", lambda: gradient_field(c, t))
        rep.add("gradient_field", "matching is an acyclic discrete gradient field",
                True, all(f.checks.values()))
        rep.add("critical_census", "critical cells (1, 3(p-1)(q-1)-2, C((p-1)(q-1),2)-(p-2)(q-2))",
                list(predict_critical(p, q)), list(f.census))
        mh = _timed(rep, "morse_homology", lambda: morse_homology(f, c))
        rep.add("morse_homology", "Morse complex homology equals cellular homology",
                state["h"].to_dict(), mh.to_dict())
        tree, attempts = _timed(rep, "tree_search", lambda: select_tree(p, q))
        rep.add("tree_selection", "first census-matching tree in the declared search order",
                "/".join(DEFAULT_TREE), None if tree is None else f"{tree.kind}/{attempts[-1].corner}")
        comb = next(a for a in attempts if a.kind == "comb" and a.corner == "ll")
        rep.add("comb_tree_census", "census under the comb tree (informational, mismatch expected)",
                list(predict_critical(p, q)), list(comb.census), True)

    def pipeline_block():
        res = _timed(rep, "pipeline", lambda: run_pipeline(p, q))
        ch = pipeline_checks(res)
        rep.add("generators", "minimal presentation has b1 generators", b1, ch["generators"])
        rep.add("relators", "minimal presentation has b2 relators", b2, ch["relators"])
        rep.add("commutator_relators", "every relator is a commutator", True, ch["commutators_ok"])
        rep.add("family_census", "relator counts per family match the closed forms",
                table_counts(p, q), census(res.final))
        rep.add("abelianization", "abelianization is free abelian of rank b1 at every stage",
                {k: [b1, []] for k in ch["abelianization"]}, ch["abelianization"])
        rr = _timed(rep, "replay", lambda: replay(res.engine.serialize()))
        rep.add("replay", "replaying the move log reproduces the final presentation",
                res.final.hash(), rr.final.hash() if rr.ok else rr.message)
        rep.add("trivial_relators", "no substituted relator collapses to the empty word", [], ch["dropped"])

    def hnn_block():
        from .hnn import verify_theorem

        r = _timed(rep, "hnn", lambda: verify_theorem(p))
        for k, v in r.verdicts.items():
            rep.add(f"hnn_{k}", "H_p is isomorphic to the q = 3 braid group via theta", True, v)

    _guard(rep, "homology", "homology computation", homology_block)
    _guard(rep, "wedge", "wedge computation", wedge_block)
    if "complex" in state:
        _guard(rep, "morse", "gradient field computation", morse_block)
    _guard(rep, "pipeline", "Tietze pipeline", pipeline_block)
    if q == 3 and p >= 5:
        _guard(rep, "hnn", "HNN verification", hnn_block)
    return rep


def _report_dict(pq: tuple) -> dict:
    return report_all(*pq).to_dict()


def worker_count() -> int:
    raw = os.environ.get("SQUAREBRAID_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"SQUAREBRAID_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError("SQUAREBRAID_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def report_grid(pairs=GRID_SET, workers: int | None = None) -> list:
    """Report dicts for several grids, in the order given, without timings."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(pairs) <= 1:
        return [_report_dict(pq) for pq in pairs]
    with ProcessPoolExecutor(max_workers=min(workers, len(pairs))) as ex:
        return list(ex.map(_report_dict, pairs))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
