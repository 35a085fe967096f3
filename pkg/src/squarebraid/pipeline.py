"""Scripted Tietze pipeline from the raw presentation to the commutator presentation.

Every stage is produced by verified moves.  At each stage boundary every
relator is re-labelled by a ``replace`` move whose new word is the expected
family formula, so the free-group check inside the engine doubles as a check
that the mechanical result agrees with the formula (up to rotation and
inversion).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import DomainError, UnsoundMove
from .presentation import Presentation, abelianization, raw_presentation
from .tietze import Factor, TietzeEngine
from .words import (GenSym, Word, align_conjugator, commutator, cyclic_reduce, inverse, letter, mul,
                    is_commutator_shaped)

I = inverse


def a(l, i):
    return letter("a", l, i)


def b(l, i):
    return letter("b", l, i)


def A(l, i):
    return letter("A", l, i)


def u(l):
    return letter("u", l)


def v(l):
    return letter("v", l)


def G(tag, *idx) -> GenSym:
    return GenSym(tag, tuple(idx))


# expected relators, stage by stage


def s1_formulas(p: int, q: int) -> dict:
    f = {("a11", ()): a(1, 1)}
    for l in range(1, q):
        for i, j in combinations(range(2, p), 2):
            f[("comm_b", (l, i, j))] = commutator(a(l, j), mul(I(b(l, 1)), b(l, i)))
    for l in range(1, q - 1):
        for j in range(2, p):
            f[("link_first", (l, j))] = mul(b(l, 1), I(a(l + 1, 1)), a(l + 1, j), I(b(l, 1)),
                                            I(b(l + 1, j)), b(l + 1, 1))
        for i in range(2, p):
            for j in range(1, p - i + 1):
                f[("link", (l, i, j))] = mul(b(l, 1), a(l, i), I(b(l, 1)), a(l + 1, j), I(b(l, i)),
                                             I(b(l + 1, j)))
    f.update(_near_far_s1(p, q))
    return f


def _near_far_s1(p: int, q: int) -> dict:
    f = {}
    for l in range(1, q - 1):
        for i in range(3, p):
            for j in range(3, p):
                if i + j >= p + 2:
                    f[("near", (l, i, j))] = commutator(mul(b(l, 1), a(l, i), I(b(l, 1))), a(l + 1, j))
    for lam in range(1, q):
        for l in range(1, lam - 1):
            for j in range(1, p):
                f[("far_first", (l, lam, j))] = commutator(mul(b(l + 1, 1), b(l, 1), I(a(l + 1, 1))),
                                                           a(lam, j))
            for i in range(2, p):
                for j in range(1, p):
                    f[("far", (l, lam, i, j))] = commutator(mul(b(l, 1), a(l, i), I(b(l, 1))), a(lam, j))
    return f


def s2_formulas(p: int, q: int) -> dict:
    f = {("a11", ()): a(1, 1)}
    for i, j in combinations(range(2, p), 2):
        f[("top_pair", (i, j))] = commutator(
            a(1, j), mul(I(b(1, 1)), I(b(2, 1)), b(1, 1), a(1, i), I(b(1, 1)), a(2, 1)))
    for l in range(2, q):
        for i, j in combinations(range(2, p), 2):
            f[("row_pair", (l, i, j))] = commutator(
                a(l, j), mul(b(l - 1, 1), I(a(l, 1)), a(l, i), I(b(l - 1, 1))))
    for l in range(2, q - 1):
        for i in range(2, p):
            f[("twist", (l, i))] = mul(b(l, 1), a(l, i), I(b(l, 1)), a(l + 1, 1), b(l - 1, 1), I(a(l, i)),
                                       a(l, 1), I(b(l - 1, 1)), I(b(l, 1)), I(b(l + 1, 1)))
    for i in range(2, p - 1):
        for j in range(2, p - i + 1):
            f[("top_cross", (i, j))] = mul(b(1, 1), a(1, i), I(b(1, 1)), a(2, j), I(a(2, 1)), b(1, 1),
                                           I(a(1, i)), I(b(1, 1)), b(2, 1), b(1, 1), I(a(2, j)), a(2, 1),
                                           I(b(1, 1)), I(b(2, 1)))
    for l in range(2, q - 1):
        for i in range(2, p - 1):
            for j in range(2, p - i + 1):
                f[("row_cross", (l, i, j))] = mul(
                    b(l, 1), a(l, i), I(b(l, 1)), a(l + 1, j), b(l - 1, 1), I(a(l, i)), a(l, 1),
                    I(b(l - 1, 1)), I(a(l + 1, j)), a(l + 1, 1), I(b(l, 1)), I(b(l + 1, 1)))
    f.update(_near_far_s1(p, q))
    return f


def _far_left(l: int) -> Word:
    return mul(u(l + 1), u(l), I(v(l)), I(u(l)))


def _top_left(i: int) -> Word:
    return mul(u(1), A(1, i), I(u(1)))


def _row_left(l: int, i: int) -> Word:
    return mul(u(l), u(l - 1), v(l - 1), A(l, i), I(u(l)))


def _uv(lam: int) -> Word:
    return mul(u(lam - 1), v(lam - 1))


def _twist_parts(l: int, i: int) -> tuple:
    P = mul(u(l), u(l - 1), v(l - 1), A(l, i), v(l))
    Q = mul(u(l - 1), I(A(l, i)), I(u(l - 1)))
    R = mul(I(u(l)), I(u(l + 1)))
    return P, Q, R


def s3_formulas(p: int, q: int) -> dict:
    f = {}
    for i, j in combinations(range(2, p), 2):
        f[("top_pair", (i, j))] = commutator(A(1, j), mul(I(u(1)), I(u(2)), u(1), A(1, i), v(1)))
    for l in range(2, q):
        for i, j in combinations(range(2, p), 2):
            f[("row_pair", (l, i, j))] = commutator(mul(u(l - 1), v(l - 1), A(l, j)),
                                                    mul(u(l - 1), A(l, i), I(u(l - 1))))
    for l in range(2, q - 1):
        for i in range(2, p):
            P, Q, R = _twist_parts(l, i)
            f[("twist", (l, i))] = mul(P, Q, R)
    for i in range(2, p - 1):
        for j in range(2, p - i + 1):
            f[("top_cross", (i, j))] = commutator(mul(I(u(1)), I(u(2)), u(1), A(1, i), v(1)), A(2, j))
    for l in range(2, q - 1):
        for i in range(2, p - 1):
            for j in range(2, p - i + 1):
                P, Q, R = _twist_parts(l, i)
                f[("row_cross", (l, i, j))] = mul(P, A(l + 1, j), Q, I(A(l + 1, j)), R)
    for i in range(3, p):
        for j in range(3, p):
            if i + j >= p + 2:
                f[("top_near", (i, j))] = commutator(A(1, i), mul(v(1), A(2, j), u(1)))
                for l in range(2, q - 1):
                    f[("row_near", (l, i, j))] = commutator(mul(u(l - 1), v(l - 1), A(l, i)),
                                                            mul(v(l), A(l + 1, j), u(l)))
    for lam in range(1, q):
        for l in range(1, lam - 1):
            f[("far_uv", (l, lam))] = commutator(_far_left(l), _uv(lam))
            for j in range(2, p):
                f[("far_uvA", (l, lam, j))] = commutator(_far_left(l), mul(_uv(lam), A(lam, j)))
        if lam >= 3:
            for i in range(2, p):
                f[("far_top_uv", (lam, i))] = commutator(_top_left(i), _uv(lam))
                for j in range(2, p):
                    f[("far_top_uvA", (lam, i, j))] = commutator(_top_left(i), mul(_uv(lam), A(lam, j)))
        for l in range(2, lam - 1):
            for i in range(2, p):
                f[("far_row_uv", (l, lam, i))] = commutator(_row_left(l, i), _uv(lam))
                for j in range(2, p):
                    f[("far_row_uvA", (l, lam, i, j))] = commutator(_row_left(l, i),
                                                                    mul(_uv(lam), A(lam, j)))
    return f


def final_commutator_forms(p: int, q: int) -> dict:
    """Commutator forms that replace the non-commutator families before the last round."""
    f = {}
    for lam in range(1, q):
        for l in range(1, lam - 1):
            for j in range(2, p):
                f[("far_uvA", (l, lam, j))] = commutator(_far_left(l), A(lam, j))
        if lam >= 3:
            for i in range(2, p):
                for j in range(2, p):
                    f[("far_top_uvA", (lam, i, j))] = commutator(_top_left(i), A(lam, j))
        for l in range(2, lam - 1):
            for i in range(2, p):
                for j in range(2, p):
                    f[("far_row_uvA", (l, lam, i, j))] = commutator(_row_left(l, i), A(lam, j))
    for l in range(2, q - 1):
        for i in range(2, p - 1):
            for j in range(2, p - i + 1):
                _, Q, _ = _twist_parts(l, i)
                f[("row_cross", (l, i, j))] = commutator(A(l + 1, j), Q)
    return f


def twist_commutator(l: int, i: int) -> Word:
    """The commutator a twist relator with i >= 3 becomes after the last round."""
    return mul(A(l, i), v(l), u(l - 1), I(A(l, i)), A(l, 2), I(u(l - 1)), I(v(l)), I(A(l, 2)))


TABLE_FAMILIES = ("top_pair", "row_pair", "twist", "top_cross", "row_cross", "top_near", "row_near",
                  "far_uv", "far_uvA", "far_top_uv", "far_top_uvA", "far_row_uv", "far_row_uvA")


def table_counts(p: int, q: int) -> dict:
    """Closed-form relator counts per family of the final presentation."""
    return {
        "top_pair": (p - 3) * (p - 2) // 2,
        "row_pair": (p - 3) * (p - 2) * (q - 2) // 2,
        "twist": (p - 3) * (q - 3),
        "top_cross": (p - 3) * (p - 2) // 2,
        "row_cross": (p - 3) * (p - 2) * (q - 3) // 2,
        "top_near": (p - 3) * (p - 2) // 2,
        "row_near": (p - 3) * (p - 2) * (q - 3) // 2,
        "far_uv": (q - 3) * (q - 2) // 2,
        "far_uvA": (p - 2) * (q - 3) * (q - 2) // 2,
        "far_top_uv": (p - 2) * (q - 3),
        "far_top_uvA": (p - 2) ** 2 * (q - 3),
        "far_row_uv": (p - 2) * (q - 4) * (q - 3) // 2,
        "far_row_uvA": (p - 2) ** 2 * (q - 4) * (q - 3) // 2,
    }


def census(pr: Presentation) -> dict:
    """Relator counts per family label."""
    if any(fam == "" for fam, _ in pr.labels):
        raise DomainError("presentation has relators without family labels")
    counts = {f: 0 for f in TABLE_FAMILIES}
    for fam, _ in pr.labels:
        counts[fam] = counts.get(fam, 0) + 1
    return counts


# the script


def _relabel(eng: TietzeEngine, old: tuple, new: tuple, word: Word) -> None:
    k = eng.current.find(*old)
    stored = eng.current.relators[k]
    al = align_conjugator(word, stored)
    just = "inversion" if al is not None and al[1] < 0 else "rotation"
    eng.replace(k, word, just, label=new)


def _relabel_all(eng: TietzeEngine, mapping, formulas: dict) -> None:
    """``mapping(label) -> new label`` for every current relator; formulas give the words."""
    for lab in list(eng.current.labels):
        new = mapping(lab)
        if new not in formulas:
            raise UnsoundMove(f"no expected formula for {new} (from {lab})", eng.log)
        _relabel(eng, lab, new, formulas[new])
    have = {lab for lab in eng.current.labels}
    missing = set(formulas) - have
    if missing:
        raise UnsoundMove(f"expected families missing: {sorted(missing)[:5]}", eng.log)


def _consequence(eng: TietzeEngine, target: tuple, new_word: Word, parts: list) -> None:
    """Replace relator ``target`` by ``new_word`` = product of conjugated printed relators.

    ``parts`` is a list of ``(label, printed word, exponent, conjugator)``; each
    printed word is matched to its stored relator by rotation only.
    """
    factors = []
    for lab, printed, e, conj in parts:
        k = eng.current.find(*lab)
        al = align_conjugator(printed, eng.current.relators[k])
        if al is None:
            raise UnsoundMove(f"relator {lab} does not match its printed form", eng.log)
        g, s = al
        factors.append(Factor(k, e * s, mul(conj, g)))
    eng.replace(eng.current.find(*target), new_word, "consequence", label=target, factors=tuple(factors))


@dataclass
class PipelineResult:
    p: int
    q: int
    stages: dict
    engine: TietzeEngine
    dropped: list = field(default_factory=list)

    @property
    def final(self) -> Presentation:
        return self.stages["final"]


def run_pipeline(p: int, q: int) -> PipelineResult:
    if q < 3 or p < q:
        raise DomainError(f"need p >= q >= 3, got ({p},{q})")
    raw = raw_presentation(p, q)
    eng = TietzeEngine(raw)
    stages = {"raw": eng.mark("raw")}

    # c generators
    eng.eliminate_by_label(G("c", q - 1, 1), "trivial_c", ())
    for l in range(1, q - 1):
        eng.eliminate_by_label(G("c", l, 1), "link", (l, 1, 1))
    for l in range(1, q):
        for j in range(2, p):
            eng.eliminate_by_label(G("c", l, j), "conj", (l, 1, j))
    eng.drop_empty()

    def to_s1(lab):
        fam, idx = lab
        if fam == "trivial_a":
            return ("a11", ())
        if fam == "conj":
            return ("comm_b", idx)
        if fam == "link":
            l, i, j = idx
            return ("link_first", (l, j)) if i == 1 else ("link", idx)
        if fam == "far":
            l, lam, i, j = idx
            return ("far_first", (l, lam, j)) if i == 1 else lab
        return lab

    _relabel_all(eng, to_s1, s1_formulas(p, q))
    stages["s1"] = eng.mark("s1")

    # B generators
    for l in range(1, q):
        for i in range(2, p):
            eng.change_basis(G("B", l, i), mul(I(b(l, 1)), b(l, i)), G("b", l, i))
    for i in range(2, p):
        eng.eliminate_by_label(G("B", 1, i), "link", (1, i, 1))
    for l in range(1, q - 1):
        for j in range(2, p):
            eng.eliminate_by_label(G("B", l + 1, j), "link_first", (l, j))
    eng.drop_empty()

    def to_s2(lab):
        fam, idx = lab
        if fam == "comm_b":
            l, i, j = idx
            return ("top_pair", (i, j)) if l == 1 else ("row_pair", idx)
        if fam == "link":
            l, i, j = idx
            if j == 1:
                return ("twist", (l, i))
            return ("top_cross", (i, j)) if l == 1 else ("row_cross", idx)
        return lab

    _relabel_all(eng, to_s2, s2_formulas(p, q))
    stages["s2"] = eng.mark("s2")

    # u, v, A generators
    for l in range(1, q):
        eng.change_basis(G("u", l), b(l, 1), G("b", l, 1))
    for l in range(1, q - 1):
        eng.change_basis(G("v", l), mul(I(u(l)), a(l + 1, 1)), G("a", l + 1, 1))
    for i in range(2, p):
        eng.change_basis(G("A", 1, i), a(1, i), G("a", 1, i))
    for l in range(2, q):
        for i in range(2, p):
            eng.change_basis(G("A", l, i), mul(I(v(l - 1)), I(u(l - 1)), a(l, i)), G("a", l, i))
    eng.eliminate_by_label(G("a", 1, 1), "a11", ())
    eng.drop_empty()

    def to_s3(lab):
        fam, idx = lab
        if fam == "near":
            l, i, j = idx
            return ("top_near", (i, j)) if l == 1 else ("row_near", idx)
        if fam == "far_first":
            l, lam, j = idx
            return ("far_uv", (l, lam)) if j == 1 else ("far_uvA", idx)
        if fam == "far":
            l, lam, i, j = idx
            if l == 1:
                return ("far_top_uv", (lam, i)) if j == 1 else ("far_top_uvA", (lam, i, j))
            return ("far_row_uv", (l, lam, i)) if j == 1 else ("far_row_uvA", idx)
        return lab

    _relabel_all(eng, to_s3, s3_formulas(p, q))
    stages["s3"] = eng.mark("s3")

    # commutator forms of the long families: [X, Y A] = [X, Y] . Y [X, A] Y^-1
    s3f = s3_formulas(p, q)
    fin = final_commutator_forms(p, q)
    for lam in range(1, q):
        Y = _uv(lam)
        for l in range(1, lam - 1):
            for j in range(2, p):
                t = ("far_uvA", (l, lam, j))
                _consequence(eng, t, fin[t], [(("far_uv", (l, lam)), s3f[("far_uv", (l, lam))], -1, I(Y)),
                                               (t, s3f[t], 1, I(Y))])
        if lam >= 3:
            for i in range(2, p):
                for j in range(2, p):
                    t = ("far_top_uvA", (lam, i, j))
                    base = ("far_top_uv", (lam, i))
                    _consequence(eng, t, fin[t], [(base, s3f[base], -1, I(Y)), (t, s3f[t], 1, I(Y))])
        for l in range(2, lam - 1):
            for i in range(2, p):
                for j in range(2, p):
                    t = ("far_row_uvA", (l, lam, i, j))
                    base = ("far_row_uv", (l, lam, i))
                    _consequence(eng, t, fin[t], [(base, s3f[base], -1, I(Y)), (t, s3f[t], 1, I(Y))])
    # row_cross = P A Q A^-1 R and twist = P Q R give [A, Q] = P^-1 (row_cross) (twist)^-1 P
    for l in range(2, q - 1):
        for i in range(2, p - 1):
            for j in range(2, p - i + 1):
                t = ("row_cross", (l, i, j))
                P, _, _ = _twist_parts(l, i)
                tw = ("twist", (l, i))
                _consequence(eng, t, fin[t], [(t, s3f[t], 1, I(P)), (tw, s3f[tw], -1, I(P))])

    # last round: remove u_{l+1} for l = q-2, ..., 2 using the i = 2 twist relator
    for l in range(q - 2, 1, -1):
        eng.eliminate_by_label(G("u", l + 1), "twist", (l, 2))
        for i in range(3, p):
            _relabel(eng, ("twist", (l, i)), ("twist", (l, i)), twist_commutator(l, i))
    eng.drop_empty()
    stages["final"] = eng.mark("final")
    return PipelineResult(p, q, stages, eng, list(eng.dropped))


def pipeline_checks(res: PipelineResult) -> dict:
    """Counts, commutator purity, census and abelianization at every stage."""
    from .homology import predict_betti

    p, q = res.p, res.q
    b1, b2 = predict_betti(p, q)
    fin = res.final
    witnesses = [is_commutator_shaped(r) for r in fin.relators]
    cen = census(fin)
    want = table_counts(p, q)
    ab = {name: abelianization(pr) for name, pr in res.stages.items()}
    return {
        "generators": len(fin.generators),
        "relators": len(fin.relators),
        "beta1": b1,
        "beta2": b2,
        "counts_ok": len(fin.generators) == b1 and len(fin.relators) == b2,
        "commutators_ok": all(w is not None for w in witnesses),
        "three_piece": sum(1 for w in witnesses if w is not None and w.mode != "literal"),
        "census": cen,
        "census_expected": want,
        "census_ok": cen == want and sum(cen.values()) == b2,
        "abelianization": {k: [r, list(t)] for k, (r, t) in ab.items()},
        "abelianization_ok": all(r == b1 and not t for r, t in ab.values()),
        "dropped": [list(map(str, d)) for d in res.dropped],
    }


# q = 3 reorganisation


def uvw_formulas(p: int) -> dict:
    U, V, W = letter("u"), letter("v"), letter("w")
    f = {}
    for i, j in combinations(range(2, p), 2):
        f[("wA_pair", (i, j))] = commutator(mul(I(W), A(1, i), V), A(1, j))
        f[("vAu_pair", (i, j))] = commutator(mul(V, A(2, j), U), A(2, i))
    for i in range(2, p - 1):
        for j in range(2, p - i + 1):
            f[("wA_cross", (i, j))] = commutator(mul(I(W), A(1, i), V), A(2, j))
    for i in range(3, p):
        for j in range(3, p):
            if i + j >= p + 2:
                f[("vAu_cross", (i, j))] = commutator(mul(V, A(2, j), U), A(1, i))
    return f


def q3_stage(p: int, res: PipelineResult | None = None) -> tuple:
    """Rename u_1, v_1 to u, v, put w := u^-1 u_2 u, and relabel to the four u/v/w families.

    Returns ``(presentation, engine)``; the engine continues the pipeline log.
    """
    if p < 4:
        raise DomainError("the u/v/w form needs p >= 4")
    res = res or run_pipeline(p, 3)
    eng = res.engine
    eng.change_basis(G("u"), u(1), G("u", 1))
    eng.change_basis(G("v"), v(1), G("v", 1))
    U = letter("u")
    eng.change_basis(G("w"), mul(I(U), u(2), U), G("u", 2))

    def to_uvw(lab):
        fam, idx = lab
        if fam == "top_pair":
            return ("wA_pair", idx)
        if fam == "top_cross":
            return ("wA_cross", idx)
        if fam == "row_pair":
            return ("vAu_pair", idx[1:])
        if fam == "top_near":
            return ("vAu_cross", idx)
        return lab

    _relabel_all(eng, to_uvw, uvw_formulas(p))
    return eng.mark("q3"), eng


def alpha(p: int, i: int) -> Word:
    if not 1 <= i <= p - 3:
        raise DomainError(f"alpha index {i} outside 1..{p - 3}")
    hi, lo = p - i - 1, p - i - 2
    return mul(A(2, hi), I(A(2, lo)) if lo >= 2 else ())


def beta(p: int, i: int) -> Word:
    if not 1 <= i <= p - 3:
        raise DomainError(f"beta index {i} outside 1..{p - 3}")
    V, W = letter("v"), letter("w")
    if i == p - 3:
        return mul(I(W), A(1, 2), V)
    return mul(I(V), I(A(1, p - i - 2)), A(1, p - i - 1), V)


def gamma(p: int, i: int) -> Word:
    if not 1 <= i <= p - 3:
        raise DomainError(f"gamma index {i} outside 1..{p - 3}")
    return mul(I(A(1, i + 2)), A(1, i + 3) if i + 3 <= p - 1 else ())


def delta(p: int, i: int) -> Word:
    if not 1 <= i <= p - 3:
        raise DomainError(f"delta index {i} outside 1..{p - 3}")
    U, V = letter("u"), letter("v")
    if i == p - 3:
        return mul(V, A(2, p - 1), U)
    return mul(V, A(2, i + 3), I(A(2, i + 2)), I(V))


GREEK = {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta}
GREEK_PAIRS = (("alpha", "beta"), ("beta", "gamma"), ("gamma", "delta"), ("delta", "alpha"))


def abcd_generators(p: int) -> list:
    gens = [G("u"), G("v"), G("w")]
    gens += [G("A", 1, i) for i in range(2, p)]
    gens += [G("A", 2, i) for i in range(2, p)]
    return gens


def reorganize_q3(p: int) -> Presentation:
    """Commutation relators between the alpha/beta/gamma/delta words for q = 3."""
    if p < 4:
        raise DomainError("reorganize_q3 needs p >= 4")
    rels, labels = [], []
    n = p - 3
    for x, y in GREEK_PAIRS:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i + j > n:
                    rels.append(cyclic_reduce(commutator(GREEK[x](p, i), GREEK[y](p, j))))
                    labels.append((f"{x}_{y}", (i, j)))
    return Presentation(abcd_generators(p), rels, labels, "abcd")
