"""Command-line interface: ``squarebraid <command> ...``; exit code 0 iff every check passes."""

from __future__ import annotations

import argparse
import sys

from .errors import DomainError, ParseError, UnsoundMove
from .report import dumps

STAGE_CHOICES = ("raw", "s1", "s2", "s3", "final", "q3", "abcd")


def _emit(args, obj: dict, text: str) -> None:
    out = dumps(obj) if args.format == "json" else text
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_complex(args) -> int:
    from .grid import build_grid, enumerate_cells

    n = args.n if args.n is not None else args.p * args.q - 2
    c = enumerate_cells(build_grid(args.p, args.q), n)
    obj = {"p": args.p, "q": args.q, "n": n, "f_vector": list(c.f_vector), "euler": c.euler()}
    _emit(args, obj, f"f-vector {list(c.f_vector)}  euler {c.euler()}\n")
    return 0


def cmd_homology(args) -> int:
    from .grid import build_grid, enumerate_cells
    from .homology import homology, predict_betti, predict_wedge_betti

    n = args.n if args.n is not None else args.p * args.q - 2
    c = enumerate_cells(build_grid(args.p, args.q), n)
    h = homology(c, backend=args.backend)
    obj = {"p": args.p, "q": args.q, "n": n, **h.to_dict()}
    ok = True
    if n == args.p * args.q - 2:
        want = [1, *predict_betti(args.p, args.q)]
        ok = list(h.betti[:3]) == want and not any(h.torsion)
        obj["expected_betti"] = want
    elif n == args.p * args.q - 1:
        want = list(predict_wedge_betti(args.p, args.q))
        ok = list(h.betti[:2]) == want and not any(h.torsion)
        obj["expected_betti"] = want
    obj["pass"] = ok
    _emit(args, obj, f"betti {list(h.betti)}  torsion {[list(t) for t in h.torsion]}  "
                     f"{'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def cmd_morse(args) -> int:
    from .grid import build_grid, enumerate_cells
    from .morse import DEFAULT_TREE, build_tree, gradient_field, morse_homology, predict_critical, select_tree

    if args.search_tree:
        tree, attempts = select_tree(args.p, args.q)
        obj = {"p": args.p, "q": args.q, "expected": list(predict_critical(args.p, args.q)),
               "attempts": [{"tree": a.kind, "corner": a.corner, "census": list(a.census), "match": a.matches}
                            for a in attempts],
               "selected": None if tree is None else [attempts[-1].kind, attempts[-1].corner]}
        text = "".join(f"{a.kind:>10} {a.corner}  census {list(a.census)}  {'match' if a.matches else 'no match'}\n"
                       for a in attempts)
        obj["pass"] = tree is not None
        _emit(args, obj, text)
        return 0 if tree is not None else 1
    kind, corner = args.tree.split(":") if args.tree else DEFAULT_TREE
    g = build_grid(args.p, args.q)
    c = enumerate_cells(g, args.p * args.q - 2)
    f = gradient_field(c, build_tree(g, kind, corner))
    want = list(predict_critical(args.p, args.q))
    mh = morse_homology(f, c)
    ok = list(f.census) == want
    obj = {"p": args.p, "q": args.q, "tree": [kind, corner], "census": list(f.census), "expected": want,
           "checks": f.checks, "morse_homology": mh.to_dict(), "pass": ok}
    _emit(args, obj, f"tree {kind}:{corner}  census {list(f.census)}  expected {want}  "
                     f"{'PASS' if ok else 'FAIL: census differs from the closed form'}\n")
    return 0 if ok else 1


def cmd_present(args) -> int:
    from .pipeline import q3_stage, reorganize_q3, run_pipeline
    from .presentation import raw_presentation, render_presentation

    if args.stage == "abcd":
        if args.q != 3:
            raise DomainError("stage abcd exists only for q = 3")
        pr, log = reorganize_q3(args.p), None
    elif args.stage == "raw" and not args.log:
        pr, log = raw_presentation(args.p, args.q), None
    else:
        if args.stage == "q3":
            if args.q != 3:
                raise DomainError("stage q3 exists only for q = 3")
            pr, eng = q3_stage(args.p)
        else:
            res = run_pipeline(args.p, args.q)
            pr, eng = res.stages[args.stage], res.engine
        log = eng.serialize()
    text = render_presentation(pr)
    if args.log and log is not None:
        with open(args.log, "w") as fh:
            fh.write(log)
    obj = {"p": args.p, "q": args.q, "stage": args.stage, "hash": pr.hash(),
           "generators": [str(g) for g in pr.generators], "relators": text.splitlines()[1:],
           "labels": [[f, list(i)] for f, i in pr.labels]}
    _emit(args, obj, text)
    return 0


def cmd_replay(args) -> int:
    from .tietze import replay

    with open(args.log) as fh:
        r = replay(fh.read())
    obj = {"ok": r.ok, "moves": r.moves, "hash": r.final.hash(), "message": r.message,
           "stages": [{"stage": s, "hash": h, "ok": ok} for s, h, ok in r.stages]}
    _emit(args, obj, f"replayed {r.moves} moves: {'OK' if r.ok else 'FAILED ' + r.message}  "
                     f"final hash {r.final.hash()}\n")
    return 0 if r.ok else 1


def cmd_hnn(args) -> int:
    from .hnn import build_S, verify_theorem
    from .raag import export_edges

    if args.action == "verify":
        r = verify_theorem(args.p)
        obj = r.to_dict()
        text = "".join(f"  {k}: {'ok' if v else 'FAIL'}\n" for k, v in r.verdicts.items())
        text = f"H_{args.p}: {'PASS' if r.passed else 'FAIL'}\n" + text + r.note + "\n"
        _emit(args, obj, text)
        return 0 if r.passed else 1
    bd = build_S(args.p)
    g = {"S": bd.S, "X": bd.S.induced(bd.X), "Y": bd.S.induced(bd.Y)}[args.graph]
    out = export_edges(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def cmd_report(args) -> int:
    from .report import GRID_SET, report_all, report_grid

    if args.all:
        dicts = report_grid(GRID_SET)
        ok = all(d["pass"] for d in dicts)
        text = "".join(f"({d['p']},{d['q']}): {'PASS' if d['pass'] else 'FAIL'}\n" for d in dicts)
        _emit(args, {"reports": dicts, "pass": ok}, text)
        return 0 if ok else 1
    if args.p is None or args.q is None:
        raise DomainError("report needs --p and --q, or --all")
    r = report_all(args.p, args.q)
    _emit(args, r.to_dict(timings=args.timings), r.to_text())
    return 0 if r.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="squarebraid", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_q=True, q_default=None):
        p.add_argument("--p", type=int, required=True)
        if need_q:
            p.add_argument("--q", type=int, required=q_default is None, default=q_default)
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--output")

    s = sub.add_parser("complex", help="f-vector of the cube complex")
    common(s)
    s.add_argument("--n", type=int)
    s.set_defaults(fn=cmd_complex)

    s = sub.add_parser("homology", help="integer homology")
    common(s)
    s.add_argument("--n", type=int)
    s.add_argument("--backend", choices=("compiled", "python"))
    s.set_defaults(fn=cmd_homology)

    s = sub.add_parser("morse", help="critical-cell census")
    common(s)
    s.add_argument("--tree", help="kind:corner, e.g. comb:ll")
    s.add_argument("--search-tree", action="store_true")
    s.set_defaults(fn=cmd_morse)

    s = sub.add_parser("present", help="presentation at a pipeline stage")
    common(s)
    s.add_argument("--stage", choices=STAGE_CHOICES, default="final")
    s.add_argument("--log", help="write the move log here")
    s.set_defaults(fn=cmd_present)

    s = sub.add_parser("replay", help="re-check a move log")
    s.add_argument("--log", required=True)
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.add_argument("--output")
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("hnn", help="HNN structure for q = 3")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("action", choices=("verify", "export"))
    s.add_argument("--graph", choices=("S", "X", "Y"), default="S")
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.add_argument("--output")
    s.set_defaults(fn=cmd_hnn)

    s = sub.add_parser("report", help="all checks for one grid or the whole grid set")
    s.add_argument("--p", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--all", action="store_true")
    s.add_argument("--timings", action="store_true")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--output")
    s.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except UnsoundMove as e:
        print(f"unsound move: {e} (after {len(e.log)} moves)", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
