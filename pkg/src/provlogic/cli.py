"""Command-line front end."""
from __future__ import annotations

import argparse
import sys

from .engine import Verdict, oracle_prove, oracle_refute
from .formula import ParseError, ResourceError, parse, subformulas, to_text
from .registry import (
    LogicId, Unsupported, classify_formula, decide, decide_pl, engine_route, reduction_trace,
)
from .translate import TranslationKind, translate

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_RESOURCE = 0, 1, 2, 3, 4
EXIT_PROVABLE, EXIT_REFUTED = 10, 11


def _decide_any(target: str, a, **kw):
    """`target` is a logic name or a PL(T,U) / Sigma1(T,U) triple."""
    if "(" in target:
        return decide_pl(target, a, **kw)
    return decide(LogicId.lookup(target), a, **kw)


def _cmd_decide(args, out):
    a = parse(args.formula)
    r = _decide_any(args.pl or args.logic, a, route=args.route, budget=args.budget)
    if args.quiet:
        return EXIT_PROVABLE if r.provable else EXIT_REFUTED if r.refuted else EXIT_FAIL
    out.write(r.verdict.value + "\n")
    if args.evidence:
        for line in r.trace:
            out.write(line + "\n")
        if r.countermodel is not None:
            out.write(r.countermodel.to_json())
    return EXIT_OK


def _cmd_translate(args, out):
    out.write(to_text(translate(parse(args.formula), args.kind)) + "\n")
    return EXIT_OK


def _cmd_classify(args, out):
    for logic, r in classify_formula(parse(args.formula)).items():
        out.write(f"{logic.value}\t{r.verdict.value}\n")
    return EXIT_OK


def _cmd_countermodel(args, out):
    r = _decide_any(args.logic, parse(args.formula))
    if r.countermodel is None:
        sys.stderr.write(f"{r.verdict.value}: no countermodel to export\n")
        return EXIT_FAIL
    cm = r.countermodel
    out.write(cm.to_json() if args.format == "json" else cm.to_dot())
    return EXIT_OK


def _cmd_trace(args, out):
    for f, pl, anchor in reduction_trace(args.pl, parse(args.formula)):
        out.write(f"{pl}\t{to_text(f)}\t{anchor}\n")
    return EXIT_OK


def _cmd_oracle(args, out):
    a = parse(args.formula)
    cfg, frame = engine_route(args.logic, a)
    r = decide(args.logic, a)
    ref = oracle_refute(frame, "force", a, args.max_nodes)
    prv = oracle_prove(cfg, a, subformulas(a), args.depth)
    ok = not (r.provable and ref.refuted) and not (r.refuted and prv.provable)
    out.write(f"engine\t{r.verdict.value}\n")
    out.write(f"oracle-refute\t{ref.verdict.value}\n")
    out.write(f"oracle-prove\t{prv.verdict.value}\n")
    out.write(f"consistent\t{'yes' if ok else 'no'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def read_corpus(path: str):
    """Rows of `logic<TAB>formula<TAB>expected`; blank lines and `#` comments are skipped."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{no}: expected 3 tab-separated fields")
            rows.append((no, *(p.strip() for p in parts)))
    return rows


def _cmd_corpus(args, out):
    bad = 0
    rows = read_corpus(args.path)
    for no, logic, text, expected in rows:
        r = _decide_any(logic, parse(text))
        got = r.verdict.value
        audit = r.countermodel.audit() if r.countermodel is not None else True
        ok = got == expected.upper() and audit
        bad += not ok
        out.write(f"{'ok' if ok else 'FAIL'}\t{logic}\t{text}\t{expected}\t{got}\n")
    out.write(f"{len(rows) - bad}/{len(rows)} passed\n")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="provlogic", description="Decide provability logics of HA, PA and their completions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide a formula in a logic or PL triple")
    who = p.add_mutually_exclusive_group(required=True)
    who.add_argument("--logic")
    who.add_argument("--pl", help="e.g. 'Sigma1(HA,N)' or 'PL(PA,HA)'")
    p.add_argument("formula")
    p.add_argument("--evidence", action="store_true", help="print the trace and any countermodel")
    p.add_argument("--quiet", action="store_true", help="no output; exit 10 provable, 11 refuted")
    p.add_argument("--route", choices=("semantic", "premise"), default="semantic")
    p.add_argument("--budget", type=int, default=1_000_000, help="tableau world budget")
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("translate", help="apply a syntactic translation")
    p.add_argument("--kind", required=True, choices=[k.value for k in TranslationKind])
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_translate)

    p = sub.add_parser("classify", help="decide across every supported logic")
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("countermodel", help="export a countermodel")
    p.add_argument("--logic", required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_countermodel)

    p = sub.add_parser("trace", help="reduction chain toward Sigma1(HA,N)")
    p.add_argument("--pl", required=True)
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_trace)

    p = sub.add_parser("oracle", help="cross-check the engine against brute-force oracles")
    p.add_argument("--logic", required=True)
    p.add_argument("--max-nodes", type=int, default=4)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("formula")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("corpus", help="run a TSV corpus of expected verdicts")
    p.add_argument("path")
    p.set_defaults(fn=_cmd_corpus)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except ParseError as e:
        sys.stderr.write(e.render() + "\n")
        return EXIT_PARSE
    except Unsupported as e:
        sys.stderr.write(f"unsupported: {e}\n")
        return EXIT_UNSUPPORTED
    except ResourceError as e:
        sys.stderr.write(f"resource limit: {e}\n")
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())
