"""``palkit`` command line: parse, check, valid, consequence, scenario, dot.

Exit status: 0 passed or valid, 1 countermodel or failed check, 2 usage,
parse or load error, 3 search cap or time cap reached.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import formula as F
from . import scenarios as S
from .checker import (Countermodel, Inconclusive, Mode, SearchBounds, ValidUpTo,
                      bounded_consequence, bounded_valid, bounded_valid_lazy)
from .errors import CapExceeded, PalError
from .kripke import FrameClass, load_model, model_to_doc, to_dot
from .semantics import eval_direct, extension

OK, FAIL, USAGE, CAP = 0, 1, 2, 3

SCENARIOS = ("wisemen3", "wisemen4", "wisemen3-axiomatic", "axioms", "substitution", "concrete-demo")


class _UsageError(Exception):
    pass


def _split(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror}") from None


def _formula(args):
    text = _read(args.formula_file) if args.formula_file else args.formula
    if text is None:
        raise _UsageError("a formula argument or --formula-file is required")
    return F.parse(text.strip())


def _bounds(args, formulas, default_agents=("a",)):
    agents = _split(args.agents) if args.agents else None
    props = _split(args.props) if args.props else None
    if agents is None:
        found = []
        for f in formulas:
            found += [a for a in F.agents_of(f) if a not in found]
        agents = tuple(found) or default_agents
    if props is None:
        found = []
        for f in formulas:
            found += [p for p in F.atoms_of(f) if p not in found]
        props = tuple(found)
    return SearchBounds(args.max_worlds, FrameClass(args.frame), agents, props,
                        args.model_cap, args.time_cap)


def _emit(args, doc, text):
    if args.format == "doc":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(text)


def _worlds(n):
    return f"{n} world" if n == 1 else f"{n} worlds"


def _verdict_text(v):
    if isinstance(v, ValidUpTo):
        return (f"valid up to {v.worlds_checked} worlds "
                f"({v.models_checked} models, {v.elapsed:.3f} s)")
    if isinstance(v, Inconclusive):
        return f"inconclusive: {v.reason} after {v.models_checked} models"
    m = v.model
    lines = [f"countermodel with {_worlds(m.n)}, fails at {m.labels[v.world]}"
             f" (model {v.models_checked}, {v.elapsed:.3f} s)"]
    if v.domain is not None:
        lines.append("domain: {" + ", ".join(m.labels_of(v.domain)) + "}")
    lines.append(json.dumps(model_to_doc(m), indent=2))
    for name, den in sorted(v.env.items()):
        lines.append(f"?{name} =")
        lines += ["  " + ln for ln in den.listing(m.labels)]
    return "\n".join(lines)


def _verdict_code(v):
    if isinstance(v, ValidUpTo):
        return OK
    if isinstance(v, Countermodel):
        return FAIL
    return CAP


def cmd_parse(args):
    f = _formula(args)
    doc = {"text": F.to_text(f), "size": F.size(f), "depth": F.depth(f),
           "agents": F.agents_of(f), "atoms": F.atoms_of(f), "schematics": F.schematics_of(f)}
    _emit(args, doc, doc["text"])
    return OK


def cmd_check(args):
    m = load_model(_read(args.model))
    f = _formula(args)
    if args.world is not None:
        value = eval_direct(m, f, args.world)
        _emit(args, {"formula": F.to_text(f), "world": args.world, "value": value},
              "true" if value else "false")
        return OK if value else FAIL
    ext = m.labels_of(extension(m, f))
    valid = len(ext) == m.n
    _emit(args, {"formula": F.to_text(f), "valid": valid, "extension": ext},
          f"{'valid' if valid else 'not valid'} in model; true at {{{', '.join(ext)}}}")
    return OK if valid else FAIL


def cmd_valid(args):
    f = _formula(args)
    b = _bounds(args, [f])
    mode = Mode(args.mode)
    if args.lazy:
        v = bounded_valid_lazy(f, b, mode)
    else:
        v = bounded_valid(f, b, mode, args.jobs)
    _emit(args, v.to_doc(b), _verdict_text(v))
    return _verdict_code(v)


def cmd_consequence(args):
    f = _formula(args)
    premises = [F.parse(p) for p in args.premise]
    b = _bounds(args, premises + [f])
    v = bounded_consequence(premises, f, b, Mode(args.mode), args.jobs)
    _emit(args, v.to_doc(b), _verdict_text(v))
    return _verdict_code(v)


def cmd_dot(args):
    sys.stdout.write(to_dot(load_model(_read(args.model))))
    return OK


def _report(args, report):
    _emit(args, report.to_doc(), report.table())
    if any(isinstance(e.verdict, Inconclusive) for e in report.entries):
        return CAP
    return OK if report.ok else FAIL


def cmd_scenario(args):
    name = args.name
    b = SearchBounds(args.max_worlds, model_cap=args.model_cap, time_cap=args.time_cap)
    if name in ("wisemen3", "wisemen4"):
        n = int(name[-1])
        run = S.run_wise_men(n, args.disjunctive)
        doc = {"scenario": name, "holds": run.holds, "trace": run.trace,
               "survivors": run.survivors, "formula": F.to_text(run.formula)}
        text = (f"{'true' if run.holds else 'false'}: {F.to_text(run.formula)}\n"
                f"worlds after each announcement: {' -> '.join(map(str, run.trace))}\n"
                f"survivors: {', '.join(run.survivors)}")
        _emit(args, doc, text)
        return OK if run.holds else FAIL
    if name == "concrete-demo":
        value = S.concrete_model_demo()
        _emit(args, {"scenario": name, "formula": S.CONCRETE_FORMULA, "world": "w1", "value": value},
              f"{'true' if value else 'false'}: {S.CONCRETE_FORMULA} at w1")
        return OK if value else FAIL
    if name == "wisemen3-axiomatic":
        return _report(args, S.wise_men_axiomatic_report(b, args.jobs))
    if name == "axioms":
        return _report(args, S.axiom_suite(b, schematic=args.schematic, jobs=args.jobs))
    return _report(args, S.substitution_suite(b))


def _shared(p, search=True):
    p.add_argument("--format", choices=("text", "doc"), default="text")
    if not search:
        return
    p.add_argument("--frame", choices=("k", "s5"), default="s5")
    p.add_argument("--agents", help="comma separated; default: agents of the formulas, else a")
    p.add_argument("--props", help="comma separated; default: atoms of the formulas")
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--mode", choices=("direct", "pvalid", "tvalid"), default="direct")
    p.add_argument("--model-cap", type=int, default=10 ** 7)
    p.add_argument("--time-cap", type=float, default=None, help="seconds")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (PALKIT_JOBS overrides)")


def _formula_args(p):
    p.add_argument("formula", nargs="?")
    p.add_argument("--formula-file")


def build_parser():
    ap = argparse.ArgumentParser(prog="palkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    _formula_args(p)
    _shared(p, search=False)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("check", help="evaluate a formula in a model file")
    p.add_argument("model")
    p.add_argument("rest", nargs="*", metavar="FORMULA [WORLD]")
    p.add_argument("--formula-file")
    _shared(p, search=False)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("valid", help="bounded validity search")
    _formula_args(p)
    p.add_argument("--lazy", action="store_true",
                   help="branch only on denotation entries the evaluation reads")
    _shared(p)
    p.set_defaults(fn=cmd_valid)

    p = sub.add_parser("consequence", help="bounded global consequence")
    _formula_args(p)
    p.add_argument("--premise", action="append", default=[], metavar="FORMULA")
    _shared(p)
    p.set_defaults(fn=cmd_consequence)

    p = sub.add_parser("scenario", help="run a built-in scenario")
    p.add_argument("name", choices=SCENARIOS)
    p.add_argument("--schematic", action="store_true", help="axioms: schematic variables")
    p.add_argument("--disjunctive", action="store_true",
                   help="wisemen: announce ~(K ws | K ~ws) instead of ~K ws")
    _shared(p)
    p.set_defaults(fn=cmd_scenario)

    p = sub.add_parser("dot", help="render a model file as Graphviz DOT")
    p.add_argument("model")
    _shared(p, search=False)
    p.set_defaults(fn=cmd_dot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    if args.command == "check":
        # positionals may be split around --formula-file
        rest = args.rest + extra
        if any(x.startswith("--") for x in extra):
            ap.error("unrecognized arguments: " + " ".join(extra))
        if not args.formula_file:
            if not rest:
                ap.error("check needs a formula (or --formula-file)")
            args.formula, rest = rest[0], rest[1:]
        else:
            args.formula = None
        if len(rest) > 1:
            ap.error("unrecognized arguments: " + " ".join(rest[1:]))
        args.world = rest[0] if rest else None
    elif extra:
        ap.error("unrecognized arguments: " + " ".join(extra))
    try:
        return args.fn(args)
    except CapExceeded as e:
        hint = " (try --lazy or fewer --max-worlds)" if args.command == "valid" else ""
        print(f"palkit: {e}{hint}", file=sys.stderr)
        return CAP
    except (PalError, _UsageError, ValueError, IndexError) as e:
        print(f"palkit: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
