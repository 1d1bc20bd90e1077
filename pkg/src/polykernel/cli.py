"""Batch command-line interface: check, normalize, compare, evaluate,
refute, and run the bundled suite."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import countermodel as cm
from . import model
from . import surface
from . import terms as T
from .corpus import Corpus, load_corpus
from .errors import KernelError
from .weca import Eraser, Verdict, config_named, normalize, print_uterm

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_fuel():
    env = os.environ.get("POLYKERNEL_FUEL")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return None


def build_parser():
    p = _Parser(prog="polykernel", description=__doc__)
    p.add_argument("--fuel", type=int, default=None, help="reduction step budget")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="typecheck declaration files")
    c.add_argument("files", nargs="+")
    c.add_argument("--ext", nargs="*", default=None,
                   help="extension names to force on (sigma id uip funext)")

    n = sub.add_parser("nf", help="erasure normal form of a term")
    n.add_argument("file", nargs="?", help="extra declarations to load")
    n.add_argument("--term", required=True)
    n.add_argument("--weca", default="beta", help="rewriting configuration")

    e = sub.add_parser("eq", help="Leibniz-equality validity of two terms")
    e.add_argument("lhs")
    e.add_argument("rhs")
    e.add_argument("--file", help="extra declarations to load")
    e.add_argument("--weca", default="beta")

    m = sub.add_parser("model-eval", help="inhabitation of a type in a model")
    m.add_argument("type")
    m.add_argument("--model", default="pi", choices=("pi", "generated"))

    r = sub.add_parser("refute", help="run one refutation certificate")
    r.add_argument("certificate")
    r.add_argument("--witness", default=None,
                   help="override the certificate's witness family")

    s = sub.add_parser("suite", help="run the refutation suite")
    s.add_argument("manifest", nargs="?", default=None)

    en = sub.add_parser("enumerate", help="bounded members of a type's polyset")
    en.add_argument("type")
    en.add_argument("--bound", type=int, default=9)
    en.add_argument("--model", default="generated", choices=("generated",))
    return p


def _load_extra(path, base):
    corpus = Corpus()
    corpus.env._defs = dict(base.env._defs)
    corpus.entries = dict(base.entries)
    with open(path, encoding="utf-8") as fh:
        corpus.load_source(fh.read(), name=path)
    return corpus


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_check(args, fuel):
    results = []
    ok = True
    for path in args.files:
        corpus = Corpus()
        try:
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
            if args.ext:
                source = "#ext %s\n%s" % (" ".join(args.ext), source)
            corpus.load_source(source, name=path)
            results.append({"file": path, "status": "ok",
                            "declarations": len(corpus.entries)})
        except (OSError, KernelError) as e:
            ok = False
            results.append({"file": path, "status": "error", "error": str(e)})
    _emit(args, {"id": "check", "results": results},
          ["%s: %s%s" % (r["file"], r["status"],
                         "" if r["status"] == "ok" else " — " + r["error"])
           for r in results])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_nf(args, fuel):
    base = load_corpus()
    corpus = _load_extra(args.file, base) if args.file else base
    config = config_named(args.weca)
    term = corpus.parse(args.term)
    checker = corpus.checker(fuel=fuel)
    checker.infer([], term)  # only well-typed terms have meaningful erasures
    nf = normalize(Eraser(checker).erase(term), config, fuel)
    _emit(args, {"id": "nf", "term": args.term, "weca": config.name,
                 "normal_form": print_uterm(nf)},
          [print_uterm(nf)])
    return EXIT_OK


def cmd_eq(args, fuel):
    base = load_corpus()
    corpus = _load_extra(args.file, base) if args.file else base
    config = config_named(args.weca)
    lhs, rhs = corpus.parse(args.lhs), corpus.parse(args.rhs)
    checker = corpus.checker(fuel=fuel)
    checker.infer([], lhs)
    checker.infer([], rhs)
    gm = model.GeneratedModel(checker, config, fuel)
    v = gm.leibniz_valid(lhs, rhs)
    _emit(args, {"id": "eq", "lhs": args.lhs, "rhs": args.rhs,
                 "weca": config.name, "verdict": v.value},
          [v.value])
    return {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_FAIL}.get(v, EXIT_UNKNOWN)


def cmd_model_eval(args, fuel):
    corpus = load_corpus()
    checker = corpus.checker(fuel=fuel)
    ty = corpus.parse(args.type)
    if args.model == "pi":
        v = model.pi_model_decide(checker, ty)
        word = {Verdict.YES: "Inhabited", Verdict.NO: "Empty"}[v]
    else:
        gm = model.GeneratedModel(checker, fuel=fuel)
        ev = gm.is_empty(ty)
        word = {Verdict.YES: "Empty", Verdict.NO: "Inhabited",
                Verdict.UNKNOWN: "Unknown"}[ev.verdict]
    _emit(args, {"id": "model-eval", "type": args.type, "model": args.model,
                 "verdict": word},
          ["%s" % word])
    return EXIT_UNKNOWN if word == "Unknown" else EXIT_OK


def cmd_refute(args, fuel):
    with open(args.certificate, encoding="utf-8") as fh:
        cert = json.load(fh)
    if args.witness:
        cert["witnesses"] = [{"family": args.witness}]
    check_id = cert.get("id")
    if check_id == "lem-5.9" or cert.get("witnesses"):
        report = cm.check_no_induction(cert=cert, fuel=args.fuel)
    elif check_id in cm.CHECKS:
        report = cm.CHECKS[check_id](fuel=fuel)
    else:
        raise KernelError("certificate names no known check: %r" % check_id)
    _emit(args, report.to_json(), _report_lines(report))
    return _report_exit([report])


def cmd_suite(args, fuel):
    reports = cm.run_suite(args.manifest, fuel=args.fuel)
    lines = []
    for r in reports:
        lines.extend(_report_lines(r))
    _emit(args, [r.to_json() for r in reports], lines)
    return _report_exit(reports)


def cmd_enumerate(args, fuel):
    corpus = load_corpus()
    checker = corpus.checker(fuel=fuel)
    ty = corpus.parse(args.type)
    gm = model.GeneratedModel(checker, fuel=fuel)
    members, unknowns = cm.enumerate_members(
        lambda e: gm.member(e, ty), args.bound
    )
    _emit(args, {"id": "enumerate", "type": args.type, "bound": args.bound,
                 "members": [print_uterm(m) for m in members],
                 "unknown": [print_uterm(u) for u in unknowns]},
          [print_uterm(m) for m in members]
          + (["-- membership unknown:"] + [print_uterm(u) for u in unknowns]
             if unknowns else []))
    return EXIT_OK


def _report_lines(report):
    lines = ["%s: %s (%.1f ms)" % (report.id, report.status, report.millis)]
    for o in report.obligations:
        mark = "ok" if o.ok else "MISMATCH"
        lines.append("  [%s] %s: expected %s, got %s" % (mark, o.name, o.expected, o.actual))
    for f in report.flags:
        lines.append("  flag: %s" % f)
    return lines


def _report_exit(reports):
    statuses = {r.status for r in reports}
    if "Failed" in statuses:
        return EXIT_FAIL
    if "Unknown" in statuses:
        return EXIT_UNKNOWN
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "nf": cmd_nf,
    "eq": cmd_eq,
    "model-eval": cmd_model_eval,
    "refute": cmd_refute,
    "suite": cmd_suite,
    "enumerate": cmd_enumerate,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else EXIT_USAGE
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    args.fuel = fuel
    if fuel is None:
        fuel = 100_000
    try:
        return _COMMANDS[args.cmd](args, fuel)
    except KernelError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
