"""Command line interface.

Subcommands: ``reduce``, ``project``, ``truncate``, ``eq``, ``legal``,
``bands``, ``cert verify``, ``construct``.  Verdict-producing commands print
a JSON verdict and exit 0 for Yes, 1 for No, 2 for Unknown; word-producing
commands print DSL text and exit 0.  Usage errors exit 64, parse and data
errors 65, words rejected by the restrictedness gate 66.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions as cs
from . import deciders as dc
from .arches import reduced_form
from .bands import build_band_system, class_count_bound, render_svg
from .dsl import parse_word, print_word
from .errors import (NotRestricted, ParseError, UnificationInconclusive,
                     WildWordsError)
from .serialize import (bandspec_from_json, certificate_from_json,
                        context_by_name, verdict_to_json)
from .words import DEFAULT_BOUND, Name, check_restricted, project, truncate, unknown

EX_OK = 0
EX_NO = 1
EX_UNKNOWN = 2
EX_USAGE = 64
EX_DATA = 65
EX_NOT_RESTRICTED = 66


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _diagnostic(kind, message, **extra):
    out = {"error": kind, "message": message}
    out.update(extra)
    print(json.dumps(out))


def _parse_gated(text: str, out_errors=True):
    """Parse and reject non-restricted words before any decider runs."""
    word = parse_word(text)
    verdict = check_restricted(word)
    if not verdict.is_yes:
        raise NotRestricted(verdict.witness)
    return word


def _verdict_exit(v) -> int:
    print(json.dumps(verdict_to_json(v)))
    if v.is_yes:
        return EX_OK
    if v.is_no:
        return EX_NO
    return EX_UNKNOWN


def _parse_names(text: str):
    names = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "[" in chunk:
            fam, rest = chunk.split("[", 1)
            idx = int(rest.rstrip("]"))
        else:
            fam = chunk.rstrip("0123456789")
            idx = int(chunk[len(fam):])
        names.append(Name(fam, idx))
    return names


def build_parser() -> _Parser:
    parser = _Parser(prog="wildwords",
                     description="countable-word computations over the "
                                 "Hawaiian-Earring and Griffiths-space alphabets")
    parser.add_argument("--budget", type=int, default=DEFAULT_BOUND,
                        help="certification bound for Unknown verdicts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduced form of a word")
    p.add_argument("word")

    p = sub.add_parser("project", help="projection onto finitely many letter names")
    p.add_argument("-F", "--letters", required=True,
                   help="comma separated names, e.g. p1,q2 or p[1],q[2]")
    p.add_argument("word")

    p = sub.add_parser("truncate", help="finite approximation up to an index")
    p.add_argument("-N", "--depth", type=int, required=True)
    p.add_argument("word")

    p = sub.add_parser("eq", help="equality in a target group")
    p.add_argument("--group", required=True, choices=["wp", "pi1y", "h1z", "h1y"])
    p.add_argument("word1")
    p.add_argument("word2")

    p = sub.add_parser("legal", help="legality check for the homology criteria")
    p.add_argument("--mode", required=True, choices=["p", "pq"])
    p.add_argument("word")

    p = sub.add_parser("bands", help="build a band system from a JSON description")
    p.add_argument("--spec", required=True, help="path to the JSON file, or - for stdin")
    p.add_argument("--svg", help="write a drawing to this file, or - for stdout")

    p = sub.add_parser("cert", help="certificate operations")
    p.add_argument("action", choices=["verify"])
    p.add_argument("file", help="certificate JSON file, or - for stdin")

    p = sub.add_parser("construct", help="generate a standard construction")
    con = p.add_subparsers(dest="what", required=True)
    c = con.add_parser("commutators", help="commutator word of a monotone function")
    c.add_argument("--space", required=True, choices=["z", "y"])
    c.add_argument("--prefix", default="", help="comma separated prefix values")
    c.add_argument("--tail", default="1,0", help="tail coefficient,offset")
    c = con.add_parser("limit", help="standard limit word")
    c.add_argument("--head", default="[p[i],q[i]]",
                   help="atom template over the variable i")
    c.add_argument("--start", type=int, default=1)
    c.add_argument("--exp", default="i+1", help="exponent rule over i")
    c = con.add_parser("witness", help="divisibility witness for the limit word")
    c.add_argument("-n", type=int, required=True)
    return parser


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _run(args) -> int:
    if args.command == "reduce":
        word = _parse_gated(args.word)
        print(print_word(reduced_form(word, budget=max(args.budget, DEFAULT_BOUND))))
        return EX_OK

    if args.command == "project":
        word = _parse_gated(args.word)
        names = _parse_names(args.letters)
        from .words import lit

        print(print_word(lit(project(word, names))))
        return EX_OK

    if args.command == "truncate":
        word = parse_word(args.word)
        from .words import lit

        print(print_word(lit(truncate(word, args.depth))))
        return EX_OK

    if args.command == "eq":
        u = _parse_gated(args.word1)
        v = _parse_gated(args.word2)
        if args.group == "wp":
            verdict = dc.eq_in_word_group(u, v, bound=args.budget)
        elif args.group == "pi1y":
            verdict = dc.eq_pi1_griffiths(u, v, budget=args.budget)
        elif args.group == "h1z":
            verdict = dc.eq_h1(u, v, "z", bound=args.budget)
        else:
            verdict = dc.eq_h1(u, v, "y", bound=args.budget)
        return _verdict_exit(verdict)

    if args.command == "legal":
        word = _parse_gated(args.word)
        report = dc.check_legal(word, args.mode, bound=args.budget)
        return _verdict_exit(report.verdict)

    if args.command == "bands":
        spec = bandspec_from_json(json.loads(_read_file(args.spec)))
        system = build_band_system(spec)
        leaves = system.leaves()
        classes = system.parallelity_classes().classes
        inv = system.surface_invariants()
        summary = {
            "letters": len(system.host),
            "bands": len(system.bands),
            "leaves": len(leaves),
            "closed_leaves": sum(1 for l in leaves if l.closed),
            "parallelity_classes": len(classes),
            "class_bound": class_count_bound(inv),
            "surface": {
                "genus": inv.genus,
                "boundary_components": inv.boundary_components,
                "distinguished_segments": inv.distinguished_segments,
                "euler_characteristic": inv.euler_characteristic,
            },
        }
        if args.svg:
            drawing = render_svg(system)
            if args.svg == "-":
                print(drawing)
            else:
                with open(args.svg, "w", encoding="utf-8") as fh:
                    fh.write(drawing)
                summary["svg"] = args.svg
        print(json.dumps(summary))
        return EX_OK

    if args.command == "cert":
        cert, ctx = certificate_from_json(json.loads(_read_file(args.file)))
        ok, why = dc.verify_certificate_detailed(cert, ctx, bound=args.budget)
        print(json.dumps({"verdict": "yes" if ok else "no",
                          "witness": why, "bound": None}))
        return EX_OK if ok else EX_NO

    if args.command == "construct":
        if args.what == "commutators":
            prefix = tuple(int(x) for x in args.prefix.split(",") if x.strip())
            coeff, offset = (int(x) for x in args.tail.split(","))
            fn = cs.MonotoneFunction(prefix, coeff, offset)
            print(print_word(cs.commutator_word(fn, args.space)))
            return EX_OK
        if args.what == "limit":
            body = f"limit i={args.start}..{{ {args.head} self^({args.exp}) }}"
            word = parse_word(body)
            print(print_word(word))
            return EX_OK
        if args.what == "witness":
            from .serialize import certificate_to_json

            word = cs.standard_limit_word()
            x, cert = cs.divisibility_witness(word, args.n)
            payload = {
                "word": print_word(word),
                "n": args.n,
                "root": print_word(x),
                "certificate": certificate_to_json(cert, dc.griffiths_h1()),
            }
            print(json.dumps(payload))
            return EX_OK
    raise AssertionError("unhandled command")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        return _run(args)
    except ParseError as exc:
        _diagnostic("parse", str(exc), line=exc.line, column=exc.column,
                    expected=str(exc.expected))
        return EX_DATA
    except NotRestricted as exc:
        _diagnostic("not_restricted", str(exc), letter=str(exc.witness))
        return EX_NOT_RESTRICTED
    except UnificationInconclusive as exc:
        print(json.dumps(verdict_to_json(unknown(exc.bound))))
        return EX_UNKNOWN
    except (WildWordsError, ValueError, OSError, json.JSONDecodeError) as exc:
        _diagnostic("data", str(exc))
        return EX_DATA


if __name__ == "__main__":
    raise SystemExit(main())
