"""Command-line front end.

Parses field declarations and algebraic expressions, dispatches to the
library, and emits machine-readable certificates.

Exit codes: 0 verdict/decomposition produced (and boolean verdicts true),
1 mathematical negative (verdict false, not in ν, ...), 2 usage or parse
error, 3 unsupported extension or degree overflow.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .decompose import decompose_top_nu, kernel_decompose
from .errors import (
    CharpError,
    DegreeOverflow,
    ParseError,
    UnsupportedExtension,
)
from .forms import dlog_symbol, is_exact, nu_member, standard_frame
from .gf import GaloisField
from .hypersurface import analyze_hypersurface, kernel_verify_instance
from .parser import (
    format_element,
    parse_element,
    parse_form,
    parse_hypersurface,
    parse_symbol,
)
from .rational import FieldContext

_DEFAULT_SEED = 20260501


def _parse_field_spec(spec, max_degree):
    parts = spec.split(",")
    opts = {}
    key = None
    for part in parts:
        if "=" in part:
            key, _, val = part.partition("=")
            key = key.strip()
            opts[key] = [val.strip()]
        elif key == "vars":
            opts["vars"].append(part.strip())
        else:
            raise ValueError(f"malformed field spec near {part!r}")
    p = int(opts.get("p", ["2"])[0])
    e = int(opts.get("e", ["1"])[0])
    modulus = None
    if "modulus" in opts:
        # digits of the e non-leading coefficients, low degree first
        modulus = tuple(int(ch) for ch in opts["modulus"][0])
    variables = opts.get("vars", ["x"])
    gf = GaloisField(p, e, modulus)
    return FieldContext(gf, tuple(v for v in variables if v), max_degree=max_degree)


def _form_json(form):
    return [
        {"tuple": list(s), "coeff": format_element(form.coeffs[s])}
        for s in sorted(form.coeffs)
    ]


def _symbols_json(symbols):
    return [[format_element(e) for e in sigma.entries] for sigma in symbols]


class _Exit(Exception):
    def __init__(self, code):
        self.code = code


def _run(args, out):
    ctx = _parse_field_spec(args.field, args.max_degree)
    frame = standard_frame(ctx)
    envelope = {
        "schema": 1,
        "status": "ok",
        "command": args.command,
        "field": {
            "p": ctx.gf.p,
            "e": ctx.gf.e,
            "vars": list(ctx.variables),
        },
        "seed": args.seed,
    }
    code = 0
    cmd = args.command

    if cmd == "is-exact":
        form = parse_form(_input_text(args.input), frame)
        verdict = is_exact(form)
        envelope["result"] = {"exact": verdict}
        code = 0 if verdict else 1
    elif cmd == "nu-member":
        form = parse_form(_input_text(args.input), frame)
        verdict = nu_member(form)
        envelope["result"] = {"nu_member": verdict}
        code = 0 if verdict else 1
    elif cmd == "dlog":
        sigma = parse_symbol(_input_text(args.input), ctx)
        form = dlog_symbol(sigma, frame)
        envelope["result"] = {"degree": form.degree, "form": _form_json(form)}
    elif cmd == "decompose-nu":
        form = parse_form(_input_text(args.input), frame)
        dec = decompose_top_nu(form)
        envelope["result"] = {
            "symbols": _symbols_json(dec.symbols),
            "extension_degree": dec.extension.d,
        }
    elif cmd == "kernel-decompose":
        form = parse_form(_input_text(args.input), frame)
        a_elts = [parse_element(t, ctx) for t in args.wedge.split(";")]
        dec = kernel_decompose(form, a_elts)
        envelope["result"] = {
            "symbols": _symbols_json(dec.symbols),
            "extension_degree": dec.extension.d,
            "wedge": [format_element(a) for a in a_elts],
        }
    elif cmd == "hypersurface":
        f = parse_hypersurface(_input_text(args.input), ctx)
        analysis = analyze_hypersurface(f)
        if args.subcommand == "analyze":
            envelope["result"] = {
                "geom_nonreduced": analysis.geom_nonreduced,
                "n": analysis.n,
                "gens": [format_element(g) for g in analysis.norm_gens],
                "function_field": analysis.fx is not None,
                "pbasis": list(analysis.fx.pbasis_names) if analysis.fx else None,
            }
        else:  # kernel-check
            report = kernel_verify_instance(
                analysis, args.m, args.trials, seed=args.seed
            )
            envelope["result"] = {
                "m": report.m,
                "n": report.n,
                "trials": report.trials,
                "predicate_true_zero": report.predicate_true_zero,
                "predicate_false_nonzero": report.predicate_false_nonzero,
                "predicate_false_skipped": report.predicate_false_skipped,
                "wedge_zero": report.wedge_zero,
                "violations": [str(v) for v in report.violations],
                "ok": report.ok,
            }
            code = 0 if report.ok else 1
    elif cmd == "selftest":
        envelope["result"] = _selftest(args.seed)
        code = 0 if envelope["result"]["ok"] else 1
    else:
        raise ValueError(f"unknown command {cmd!r}")
    envelope["exit"] = code
    _emit(envelope, args, out)
    return code


def _input_text(text):
    if text == "-":
        return sys.stdin.read()
    return text


def _selftest(seed):
    rng = random.Random(seed)
    from .forms import DifferentialForm, PureSymbol, artin_schreier, differential
    from .rational import random_element

    gf = GaloisField(2, 1)
    ctx = FieldContext(gf, ("x", "y"))
    frame = standard_frame(ctx)
    checks = {}
    # d∘d = 0 on random 0-forms
    ok = True
    for _ in range(5):
        a = random_element(ctx, rng, max_degree=2)
        u = DifferentialForm(frame, 0, {(): a})
        if not differential(differential(u)).is_zero():
            ok = False
    checks["d_squared_zero"] = ok
    # ℘(dlog σ) is exact
    ok = True
    for _ in range(5):
        entries = []
        while len(entries) < 2:
            e = random_element(ctx, rng, max_degree=1)
            if not e.is_zero():
                entries.append(e)
        w = dlog_symbol(PureSymbol(tuple(entries)), frame)
        if not w.is_zero() and not is_exact(artin_schreier(w)):
            ok = False
    checks["artin_schreier_exact"] = ok
    # decomposition round-trip
    x = ctx.var("x")
    u = DifferentialForm(frame, 1, {(0,): x / (x + 1)})
    sub = frame.with_active((0,), frozenset({1}))
    usub = DifferentialForm(sub, 1, {(0,): x / (x + 1)})
    dec = decompose_top_nu(usub)
    total = sub.zero_form(1)
    for sigma in dec.symbols:
        total = total + dlog_symbol(sigma, sub)
    checks["decompose_roundtrip"] = total == usub
    # hypersurface pipeline
    f = parse_hypersurface("T1^2 + x*T2^2 + y", ctx)
    analysis = analyze_hypersurface(f)
    checks["hypersurface_n"] = analysis.n == 2
    checks["ok"] = all(checks.values())
    return checks


def _emit(envelope, args, out):
    if args.json:
        out.write(json.dumps(envelope, sort_keys=True, separators=(",", ":")))
        out.write("\n")
        return
    result = envelope.get("result", {})
    out.write(f"status: {envelope['status']}\n")
    for key in sorted(result):
        out.write(f"{key}: {result[key]}\n")


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="charpforms",
        description="Exact differential forms and mod-p symbol decompositions "
        "over rational function fields of characteristic p.",
    )
    ap.add_argument(
        "--field",
        default="p=2,e=1,vars=x",
        help="field spec: p=<p>,e=<e>,vars=<csv>[,modulus=<digits low-first>]",
    )
    ap.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--max-degree", type=int, default=512)
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("is-exact", "nu-member", "dlog", "decompose-nu"):
        sp = sub.add_parser(name)
        sp.add_argument("input", help="expression ('-' reads stdin)")
    sp = sub.add_parser("kernel-decompose")
    sp.add_argument("input")
    sp.add_argument(
        "--wedge",
        required=True,
        help="semicolon-separated distinguished elements a_1;...;a_n",
    )
    sp = sub.add_parser("hypersurface")
    sp.add_argument("subcommand", choices=("analyze", "kernel-check"))
    sp.add_argument("input")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--trials", type=int, default=20)
    sub.add_parser("selftest")
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_arg_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else 0
    try:
        return _run(args, out)
    except ParseError as exc:
        _emit_error(args, out, "parse", str(exc))
        return 2
    except (UnsupportedExtension, DegreeOverflow) as exc:
        _emit_error(args, out, "unsupported", str(exc))
        return 3
    except CharpError as exc:
        _emit_error(args, out, "negative", str(exc))
        return 1
    except ValueError as exc:
        _emit_error(args, out, "usage", str(exc))
        return 2


def _emit_error(args, out, kind, message):
    envelope = {
        "schema": 1,
        "status": "error",
        "kind": kind,
        "message": message,
        "command": getattr(args, "command", None),
        "seed": getattr(args, "seed", None),
    }
    if getattr(args, "json", False):
        out.write(json.dumps(envelope, sort_keys=True, separators=(",", ":")))
        out.write("\n")
    else:
        out.write(f"error ({kind}): {message}\n")


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
