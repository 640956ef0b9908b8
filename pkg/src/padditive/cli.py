"""Command line front end.

    padditive classify --field 'F3(t)' 'X1 + X1^3 + (t)*X2^3'
    padditive standard --field 'F2(t)'
    padditive reduce --cert 'X1^2 + X2^2 + X1' | padditive check-cert

Every command prints ``key: value`` lines in a fixed order.  Exit status is
2 for parse errors, 3 for unmet preconditions and 4 for internal invariant
failures.
"""
from __future__ import annotations

import argparse
import re
import sys

from . import __version__
from .canon import canonical_form
from .certs import Document, check_document, fmt_functional, fmt_log_entry
from .errors import InvariantError, ParseError, PreconditionError
from .parse import parse_field, parse_poly, parse_ppoly, parse_ratfunc, render_poly
from .reduce import normalize_system, reduce_ppoly
from .residue import check_witness, h1_witness
from .universal import (classify, complete_to_universal, find_VPL_change_of_vars,
                        inconsistency_functional, is_universal, standard_V, standard_P,
                        ubiquity_embed, weil_restrict_alpha_p, weil_restrict_gm_quotient)

EXIT_PARSE, EXIT_PRECONDITION, EXIT_INVARIANT = 2, 3, 4

_VAR_RE = re.compile(r"X(\d+)")


def _first_and_arity(texts, nvars=None):
    idx = [int(m) for t in texts for m in _VAR_RE.findall(t)]
    first = 0 if 0 in idx else 1
    top = max(idx, default=first) - first + 1
    return first, max(top, nvars or 0)


def _parse_system(texts, ctx, nvars=None):
    first, n = _first_and_arity(texts, nvars)
    return [parse_ppoly(t, ctx, nvars=n, first=first)[0] for t in texts], first, n


def _header(doc, args, ctx, first):
    doc.add("command", args.command)
    doc.add("tool", f"padditive {__version__}")
    doc.add("field", ctx.spec())
    doc.add("seed", args.seed)
    doc.add("first", first)


def _subst_lines(doc, key, s, first):
    doc.many(key, [c.render(first) for c in s.components])
    if s.inverse is not None:
        doc.many(key + "_inverse", [c.render(first) for c in s.inverse.components])


def _inputs(args, need=None):
    items = list(args.exprs)
    if not items:
        items = [ln.strip() for ln in sys.stdin.read().splitlines() if ln.strip()]
    if need is not None and len(items) != need:
        raise PreconditionError(f"{args.command} takes {need} input(s), got {len(items)}")
    if not items and need != 0:
        raise PreconditionError(f"{args.command} needs at least one input")
    return items


# ---------------------------------------------------------------- commands

def cmd_reduce(args, ctx):
    (text,) = _inputs(args, 1)
    (F,), first, n = _parse_system([text], ctx)
    res = reduce_ppoly(F)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", F.render(first))
    doc.add("output", res.F.render(first))
    doc.add("steps", len(res.transcript.steps))
    doc.add("active", ", ".join(f"X{i + first}" for i in res.active) or "none")
    if args.cert:
        _subst_lines(doc, "cert.sigma", res.sigma, first)
        for k, st in enumerate(res.transcript.steps, 1):
            doc.add(f"cert.step[{k}]", fmt_log_entry(("REDUCE", st.i0, st.r), first))
    return doc


def cmd_normalize(args, ctx):
    texts = _inputs(args)
    eqs, first, n = _parse_system(texts, ctx, args.nvars)
    res = normalize_system(eqs, n, ctx)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("nvars", n)
    doc.many("input", [e.render(first) for e in eqs])
    doc.many("equation", [e.render(first) for e in res.equations])
    if args.cert:
        doc.many("cert.log", [fmt_log_entry(e, first) for e in res.log])
        _subst_lines(doc, "cert.sigma", res.sigma, first)
    return doc


def cmd_classify(args, ctx):
    (text,) = _inputs(args, 1)
    (F,), first, n = _parse_system([text], ctx)
    c = classify(F)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", F.render(first))
    for k, v in c.fields():
        if k == "reduced_form":
            v = c.reduced_form.render(first)
        elif k == "principal_zero" and c.principal_zero is not None:
            v = "(" + ", ".join(str(x) for x in c.principal_zero) + ")"
        doc.add(k, v)
    if args.cert:
        if not c.reduced:
            _subst_lines(doc, "cert.sigma", reduce_ppoly(F).sigma, first)
        v = is_universal(F.principal_part())
        doc.add("cert.universal_form", v.reduced_form.render(first))
        if v.sigma is not None:
            _subst_lines(doc, "cert.universal_sigma", v.sigma, first)
        if not v.universal:
            y, H = inconsistency_functional(v.reduced_form, v.witness)
            doc.add("cert.unrepresented", v.witness)
            doc.add("cert.functional", fmt_functional(y, H.rows))
    return doc


def cmd_complete(args, ctx):
    (text,) = _inputs(args, 1)
    (P,), first, n = _parse_system([text], ctx)
    comp = complete_to_universal(P)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", P.render(first))
    doc.add("output", comp.total.render(first))
    doc.add("steps", comp.steps)
    doc.many("added", [str(a) for a in comp.added])
    return doc


def cmd_embed(args, ctx):
    (text,) = _inputs(args, 1)
    (F,), first, n = _parse_system([text], ctx)
    u = ubiquity_embed(F)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", F.render(first))
    doc.add("output", u.W.render(first))
    doc.add("projection", ", ".join(f"X{i + first}" for i in u.projection) or "none")
    doc.add("permawound", str(classify(u.W).permawound).lower())
    return doc


def cmd_canon(args, ctx):
    ftext, gtext = _inputs(args, 2)
    (F,), first, n = _parse_system([ftext], ctx)
    g, nY = parse_poly(gtext, ctx, args.nY)
    cf = canonical_form(g, F, nY, seed=args.seed)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", F.render(first))
    doc.add("nY", nY)
    doc.add("g", render_poly(g))
    doc.add("h", render_poly(cf.h))
    doc.many("preimage", [render_poly(x) for x in cf.preimage])
    return doc


def cmd_solve(args, ctx):
    ftext, atext = _inputs(args, 2)
    (F,), first, n = _parse_system([ftext], ctx)
    a = parse_ratfunc(atext, ctx)
    doc = Document()
    _header(doc, args, ctx, first)
    doc.add("input", F.render(first))
    doc.add("target", a)
    from .universal import represent
    try:
        x = represent(F, a)
    except PreconditionError:
        if not F.is_monogeneous():
            raise
        x = None
    if x is not None:
        doc.add("represented", "true")
        doc.many("x", [str(v) for v in x])
    else:
        doc.add("represented", "false")
        if args.cert:
            y, H = inconsistency_functional(F, a)
            doc.add("cert.functional", fmt_functional(y, H.rows))
    return doc


def cmd_witness(args, ctx):
    _inputs(args, 0) if args.exprs else None
    consts = [int(c) for c in args.constants.split(",")] if args.constants else None
    wit = h1_witness(ctx.F, ctx.r, consts)
    doc = Document()
    _header(doc, args, wit.ctx, 0)
    doc.add("constants", ", ".join(wit.ctx.F.render(c) for c in wit.constants))
    doc.add("equation", wit.F.render(0))
    doc.add("beta", wit.ctx.F.render(wit.beta))
    doc.add("w", wit.w.render(wit.ctx.names))
    doc.add("claim", wit.claim)
    if args.samples:
        rep = check_witness(wit, args.samples, args.seed)
        doc.add("samples", rep.samples)
        doc.add("samples_in_image", rep.passed)
        doc.add("formula_matches", rep.formula_matches)
    if args.cert:
        doc.add("cert.beta", wit.beta)
    return doc


def cmd_standard(args, ctx):
    kind = args.kind
    doc = Document()
    _header(doc, args, ctx, 0)
    doc.add("kind", kind)
    if kind == "V":
        g = standard_V(ctx)
        doc.add("presentation", g.display())
        doc.add("equation[1]", g.equation.render(0))
    elif kind == "alpha-p":
        blocks = weil_restrict_alpha_p(ctx, args.level)
        doc.add("level", args.level)
        doc.add("blocks", len(blocks))
        for k, b in enumerate(blocks, 1):
            doc.add(f"variables[{k}]", ", ".join(f"X{v}" for v in b.params["variables"]))
            doc.add(f"equation[{k}]", b.equation.render(0))
    elif kind == "gm-quotient":
        g = weil_restrict_gm_quotient(ctx)
        doc.add("presentation", g.display())
        doc.add("equation[1]", g.equation.render(0))
    elif kind == "vpl-change":
        P = standard_P(ctx)
        texts = _inputs(args, 2)
        L1, L2 = (parse_ppoly(t, ctx, nvars=P.nvars, first=0)[0] for t in texts)
        r = find_VPL_change_of_vars(P, L1, L2, args.max_const_ext)
        doc.add("L1", L1.render(0))
        doc.add("L2", L2.render(0))
        doc.add("found", str(r.found).lower())
        if r.found:
            doc.add("over", r.ctx.spec())
            doc.add("c", r.c)
            doc.many("sigma", [c.render(0) for c in r.sigma.components])
        else:
            doc.add("reason", r.reason)
    return doc


def cmd_check(args, ctx):
    text = open(args.exprs[0]).read() if args.exprs else sys.stdin.read()
    res = check_document(text)
    doc = Document()
    doc.add("command", "check-cert")
    doc.add("checked", res.command)
    for name, ok in res.checks:
        doc.add("check", f"{'pass' if ok else 'FAIL'} {name}")
    doc.add("valid", str(res.ok).lower())
    return doc


COMMANDS = {
    "reduce": cmd_reduce, "normalize": cmd_normalize, "classify": cmd_classify,
    "complete": cmd_complete, "embed": cmd_embed, "canon": cmd_canon,
    "solve": cmd_solve, "witness": cmd_witness, "standard": cmd_standard,
    "check-cert": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padditive",
                                 description="p-polynomials over F_q(t_1..t_r)")
    ap.add_argument("--version", action="version", version=f"padditive {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("exprs", nargs="*", help="inputs (default: one per stdin line)")
        sp.add_argument("--field", default="F2(t)", help="field spec, e.g. 'F3(t)'")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cert", action="store_true", help="emit a certificate block")
        sp.add_argument("--max-const-ext", type=int, default=2,
                        help="largest constant field extension degree to search")
        if name == "normalize":
            sp.add_argument("--nvars", type=int, default=None)
        if name == "canon":
            sp.add_argument("--nY", type=int, default=None)
        if name == "witness":
            sp.add_argument("--constants", default=None, help="c_1,..,c_r as F_q codes")
            sp.add_argument("--samples", type=int, default=0)
        if name == "standard":
            sp.add_argument("--kind", default="V",
                            choices=["V", "alpha-p", "gm-quotient", "vpl-change"])
            sp.add_argument("--level", type=int, default=1)
    return ap


def run(argv=None) -> tuple[int, str]:
    """(exit status, stdout text); errors go to stderr."""
    args = build_parser().parse_args(argv)
    try:
        ctx = parse_field(args.field)
        doc = COMMANDS[args.command](args, ctx)
        return 0, doc.render()
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE, ""
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION, ""
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT, ""


def main(argv=None) -> int:
    code, out = run(argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
