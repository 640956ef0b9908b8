"""Text grammar for fields, rational functions and (p-)polynomials.

    field    := "F" INT [ "(" ident ("," ident)* ")" ]
    ppoly    := term (("+" | "-") term)*
    term     := [coeff "*"] VAR ["^" INT]
    coeff    := "(" ratfunc ")" | INT
    VAR      := "X" INT

Whitespace is ignored.  Exponents in p-polynomials must be powers of p.
Rational functions accept + - * / ^ (integer exponents, possibly negative),
parentheses, integers, the variable names of the field and, for non-prime
constant fields, ``g`` for the class of x in F_p[x]/(modulus).
"""
from __future__ import annotations

import functools
import re

import pyparsing as pp

from .errors import ParseError
from .funcfield import FieldCtx, RatFunc
from .gfq import GF, parse_field_size
from .ppoly import PPoly

pp.ParserElement.enable_packrat()

_FIELD_RE = re.compile(r"\s*F\s*(\d+)\s*(?:\((.*)\))?\s*$")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse_field(text: str) -> FieldCtx:
    """'F9(t,u)' -> F_9(t, u); 'F2' -> the perfect field F_2 (r = 0)."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError("malformed field spec (expected F<q>(t1,...,tr))", text, 0)
    try:
        p, e = parse_field_size(int(m.group(1)))
        F = GF(p, e)
    except ValueError as exc:
        raise ParseError(str(exc), text, m.start(1)) from None
    names = ()
    if m.group(2) is not None:
        names = tuple(s.strip() for s in m.group(2).split(","))
        if names == ("",):
            names = ()
        for n in names:
            if not _IDENT_RE.match(n):
                raise ParseError(f"bad variable name {n!r}", text, m.start(2))
            if n == "g" and e > 1:
                raise ParseError("'g' is reserved for the constant field generator", text, m.start(2))
            if re.fullmatch(r"[XYT]\d*", n):
                raise ParseError(f"variable name {n!r} clashes with polynomial variables",
                                 text, m.start(2))
        if len(set(names)) != len(names):
            raise ParseError("repeated variable name", text, m.start(2))
    return FieldCtx(F, names)


def _fold(toks):
    toks = list(toks)
    acc = toks[0]
    for op, val in zip(toks[1::2], toks[2::2]):
        if op == "+":
            acc = acc + val
        elif op == "-":
            acc = acc - val
        elif op == "*":
            acc = acc * val
        else:
            acc = acc / val
    return acc


@functools.lru_cache(maxsize=None)
def _grammars(ctx: FieldCtx, prefix: str):
    F = ctx.F
    names = {n: ctx.gen(i) for i, n in enumerate(ctx.names)}
    if F.e > 1:
        names["g"] = ctx.const(F.p)

    def name_action(s, loc, toks):
        v = names.get(toks[0])
        if v is None:
            raise pp.ParseFatalException(s, loc, f"unknown name {toks[0]!r}")
        return v

    def power_action(s, loc, toks):
        if len(toks) == 1:
            return toks[0]
        try:
            return toks[0] ** toks[1]
        except ZeroDivisionError:
            raise pp.ParseFatalException(s, loc, "negative power of zero") from None

    def div_fold(s, loc, toks):
        try:
            return _fold(toks)
        except ZeroDivisionError:
            raise pp.ParseFatalException(s, loc, "division by zero") from None

    LP, RP = pp.Suppress("("), pp.Suppress(")")
    integer = pp.Word(pp.nums).set_parse_action(lambda t: ctx.integer(int(t[0])))
    ident = pp.Word(pp.alphas + "_", pp.alphanums + "_").set_parse_action(name_action)
    sint = pp.Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
    expr = pp.Forward()
    atom = integer | ident | (LP + expr + RP)
    power = (atom + pp.Optional(pp.Suppress("^") + sint)).set_parse_action(power_action)
    unary = (pp.Optional(pp.Literal("-")) + power).set_parse_action(
        lambda t: -t[1] if len(t) == 2 else t[0])
    term = (unary + pp.ZeroOrMore(pp.one_of("* /") + unary)).set_parse_action(div_fold)
    expr <<= (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(div_fold)
    ratfunc = expr + pp.StringEnd()

    # p-polynomials and general polynomials in prefix-variables
    var = pp.Regex(prefix + r"(\d+)").set_parse_action(lambda t: int(t[0][len(prefix):]))
    coeff = (LP + expr + RP) | integer
    expo = pp.Suppress("^") + pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    pterm = pp.Group(pp.Optional(coeff + pp.Suppress("*"), default=None) + var
                     + pp.Optional(expo, default=1))
    sign = pp.one_of("+ -")
    ppoly = (pp.Optional(pp.Literal("-"), default="+") + pterm
             + pp.ZeroOrMore(sign + pterm) + pp.StringEnd())

    mono = pp.Group(var + pp.Optional(expo, default=1))
    gterm = (pp.Group(pp.Optional(coeff + pp.Suppress("*"), default=None)
                      + mono + pp.ZeroOrMore(pp.Suppress("*") + mono))
             | pp.Group(coeff))
    gpoly = (pp.Optional(pp.Literal("-"), default="+") + gterm
             + pp.ZeroOrMore(sign + gterm) + pp.StringEnd())
    return ratfunc, ppoly, gpoly


def _run(grammar, text):
    try:
        return grammar.parse_string(text, parse_all=True)
    except (pp.ParseException, pp.ParseFatalException) as exc:
        raise ParseError(exc.msg, text, exc.loc) from None


def parse_ratfunc(text: str, ctx: FieldCtx) -> RatFunc:
    return _run(_grammars(ctx, "X")[0], text)[0]


def _is_p_power(k, p):
    j = 0
    while k % p == 0:
        k //= p
        j += 1
    return k == 1, j


def parse_ppoly(text: str, ctx: FieldCtx, nvars: int | None = None,
                first: int | None = None, prefix: str = "X"):
    """Parse a p-polynomial.  Returns (PPoly, first).

    ``first`` is the number of the variable stored at index 0; by default 0
    if X0 occurs, else 1.  ``nvars`` defaults to the largest variable seen.
    """
    if text.strip() == "0":
        if nvars is None:
            raise ParseError("the zero p-polynomial needs an explicit arity", text, 0)
        return PPoly.zero(ctx, nvars), (1 if first is None else first)
    toks = list(_run(_grammars(ctx, prefix)[1], text))
    signs = toks[0::2]
    terms = toks[1::2]
    idx = [t[1] for t in terms]
    if first is None:
        first = 0 if 0 in idx else 1
    if min(idx) < first:
        raise ParseError(f"variable {prefix}{min(idx)} below first index {first}", text, 0)
    n = max(idx) - first + 1
    if nvars is None:
        nvars = n
    elif n > nvars:
        raise ParseError(f"variable {prefix}{max(idx)} exceeds arity {nvars}", text, 0)
    out = PPoly.zero(ctx, nvars)
    for s, (c, v, e) in zip(signs, terms):
        ok, j = _is_p_power(e, ctx.p)
        if not ok:
            raise ParseError(f"exponent {e} is not a power of p = {ctx.p}", text, 0)
        c = ctx.one if c is None else c
        if s == "-":
            c = -c
        out = out + PPoly.var(ctx, nvars, v - first, j, c) if c else out
    return out, first


def parse_poly(text: str, ctx: FieldCtx, nvars: int | None = None,
               first: int = 1, prefix: str = "Y"):
    """Parse an ordinary polynomial in Y-variables: ({exponents: RatFunc}, nvars)."""
    if text.strip() == "0":
        return {}, (nvars or 0)
    toks = list(_run(_grammars(ctx, prefix)[2], text))
    signs, terms = toks[0::2], toks[1::2]
    mons = []
    for s, t in zip(signs, terms):
        c = t[0]
        rest = list(t[1:])
        c = ctx.one if c is None else c
        if s == "-":
            c = -c
        mons.append((c, [(v - first, e) for v, e in rest]))
    top = max((v for _, m in mons for v, _ in m), default=-1) + 1
    if nvars is None:
        nvars = top
    elif top > nvars:
        raise ParseError(f"variable exceeds arity {nvars}", text, 0)
    if any(v < 0 for _, m in mons for v, _ in m):
        raise ParseError(f"variable index below {first}", text, 0)
    out = {}
    for c, m in mons:
        expv = [0] * nvars
        for v, e in m:
            expv[v] += e
        key = tuple(expv)
        val = out.get(key, ctx.zero) + c
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out, nvars


def render_poly(d, first: int = 1, prefix: str = "Y") -> str:
    """Text for {exponents: RatFunc}, highest total degree first."""
    if not d:
        return "0"
    from .polys import glex
    from .ppoly import _coeff_text, _neg_looking
    out = []
    for m in sorted(d, key=glex, reverse=True):
        c = d[m]
        mono = "*".join(f"{prefix}{i + first}" + (f"^{k}" if k > 1 else "")
                        for i, k in enumerate(m) if k)
        sign = "+"
        if out and _neg_looking(c):
            sign, c = "-", -c
        if not mono:
            body = _coeff_text(c)
        else:
            body = mono if c.is_one() else f"{_coeff_text(c)}*{mono}"
        out.append(body if not out else f"{sign} {body}")
    return " ".join(out)
