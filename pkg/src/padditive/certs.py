"""Line-oriented output documents and the independent certificate checker.

A document is a sequence of ``key: value`` lines.  Certificate lines carry
the ``cert.`` prefix.  ``check_document`` re-parses a document and checks
its certificate with routes that do not reuse the solver that produced it
(fraction-free ranks instead of the echelon basis, evaluation instead of
solving, brute force over F_q instead of lookup tables).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .canon import kp_add, kp_eval_F, violations
from .errors import PreconditionError
from .linalg import bareiss_rank
from .parse import parse_field, parse_poly, parse_ppoly, parse_ratfunc
from .ppoly import AdditiveSubst, PPoly, compose
from .reduce import Homogenized, check_normal_shape, phi_value, replay_normalization
from .residue import SparseLaurent, residue


class Document:
    def __init__(self):
        self.lines = []

    def add(self, key, value):
        self.lines.append((key, str(value)))

    def many(self, key, values):
        for i, v in enumerate(values, 1):
            self.add(f"{key}[{i}]", v)

    def render(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.lines)


def parse_document(text: str) -> list:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        k, sep, v = line.partition(": ")
        if not sep:
            k, v = line.rstrip(":"), ""
        out.append((k.strip(), v))
    return out


def _get(pairs, key, default=None):
    for k, v in pairs:
        if k == key:
            return v
    return default


def _many(pairs, key):
    pat = re.compile(re.escape(key) + r"\[(\d+)\]$")
    items = [(int(m.group(1)), v) for k, v in pairs if (m := pat.match(k))]
    return [v for _, v in sorted(items)]


# ---------------------------------------------------------------- value formats

def fmt_exps(f) -> str:
    return ",".join(str(x) for x in f)


def fmt_functional(y: dict, rows) -> str:
    return "; ".join(f"{fmt_exps(rows[k])}={y[k]}" for k in sorted(y))


def parse_functional(text: str, ctx) -> dict:
    out = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        f, _, v = part.partition("=")
        out[tuple(int(x) for x in f.split(","))] = parse_ratfunc(v, ctx)
    return out


def fmt_log_entry(entry, first: int) -> str:
    op = entry[0]
    if op in ("DROP", "ROTATE", "EMIT"):
        return f"{op} {entry[1]}"
    if op == "DIVIDE":
        _, k, piv, var, Q = entry
        return f"DIVIDE {k} {piv} {var} {Q.render(first=1, prefix='T')}"
    if op == "REDUCE":
        _, i0, r = entry
        return f"REDUCE {i0} " + "; ".join(f"{i}={v}" for i, v in r)
    if op == "PERMUTE":
        return "PERMUTE " + ",".join(str(x) for x in entry[1])
    if op == "RESULT":
        return f"RESULT {entry[1]} {entry[2].render(first)}"
    raise ValueError(op)


def parse_log_entry(text: str, ctx, nvars: int, first: int):
    op, _, rest = text.partition(" ")
    if op in ("DROP", "ROTATE", "EMIT"):
        return (op, int(rest))
    if op == "DIVIDE":
        k, piv, var, q = rest.split(" ", 3)
        Q, _ = parse_ppoly(q, ctx, nvars=1, first=1, prefix="T")
        return (op, int(k), int(piv), int(var), Q)
    if op == "REDUCE":
        i0, _, r = rest.partition(" ")
        pairs = []
        for part in r.split(";"):
            i, _, v = part.strip().partition("=")
            pairs.append((int(i), parse_ratfunc(v, ctx)))
        return (op, int(i0), tuple(pairs))
    if op == "PERMUTE":
        return (op, tuple(int(x) for x in rest.split(",")))
    if op == "RESULT":
        k, _, e = rest.partition(" ")
        return (op, int(k), parse_ppoly(e, ctx, nvars=nvars, first=first)[0])
    raise PreconditionError(f"unknown log op {op!r}")


# ---------------------------------------------------------------- checker

@dataclass
class CheckResult:
    command: str
    checks: list = field(default_factory=list)   # (name, bool)

    def add(self, name, ok):
        self.checks.append((name, bool(ok)))

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(v for _, v in self.checks)


def _full_rank_rows(P: PPoly):
    """(Bareiss rank, rows, Homogenized) for the level-N matrix of P on its active variables."""
    vs = P.variables()
    H = Homogenized(P.specialize_zero(vs))
    return bareiss_rank(H.matrix()), H.nrows, H


def _functional_ok(P: PPoly, a, y_by_exp) -> bool:
    vs = P.variables()
    H = Homogenized(P.specialize_zero(vs))
    y = {H.rowpos[f]: v for f, v in y_by_exp.items() if f in H.rowpos}
    if len(y) != len(y_by_exp):
        return False

    def pair(vec):
        acc = P.ctx.zero
        for k, v in vec.items():
            w = y.get(k)
            if w is not None:
                acc = acc + v * w
        return acc

    from .funcfield import expand_vector
    if any(pair(H.column(k)) for k in range(H.ncols)):
        return False
    return bool(pair(expand_vector(a, H.N, H.rowpos)))


def _subst(ctx, texts, nvars, first):
    comps = [parse_ppoly(t, ctx, nvars=nvars, first=first)[0] for t in texts]
    return AdditiveSubst(comps, nvars, ctx)


def _is_identity(s: AdditiveSubst) -> bool:
    return s.is_identity()


def check_document(text: str) -> CheckResult:
    pairs = parse_document(text)
    cmd = _get(pairs, "command")
    res = CheckResult(cmd or "?")
    if cmd is None:
        res.add("has command", False)
        return res
    ctx = parse_field(_get(pairs, "field"))
    first = int(_get(pairs, "first", "1"))

    def pp(t, n=None):
        return parse_ppoly(t, ctx, nvars=n, first=first)[0]

    if cmd in ("reduce", "classify"):
        F = pp(_get(pairs, "input"))
        n = F.nvars
        red_text = _get(pairs, "cert.reduced_form") or _get(pairs, "reduced_form") \
            or _get(pairs, "output")
        Fr = pp(red_text, n) if red_text else F
        sig = _many(pairs, "cert.sigma")
        if sig:
            s = _subst(ctx, sig, n, first)
            inv = _subst(ctx, _many(pairs, "cert.sigma_inverse"), n, first)
            res.add("F o sigma = reduced form", compose(F, s) == Fr)
            res.add("sigma o inverse = id", _is_identity(s.then(inv)))
            res.add("inverse o sigma = id", _is_identity(inv.then(s)))
        rank, rows, H = _full_rank_rows(Fr.principal_part())
        res.add("reduced form is reduced (full column rank)", rank == H.ncols)
        if cmd == "classify":
            P = F.principal_part()
            U = pp(_get(pairs, "cert.universal_form"), n)
            us = _many(pairs, "cert.universal_sigma")
            if us:
                s = _subst(ctx, us, n, first)
                inv = _subst(ctx, _many(pairs, "cert.universal_sigma_inverse"), n, first)
                res.add("P o sigma = universality form", compose(P, s) == U)
                res.add("sigma invertible",
                        _is_identity(s.then(inv)) and _is_identity(inv.then(s)))
            else:
                res.add("universality form is P", U == P)
            rank, rows, H = _full_rank_rows(U)
            res.add("universality form reduced (full column rank)", rank == H.ncols)
            univ = _get(pairs, "principal_universal") == "true"
            if univ:
                res.add("principal part onto (full row rank)", rank == rows)
            else:
                a = parse_ratfunc(_get(pairs, "cert.unrepresented"), ctx)
                y = parse_functional(_get(pairs, "cert.functional"), ctx)
                res.add("functional separates target from image", _functional_ok(U, a, y))
                res.add("row rank deficient", rank < rows)
    elif cmd == "normalize":
        n = int(_get(pairs, "nvars"))
        eqs = [pp(t, n) for t in _many(pairs, "input")]
        log = [parse_log_entry(t, ctx, n, first) for t in _many(pairs, "cert.log")]
        outs = [pp(t, n) for t in _many(pairs, "equation")]
        try:
            replayed = replay_normalization(eqs, n, log)
            res.add("log replays", True)
            res.add("replay matches output", replayed == outs)
            check_normal_shape(outs, n)
            res.add("normal shape", True)
        except Exception as exc:  # noqa: BLE001 - any failure rejects the certificate
            res.add(f"replay: {exc}", False)
        sig = _many(pairs, "cert.sigma")
        if sig:
            s = _subst(ctx, sig, n, first)
            inv = _subst(ctx, _many(pairs, "cert.sigma_inverse"), n, first)
            res.add("sigma invertible", _is_identity(s.then(inv)) and _is_identity(inv.then(s)))
    elif cmd == "solve":
        F = pp(_get(pairs, "input"))
        a = parse_ratfunc(_get(pairs, "target"), ctx)
        if _get(pairs, "represented") == "true":
            x = [parse_ratfunc(v, ctx) for v in _many(pairs, "x")]
            res.add("F(x) = a", F.eval(x) == a)
        else:
            y = parse_functional(_get(pairs, "cert.functional"), ctx)
            res.add("functional separates target from image", _functional_ok(F, a, y))
    elif cmd in ("complete", "embed"):
        F = pp(_get(pairs, "input"))
        W = pp(_get(pairs, "output"))
        n = F.nvars
        m = W.nvars - n
        res.add("fresh variables set to 0 give the input", W.specialize_zero(range(n)) == F)
        rank, rows, _ = _full_rank_rows(W.principal_part())
        res.add("principal part onto (full row rank)", rank == rows)
        P = F.principal_part() if cmd == "embed" else F
        N = max(P.degree(i) for i in range(n))
        expect = (1 - phi_value(P)) * ctx.p ** (ctx.r * N)
        res.add("step count = (1 - phi) p^(rN)", m == expect)
    elif cmd == "canon":
        F = pp(_get(pairs, "input"))
        nY = int(_get(pairs, "nY"))
        g, _ = parse_poly(_get(pairs, "g"), ctx, nY)
        h, _ = parse_poly(_get(pairs, "h"), ctx, nY)
        pre = [parse_poly(t, ctx, nY)[0] for t in _many(pairs, "preimage")]
        res.add("g - h = F(preimage)", kp_add(g, h, -1) == kp_eval_F(F, pre))
        res.add("h has no violations", not violations(h, F))
    elif cmd == "witness":
        Fq = ctx.F
        beta = int(_get(pairs, "cert.beta"))
        image = {Fq.sub(Fq.pow(x, Fq.p), x) for x in range(Fq.q)}
        res.add("beta outside x^p - x", beta not in image)
        w = SparseLaurent.from_ratfunc(parse_ratfunc(_get(pairs, "w"), ctx))
        res.add("residue(w) = beta", residue(w) == beta)
        res.add("w = beta * prod t_i^-1", w.terms == {(-1,) * ctx.r: beta})
    elif cmd == "standard":
        eqs = _many(pairs, "equation")
        ok = True
        for t in eqs:
            E = pp(t)
            rank, rows, _ = _full_rank_rows(E.principal_part())
            ok = ok and rank == rows
        res.add("degree-p part onto (full row rank)", ok and bool(eqs))
    else:
        res.add(f"no checker for {cmd}", False)
    return res
