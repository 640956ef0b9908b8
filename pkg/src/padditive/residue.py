"""Finite-support Laurent elements, residues and H^1 witnesses.

The completed local field F_q((t_1, .., t_r)) embeds in Hahn series with
value group Z^r (lexicographic order).  Only finite-support elements are
represented here; that covers every input and output of the computations
below.  For P = sum_f prod (t_i + c_i)^f(i) X_f^p and L = -X_(p-1, .., p-1),
the residue of (P + L)(alpha) is a^p - a with a the (-1, .., -1)
coefficient of alpha_(p-1, .., p-1), so any beta outside the Artin-Schreier
image makes beta * prod t_i^-1 a non-value of P + L.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .funcfield import FieldCtx, RatFunc, flat_index
from .gfq import GF
from .ppoly import PPoly
from .universal import standard_P


class SparseLaurent:
    """sum c_e t^e over a finite set of e in Z^r, coefficients as F_q codes."""

    __slots__ = ("F", "r", "terms")

    def __init__(self, F: GF, r: int, terms=None):
        self.F, self.r = F, r
        self.terms = {tuple(e): c for e, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, F, e, c=1):
        return cls(F, len(e), {tuple(e): c})

    @classmethod
    def from_ratfunc(cls, x: RatFunc) -> "SparseLaurent":
        """Embed x; its denominator must be a monomial times a constant."""
        ctx = x.ctx
        if len(x.den) != 1:
            raise PreconditionError(f"{x} has infinite Laurent support")
        (dm, dc), = x.den.items()
        inv = ctx.F.inv(dc)
        return cls(ctx.F, ctx.r, {tuple(a - b for a, b in zip(m, dm)): ctx.F.mul(c, inv)
                                  for m, c in x.num.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return (isinstance(other, SparseLaurent) and self.F is other.F
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        F = self.F
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return SparseLaurent(F, self.r, out)

    def __neg__(self):
        return SparseLaurent(self.F, self.r, {e: self.F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.F
        if isinstance(other, int):
            return SparseLaurent(F, self.r, {e: F.mul(c, other) for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return SparseLaurent(F, self.r, out)

    def frob(self, n: int = 1) -> "SparseLaurent":
        """x^(p^n): exponents scale by p^n, coefficients by Frobenius."""
        F = self.F
        s = F.p ** n
        return SparseLaurent(F, self.r, {tuple(a * s for a in e): F.frobenius(c, n)
                                         for e, c in self.terms.items()})

    def coeff(self, e) -> int:
        return self.terms.get(tuple(e), 0)

    def render(self, names=None) -> str:
        names = names or default_names(self.r)
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            ctext = self.F.render(c)
            if self.F.e > 1 and len(ctext) > 1:
                ctext = f"({ctext})"
            if not mono:
                parts.append(ctext)
            else:
                parts.append(mono if c == 1 else f"{ctext}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SparseLaurent({self.render()})"


def default_names(r: int):
    return ("t",) if r == 1 else tuple(f"t{i + 1}" for i in range(r))


def residue(x: SparseLaurent) -> int:
    """Coefficient of t_1^-1 ... t_r^-1."""
    return x.coeff((-1,) * x.r)


def eval_F_laurent(F: PPoly, alpha) -> SparseLaurent:
    """F(alpha) for a p-polynomial with Laurent-polynomial coefficients."""
    if len(alpha) != F.nvars:
        raise PreconditionError(f"need {F.nvars} Laurent elements, got {len(alpha)}")
    ctx = F.ctx
    out = SparseLaurent(ctx.F, ctx.r)
    for (i, j), c in F.terms.items():
        a = alpha[i]
        if a:
            out = out + SparseLaurent.from_ratfunc(c) * a.frob(j)
    return out


def artin_schreier_image(F: GF) -> np.ndarray:
    """Boolean mask of {x^p - x : x in F_q}."""
    return F.as_table()[0]


@dataclass
class ResidueWitness:
    ctx: FieldCtx
    constants: tuple          # c_i as F_q codes
    P: PPoly
    L: PPoly
    beta: int
    w: SparseLaurent
    claim: str

    @property
    def F(self) -> PPoly:
        return self.P + self.L

    @property
    def special(self) -> int:
        """Index of X_(p-1, .., p-1)."""
        p, r = self.ctx.p, self.ctx.r
        return flat_index((p - 1,) * r, p)


def h1_witness(F: GF, r: int, constants=None) -> ResidueWitness:
    """Witness that P + L is not onto over F_q((t_1, .., t_r))."""
    if r < 1:
        raise PreconditionError("need r >= 1")
    constants = tuple(constants) if constants is not None else (0,) * r
    if len(constants) != r:
        raise PreconditionError(f"need {r} constants, got {len(constants)}")
    if any(not 0 <= c < F.q for c in constants):
        raise PreconditionError("constants must be F_q codes")
    ctx = FieldCtx(F, default_names(r))
    lam = [ctx.gen(i) + ctx.const(c) for i, c in enumerate(constants)]
    P = standard_P(ctx, lam)
    p = F.p
    L = PPoly.var(ctx, P.nvars, flat_index((p - 1,) * r, p), 0, -ctx.one)
    mask = artin_schreier_image(F)
    beta = next(int(x) for x in range(F.q) if not mask[x])
    w = SparseLaurent.monomial(F, (-1,) * r, beta)
    claim = (f"residue(F(alpha)) = a^{p} - a for every alpha; "
             f"residue(w) = {F.render(beta)} is not of that form")
    return ResidueWitness(ctx, constants, P, L, beta, w, claim)


@dataclass
class WitnessReport:
    samples: int
    passed: int
    formula_matches: int
    witness_residue: int
    witness_outside: bool

    @property
    def ok(self) -> bool:
        return (self.passed == self.samples and self.formula_matches == self.samples
                and self.witness_outside)


def random_laurent(F: GF, r: int, rng: random.Random, size: int = 4, span: int = 3):
    terms = {}
    for _ in range(rng.randint(0, size)):
        e = tuple(rng.randint(-span, span) for _ in range(r))
        terms[e] = rng.randrange(F.q)
    return SparseLaurent(F, r, terms)


def check_witness(wit: ResidueWitness, samples: int = 1000, seed: int = 0) -> WitnessReport:
    """Sample alpha, check residues stay in the Artin-Schreier image while w's does not."""
    F, r = wit.ctx.F, wit.ctx.r
    mask = artin_schreier_image(F)
    rng = random.Random(seed)
    FF = wit.F
    k = wit.special
    passed = matches = 0
    for _ in range(samples):
        alpha = [random_laurent(F, r, rng) for _ in range(FF.nvars)]
        res = residue(eval_F_laurent(FF, alpha))
        if mask[res]:
            passed += 1
        a = alpha[k].coeff((-1,) * r)
        if res == F.sub(F.pow(a, F.p), a):
            matches += 1
    wr = residue(wit.w)
    return WitnessReport(samples, passed, matches, wr, not bool(mask[wr]))
