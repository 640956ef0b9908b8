"""The rational function field k = F_q(t1, ..., tr) and its p-basis.

``FieldCtx`` describes k; ``RatFunc`` is an exact element of k kept as a
reduced fraction of sparse polynomials with monic denominator.  The p-basis
{t_1, ..., t_r} gives, for each level n, the decomposition

    x = sum over f in I_n of  t^f * a_f^(p^n)

where I_n is the set of exponent vectors with entries in [0, p^n).
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from . import polys as P
from .gfq import GF


class FieldCtx:
    """k = F_q(t1..tr).  Cached per (p, e, names), so identity is equality."""

    __slots__ = ("F", "r", "names", "p", "_zero", "_one", "__weakref__")

    def __new__(cls, F: GF, names=("t",)):
        if isinstance(names, str):
            names = (names,)
        return _ctx(F, tuple(names))

    @classmethod
    def _build(cls, F, names):
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable names {names}")
        self = object.__new__(cls)
        self.F, self.names, self.r, self.p = F, names, len(names), F.p
        self._zero = RatFunc._raw(self, {}, {(0,) * self.r: 1})
        self._one = RatFunc._raw(self, {(0,) * self.r: 1}, {(0,) * self.r: 1})
        return self

    @property
    def zero(self) -> "RatFunc":
        return self._zero

    @property
    def one(self) -> "RatFunc":
        return self._one

    def const(self, c: int) -> "RatFunc":
        """The constant with F_q code c."""
        return self._zero if not c else RatFunc._raw(
            self, {(0,) * self.r: c}, self._one.den)

    def integer(self, n: int) -> "RatFunc":
        return self.const(self.F.from_int(n))

    def gen(self, i: int) -> "RatFunc":
        """The i-th variable t_{i+1} (0-based index)."""
        m = tuple(1 if j == i else 0 for j in range(self.r))
        return RatFunc._raw(self, {m: 1}, self._one.den)

    def monomial(self, f) -> "RatFunc":
        return RatFunc._raw(self, {tuple(f): 1}, self._one.den)

    def poly(self, d) -> "RatFunc":
        return RatFunc._raw(self, dict(d), self._one.den) if d else self._zero

    def __call__(self, num, den=None) -> "RatFunc":
        return RatFunc(self, num, den)

    def extend_constants(self, m: int) -> "FieldCtx":
        """F_{q^m}(t1..tr)."""
        return FieldCtx(GF(self.F.p, self.F.e * m), self.names)

    def spec(self) -> str:
        if not self.r:
            return f"F{self.F.q}"
        return f"F{self.F.q}({','.join(self.names)})"

    def __repr__(self):
        return f"FieldCtx({self.spec()})"

    def __reduce__(self):
        return (FieldCtx, (self.F, self.names))


@functools.lru_cache(maxsize=None)
def _ctx(F, names):
    return FieldCtx._build(F, names)


class RatFunc:
    """An element num/den of k with gcd(num, den) = 1 and den monic."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldCtx, num, den=None):
        F, nv = ctx.F, ctx.r
        if den is None:
            den = P.const(F, 1, nv)
        if not den:
            raise ZeroDivisionError("zero denominator")
        num, den = _normalize(F, num, den, nv)
        self.ctx, self.num, self.den, self._hash = ctx, num, den, None

    @classmethod
    def _raw(cls, ctx, num, den):
        self = object.__new__(cls)
        self.ctx, self.num, self.den, self._hash = ctx, num, den, None
        return self

    # ------------------------------------------------------------ predicates

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.is_poly() and self.num == self.ctx._one.num

    def is_poly(self) -> bool:
        return len(self.den) == 1 and not any(next(iter(self.den)))

    def is_const(self) -> bool:
        return self.is_poly() and P.is_const(self.num)

    def const_value(self) -> int:
        """F_q code of a constant element."""
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return next(iter(self.num.values()), 0)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.integer(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.ctx is other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # ------------------------------------------------------------ arithmetic

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ctx is not self.ctx:
                raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx.integer(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        F, nv = self.ctx.F, self.ctx.r
        if self.den == other.den:
            num = P.add(F, self.num, other.num)
            if self.is_poly():
                return RatFunc._raw(self.ctx, num, self.den) if num else self.ctx.zero
            return _make(self.ctx, num, self.den)
        num = P.add(F, P.mul(F, self.num, other.den), P.mul(F, other.num, self.den))
        return _make(self.ctx, num, P.mul(F, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        if self.ctx.p == 2 or not self.num:
            return self
        return RatFunc._raw(self.ctx, P.neg(self.ctx.F, self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return self.ctx.zero
        F, nv = self.ctx.F, self.ctx.r
        if self.is_poly() and other.is_poly():
            return RatFunc._raw(self.ctx, P.mul(F, self.num, other.num), self.den)
        # cross-cancel so the product stays reduced
        g1 = P.gcd(F, self.num, other.den, nv)
        g2 = P.gcd(F, other.num, self.den, nv)
        n1 = P.divexact(F, self.num, g1) if not P.is_const(g1) else self.num
        d2 = P.divexact(F, other.den, g1) if not P.is_const(g1) else other.den
        n2 = P.divexact(F, other.num, g2) if not P.is_const(g2) else other.num
        d1 = P.divexact(F, self.den, g2) if not P.is_const(g2) else self.den
        num, den = P.mul(F, n1, n2), P.mul(F, d1, d2)
        _, c = P.lead(den)
        if c != 1:
            ci = F.inv(c)
            num, den = P.scale(F, num, ci), P.scale(F, den, ci)
        return RatFunc._raw(self.ctx, num, den)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of 0 in k")
        F = self.ctx.F
        _, c = P.lead(self.num)
        ci = F.inv(c)
        return RatFunc._raw(self.ctx, P.scale(F, self.den, ci), P.scale(F, self.num, ci))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        F, nv = self.ctx.F, self.ctx.r
        # split k into a Frobenius part and a small part
        out = self.ctx.one
        base = self
        while k:
            if k % self.ctx.p == 0:
                base = base.frob(1)
                k //= self.ctx.p
                continue
            out = out * base
            k -= 1
        return out

    def frob(self, n: int = 1) -> "RatFunc":
        """self^(p^n)."""
        if n == 0 or not self.num:
            return self
        F = self.ctx.F
        return RatFunc._raw(self.ctx, P.frob(F, self.num, n), P.frob(F, self.den, n))

    def pn_root(self, n: int = 1) -> "RatFunc | None":
        """y with y^(p^n) = self, or None when self is not a p^n-th power."""
        return pn_root(self, n)

    # ------------------------------------------------------------ text

    def __str__(self):
        F, names = self.ctx.F, self.ctx.names
        ns = P.render(F, self.num, names)
        if self.is_poly():
            return ns
        return f"({ns})/({P.render(F, self.den, names)})"

    def __repr__(self):
        return f"RatFunc({self})"

    def degree(self) -> int:
        """max of total degrees of numerator and denominator (a size measure)."""
        return max(sum(m) for m in itertools.chain(self.num, self.den)) if self.num else 0


def _normalize(F, num, den, nv):
    num = {m: c for m, c in num.items() if c}
    if not num:
        return {}, P.const(F, 1, nv)
    if not P.is_const(den):
        g = P.gcd(F, num, den, nv)
        if not P.is_const(g):
            num, den = P.divexact(F, num, g), P.divexact(F, den, g)
    _, c = P.lead(den)
    if c != 1:
        ci = F.inv(c)
        num, den = P.scale(F, num, ci), P.scale(F, den, ci)
    return num, den


def _make(ctx, num, den):
    if not num:
        return ctx.zero
    num, den = _normalize(ctx.F, num, den, ctx.r)
    return RatFunc._raw(ctx, num, den)


# ---------------------------------------------------------------- index sets

@functools.lru_cache(maxsize=None)
def index_set(p: int, r: int, m: int) -> tuple[tuple[int, ...], ...]:
    """I_m: all f in [0, p^m)^r, sorted in graded-lex order (least first)."""
    pm = p ** m
    return tuple(sorted(itertools.product(range(pm), repeat=r), key=P.glex))


def flat_index(f, p: int, m: int = 1) -> int:
    """Mixed-radix position sum f(i) p^(m i), used for naming variables X_f."""
    pm = p ** m
    return sum(v * pm ** i for i, v in enumerate(f))


def unflat_index(k: int, p: int, r: int, m: int = 1) -> tuple[int, ...]:
    pm = p ** m
    return tuple((k // pm ** i) % pm for i in range(r))


def flat_order(p: int, r: int, m: int = 1):
    """I_m listed by flat_index."""
    return [unflat_index(k, p, r, m) for k in range(p ** (m * r))]


# ---------------------------------------------------------------- expansions

@dataclass(frozen=True)
class PBasisExpansion:
    """Coefficients a_f of x = sum_f t^f a_f^(p^level); zero entries omitted."""

    ctx: FieldCtx
    level: int
    coeffs: dict = field(default_factory=dict)

    def __getitem__(self, f):
        return self.coeffs.get(tuple(f), self.ctx.zero)

    def support(self):
        return sorted(self.coeffs, key=P.glex)

    def reassemble(self) -> RatFunc:
        acc = self.ctx.zero
        for f, a in self.coeffs.items():
            acc = acc + self.ctx.monomial(f) * a.frob(self.level)
        return acc


def p_basis_expand(x: RatFunc, n: int) -> PBasisExpansion:
    """Expansion of x at Frobenius level n in the p-basis t_1..t_r."""
    return PBasisExpansion(x.ctx, n, _expand(x, n))


@functools.lru_cache(maxsize=1 << 16)
def _expand(x, n):
    ctx = x.ctx
    if not x.num:
        return {}
    if n == 0:
        return {(0,) * ctx.r: x}
    F, nv = ctx.F, ctx.r
    pn = ctx.p ** n
    if x.is_poly():
        M = x.num
    else:
        # x = N D^(p^n - 1) / D^(p^n)
        Dpow = P.divexact(F, P.frob(F, x.den, n), x.den)
        M = P.mul(F, x.num, Dpow)
    parts = {}
    for m, c in M.items():
        f = tuple(v % pn for v in m)
        parts.setdefault(f, {})[tuple(v // pn for v in m)] = F.pth_root(c, n)
    out = {}
    for f, num in parts.items():
        out[f] = _make(ctx, num, x.den) if not x.is_poly() else RatFunc._raw(ctx, num, x.den)
    return out


def pn_root(x: RatFunc, n: int = 1) -> RatFunc | None:
    """y with y^(p^n) = x if x lies in k^(p^n), else None."""
    if n == 0 or not x.num:
        return x
    F = x.ctx.F
    pn = x.ctx.p ** n
    # a reduced fraction is a p^n-th power iff numerator and denominator are
    if any(v % pn for m in x.num for v in m) or any(v % pn for m in x.den for v in m):
        return None

    def root(a):
        return {tuple(v // pn for v in m): F.pth_root(c, n) for m, c in a.items()}

    return RatFunc._raw(x.ctx, root(x.num), root(x.den))


def expand_vector(x: RatFunc, level: int, rows) -> dict:
    """Sparse coordinate vector {row position: a_f} of x at ``level``.

    ``rows`` maps index tuples f to row positions.
    """
    return {rows[f]: a for f, a in _expand(x, level).items()}


def shifted_expansion(x: RatFunc, level: int, shift) -> dict:
    """Expansion at ``level`` of t^shift * x, computed from that of x.

    Each shifted index h + shift is split as f + p^level * c with f in
    I_level, contributing t^c * a_h to a_f.
    """
    ctx = x.ctx
    pn = ctx.p ** level
    out = {}
    for h, a in _expand(x, level).items():
        tot = [u + v for u, v in zip(h, shift)]
        f = tuple(v % pn for v in tot)
        carry = tuple(v // pn for v in tot)
        term = a * ctx.monomial(carry) if any(carry) else a
        prev = out.get(f)
        out[f] = term if prev is None else prev + term
    return {f: a for f, a in out.items() if a}
