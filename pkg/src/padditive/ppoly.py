"""Additive (p-)polynomials F = sum c_ij X_i^(p^j) over k.

Variables are 0-based internally.  Text rendering numbers them from
``first`` (1 by default), so ``X1`` is variable 0 unless told otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError
from .funcfield import FieldCtx, RatFunc


class PPoly:
    """Sparse p-polynomial in ``nvars`` variables.

    ``terms`` maps (variable, j) to the nonzero coefficient of X_var^(p^j).
    The ambient arity is part of the value: X1 in one variable and X1 in
    two variables are different p-polynomials.
    """

    __slots__ = ("ctx", "nvars", "terms", "_hash")

    def __init__(self, ctx: FieldCtx, nvars: int, terms=None):
        self.ctx, self.nvars = ctx, nvars
        clean = {}
        for (i, j), c in (terms or {}).items():
            if not 0 <= i < nvars:
                raise IndexError(f"variable {i} outside arity {nvars}")
            if j < 0:
                raise ValueError("negative Frobenius power")
            if isinstance(c, int):
                c = ctx.integer(c)
            if c:
                clean[(i, j)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, nvars, terms):
        self = object.__new__(cls)
        self.ctx, self.nvars, self.terms, self._hash = ctx, nvars, terms, None
        return self

    @classmethod
    def zero(cls, ctx, nvars):
        return cls._raw(ctx, nvars, {})

    @classmethod
    def var(cls, ctx, nvars, i, j=0, c=None):
        """c * X_i^(p^j)."""
        c = ctx.one if c is None else c
        return cls(ctx, nvars, {(i, j): c})

    # ------------------------------------------------------------ structure

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PPoly):
            return NotImplemented
        return (self.ctx is other.ctx and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def coeff(self, i, j) -> RatFunc:
        return self.terms.get((i, j), self.ctx.zero)

    def degree(self, i) -> int:
        """Largest j with X_i^(p^j) present, or -1 if X_i does not occur."""
        return max((j for (v, j) in self.terms if v == i), default=-1)

    def involves(self, i) -> bool:
        return any(v == i for (v, _) in self.terms)

    def variables(self):
        return sorted({v for (v, _) in self.terms})

    def degree_sum(self) -> int:
        """sum over variables of deg_{X_i}, degrees counted as p^j."""
        p = self.ctx.p
        return sum(p ** self.degree(i) for i in self.variables())

    def max_power(self) -> int:
        return max((j for (_, j) in self.terms), default=-1)

    def is_monogeneous(self) -> bool:
        return len({v for (v, _) in self.terms}) == len(self.terms)

    def is_separable(self) -> bool:
        return any(j == 0 for (_, j) in self.terms)

    def is_homogeneous(self) -> bool:
        return len({j for (_, j) in self.terms}) <= 1

    def principal_part(self) -> "PPoly":
        top = {}
        for (i, j) in self.terms:
            if j > top.get(i, -1):
                top[i] = j
        return PPoly._raw(self.ctx, self.nvars,
                          {(i, j): self.terms[(i, j)] for i, j in top.items()})

    def mono_data(self):
        """{var: (j, coeff)} for a monogeneous p-polynomial."""
        if not self.is_monogeneous():
            raise PreconditionError("p-polynomial is not monogeneous")
        return {i: (j, c) for (i, j), c in self.terms.items()}

    # ------------------------------------------------------------ arithmetic

    def _check(self, other):
        if not isinstance(other, PPoly):
            raise TypeError(f"expected PPoly, got {type(other).__name__}")
        if other.ctx is not self.ctx or other.nvars != self.nvars:
            raise ValueError("p-polynomials live in different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return PPoly._raw(self.ctx, self.nvars, out)

    def __neg__(self):
        return PPoly._raw(self.ctx, self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PPoly":
        """c * F for c in k."""
        if isinstance(c, int):
            c = self.ctx.integer(c)
        if not c:
            return PPoly.zero(self.ctx, self.nvars)
        return PPoly._raw(self.ctx, self.nvars, {k: v * c for k, v in self.terms.items()})

    def frob_power(self, n: int) -> "PPoly":
        """F^(p^n) as a p-polynomial: coefficients to p^n, powers shifted by n."""
        if n == 0:
            return self
        return PPoly._raw(self.ctx, self.nvars,
                          {(i, j + n): c.frob(n) for (i, j), c in self.terms.items()})

    def frobenius_twist(self, n: int) -> "PPoly":
        """Raise every coefficient to p^n (the n-fold Frobenius twist)."""
        if n == 0:
            return self
        return PPoly._raw(self.ctx, self.nvars,
                          {k: c.frob(n) for k, c in self.terms.items()})

    def __call__(self, *point):
        return self.eval(point[0] if len(point) == 1 and isinstance(point[0], (list, tuple)) else point)

    def eval(self, point) -> RatFunc:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        acc = self.ctx.zero
        for (i, j), c in self.terms.items():
            x = point[i]
            if isinstance(x, int):
                x = self.ctx.integer(x)
            if x:
                acc = acc + c * x.frob(j)
        return acc

    def compose(self, subst: "AdditiveSubst") -> "PPoly":
        return compose(self, subst)

    def rename(self, nvars: int, mapping) -> "PPoly":
        """Move variable i to mapping[i] in a ring of ``nvars`` variables."""
        return PPoly._raw(self.ctx, nvars,
                          {(mapping[i], j): c for (i, j), c in self.terms.items()})

    def specialize_zero(self, keep) -> "PPoly":
        """Set every variable outside ``keep`` to 0 and renumber the rest."""
        keep = list(keep)
        pos = {v: k for k, v in enumerate(keep)}
        return PPoly._raw(self.ctx, len(keep),
                          {(pos[i], j): c for (i, j), c in self.terms.items() if i in pos})

    def base_change(self, ctx: FieldCtx, table) -> "PPoly":
        """Map coefficients into ``ctx`` along an F_q embedding table."""
        return PPoly._raw(ctx, self.nvars,
                          {k: base_change(c, ctx, table) for k, c in self.terms.items()})

    # ------------------------------------------------------------ text

    def render(self, first: int = 1, prefix: str = "X") -> str:
        return render_ppoly(self, first, prefix)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"PPoly({self.render()!r}, nvars={self.nvars})"


def base_change(c: RatFunc, ctx: FieldCtx, table) -> RatFunc:
    num = {m: table[v] for m, v in c.num.items()}
    den = {m: table[v] for m, v in c.den.items()}
    return RatFunc._raw(ctx, num, den)


def _neg_looking(c: RatFunc) -> bool:
    p = c.ctx.p
    if p == 2 or not c.is_poly():
        return False
    from .polys import lead
    _, lc = lead(c.num)
    return c.ctx.F.e == 1 and lc == p - 1


def _coeff_text(c: RatFunc) -> str:
    if c.is_const() and c.ctx.F.e == 1:
        return str(c.const_value())
    return f"({c})"


def render_ppoly(F: PPoly, first: int = 1, prefix: str = "X") -> str:
    if not F.terms:
        return "0"
    p = F.ctx.p
    out = []
    for (i, j) in sorted(F.terms, key=lambda k: (k[0], -k[1])):
        c = F.terms[(i, j)]
        mono = f"{prefix}{i + first}" + (f"^{p ** j}" if j else "")
        sign = "+"
        if out and _neg_looking(c):
            sign, c = "-", -c
        body = mono if c.is_one() else f"{_coeff_text(c)}*{mono}"
        out.append(body if not out else f"{sign} {body}")
    return " ".join(out)


class AdditiveSubst:
    """X_i -> components[i](Y_1..Y_m): a map from m-space to n-space.

    ``inverse``, when set, is an AdditiveSubst n -> m with both composites
    equal to the identity.
    """

    __slots__ = ("ctx", "m", "components", "inverse")

    def __init__(self, components, m: int | None = None, ctx=None, inverse=None):
        components = tuple(components)
        if components:
            ctx = components[0].ctx
            m = components[0].nvars if m is None else m
            for c in components:
                if c.nvars != m or c.ctx is not ctx:
                    raise ValueError("substitution components live in different rings")
        if ctx is None or m is None:
            raise ValueError("empty substitution needs explicit ctx and source arity")
        self.ctx, self.m, self.components, self.inverse = ctx, m, components, inverse

    @property
    def n(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, ctx, n):
        ident = cls([PPoly.var(ctx, n, i) for i in range(n)], n, ctx)
        ident.inverse = ident
        return ident

    @classmethod
    def permutation(cls, ctx, perm):
        """X_i -> X_{perm[i]}."""
        n = len(perm)
        inv = [0] * n
        for i, v in enumerate(perm):
            inv[v] = i
        s = cls([PPoly.var(ctx, n, perm[i]) for i in range(n)], n, ctx)
        s.inverse = cls([PPoly.var(ctx, n, inv[i]) for i in range(n)], n, ctx, inverse=s)
        return s

    def then(self, other: "AdditiveSubst") -> "AdditiveSubst":
        """self o other: X -> self(other(Y))."""
        if other.n != self.m:
            raise ValueError("cannot compose substitutions of mismatched arity")
        comps = [compose(c, other) for c in self.components]
        out = AdditiveSubst(comps, other.m, self.ctx)
        if self.inverse is not None and other.inverse is not None:
            inv = AdditiveSubst([compose(c, self.inverse) for c in other.inverse.components],
                                self.n, self.ctx, inverse=out)
            out.inverse = inv
        return out

    def is_identity(self) -> bool:
        return self == AdditiveSubst.identity(self.ctx, self.m) if self.m == self.n else False

    def verify_inverse(self) -> bool:
        if self.inverse is None:
            return False
        a = self.then(self.inverse)
        b = self.inverse.then(self)
        return a.is_identity() and b.is_identity()

    def __eq__(self, other):
        return (isinstance(other, AdditiveSubst) and self.m == other.m
                and self.components == other.components)

    def __hash__(self):
        return hash((self.m, self.components))

    def base_change(self, ctx, table):
        out = AdditiveSubst([c.base_change(ctx, table) for c in self.components], self.m, ctx)
        if self.inverse is not None:
            out.inverse = AdditiveSubst([c.base_change(ctx, table) for c in self.inverse.components],
                                        self.n, ctx, inverse=out)
        return out

    def render(self, first=1) -> list[str]:
        return [f"X{i + first} -> {c.render(first)}" for i, c in enumerate(self.components)]

    def __repr__(self):
        return "AdditiveSubst(" + "; ".join(self.render()) + ")"


def compose(F: PPoly, subst: AdditiveSubst) -> PPoly:
    """F(subst_1, ..., subst_n), a p-polynomial in subst.m variables."""
    if subst.n != F.nvars:
        raise ValueError(f"substitution has {subst.n} components, F has {F.nvars} variables")
    out = {}
    for (i, j), c in F.terms.items():
        for (v, l), d in subst.components[i].terms.items():
            key = (v, l + j)
            term = c * d.frob(j)
            prev = out.get(key)
            val = term if prev is None else prev + term
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return PPoly._raw(F.ctx, subst.m, out)


def ore_left_divmod(g: PPoly, g1: PPoly, var: int):
    """(Q, R) with g = Q o g1 + R and deg_var R < deg_var g1.

    Q is a one-variable p-polynomial applied on the left.  Each step cancels
    the top X_var term a X^(p^m) of the running remainder with
    c (g1)^(p^(m-d)), c = a / b^(p^(m-d)), b the top coefficient of g1.
    """
    g1._check(g)
    d = g1.degree(var)
    if d < 0:
        raise PreconditionError(f"divisor does not involve X{var + 1}")
    b = g1.terms[(var, d)]
    Q = {}
    R = g
    while True:
        m = R.degree(var)
        if m < d:
            break
        a = R.terms[(var, m)]
        c = a / b.frob(m - d)
        Q[(0, m - d)] = Q.get((0, m - d), g.ctx.zero) + c
        R = R - g1.frob_power(m - d).scale(c)
    return PPoly(g.ctx, 1, Q), R


@dataclass
class GroupPresentation:
    """The subgroup of G_a^n cut out by ``equations``."""

    ctx: FieldCtx
    nvars: int
    equations: list = field(default_factory=list)

    def __post_init__(self):
        for e in self.equations:
            if e.nvars != self.nvars or e.ctx is not self.ctx:
                raise ValueError("equations must share the ambient ring")

    @property
    def separable(self):
        return [e.is_separable() for e in self.equations]

    def render(self, first=1):
        return [e.render(first) for e in self.equations]
