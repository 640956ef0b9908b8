"""Universality of monogeneous p-polynomials and the constructions built on it.

P is universal when P: k^n -> k is onto.  After homogenizing to degree
p^N, P is onto exactly when its level-N coefficient matrix has full row
rank, and reduced exactly when it has full column rank; the number of
columns is phi(P) * p^(rN), which is where the numerical criterion comes
from.  Every verdict carries a witness that can be checked on its own.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError, PreconditionError
from .funcfield import (FieldCtx, RatFunc, expand_vector, flat_index, flat_order,
                        index_set, p_basis_expand)
from .linalg import Echelon, mat_rank, mat_solve
from .ppoly import AdditiveSubst, GroupPresentation, PPoly, compose
from .reduce import Homogenized, phi_value, principal_zero, reduce_ppoly


@functools.lru_cache(maxsize=4096)
def _homog(P: PPoly) -> Homogenized:
    return Homogenized(P)


def _active(P: PPoly):
    vs = P.variables()
    return vs, P.specialize_zero(vs)


# ---------------------------------------------------------------- verdicts

@dataclass
class UniversalityVerdict:
    """Outcome of is_universal.

    ``phi`` and ``reduced`` describe the reduced form the decision was made
    on (so reduced is True and universal == (phi == 1)); ``input_phi`` and
    ``input_reduced`` describe the input itself.  ``witness`` is the square
    coefficient matrix in the universal case and an unrepresented a in k
    otherwise.
    """

    phi: Fraction
    reduced: bool
    universal: bool
    witness: object
    input_phi: Fraction
    input_reduced: bool
    reduced_form: PPoly
    sigma: AdditiveSubst | None = None


def is_universal(P: PPoly) -> UniversalityVerdict:
    if not P.is_monogeneous():
        raise PreconditionError("is_universal needs a monogeneous p-polynomial")
    ctx = P.ctx
    if not P:
        return UniversalityVerdict(Fraction(0), P.nvars == 0, False, ctx.one,
                                   Fraction(0), P.nvars == 0, P)
    input_reduced = principal_zero(P) is None
    sigma = None
    Pr = P
    if not input_reduced:
        res = reduce_ppoly(P)
        Pr, sigma = res.F, res.sigma
        if not Pr.is_monogeneous():
            raise InvariantError("reduction broke monogeneity")
    _, Pa = _active(Pr)
    H = _homog(Pa)
    universal = H.is_surjective()
    phi = phi_value(Pa)
    if H.rank() != H.ncols:
        raise InvariantError("reduced form has dependent columns")
    if universal != (phi == 1):
        raise InvariantError(f"rank test and phi = {phi} disagree")
    witness = H.matrix() if universal else _least_unrepresented(H)
    return UniversalityVerdict(phi, True, universal, witness,
                               phi_value(P), input_reduced, Pr, sigma)


def _least_unrepresented(H: Homogenized) -> RatFunc:
    E = H.echelon()
    for f in H.rows:
        if not E.contains(H.unit_vector(f)):
            return H.ctx.monomial(f)
    raise PreconditionError("p-polynomial is universal")


def find_unrepresented(P: PPoly) -> RatFunc:
    """Least monomial t^f (graded-lex) outside the image of P."""
    if not P.is_monogeneous():
        raise PreconditionError("find_unrepresented needs a monogeneous p-polynomial")
    if not P:
        return P.ctx.one
    _, Pa = _active(P)
    return _least_unrepresented(_homog(Pa))


def represent(P: PPoly, a: RatFunc) -> list:
    """Some x in k^n with P(x) = a, for universal monogeneous P."""
    if not P.is_monogeneous():
        raise PreconditionError("represent needs a monogeneous p-polynomial")
    ctx = P.ctx
    if not a:
        return [ctx.zero] * P.nvars
    if not P:
        raise PreconditionError("the zero p-polynomial is not universal")
    vs, Pa = _active(P)
    H = _homog(Pa)
    coeffs = H.echelon().express(expand_vector(a, H.N, H.rowpos))
    if coeffs is None:
        raise PreconditionError(f"{a} is not in the image: p-polynomial is not universal")
    y = H.back_map(coeffs)
    x = [ctx.zero] * P.nvars
    for k, v in enumerate(vs):
        x[v] = y[k]
    if P.eval(x) != a:
        raise InvariantError("representation does not evaluate to the target")
    return x


def inconsistency_functional(P: PPoly, a: RatFunc):
    """A functional y on level-N coordinates with y(columns) = 0, y(a) != 0.

    Returns (y, N) or None if a is represented.  It certifies a not in P(k^n).
    """
    _, Pa = _active(P)
    H = _homog(Pa)
    y = H.echelon().annihilator(expand_vector(a, H.N, H.rowpos), range(H.nrows))
    return None if y is None else (y, H)


def check_inconsistency(P: PPoly, a: RatFunc, y: dict) -> bool:
    """Independent check that y kills every column of P's matrix but not a."""
    _, Pa = _active(P)
    H = Homogenized(Pa)

    def pair(vec):
        acc = P.ctx.zero
        for k, v in vec.items():
            w = y.get(k)
            if w is not None:
                acc = acc + v * w
        return acc

    if any(pair(H.column(k)) for k in range(H.ncols)):
        return False
    return bool(pair(expand_vector(a, H.N, H.rowpos)))


# ---------------------------------------------------------------- classification

@dataclass
class Classification:
    separable: bool
    reduced: bool
    principal_zero: list | None
    phi: Fraction
    principal_universal: bool
    unrepresented: RatFunc | None
    permawound: bool | None
    quasi_weakly_permawound: bool | None
    connected: bool | None
    semiwound: bool | None
    reduced_form: PPoly | None = None

    def fields(self):
        """(key, value) pairs in a fixed order, values already stringified."""
        def b(v):
            return "undetermined" if v is None else str(v).lower()

        out = [("separable", b(self.separable)),
               ("reduced", b(self.reduced)),
               ("principal_zero", "none" if self.principal_zero is None
                else "(" + ", ".join(str(v) for v in self.principal_zero) + ")"),
               ("phi", str(self.phi)),
               ("principal_universal", b(self.principal_universal)),
               ("unrepresented", "none" if self.unrepresented is None else str(self.unrepresented)),
               ("permawound", b(self.permawound)),
               ("quasi_weakly_permawound", b(self.quasi_weakly_permawound)),
               ("connected", b(self.connected)),
               ("semiwound", b(self.semiwound))]
        if self.reduced_form is not None:
            out.append(("reduced_form", self.reduced_form.render()))
        return out


def classify(F: PPoly) -> Classification:
    """Component facts and the verdicts the criteria allow for {F = 0}."""
    if not F:
        raise PreconditionError("cannot classify the zero p-polynomial")
    sep = F.is_separable()
    P = F.principal_part()
    z = principal_zero(P)
    reduced = z is None
    verdict = is_universal(P)
    univ = verdict.universal
    unrep = None if univ else verdict.witness
    reduced_form = None
    if not reduced:
        reduced_form = reduce_ppoly(F).F
    return Classification(
        separable=sep, reduced=reduced, principal_zero=z, phi=phi_value(P),
        principal_universal=univ, unrepresented=unrep,
        permawound=(univ if (sep and reduced) else None),
        quasi_weakly_permawound=(univ if reduced else None),
        connected=(True if (reduced and univ) else None),
        semiwound=(True if reduced else None),
        reduced_form=reduced_form)


def weakly_permawound_by_filtration(stages) -> bool | None:
    """True if every stage is reduced with universal principal part.

    ``stages`` is a list of p-polynomials, one per filtration quotient.  A
    non-universal stage leaves the question open (None); a non-reduced
    stage is rejected.
    """
    ok = True
    for s in stages:
        if not s:
            continue  # a split G_a stage
        vs, sa = _active(s)
        if principal_zero(sa.principal_part()) is not None:
            raise PreconditionError(f"filtration stage {s} is not reduced")
        if not is_universal(sa.principal_part()).universal:
            ok = False
    return True if ok else None


# ---------------------------------------------------------------- completion

@dataclass
class Completion:
    P: PPoly
    Q: PPoly              # in the fresh variables only
    total: PPoly          # P + Q in nvars + m variables
    added: list           # the unrepresented a, in order
    N: int

    @property
    def steps(self) -> int:
        return len(self.added)


def complete_to_universal(P: PPoly) -> Completion:
    """Append -a Y^(p^N) for each greedily found unrepresented a."""
    if not P or not P.is_monogeneous():
        raise PreconditionError("completion needs a nonzero monogeneous p-polynomial")
    if principal_zero(P) is not None:
        raise PreconditionError("completion needs a reduced p-polynomial")
    ctx, n = P.ctx, P.nvars
    H = Homogenized(P)  # private copy: its echelon gets extended below
    E = H.echelon()
    added = []
    for f in H.rows:
        if E.add(H.unit_vector(f)) is None:
            added.append(ctx.monomial(f))
    m = len(added)
    N = H.N
    Q = PPoly(ctx, m, {(k, N): -a for k, a in enumerate(added)})
    total = P.rename(n + m, list(range(n))) + Q.rename(n + m, [n + k for k in range(m)])
    expect = (1 - phi_value(P)) * ctx.p ** (ctx.r * N)
    if expect != m:
        raise InvariantError(f"completion took {m} steps, expected {expect}")
    return Completion(P, Q, total, added, N)


@dataclass
class Ubiquity:
    F: PPoly
    W: PPoly
    projection: list      # fresh variable indices (0-based) in W
    completion: Completion


def ubiquity_embed(F: PPoly) -> Ubiquity:
    """W = F + Q with universal principal part; {F = 0} is the kernel of W -> G_a^m."""
    if not F.is_separable():
        raise PreconditionError("ubiquity embedding needs a separable p-polynomial")
    if principal_zero(F.principal_part()) is not None:
        raise PreconditionError("ubiquity embedding needs a reduced p-polynomial")
    comp = complete_to_universal(F.principal_part())
    n, m = F.nvars, comp.Q.nvars
    W = F.rename(n + m, list(range(n))) + comp.Q.rename(n + m, [n + k for k in range(m)])
    if W.specialize_zero(range(n)) != F:
        raise InvariantError("fresh variables set to 0 do not recover F")
    return Ubiquity(F, W, list(range(n, n + m)), comp)


# ---------------------------------------------------------------- standard groups

@dataclass
class StandardGroup:
    kind: str
    presentation: GroupPresentation
    params: dict = field(default_factory=dict)
    first: int = 0  # display numbering of variable 0

    @property
    def equation(self) -> PPoly:
        return self.presentation.equations[0]

    def display(self) -> str:
        """P + L written as given: "X0^2 + (t)*X1^2 - X0".

        The canonical rendering sorts terms by variable, and in
        characteristic 2 it cannot tell -X0 from X0; this keeps the
        defining shape.
        """
        P, L = self.params.get("P"), self.params.get("L")
        if P is None:
            return self.equation.render(self.first)
        head = P.render(self.first)
        if len(L.terms) == 1:
            (key, c), = L.terms.items()
            if c == -P.ctx.one:
                return f"{head} - {(-L).render(self.first)}"
        tail = L.render(self.first)
        return f"{head} - {tail[2:]}" if tail.startswith("- ") else f"{head} + {tail}"


def _lambdas(ctx, lam):
    if lam is None:
        return [ctx.gen(i) for i in range(ctx.r)]
    lam = list(lam)
    if len(lam) != ctx.r:
        raise PreconditionError(f"need {ctx.r} p-basis elements, got {len(lam)}")
    return lam


def _lam_power(lam, f):
    acc = lam[0].ctx.one
    for l, e in zip(lam, f):
        if e:
            acc = acc * l ** e
    return acc


def standard_P(ctx: FieldCtx, lam=None, level: int = 1) -> PPoly:
    """sum over f in I_level of lambda^f X_f^(p^level), X_f at flat_index(f)."""
    if ctx.r < 1:
        raise PreconditionError("standard forms need r >= 1")
    lam = _lambdas(ctx, lam)
    p = ctx.p
    n = p ** (ctx.r * level)
    terms = {(flat_index(f, p, level), level): _lam_power(lam, f)
             for f in flat_order(p, ctx.r, level)}
    return PPoly(ctx, n, terms)


def standard_V(ctx: FieldCtx, lam=None, L: PPoly | None = None) -> StandardGroup:
    """The group {P + L = 0}, P standard of degree p, default L = -X_0."""
    P = standard_P(ctx, lam)
    if L is None:
        L = PPoly.var(ctx, P.nvars, 0, 0, -ctx.one)
    check_VPL_pair(P, L)
    pres = GroupPresentation(ctx, P.nvars, [P + L])
    return StandardGroup("V_PL", pres, {"lambda": _lambdas(ctx, lam), "P": P, "L": L})


def weil_restrict_alpha_p(ctx: FieldCtx, n: int = 1, lam=None) -> list:
    """Block equations of the level-n Weil restriction of alpha_p.

    Variables are X_f for f in I_n (flat order, radix p^n).  For each
    g in I_(n-1) the block is sum_h lambda^h X_(g + p^(n-1) h)^p over h in
    I_1; each block is the n = 1 equation after renaming.
    """
    if n < 1:
        raise PreconditionError("level must be >= 1")
    if ctx.r < 1:
        raise PreconditionError("Weil restriction needs r >= 1")
    lam = _lambdas(ctx, lam)
    p, r = ctx.p, ctx.r
    nv = p ** (r * n)
    base = p ** (n - 1)
    blocks = []
    for g in flat_order(p, r, n - 1):
        terms = {}
        varlist = []
        for h in flat_order(p, r, 1):
            f = tuple(gi + base * hi for gi, hi in zip(g, h))
            v = flat_index(f, p, n)
            varlist.append(v)
            terms[(v, 1)] = _lam_power(lam, h)
        eq = PPoly(ctx, nv, terms)
        blocks.append(StandardGroup("WeilRestrictAlphaP", GroupPresentation(ctx, nv, [eq]),
                                    {"level": n, "block": g, "variables": tuple(varlist)}))
    return blocks


def weil_restrict_gm_quotient(ctx: FieldCtx, lam=None) -> StandardGroup:
    """sum_(i<p) lambda^i X_i^p - X_(p-1), for r = 1."""
    if ctx.r != 1:
        raise PreconditionError("this constructor needs r = 1")
    lam = _lambdas(ctx, lam)[0]
    p = ctx.p
    terms = {(i, 1): lam ** i for i in range(p)}
    P = PPoly(ctx, p, terms)
    L = PPoly.var(ctx, p, p - 1, 0, -ctx.one)
    return StandardGroup("WeilRestrictGmQuotient", GroupPresentation(ctx, p, [P + L]),
                         {"lambda": [lam], "P": P, "L": L})


def example_W(ctx: FieldCtx, a: RatFunc | None = None) -> StandardGroup:
    """X1 + X1^p + a X2^p."""
    a = ctx.gen(0) if a is None else a
    F = PPoly(ctx, 2, {(0, 0): ctx.one, (0, 1): ctx.one, (1, 1): a})
    return StandardGroup("ExampleW", GroupPresentation(ctx, 2, [F]), {"a": a}, first=1)


def example_E(ctx: FieldCtx, a: RatFunc | None = None, b: RatFunc | None = None) -> StandardGroup:
    """X1 + a X1^p + X2^p - b X3^p."""
    t = ctx.gen(0)
    a = t if a is None else a
    b = t * t if b is None else b
    F = PPoly(ctx, 3, {(0, 0): ctx.one, (0, 1): a, (1, 1): ctx.one, (2, 1): -b})
    return StandardGroup("ExampleE", GroupPresentation(ctx, 3, [F]), {"a": a, "b": b}, first=1)


# ---------------------------------------------------------------- changes of variables

def check_VPL_pair(P: PPoly, L: PPoly) -> None:
    """Raise PreconditionError unless (P, L) define a group V_(P,L)."""
    ctx = P.ctx
    n = ctx.p ** ctx.r
    if P.nvars != n or L.nvars != n:
        raise PreconditionError(f"V_(P,L) lives in {n} variables")
    if not P or any(j != 1 for (_, j) in P.terms):
        raise PreconditionError("P must be homogeneous of degree p")
    if not L or any(j != 0 for (_, j) in L.terms):
        raise PreconditionError("L must be a nonzero linear form")
    if not is_universal(P).universal:
        raise PreconditionError("P must be universal")


def linear_matrix(s: AdditiveSubst):
    """Matrix A with s: X_i -> sum_j A[i][j] Y_j, or None if s is not linear."""
    ctx = s.ctx
    A = [[ctx.zero] * s.m for _ in range(s.n)]
    for i, c in enumerate(s.components):
        for (v, j), a in c.terms.items():
            if j:
                return None
            A[i][v] = a
    return A


def linear_subst(ctx, A) -> AdditiveSubst:
    m = len(A[0]) if A else 0
    return AdditiveSubst([PPoly(ctx, m, {(j, 0): a for j, a in enumerate(row) if a})
                          for row in A], m, ctx)


def invert_linear(s: AdditiveSubst) -> AdditiveSubst | None:
    A = linear_matrix(s)
    n = len(A)
    if A is None or n != s.m or mat_rank(A) != n:
        return None
    ctx = s.ctx
    cols = []
    for j in range(n):
        e = [ctx.zero] * n
        e[j] = ctx.one
        cols.append(mat_solve(A, e))
    Ainv = [[cols[j][i] for j in range(n)] for i in range(n)]
    inv = linear_subst(ctx, Ainv)
    inv.inverse = s
    return inv


def verify_VPL_change_of_vars(src, tgt, c: RatFunc, sigma: AdditiveSubst) -> bool:
    """compose(P1 + L1, sigma) == c (P2 + L2) with sigma linear and invertible."""
    P1, L1 = src
    P2, L2 = tgt
    check_VPL_pair(P1, L1)
    check_VPL_pair(P2, L2)
    if not c:
        return False
    A = linear_matrix(sigma)
    if A is None or sigma.m != sigma.n or mat_rank(A) != sigma.n:
        return False
    return compose(P1 + L1, sigma) == (P2 + L2).scale(c)


@dataclass
class VPLSearch:
    found: bool
    ctx: FieldCtx           # field over which c and sigma are defined
    c: RatFunc | None = None
    sigma: AdditiveSubst | None = None
    ext_degree: int = 1
    reason: str = ""


def _dual(g, pn):
    return tuple(0 if v == 0 else pn - v for v in g)


def _eps(g):
    return tuple(1 if v else 0 for v in g)


def _to_standard(ctx, L: PPoly, max_ext: int):
    """(c, sigma, m) with F_(Q, X_0) o sigma = c F_(Q, L) over F_(q^m)(t), or a reason."""
    p, r = ctx.p, ctx.r
    idx = flat_order(p, r, 1)
    lam = [ctx.gen(i) for i in range(r)]
    beta = {f: L.coeff(flat_index(f, p), 0) for f in idx}
    g0 = next((g for g in idx if beta[_dual(g, p)]), None)
    if g0 is None:
        return None, "L is zero"
    b0 = beta[_dual(g0, p)]

    def lam_eps(e):
        acc = ctx.one
        for l, x in zip(lam, e):
            if x:
                acc = acc * l ** x
        return acc

    e0 = _eps(g0)
    A = lam_eps(e0)
    B = ctx.zero
    for f in idx:
        bf = beta[_dual(f, p)]
        if bf:
            diff = tuple(x - y for x, y in zip(e0, _eps(f)))
            B = B + _lam_power(lam, f) * (lam_eps(diff) * bf / b0).frob(1)
    B = B * b0
    rho = A / B   # need Y^(p-1) = rho
    if not rho.is_const():
        return None, "requires non-constant separable extension"
    F = ctx.F
    for m in range(1, max_ext + 1):
        big = ctx.extend_constants(m)
        table = F.embedding_into(big.F)
        target = table[rho.const_value()]
        y = next((z for z in range(1, big.F.q) if big.F.pow(z, p - 1) == target), None)
        if y is None:
            continue
        return _finish_standard(big, table, L, beta, g0, b0, big.const(y)), m
    return None, f"no root of the scalar equation over F_(q^m), m <= {max_ext}"


def _finish_standard(big, table, L, beta, g0, b0, y0):
    from .ppoly import base_change
    p, r = big.p, big.r
    idx = flat_order(p, r, 1)
    lam = [big.gen(i) for i in range(r)]
    bb = {f: base_change(v, big, table) for f, v in beta.items()}
    b0b = base_change(b0, big, table)
    e0 = _eps(g0)

    def lam_eps(e):
        acc = big.one
        for l, x in zip(lam, e):
            if x:
                acc = acc * l ** x
        return acc

    a0 = {}
    for g in idx:
        diff = tuple(x - y for x, y in zip(e0, _eps(g)))
        a0[g] = lam_eps(diff) * bb[_dual(g, p)] / b0b * y0
    c = big.zero
    for f in idx:
        c = c + _lam_power(lam, f) * a0[f].frob(1)
    # a_(f,g): expansion of c lambda^g at level 1
    A = [[big.zero] * len(idx) for _ in idx]
    for g in idx:
        exp = p_basis_expand(c * _lam_power(lam, g), 1)
        for f in idx:
            A[flat_index(f, p)][flat_index(g, p)] = exp[f]
    return c, linear_subst(big, A)


def find_VPL_change_of_vars(P: PPoly, L1: PPoly, L2: PPoly, max_ext: int = 2) -> VPLSearch:
    """Search for (c, sigma) with (P + L1) o sigma = c (P + L2).

    P must be the standard form in the t-basis.  The scalar equation of the
    construction is solved only over constant extensions F_(q^m), m <= max_ext.
    """
    ctx = P.ctx
    if P != standard_P(ctx):
        raise PreconditionError("the search supports only the standard P in the t-basis")
    check_VPL_pair(P, L1)
    check_VPL_pair(P, L2)
    X0 = PPoly.var(ctx, P.nvars, 0)
    out = []
    for L in (L1, L2):
        res, info = _to_standard(ctx, L, max_ext)
        if res is None:
            return VPLSearch(False, ctx, reason=info)
        out.append((res, info))
    # bring both to the larger constant field
    m = _lcm(out[0][1], out[1][1])
    big = ctx.extend_constants(m)
    table = ctx.F.embedding_into(big.F)
    parts = []
    for (c, s), mi in out:
        mid = ctx.extend_constants(mi)
        if mid is not big:
            t2 = mid.F.embedding_into(big.F)
            from .ppoly import base_change
            c = base_change(c, big, t2)
            s = s.base_change(big, t2)
        parts.append((c, s))
    (c1, s1), (c2, s2) = parts
    s1inv = invert_linear(s1)
    if s1inv is None:
        raise InvariantError("constructed change of variables is singular")
    sigma = s1inv.then(s2)
    c = c2 / c1
    Pb, L1b, L2b = (x.base_change(big, table) for x in (P, L1, L2))
    if not verify_VPL_change_of_vars((Pb, L1b), (Pb, L2b), c, sigma):
        raise InvariantError("constructed change of variables fails verification")
    return VPLSearch(True, big, c, sigma, m)


def _lcm(a, b):
    from math import gcd
    return a * b // gcd(a, b)


def base_change_constants(P: PPoly, m: int) -> PPoly:
    """P over F_(q^m)(t_1..t_r) along the standard embedding of F_q."""
    big = P.ctx.extend_constants(m)
    return P.base_change(big, P.ctx.F.embedding_into(big.F))


def stable_under_extension(P: PPoly, m: int = 2) -> bool:
    """Whether the universality verdict agrees over F_q(t) and F_(q^m)(t)."""
    return is_universal(P).universal == is_universal(base_change_constants(P, m)).universal
