"""Reducedness, reduction by change of variables, and normalization of systems.

A monogeneous P = sum c_i X_i^(p^d_i) is homogenized to degree p^N,
N = max d_i, by replacing X_i with the level-(N - d_i) form
sum_g t^g X_(i,g)^(p^(N-d_i)).  Expanding each resulting coefficient at
level N turns "P has a nonzero zero" into "a k-matrix has a nonzero
kernel vector", and zeros travel back along X_i = sum_g t^g x_(i,g)^(p^m_i).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError, PreconditionError
from .funcfield import RatFunc, index_set, shifted_expansion
from .linalg import Echelon
from .ppoly import AdditiveSubst, GroupPresentation, PPoly, compose, ore_left_divmod


# ---------------------------------------------------------------- homogenization

class Homogenized:
    """The homogenized form of a nonzero monogeneous P and its k-matrix.

    Rows are the level-N index set I_N (graded-lex order); columns are the
    pairs (i, g) with g in I_(N - d_i), variables in increasing order.
    """

    def __init__(self, P: PPoly):
        if not P:
            raise PreconditionError("cannot homogenize the zero p-polynomial")
        ctx = P.ctx
        self.P, self.ctx = P, ctx
        self.data = P.mono_data()
        p, r = ctx.p, ctx.r
        self.N = N = max(j for j, _ in self.data.values())
        self.rows = index_set(p, r, N)
        self.rowpos = {f: k for k, f in enumerate(self.rows)}
        self.columns = []
        for i in sorted(self.data):
            d = self.data[i][0]
            for g in index_set(p, r, N - d):
                self.columns.append((i, g))
        self._colvecs = {}
        self._echelon = None
        self._complete = False

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def column(self, k) -> dict:
        """Level-N coordinates of c_i t^(g p^d_i) for column k."""
        v = self._colvecs.get(k)
        if v is None:
            i, g = self.columns[k]
            d, c = self.data[i]
            pd = self.ctx.p ** d
            exp = shifted_expansion(c, self.N, tuple(x * pd for x in g))
            v = {self.rowpos[f]: a for f, a in exp.items()}
            self._colvecs[k] = v
        return v

    def matrix(self):
        """Dense row-major matrix (rows x columns) of RatFunc."""
        z = self.ctx.zero
        M = [[z] * self.ncols for _ in range(self.nrows)]
        for k in range(self.ncols):
            for row, a in self.column(k).items():
                M[row][k] = a
        return M

    def homogeneous(self) -> PPoly:
        """P~ in ncols variables, homogeneous of degree p^N."""
        ctx = self.ctx
        terms = {}
        for k, (i, g) in enumerate(self.columns):
            d, c = self.data[i]
            pd = ctx.p ** d
            terms[(k, self.N)] = c * ctx.monomial(tuple(x * pd for x in g))
        return PPoly(ctx, self.ncols, terms)

    def back_map(self, x) -> list:
        """Send x in k^ncols (dict or list) to y in k^nvars, y_i = F_(m_i)(x_(i,.))."""
        ctx = self.ctx
        if not isinstance(x, dict):
            x = {k: v for k, v in enumerate(x) if v}
        y = [ctx.zero] * self.P.nvars
        for k, v in x.items():
            if not v:
                continue
            i, g = self.columns[k]
            m = self.N - self.data[i][0]
            y[i] = y[i] + ctx.monomial(g) * v.frob(m)
        return y

    def _grow(self, stop_at_dependency: bool):
        if self._echelon is None:
            self._echelon = Echelon()
            self._next = 0
            self._deps = []
        E = self._echelon
        while self._next < self.ncols:
            k = self._next
            self._next += 1
            dep = E.add(self.column(k), k)
            if dep is not None:
                self._deps.append(dep)
                if stop_at_dependency:
                    return dep
        self._complete = True
        return self._deps[0] if self._deps else None

    def kernel_vector(self):
        """A nonzero x with (matrix) x = 0, as a dict, or None."""
        if self._echelon is not None and self._deps:
            return self._deps[0]
        if self._complete:
            return None
        return self._grow(stop_at_dependency=True)

    def echelon(self) -> Echelon:
        """Reduced echelon basis of the column space (all columns inserted)."""
        if not self._complete:
            self._grow(stop_at_dependency=False)
        return self._echelon

    def rank(self) -> int:
        return self.echelon().rank

    def is_surjective(self) -> bool:
        return self.rank() == self.nrows

    def unit_vector(self, f) -> dict:
        return {self.rowpos[tuple(f)]: self.ctx.one}


def homogenize(P: PPoly):
    """(P~, back_map, N) for a nonzero monogeneous P."""
    H = Homogenized(P)
    return H.homogeneous(), H.back_map, H.N


def phi_value(P: PPoly) -> Fraction:
    """sum over variables occurring in P of deg_(X_i)(P)^(-r)."""
    if not P:
        raise PreconditionError("phi is undefined for the zero p-polynomial")
    r, p = P.ctx.r, P.ctx.p
    return sum((Fraction(1, p ** (r * P.degree(i))) for i in P.variables()), Fraction(0))


# ---------------------------------------------------------------- principal zeros

def principal_zero(P: PPoly):
    """A nonzero zero in k^n of the monogeneous P, or None if P is reduced."""
    ctx, n = P.ctx, P.nvars
    data = P.mono_data()
    missing = [i for i in range(n) if i not in data]
    if missing:
        y = [ctx.zero] * n
        y[missing[0]] = ctx.one
        return y
    if n <= 1:
        return None
    linear = [i for i in sorted(data) if data[i][0] == 0]
    if linear:
        i = linear[0]
        j = min(v for v in data if v != i)
        y = [ctx.zero] * n
        y[j] = ctx.one
        y[i] = -(data[j][1] / data[i][1])
        return y
    H = Homogenized(P)
    x = H.kernel_vector()
    if x is None:
        return None
    y = H.back_map(x)
    if not any(y):
        raise InvariantError("homogenized zero transported to the zero vector")
    return y


def is_reduced(F: PPoly) -> bool:
    """F is reduced: its principal part has no nonzero zero in k^n."""
    return principal_zero(F.principal_part()) is None


# ---------------------------------------------------------------- single reduction

@dataclass(frozen=True)
class ReductionStep:
    """One elementary substitution: i0 and the nonzero zero coordinates r."""

    i0: int
    r: tuple  # ((i, RatFunc), ...) with nonzero entries, increasing i


@dataclass
class ReductionTranscript:
    nvars: int
    steps: list = field(default_factory=list)
    permutation: tuple | None = None  # final X_i -> X_perm[i], or None


@dataclass
class ReductionResult:
    sigma: AdditiveSubst
    F: PPoly
    m: int            # first active variable (0-based), nvars if none
    active: tuple
    transcript: ReductionTranscript


def elementary_subst(F: PPoly, step: ReductionStep) -> AdditiveSubst:
    """The substitution X_i0 -> r_i0 X_i0, X_i -> X_i + r_i X_i0^(p^(d_i0 - d_i)).

    Degrees d are those of F.  The inverse is attached.
    """
    ctx, n, p = F.ctx, F.nvars, F.ctx.p
    r = dict(step.r)
    i0 = step.i0
    if not r.get(i0):
        raise PreconditionError("the pivot coordinate of a reduction step must be nonzero")
    d0 = F.degree(i0)
    comps, inv = [], []
    r0inv = r[i0].inv()
    for i in range(n):
        if i == i0:
            comps.append(PPoly.var(ctx, n, i0, 0, r[i0]))
            inv.append(PPoly.var(ctx, n, i0, 0, r0inv))
        elif i in r:
            e = d0 - F.degree(i)
            if e < 0:
                raise PreconditionError("pivot must have maximal degree among the zero's support")
            comps.append(PPoly(ctx, n, {(i, 0): ctx.one, (i0, e): r[i]}))
            inv.append(PPoly(ctx, n, {(i, 0): ctx.one, (i0, e): -(r[i] * r0inv.frob(e))}))
        else:
            comps.append(PPoly.var(ctx, n, i))
            inv.append(PPoly.var(ctx, n, i))
    s = AdditiveSubst(comps, n, ctx)
    s.inverse = AdditiveSubst(inv, n, ctx, inverse=s)
    return s


def _trailing_perm(n, active, start):
    """Permutation keeping 0..start-1, then inactive, then active variables."""
    lo = [i for i in range(start, n) if i not in active]
    hi = [i for i in range(start, n) if i in active]
    order = list(range(start)) + lo + hi
    perm = [0] * n
    for new, old in enumerate(order):
        perm[old] = new
    return tuple(perm)


def reduce_ppoly(F: PPoly, trailing_from: int | None = None) -> ReductionResult:
    """Find sigma with F o sigma reduced on its active variables.

    Each step takes a nonzero zero r of the principal part (restricted to the
    active variables), picks i0 with r_i0 != 0 of largest degree (least
    index on ties) and applies ``elementary_subst``; the degree in X_i0
    drops strictly.  If ``trailing_from`` is given, a final permutation moves
    the active variables to the end of the range trailing_from..n-1.
    """
    if not F:
        raise PreconditionError("cannot reduce the zero p-polynomial")
    ctx, n = F.ctx, F.nvars
    sigma = AdditiveSubst.identity(ctx, n)
    cur = F
    tr = ReductionTranscript(n)
    while True:
        active = cur.variables()
        P = cur.principal_part().specialize_zero(active)
        z = principal_zero(P)
        if z is None:
            break
        r = tuple((active[k], v) for k, v in enumerate(z) if v)
        i0 = max((i for i, _ in r), key=lambda i: (cur.degree(i), -i))
        step = ReductionStep(i0, r)
        before = cur.degree_sum()
        s = elementary_subst(cur, step)
        cur = compose(cur, s)
        if cur.degree_sum() >= before:
            raise InvariantError("reduction step did not lower the degree")
        sigma = sigma.then(s)
        tr.steps.append(step)
    active = tuple(cur.variables())
    if trailing_from is not None:
        perm = _trailing_perm(n, active, trailing_from)
        if perm != tuple(range(n)):
            # composing with X_i -> X_perm[i] moves variable i to perm[i]
            ps = AdditiveSubst.permutation(ctx, list(perm))
            cur = compose(cur, ps)
            sigma = sigma.then(ps)
            tr.permutation = perm
        active = tuple(cur.variables())
    m = active[0] if active else n
    return ReductionResult(sigma, cur, m, active, tr)


def replay_reduction(F: PPoly, tr: ReductionTranscript) -> PPoly:
    """Re-run a transcript, checking every step; returns the final F'."""
    cur = F
    for st in tr.steps:
        P = cur.principal_part()
        r = dict(st.r)
        pt = [r.get(i, F.ctx.zero) for i in range(F.nvars)]
        if P.eval(pt):
            raise InvariantError(f"transcript step at X{st.i0 + 1} is not a principal zero")
        before = cur.degree_sum()
        cur = compose(cur, elementary_subst(cur, st))
        if cur.degree_sum() >= before:
            raise InvariantError("transcript step does not lower the degree")
    if tr.permutation is not None:
        cur = compose(cur, AdditiveSubst.permutation(F.ctx, list(tr.permutation)))
    return cur


# ---------------------------------------------------------------- normalization

@dataclass
class NormalizationResult:
    sigma: AdditiveSubst
    equations: list
    log: list          # (op, args) tuples
    nvars: int

    @property
    def m(self) -> int:
        return len(self.equations)


def _involving(work, v):
    return [k for k, e in enumerate(work) if e.involves(v)]


def normalize_system(eqs, nvars: int | None = None, ctx=None) -> NormalizationResult:
    """Gaussian-elimination normal form of a system of p-polynomials.

    Returns sigma and F_1..F_m such that F_i (i < m) involves X_i but no
    earlier variable, F_m is reduced on trailing variables, and the F_i
    cut out the pullback of the input system along sigma.
    """
    if isinstance(eqs, GroupPresentation):
        ctx, nvars, eqs = eqs.ctx, eqs.nvars, list(eqs.equations)
    eqs = list(eqs)
    if eqs:
        ctx = eqs[0].ctx
        nvars = eqs[0].nvars if nvars is None else nvars
    if ctx is None or nvars is None:
        raise PreconditionError("an empty system needs an explicit field and arity")
    n = nvars
    log = []
    work = list(eqs)
    out = []
    sigma = AdditiveSubst.identity(ctx, n)

    def drop_zeros():
        for k in range(len(work) - 1, -1, -1):
            if not work[k]:
                log.append(("DROP", k))
                del work[k]

    def apply(s):
        nonlocal sigma
        for k in range(len(work)):
            work[k] = compose(work[k], s)
        for k in range(len(out)):
            out[k] = compose(out[k], s)
        sigma = sigma.then(s)

    drop_zeros()
    lead = 0
    rotations = 0
    while len(work) > 1:
        inv = _involving(work, lead)
        if not inv:
            # nothing involves X_lead: move it to the end
            if rotations >= n - lead:
                raise InvariantError("no remaining equation involves a live variable")
            perm = list(range(n))
            for k in range(lead + 1, n):
                perm[k] = k - 1
            perm[lead] = n - 1
            log.append(("ROTATE", lead))
            apply(AdditiveSubst.permutation(ctx, perm))
            rotations += 1
            continue
        rotations = 0
        while len(inv) > 1:
            piv = min(inv, key=lambda k: (work[k].degree(lead), k))
            for k in inv:
                if k == piv:
                    continue
                Q, R = ore_left_divmod(work[k], work[piv], lead)
                log.append(("DIVIDE", k, piv, lead, Q))
                work[k] = R
            drop_zeros()
            inv = _involving(work, lead)
        if len(work) == 1:
            break
        k = inv[0]
        log.append(("EMIT", k))
        out.append(work.pop(k))
        lead += 1
    if work:
        res = reduce_ppoly(work[0], trailing_from=lead)
        for st in res.transcript.steps:
            log.append(("REDUCE", st.i0, st.r))
        last = work[0]
        for k in range(len(out)):
            out[k] = compose(out[k], res.sigma)
        sigma = sigma.then(res.sigma)
        if res.transcript.permutation is not None:
            log.append(("PERMUTE", res.transcript.permutation))
        log.append(("EMIT", 0))
        out.append(res.F)
        work.clear()
    for k, e in enumerate(out):
        log.append(("RESULT", k, e))
    return NormalizationResult(sigma, out, log, n)


def check_normal_shape(eqs, nvars: int) -> None:
    """Raise PreconditionError unless eqs satisfy conditions (i) and (ii)."""
    m = len(eqs)
    for i, e in enumerate(eqs[:-1]):
        vs = e.variables()
        if not e.involves(i) or (vs and vs[0] < i):
            raise PreconditionError(
                f"equation {i + 1} must involve X{i + 1} and no earlier variable")
    if m:
        last = eqs[-1]
        vs = last.variables()
        if vs and vs[0] < m - 1:
            raise PreconditionError(f"equation {m} involves a variable before X{m}")
        if vs:
            P = last.principal_part().specialize_zero(vs)
            if principal_zero(P) is not None:
                raise PreconditionError(f"equation {m} is not reduced on its variables")


def replay_normalization(eqs, nvars: int, log) -> list:
    """Re-execute a normalization log and return the final system.

    Every DIVIDE is checked to be G_k - Q o G_piv with the degree bound,
    every REDUCE to use a genuine principal zero, and the RESULT entries to
    match the replayed system exactly.
    """
    eqs = list(eqs)
    ctx = eqs[0].ctx if eqs else None
    n = nvars
    work = list(eqs)
    out = []
    pending = None  # running equation during REDUCE steps
    results = {}

    def apply(s):
        for k in range(len(work)):
            work[k] = compose(work[k], s)
        for k in range(len(out)):
            out[k] = compose(out[k], s)

    for entry in log:
        op = entry[0]
        if op == "DROP":
            k = entry[1]
            if work[k]:
                raise InvariantError(f"DROP of a nonzero equation at {k}")
            del work[k]
        elif op == "ROTATE":
            lead = entry[1]
            if any(e.involves(lead) for e in work):
                raise InvariantError(f"ROTATE of X{lead + 1} which is still involved")
            perm = list(range(n))
            for k in range(lead + 1, n):
                perm[k] = k - 1
            perm[lead] = n - 1
            apply(AdditiveSubst.permutation(ctx, perm))
        elif op == "DIVIDE":
            _, k, piv, var, Q = entry
            g1 = work[piv]
            R = work[k] - compose(Q, AdditiveSubst([g1], n, ctx))
            if R.degree(var) >= g1.degree(var):
                raise InvariantError("DIVIDE remainder violates the degree bound")
            work[k] = R
        elif op == "EMIT":
            out.append(work.pop(entry[1]))
        elif op == "REDUCE":
            _, i0, r = entry
            cur = work[0]
            P = cur.principal_part()
            rd = dict(r)
            if P.eval([rd.get(i, ctx.zero) for i in range(n)]):
                raise InvariantError("REDUCE step is not a principal zero")
            s = elementary_subst(cur, ReductionStep(i0, r))
            before = cur.degree_sum()
            apply(s)
            if work[0].degree_sum() >= before:
                raise InvariantError("REDUCE step does not lower the degree")
        elif op == "PERMUTE":
            apply(AdditiveSubst.permutation(ctx, list(entry[1])))
        elif op == "RESULT":
            results[entry[1]] = entry[2]
        else:
            raise InvariantError(f"unknown log op {op!r}")
    if work:
        raise InvariantError("log leaves equations unprocessed")
    for k, e in enumerate(out):
        if results.get(k) != e:
            raise InvariantError(f"replayed equation {k + 1} differs from the logged result")
    if len(results) != len(out):
        raise InvariantError("logged result count differs from the replay")
    return out


# ---------------------------------------------------------------- filtration

@dataclass
class FiltrationStage:
    index: int            # 1-based i
    variables: tuple      # ambient variable indices (0-based) of the stage
    equation: PPoly       # in len(variables) variables
    witness: str          # why the stage map is surjective / well-formed


def hypersurface_filtration(eqs, nvars: int, ctx=None) -> list:
    """Stages i = m..1 of the filtration attached to a normalized system.

    Stage m is {F_m = 0} on X_m..X_n.  Stage i < m is F_i with
    X_(i+1)..X_n set to 0, a p-polynomial in X_i alone that involves X_i.
    An empty system gives n split stages (``ctx`` is then required).
    """
    eqs = list(eqs)
    check_normal_shape(eqs, nvars)
    m = len(eqs)
    if not m:
        if ctx is None:
            raise PreconditionError("empty system: pass ctx to build the split stages")
        return split_stages(ctx, nvars)
    stages = []
    last = eqs[-1]
    keep = tuple(range(m - 1, nvars))
    stages.append(FiltrationStage(m, keep, last.specialize_zero(keep),
                                  "reduced on its variables"))
    for i in range(m - 2, -1, -1):
        e = eqs[i]
        q = e.specialize_zero((i,))
        top = e.degree(i)
        stages.append(FiltrationStage(
            i + 1, (i,), q,
            f"X{i + 1} occurs (degree p^{top}) with coefficient {e.coeff(i, top)}"))
    return stages


def split_stages(ctx, nvars: int) -> list:
    """The filtration of G_a^n for the empty system: n copies of G_a."""
    return [FiltrationStage(i + 1, (i,), PPoly.zero(ctx, 1), "split factor G_a")
            for i in range(nvars - 1, -1, -1)]
