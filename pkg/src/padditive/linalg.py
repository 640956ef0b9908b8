"""Exact linear algebra over k.

Vectors are sparse dicts {position: RatFunc}.  ``Echelon`` keeps a fully
reduced row echelon basis of a growing subspace and remembers, for every
basis vector, which inserted vectors it is a combination of.  That one
structure answers kernel, solve, rank, span-membership and
inconsistency-witness questions.

``bareiss_rank`` is an independent fraction-free route used to cross-check
ranks: rows are cleared of denominators and eliminated over F_q[t] with
exact divisions only.
"""
from __future__ import annotations

from . import polys as P


def _axpy(x, a, y):
    """x + a*y on sparse vectors (new dict)."""
    out = dict(x)
    for k, v in y.items():
        w = out.get(k)
        nv = a * v if w is None else w + a * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _cost(v):
    # cheap pivots first: constants, then polynomials, then small fractions
    if v.is_const():
        return (0, 0)
    return (1 if v.is_poly() else 2, len(v.num) + len(v.den))


class Echelon:
    """Incremental reduced echelon basis with provenance.

    ``add(vec, tag)`` inserts a vector labelled ``tag``.  Each basis vector
    b is stored with a dict ``prov`` so that b = sum prov[tag] * inserted[tag].
    """

    def __init__(self):
        self.basis = {}   # pivot position -> vector (pivot entry 1)
        self.prov = {}    # pivot position -> provenance dict

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, vec, prov=None):
        """(residual, prov) with residual = vec - sum(combination of basis).

        The returned provenance expresses the residual in terms of the
        inserted vectors plus whatever ``prov`` started with.
        """
        vec = dict(vec)
        prov = dict(prov or {})
        for piv in [k for k in vec if k in self.basis]:
            c = vec.get(piv)
            if c is None:
                continue
            vec = _axpy(vec, -c, self.basis[piv])
            prov = _axpy(prov, -c, self.prov[piv])
        return vec, prov

    def add(self, vec, tag=None):
        """Insert vec; returns None if independent, else the dependency.

        A dependency is a provenance dict d with sum d[tag]*inserted[tag] = 0
        and d[tag_of_vec] = 1.
        """
        one = None
        for v in vec.values():
            one = v.ctx.one
            break
        start = {tag: one} if (tag is not None and one is not None) else {}
        res, prov = self.reduce(vec, start)
        if not res:
            return prov
        piv = min(res, key=lambda k: (_cost(res[k]), k))
        inv = res[piv].inv()
        res = {k: v * inv for k, v in res.items()}
        prov = {k: v * inv for k, v in prov.items()}
        for q in list(self.basis):
            b = self.basis[q]
            c = b.get(piv)
            if c is not None:
                self.basis[q] = _axpy(b, -c, res)
                self.prov[q] = _axpy(self.prov[q], -c, prov)
        self.basis[piv] = res
        self.prov[piv] = prov
        return None

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Coefficients c with vec = sum c[tag]*inserted[tag], or None."""
        res, prov = self.reduce(vec)
        if res:
            return None
        return {k: -v for k, v in prov.items() if v}

    def annihilator(self, vec, positions):
        """A functional y (dict) vanishing on the span with y(vec) != 0.

        ``positions`` is the full coordinate range.  Returns None if vec is
        in the span.
        """
        res, _ = self.reduce(vec)
        if not res:
            return None
        j = min(res)
        y = {j: res[j].ctx.one}
        for piv, b in self.basis.items():
            c = b.get(j)
            if c is not None:
                y[piv] = -c
        return y


def _to_sparse(M):
    return [{j: v for j, v in enumerate(row) if v} for row in M]


def _ctx_of(M):
    for row in M:
        for v in row:
            return v.ctx
    return None


def mat_rank(M) -> int:
    E = Echelon()
    for i, row in enumerate(_to_sparse(M)):
        E.add(row, i)
    return E.rank


def mat_kernel(M, ncols: int | None = None):
    """Basis of {v : M v = 0}, as dense lists of RatFunc."""
    ncols = ncols if ncols is not None else (len(M[0]) if M else 0)
    ctx = _ctx_of(M)
    E = Echelon()
    for row in _to_sparse(M):
        E.add(row)
    if ctx is None:
        if ncols:
            raise ValueError("kernel of an empty matrix needs RatFunc entries for its field")
        return []
    out = []
    for j in range(ncols):
        if j in E.basis:
            continue
        v = [ctx.zero] * ncols
        v[j] = ctx.one
        for piv, b in E.basis.items():
            c = b.get(j)
            if c is not None:
                v[piv] = -c
        out.append(v)
    return out


def mat_solve(M, b):
    """Some x with M x = b, or None if the system is inconsistent."""
    ctx = _ctx_of(M) or _ctx_of([b])
    ncols = len(M[0]) if M else 0
    aug = ncols
    E = Echelon()
    for i, row in enumerate(M):
        vec = {j: v for j, v in enumerate(row) if v}
        if b[i]:
            vec[aug] = b[i]
        res, _ = E.reduce(vec)
        if res and all(k == aug for k in res):
            return None
        if res:
            # never pivot on the augmented column while others are present
            piv = min((k for k in res if k != aug), key=lambda k: (_cost(res[k]), k))
            inv = res[piv].inv()
            res = {k: v * inv for k, v in res.items()}
            for q in list(E.basis):
                bq = E.basis[q]
                c = bq.get(piv)
                if c is not None:
                    E.basis[q] = _axpy(bq, -c, res)
            E.basis[piv] = res
            E.prov[piv] = {}
    x = [ctx.zero] * ncols
    for piv, row in E.basis.items():
        x[piv] = row.get(aug, ctx.zero)
    return x


def mat_vec(M, v):
    ctx = _ctx_of(M)
    out = []
    for row in M:
        acc = ctx.zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def bareiss_rank(M) -> int:
    """Rank by fraction-free elimination over F_q[t1..tr]."""
    ctx = _ctx_of(M)
    if ctx is None:
        return 0
    F, nv = ctx.F, ctx.r
    rows = []
    for row in M:
        den = P.const(F, 1, nv)
        for v in row:
            if v:
                g = P.gcd(F, den, v.den, nv)
                den = P.mul(F, den, P.divexact(F, v.den, g))
        rows.append([P.mul(F, v.num, P.divexact(F, den, v.den)) if v else {} for v in row])
    nr, nc = len(rows), (len(rows[0]) if rows else 0)
    prev = P.const(F, 1, nv)
    rank = 0
    col = 0
    while rank < nr and col < nc:
        piv = next((i for i in range(rank, nr) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        a = rows[rank][col]
        for i in range(rank + 1, nr):
            ci = rows[i][col]
            for j in range(col + 1, nc):
                v = P.sub(F, P.mul(F, a, rows[i][j]), P.mul(F, ci, rows[rank][j]))
                rows[i][j] = P.divexact(F, v, prev) if v else {}
            rows[i][col] = {}
        prev = a
        rank += 1
        col += 1
    return rank
