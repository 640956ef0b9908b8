"""Finite fields F_q with q = p^e <= 2^16.

Elements are plain ints 0..q-1: the base-p digits of an element are the
coefficients (constant term first) of its representative polynomial modulo
the field's fixed irreducible.  For e = 1 this is just the residue mod p.
"""
from __future__ import annotations

import functools

import numpy as np

from . import _kernels

MAX_Q = 2 ** 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# small dense polynomials over F_p, coefficient lists, constant term first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(_trim(a)) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
    return a


def _pmulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_pmod(a, b, p))
    return a


def _is_irreducible(m, p):
    # Ben-Or: m irreducible iff gcd(x^{p^i} - x, m) = 1 for i <= deg/2
    d = len(m) - 1
    xp = [0, 1]
    for _ in range(d // 2):
        acc = [1]
        base, k = xp, p
        while k:
            if k & 1:
                acc = _pmulmod(acc, base, m, p)
            base = _pmulmod(base, base, m, p)
            k >>= 1
        xp = _trim(acc)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(m, diff, p)) > 1:
            return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over F_p with the least code.

    The code of x^e + c_{e-1}x^{e-1} + ... + c_0 is sum c_i p^i.
    """
    if e == 1:
        return (0, 1)
    for code in range(p ** e):
        coeffs = [(code // p ** i) % p for i in range(e)] + [1]
        if coeffs[0] and _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible of degree {e} over F_{p}")  # unreachable


class GF:
    """The field F_q.  Instances are cached per (p, e)."""

    __slots__ = ("p", "e", "q", "modulus", "gen", "exp", "log",
                 "_exp", "_log", "_addtab", "_as_pre", "__weakref__")

    def __new__(cls, p: int, e: int = 1):
        return _gf(p, e)

    @classmethod
    def _build(cls, p, e):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if p ** e > MAX_Q:
            raise ValueError(f"q = {p}^{e} exceeds the supported bound {MAX_Q}")
        self = object.__new__(cls)
        self.p, self.e, self.q = p, e, p ** e
        self.modulus = least_irreducible(p, e)
        self._make_tables()
        self._addtab = None
        if p > 2 and e > 1 and self.q <= 1024:
            d = np.arange(self.q)
            tab = _kernels.kernel("add_vec", "numpy")(
                np.repeat(d, self.q), np.tile(d, self.q), p, e)
            self._addtab = tab.reshape(self.q, self.q).tolist()
        self._as_pre = None
        return self

    def _mulx(self, digits):
        # multiply a digit vector by x modulo the fixed irreducible
        p, m = self.p, self.modulus
        top = digits[-1]
        out = [0] + digits[:-1]
        if top:
            out = [(out[i] - top * m[i]) % p for i in range(self.e)]
        return out

    def _make_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            # generator: least primitive root
            g = 1 if q == 2 else next(
                g for g in range(2, q)
                if all(pow(g, (q - 1) // f, q) != 1 for f in _prime_factors(q - 1)))
            exp = [1]
            for _ in range(q - 2):
                exp.append(exp[-1] * g % q)
        else:
            # powers of each candidate, least code of full order
            g = None
            for cand in range(2, q):
                exp = _powers(self, cand)
                if exp is not None:
                    g = cand
                    break
        self.gen = g
        exp = list(exp)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp, self._log = exp, log
        self.exp = np.array(exp + exp[:1], dtype=np.int64)
        self.log = np.array(log, dtype=np.int64)

    # ---------------------------------------------------------------- scalar ops

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        if self._addtab is not None:
            return self._addtab[a][b]
        out, place = 0, 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return -a % p
        if p == 2:
            return a
        out, place = 0, 1
        for _ in range(self.e):
            out += (-(a % p) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if not a:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        if self.e == 1:
            return pow(a, k % (self.p - 1) or (self.p - 1), self.p) if self.p > 2 else 1
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    # ---------------------------------------------------------------- structure

    def frobenius(self, x: int, n: int = 1) -> int:
        """x^(p^n)."""
        n %= self.e
        return self.pow(x, self.p ** n) if n else x

    def pth_root(self, x: int, n: int = 1) -> int:
        """The unique y with y^(p^n) = x."""
        return self.frobenius(x, (-n) % self.e)

    def trace(self, x: int) -> int:
        """Absolute trace to F_p, as an int in 0..p-1."""
        acc, y = 0, x
        for _ in range(self.e):
            acc = self.add(acc, y)
            y = self.frobenius(y)
        return acc

    def as_table(self):
        """Arrays (mask, pre) describing y -> y^p - y on all of F_q."""
        if self._as_pre is None:
            mask, pre = _kernels.kernel("as_image")(
                self.q, self.p, self.e, self.exp, self.log)
            self._as_pre = (np.asarray(mask), np.asarray(pre))
        return self._as_pre

    def artin_schreier_preimage(self, x: int) -> int | None:
        """Least y with y^p - y = x, or None when x is not in the image."""
        mask, pre = self.as_table()
        return int(pre[x]) if mask[x] else None

    def elements(self):
        return range(self.q)

    # ---------------------------------------------------------------- text

    def modulus_str(self) -> str:
        if self.e == 1:
            return f"x - 0 (prime field F_{self.p})"
        return _render_digits(self.modulus, "x", self.p)

    def render(self, a: int) -> str:
        """Text for an element: an integer for prime fields, else a polynomial in g."""
        if self.e == 1:
            return str(a)
        digits = [(a // self.p ** i) % self.p for i in range(self.e)]
        return _render_digits(digits, "g", self.p)

    def from_digits(self, digits) -> int:
        return sum((d % self.p) * self.p ** i for i, d in enumerate(digits))

    @property
    def g(self) -> int:
        """The class of x (code p), or the field generator name for e > 1."""
        return self.p if self.e > 1 else 1

    def embedding_into(self, big: "GF"):
        """Table of an embedding F_q -> big, as a list indexed by codes."""
        return _embedding(self, big)

    def __repr__(self):
        return f"GF({self.p}, {self.e})"

    def __reduce__(self):
        return (GF, (self.p, self.e))


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _powers(F, cand):
    # full list of powers of cand if it has order q-1, else None
    p, e, q = F.p, F.e, F.q
    digits = [(cand // p ** i) % p for i in range(e)]
    cur = [1] + [0] * (e - 1)
    out = []
    seen_one = False
    for k in range(q - 1):
        code = sum(d * p ** i for i, d in enumerate(cur))
        if k and code == 1:
            seen_one = True
            break
        out.append(code)
        cur = _mul_digits(F, cur, digits)
    if seen_one:
        return None
    return out


def _mul_digits(F, a, b):
    p = F.p
    prod = [0] * (2 * F.e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    red = _pmod(prod, list(F.modulus), p)
    return red + [0] * (F.e - len(red))


def _render_digits(digits, var, p):
    parts = []
    for i in range(len(digits) - 1, -1, -1):
        c = digits[i] % p
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return "+".join(parts) if parts else "0"


@functools.lru_cache(maxsize=None)
def _gf(p, e):
    return GF._build(p, e)


@functools.lru_cache(maxsize=None)
def _embedding(small, big):
    if big.p != small.p or big.e % small.e:
        raise ValueError(f"{small} does not embed in {big}")
    if small.e == 1:
        return tuple(range(small.q))
    # find the least root of the small modulus in big
    m = small.modulus
    root = None
    for z in range(big.q):
        acc, zp = 0, 1
        for c in m:
            acc = big.add(acc, big.mul(big.from_int(c), zp))
            zp = big.mul(zp, z)
        if acc == 0:
            root = z
            break
    table = []
    for a in range(small.q):
        digits = [(a // small.p ** i) % small.p for i in range(small.e)]
        acc, zp = 0, 1
        for d in digits:
            acc = big.add(acc, big.mul(big.from_int(d), zp))
            zp = big.mul(zp, root)
        table.append(acc)
    return tuple(table)


def parse_field_size(q: int) -> tuple[int, int]:
    """Split q = p^e, raising ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = _prime_factors(q)
    if len(p) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = p[0]
    e, n = 0, q
    while n > 1:
        n //= p
        e += 1
    return p, e
