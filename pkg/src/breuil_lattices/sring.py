"""The ring S_E = S[1/p] on the divided-power basis X^[j] = (u-p)^j / j!.

X = u - p = E(u).  An SElem stores coefficients c_j (PadicElem) for j < m
together with an error annotation:

* ``tail``: if not None, the element is only known modulo p^tail * Fil^m S_O,
  i.e. discarded coefficients at degrees >= m have valuation >= tail;
* ``perr``: if not None, an additional unknown term lies in p^perr * S_O.

Exact computations never set either field.  Products use
X^[j] X^[k] = binom(j+k, j) X^[j+k]; the Frobenius is u -> u^p (identity on
E) so phi(X) = (X+p)^p - p; the monodromy is the derivation with N(u) = -u.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .padic import IndeterminateError, PadicContext, PadicElem, Val, vmin, vp_int


INFINITY = Fraction(10 ** 9)


def _min(*xs):
    xs = [x for x in xs if x is not None]
    return min(xs) if xs else None


def _add(a, b):
    return None if a is None or b is None else a + b


def phi_tail_bound(j: int, p: int) -> Fraction:
    """A lower bound for j - v_p(j!) valid for every index >= j."""
    return Fraction(-((-(j * (p - 2) + 1)) // (p - 1)))


class SRingContext:
    """Truncation depth m over a p-adic context."""

    def __init__(self, base: PadicContext, m: int | None = None):
        p = base.p
        self.base = base
        self.m = 2 * p + 2 if m is None else m
        if self.m < 2:
            raise ValueError("truncation depth must be at least 2")
        self._phi_table: list[list[Fraction]] = [[Fraction(1)]]
        self._phi_rows: dict[int, list] = {}
        self._phiX = [Fraction(comb(p, k) * p ** (p - k) * factorial(k)) for k in range(p + 1)]
        self._phiX[0] -= p

    @property
    def p(self) -> int:
        return self.base.p

    def __repr__(self):
        return f"SRingContext({self.base!r}, m={self.m})"

    # constructors

    def elem(self, coeffs: Sequence, tail=None, perr=None) -> "SElem":
        b = self.base
        cs = [c if isinstance(c, PadicElem) else b(c) for c in coeffs]
        if len(cs) > self.m:
            extra = cs[self.m:]
            cs = cs[: self.m]
            tail = _min(tail, *[_lb(c) for c in extra])
        return SElem(self, tuple(cs), tail, perr)

    def zero(self) -> "SElem":
        return SElem(self, (), None, None)

    def one(self) -> "SElem":
        return self.scalar(1)

    def scalar(self, c) -> "SElem":
        return self.elem([c])

    def X(self) -> "SElem":
        """E(u) = u - p."""
        return self.elem([0, 1])

    def u(self) -> "SElem":
        return self.elem([self.p, 1])

    def basis(self, j: int) -> "SElem":
        """X^[j] = (u-p)^j / j!."""
        return self.elem([0] * j + [1])

    def gamma(self) -> "SElem":
        """(u-p)^p / p = (p-1)! X^[p]."""
        p = self.p
        if self.m <= p:
            raise ValueError("gamma needs truncation depth m > p")
        return self.elem([0] * p + [factorial(p - 1)])

    def from_u_powers(self, coeffs: Sequence) -> "SElem":
        """sum c_k u^k rewritten on the divided-power basis of X = u - p."""
        out = self.zero()
        u = self.u()
        power = self.one()
        for c in coeffs:
            out = out + power.scale(c)
            power = power * u
        return out

    # the Frobenius of basis elements, as exact rationals truncated at m

    def phi_basis(self, j: int) -> list[Fraction]:
        table = self._phi_table
        p, m = self.p, self.m
        while len(table) <= j:
            k = len(table)
            prev = table[-1]
            new = [Fraction(0)] * min(m, len(prev) + p)
            for a, ca in enumerate(prev):
                if ca:
                    for b, cb in enumerate(self._phiX):
                        if a + b < m and cb:
                            new[a + b] += ca * cb * comb(a + b, a)
            table.append([c / k for c in new])
        return table[j]

    def phi_row(self, j: int) -> list:
        """phi(X^[j]) as (index, PadicElem) pairs for the nonzero entries."""
        row = self._phi_rows.get(j)
        if row is None:
            b = self.base
            row = [(k, b(r)) for k, r in enumerate(self.phi_basis(j)) if r]
            self._phi_rows[j] = row
        return row


def _lb(c: PadicElem) -> Fraction:
    return c.valuation().lb


class SElem:
    """Immutable element of the truncated divided-power ring."""

    __slots__ = ("ctx", "c", "tail", "perr")

    def __init__(self, ctx: SRingContext, c: tuple, tail=None, perr=None):
        self.ctx = ctx
        self.c = c
        self.tail = tail
        self.perr = perr

    # queries

    @property
    def trunc(self) -> bool:
        return self.tail is not None

    @property
    def exact(self) -> bool:
        return self.tail is None and self.perr is None

    def coeff(self, j: int) -> PadicElem:
        if j < len(self.c):
            return self.c[j]
        if j >= self.ctx.m and self.tail is not None:
            return self.ctx.base.zero(0)
        return self.ctx.base.zero()

    def degree(self) -> int:
        """Largest index with a coefficient nonzero to precision (-1 if none)."""
        for j in range(len(self.c) - 1, -1, -1):
            if not self.c[j].is_zero():
                return j
        return -1

    def fil_level(self) -> int:
        """min j with c_j nonzero; m when the head vanishes."""
        for j, cj in enumerate(self.c):
            if not cj.is_zero():
                return j
        return self.ctx.m

    def norm(self) -> Val:
        """min over coefficient valuations (including error terms)."""
        vals = [cj.valuation() for cj in self.c]
        if self.tail is not None:
            vals.append(Val(self.tail, False))
        if self.perr is not None:
            vals.append(Val(self.perr, False))
        if not vals:
            return Val(INFINITY, False)
        return vmin(*vals)

    def head_norm(self) -> Fraction | None:
        """Lower bound for the coefficient valuations of the stored head."""
        vals = [_lb(cj) for cj in self.c]
        return min(vals) if vals else None

    def is_integral(self) -> bool:
        """All coefficients in O_E (membership in S_O)."""
        return self.norm() >= 0

    def divisible_by_p_power(self, k) -> bool:
        return self.norm() >= k

    def is_zero(self) -> bool:
        return all(cj.is_zero() for cj in self.c) and self.tail is None and self.perr is None

    # arithmetic

    def _check(self, other: "SElem"):
        if other.ctx is not self.ctx:
            raise ValueError("S-ring context mismatch")

    def __add__(self, other) -> "SElem":
        if not isinstance(other, SElem):
            other = self.ctx.scalar(other)
        self._check(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, y in enumerate(b):
            out[j] = out[j] + y
        return SElem(self.ctx, tuple(out), _min(self.tail, other.tail), _min(self.perr, other.perr))

    __radd__ = __add__

    def __neg__(self) -> "SElem":
        return SElem(self.ctx, tuple(-x for x in self.c), self.tail, self.perr)

    def __sub__(self, other) -> "SElem":
        if not isinstance(other, SElem):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "SElem":
        return (-self) + other

    def scale(self, k) -> "SElem":
        """Multiply by a scalar in E."""
        if not isinstance(k, PadicElem):
            k = self.ctx.base(k)
        kv = _lb(k)
        return SElem(self.ctx, tuple(x * k for x in self.c), _add(self.tail, kv), _add(self.perr, kv))

    def __mul__(self, other) -> "SElem":
        if isinstance(other, (PadicElem, int, Fraction)):
            return self.scale(other)
        self._check(other)
        m = self.ctx.m
        zero = self.ctx.base.zero()
        a, b = self.c, other.c
        out = [zero] * min(m, max(len(a) + len(b) - 1, 0))
        dropped = None
        cap = self.ctx.base.cap
        for j, x in enumerate(a):
            if x.val is None and x.prec >= cap:
                continue
            for k, y in enumerate(b):
                if y.val is None and y.prec >= cap:
                    continue
                if j + k < m:
                    binom = comb(j + k, j)
                    out[j + k] = out[j + k] + x * y * binom if binom != 1 else out[j + k] + x * y
                else:
                    d = _lb(x) + _lb(y)
                    dropped = d if dropped is None else min(dropped, d)
        na, nb = self.head_norm(), other.head_norm()
        tail = _min(dropped,
                    _add(self.tail, nb), _add(other.tail, na), _add(self.tail, other.tail))
        fa = _min(na, self.tail)
        fb = _min(nb, other.tail)
        perr = _min(_add(self.perr, fb), _add(other.perr, fa), _add(self.perr, other.perr))
        return SElem(self.ctx, tuple(out), tail, perr)

    def __rmul__(self, other) -> "SElem":
        return self.scale(other)

    def __pow__(self, n: int) -> "SElem":
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def phi(self) -> "SElem":
        """Frobenius: identity on coefficients, u -> u^p."""
        ctx = self.ctx
        base, m, p = ctx.base, ctx.m, ctx.p
        rows = []
        tail = None
        for j, cj in enumerate(self.c):
            if cj.is_zero() and cj.prec >= base.cap:
                continue
            rows.append((cj, ctx.phi_row(j)))
            if p * j >= m:
                # the discarded part of phi(X^[j]) lies in p^(j - v(j!)) Fil^m S_O
                d = _lb(cj) + phi_tail_bound(j, p)
                tail = d if tail is None else min(tail, d)
        width = max((row[-1][0] + 1 for _, row in rows if row), default=0)
        out = [base.zero()] * width
        for cj, row in rows:
            for k, r in row:
                out[k] = out[k] + cj * r
        perr = self.perr
        if self.tail is not None:
            perr = _min(perr, self.tail + phi_tail_bound(m, p))
        return SElem(ctx, tuple(out), tail, perr)

    def N(self) -> "SElem":
        """Monodromy: N(X^[j]) = -j X^[j] - p X^[j-1]."""
        ctx = self.ctx
        p = ctx.p
        c = self.c
        out = []
        for j in range(len(c)):
            t = c[j] * (-j) if j else ctx.base.zero(c[j].prec)
            if j + 1 < len(c):
                t = t - c[j + 1] * p
            out.append(t)
        perr = self.perr
        if self.tail is not None:
            perr = _min(perr, self.tail + 1)
        return SElem(ctx, tuple(out), self.tail, perr)

    # reductions

    def reduce_mod_p(self) -> list:
        """Image in F_p[u]/u^p: X^[j] -> u^j / j! for j < p, zero beyond."""
        from .finite_field import GF

        F = GF(self.ctx.p, 1)
        p = self.ctx.p
        if self.perr is not None and self.perr <= 0:
            raise IndeterminateError("reduction undecidable: p-adic error too large")
        out = []
        for j in range(p):
            cj = self.coeff(j)
            out.append(cj.residue() * F(factorial(j)).inverse())
        return out

    def to_json(self) -> dict:
        d = {"coeffs": {str(j): cj.to_json() for j, cj in enumerate(self.c) if not cj.is_zero()},
             "trunc": self.ctx.m}
        if self.tail is not None:
            d["tail"] = str(self.tail)
        if self.perr is not None:
            d["perr"] = str(self.perr)
        return d

    def __repr__(self):
        terms = [f"({cj})X^[{j}]" for j, cj in enumerate(self.c) if not cj.is_zero()]
        s = " + ".join(terms) or "0"
        if self.tail is not None:
            s += f" + O(p^{self.tail} Fil^{self.ctx.m})"
        if self.perr is not None:
            s += f" + O(p^{self.perr})"
        return s


def s_mul(x: SElem, y: SElem) -> SElem:
    return x * y


def s_phi(x: SElem) -> SElem:
    return x.phi()


def s_N(x: SElem) -> SElem:
    return x.N()
