"""Capped-precision arithmetic in E = Q_p(pi), pi^e = p.

An element is stored as pi^val * U where U = sum_{i<e} a_i pi^i is a unit
(a_0 prime to p).  Precision is absolute and counted in pi-adic digits: the
element is known modulo pi^prec, with prec never exceeding the context cap.
Valuations are exact whenever the element is nonzero modulo pi^prec.  An
element that is zero modulo pi^prec ("zero to precision") only has a lower
bound prec/e for its valuation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class PrecisionError(ArithmeticError):
    """Raised when a computation needs more precision than is available."""


class IndeterminateError(PrecisionError):
    """Raised when a comparison cannot be decided at the known precision."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True, eq=False)
class Val:
    """A p-adic valuation that is either exact or only a lower bound.

    ``lb`` is the value (exact) or the known lower bound.  Comparisons that
    cannot be decided from a lower bound raise IndeterminateError.
    """

    lb: Fraction
    exact: bool = True

    @staticmethod
    def of(x) -> "Val":
        if isinstance(x, Val):
            return x
        return Val(Fraction(x), True)

    def __add__(self, other) -> "Val":
        o = Val.of(other)
        return Val(self.lb + o.lb, self.exact and o.exact)

    __radd__ = __add__

    def __neg__(self) -> "Val":
        if not self.exact:
            raise IndeterminateError("negating a valuation lower bound")
        return Val(-self.lb)

    def __sub__(self, other) -> "Val":
        o = Val.of(other)
        if not o.exact:
            raise IndeterminateError("subtracting a valuation lower bound")
        return Val(self.lb - o.lb, self.exact)

    def __rsub__(self, other) -> "Val":
        return Val.of(other) - self

    def __mul__(self, k) -> "Val":
        k = Fraction(k)
        if k < 0 and not self.exact:
            raise IndeterminateError("scaling a lower bound by a negative number")
        return Val(self.lb * k, self.exact or k == 0)

    __rmul__ = __mul__

    def _cmp(self, other) -> int:
        o = Val.of(other)
        if self.exact and o.exact:
            return (self.lb > o.lb) - (self.lb < o.lb)
        if self.exact and self.lb < o.lb:
            return -1
        if o.exact and o.lb < self.lb:
            return 1
        raise IndeterminateError(f"cannot compare {self} with {o}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Val, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __ge__(self, other) -> bool:
        o = Val.of(other)
        if o.exact and self.lb >= o.lb:
            return True
        if self.exact and self.lb < o.lb:
            return False
        if self.exact and o.exact:
            return self.lb >= o.lb
        raise IndeterminateError(f"cannot decide {self} >= {o}")

    def __gt__(self, other) -> bool:
        o = Val.of(other)
        if o.exact and self.lb > o.lb:
            return True
        if self.exact and self.lb <= o.lb:
            return False
        raise IndeterminateError(f"cannot decide {self} > {o}")

    def __le__(self, other) -> bool:
        return Val.of(other) >= self

    def __lt__(self, other) -> bool:
        return Val.of(other) > self

    def __hash__(self):
        return hash((self.lb, self.exact))

    def same(self, other: "Val") -> bool:
        """Structural equality, never raises."""
        return self.lb == other.lb and self.exact == other.exact

    def __repr__(self) -> str:
        return f"{self.lb}" if self.exact else f">={self.lb}"


def vmin(*vals) -> Val:
    """Minimum of valuations, keeping lower-bound information honest."""
    vals = [Val.of(v) for v in vals]
    exact = [v for v in vals if v.exact]
    bound = min((v.lb for v in vals if not v.exact), default=None)
    if exact:
        m = min(v.lb for v in exact)
        if bound is None or m <= bound:
            return Val(m)
        return Val(bound, False)
    return Val(bound, False)


class PadicContext:
    """The field E = Q_p(pi) with pi^e = p, elements capped at pi^cap."""

    __slots__ = ("p", "e", "cap")

    def __init__(self, p: int, e: int, cap: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if p <= 3:
            raise ValueError("p must be greater than 3")
        if e < 1:
            raise ValueError("ramification index e must be >= 1")
        if cap < 2 * e:
            raise ValueError(f"cap must be at least 2e = {2 * e}")
        self.p, self.e, self.cap = p, e, cap

    def __eq__(self, other):
        return isinstance(other, PadicContext) and (self.p, self.e, self.cap) == (
            other.p, other.e, other.cap)

    def __hash__(self):
        return hash((self.p, self.e, self.cap))

    def __repr__(self):
        return f"PadicContext(p={self.p}, e={self.e}, cap={self.cap})"

    def with_cap(self, cap: int) -> "PadicContext":
        return PadicContext(self.p, self.e, cap)

    # constructors

    def zero(self, prec: int | None = None) -> "PadicElem":
        return PadicElem(self, None, None, self.cap if prec is None else min(prec, self.cap))

    def one(self) -> "PadicElem":
        return self(1)

    def pi(self) -> "PadicElem":
        return self.from_poly([0, 1])

    def __call__(self, x) -> "PadicElem":
        if isinstance(x, PadicElem):
            return self.convert(x)
        if isinstance(x, Fraction):
            return self(x.numerator) / self(x.denominator)
        if isinstance(x, int):
            return self.from_poly([x])
        raise TypeError(f"cannot build a p-adic element from {type(x).__name__}")

    def from_poly(self, coeffs: Sequence[int], shift: int = 0, prec: int | None = None) -> "PadicElem":
        """The element pi^shift * sum c_i pi^i (integer c_i)."""
        e, p = self.e, self.p
        vec = [0] * e
        for i, c in enumerate(coeffs):
            vec[i % e] += c * p ** (i // e)
        return _make(self, shift, vec, self.cap if prec is None else min(prec, self.cap))

    def from_digits(self, digits: Sequence[int], known_prec: int, shift: int = 0) -> "PadicElem":
        return self.from_poly(list(digits), shift=shift, prec=known_prec + shift)

    def convert(self, x: "PadicElem") -> "PadicElem":
        """Move an element into this context (same p and e)."""
        if (x.ctx.p, x.ctx.e) != (self.p, self.e):
            raise ValueError("incompatible p-adic contexts")
        if x.val is None:
            return self.zero(x.prec)
        return _make(self, x.val, list(x.unit), min(x.prec, self.cap))


def _times_pi_power(vec: list[int], k: int, e: int, p: int) -> list[int]:
    """Multiply sum vec[i] pi^i by pi^k (k >= 0) and reduce with pi^e = p."""
    if k == 0:
        return list(vec)
    out = [0] * e
    for i, a in enumerate(vec):
        j = i + k
        out[j % e] += a * p ** (j // e)
    return out


def _make(ctx: PadicContext, shift: int, vec: list[int], prec: int) -> "PadicElem":
    """Normalise pi^shift * sum vec[i] pi^i known modulo pi^prec."""
    e, p = ctx.e, ctx.p
    prec = min(prec, ctx.cap)
    rel = prec - shift
    if rel <= 0:
        return PadicElem(ctx, None, None, prec)
    vec = [a % p ** _ceil_div(rel - i, e) if rel - i > 0 else 0 for i, a in enumerate(vec)]
    w = None
    for i, a in enumerate(vec):
        if a:
            wi = e * vp_int(a, p) + i
            if w is None or wi < w:
                w = wi
    if w is None or w >= rel:
        return PadicElem(ctx, None, None, prec)
    q, r = divmod(w, e)
    if q:
        pq = p ** q
        vec = [a // pq for a in vec]
    if r:
        vec = vec[r:] + [a // p for a in vec[:r]]
    rel -= w
    unit = tuple(a % p ** _ceil_div(rel - i, e) if rel - i > 0 else 0 for i, a in enumerate(vec))
    return PadicElem(ctx, shift + w, unit, prec)


class PadicElem:
    """Element of E known modulo pi^prec.  Immutable."""

    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx: PadicContext, val: int | None, unit: tuple | None, prec: int):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.prec = prec

    # basic queries

    @property
    def known_prec(self) -> int:
        return self.prec

    def is_zero(self) -> bool:
        """True when the element is zero modulo pi^prec."""
        return self.val is None

    def valuation(self) -> Val:
        if self.val is None:
            return Val(Fraction(self.prec, self.ctx.e), False)
        return Val(Fraction(self.val, self.ctx.e))

    def pi_valuation(self) -> int | None:
        return self.val

    def rel_prec(self) -> int:
        return self.prec - self.val if self.val is not None else 0

    def _coerce(self, other) -> "PadicElem":
        if isinstance(other, PadicElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("p-adic elements from different contexts")
            return other
        return self.ctx(other)

    # arithmetic

    def __add__(self, other) -> "PadicElem":
        o = self._coerce(other)
        ctx = self.ctx
        prec = min(self.prec, o.prec)
        if self.val is None:
            if o.val is None:
                return ctx.zero(prec)
            return _make(ctx, o.val, list(o.unit), prec)
        if o.val is None:
            return _make(ctx, self.val, list(self.unit), prec)
        s = min(self.val, o.val)
        e, p = ctx.e, ctx.p
        a = _times_pi_power(list(self.unit), self.val - s, e, p)
        b = _times_pi_power(list(o.unit), o.val - s, e, p)
        return _make(ctx, s, [x + y for x, y in zip(a, b)], prec)

    __radd__ = __add__

    def __neg__(self) -> "PadicElem":
        if self.val is None:
            return self
        return _make(self.ctx, self.val, [-a for a in self.unit], self.prec)

    def __sub__(self, other) -> "PadicElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PadicElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PadicElem":
        o = self._coerce(other)
        ctx = self.ctx
        if self.val is None and o.val is None:
            return ctx.zero(self.prec + o.prec)
        if self.val is None:
            return ctx.zero(self.prec + o.val)
        if o.val is None:
            return ctx.zero(o.prec + self.val)
        prec = min(self.prec + o.val, o.prec + self.val)
        e, p = ctx.e, ctx.p
        a, b = self.unit, o.unit
        out = [0] * e
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    k = i + j
                    if k < e:
                        out[k] += x * y
                    else:
                        out[k - e] += p * x * y
        return _make(ctx, self.val + o.val, out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicElem":
        if self.val is None:
            raise PrecisionError("precision-exhausted divisor")
        ctx = self.ctx
        e, p = ctx.e, ctx.p
        rel = self.prec - self.val
        # unit inverse by Newton iteration in Z[x]/(x^e - p) modulo p^K
        K = _ceil_div(rel, e) + 1
        mod = p ** K
        a = self.unit

        def mul(x, y):
            out = [0] * e
            for i, s in enumerate(x):
                if s:
                    for j, t in enumerate(y):
                        k = i + j
                        if k < e:
                            out[k] += s * t
                        else:
                            out[k - e] += p * s * t
            return [c % mod for c in out]

        x = [pow(a[0], -1, p)] + [0] * (e - 1)
        # the initial guess is only correct modulo pi
        n = 1
        while n < K * e:
            ax = mul(a, x)
            two_minus = [(-c) % mod for c in ax]
            two_minus[0] = (two_minus[0] + 2) % mod
            x = mul(x, two_minus)
            n *= 2
        return _make(ctx, -self.val, x, self.prec - 2 * self.val)

    def __truediv__(self, other) -> "PadicElem":
        o = self._coerce(other)
        if o.val is None:
            raise PrecisionError("precision-exhausted divisor")
        return self * o.inverse()

    def __rtruediv__(self, other) -> "PadicElem":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "PadicElem":
        if n < 0:
            return (self ** (-n)).inverse()
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def times_pi_power(self, k: int) -> "PadicElem":
        """Multiply by pi^k exactly (k may be negative)."""
        if self.val is None:
            return self.ctx.zero(self.prec + k)
        return _make(self.ctx, self.val + k, list(self.unit), self.prec + k)

    def lift_prec(self, prec: int) -> "PadicElem":
        """Declare the stored representative exact to pi^prec (never above cap)."""
        if self.val is None:
            return self.ctx.zero(prec)
        return _make(self.ctx, self.val, list(self.unit), prec)

    def reduce_prec(self, prec: int) -> "PadicElem":
        if prec >= self.prec:
            return self
        if self.val is None:
            return self.ctx.zero(prec)
        return _make(self.ctx, self.val, list(self.unit), prec)

    # comparisons

    def __eq__(self, other) -> bool:
        """Equality at the common known precision."""
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def is_unit(self) -> bool:
        return self.val == 0

    def is_integral(self) -> bool:
        """v >= 0, raising IndeterminateError when the precision is negative."""
        if self.val is None:
            if self.prec < 0:
                raise IndeterminateError("integrality undecidable at negative precision")
            return True
        return self.val >= 0

    def residue(self):
        """Image in the residue field F_p."""
        from .finite_field import GF

        F = GF(self.ctx.p, 1)
        if self.val is None:
            if self.prec <= 0:
                raise IndeterminateError("residue undecidable at precision <= 0")
            return F.zero()
        if self.val < 0:
            raise ValueError("residue of an element with negative valuation")
        if self.val > 0:
            return F.zero()
        return F(self.unit[0] % self.ctx.p)

    def digits(self) -> tuple[int, list[int]]:
        """(shift, digits) with self = pi^shift * sum d_i pi^i, 0 <= d_i < p."""
        ctx = self.ctx
        e, p = ctx.e, ctx.p
        if self.val is None:
            return 0, []
        shift = min(self.val, 0)
        vec = _times_pi_power(list(self.unit), self.val - shift, e, p)
        n = self.prec - shift
        out = []
        for _ in range(n):
            d = vec[0] % p
            out.append(d)
            vec[0] -= d
            # divide by pi: pi^{-1} * sum a_i pi^i = a_0/p * pi^{e-1} + sum_{i>0} a_i pi^{i-1}
            vec = vec[1:] + [vec[0] // p]
        while out and out[-1] == 0:
            out.pop()
        return shift, out

    def to_json(self) -> dict:
        shift, digs = self.digits()
        d = {"digits": digs, "known_prec": self.prec - shift}
        if shift:
            d["shift"] = shift
        return d

    def __repr__(self) -> str:
        if self.val is None:
            return f"O(pi^{self.prec})"
        shift, digs = self.digits()
        terms = [f"{d}*pi^{i + shift}" for i, d in enumerate(digs) if d]
        return " + ".join(terms) + f" + O(pi^{self.prec})"


def from_json(ctx: PadicContext, data) -> PadicElem:
    """Inverse of PadicElem.to_json; also accepts an integer or a coefficient list."""
    if isinstance(data, int):
        return ctx(data)
    if isinstance(data, list):
        return ctx.from_poly(data)
    shift = data.get("shift", 0)
    prec = data.get("known_prec", ctx.cap - shift)
    return ctx.from_digits(data.get("digits", []), prec, shift)


def v(x) -> Val:
    """Valuation of a PadicElem (shorthand)."""
    return x.valuation()


def strictly_congruent(a: PadicElem, b: PadicElem, c: PadicElem) -> bool:
    """a is congruent to b modulo (c) in the strict sense v(a - b) > v(c)."""
    return v(a - b) > v(c)


def newton_root(f: Sequence[PadicElem], x0: PadicElem, max_iter: int = 200) -> PadicElem:
    """Root of the polynomial sum f[i] x^i near x0 by Newton iteration."""
    df = [f[i] * i for i in range(1, len(f))]

    def ev(coeffs: Iterable[PadicElem], x: PadicElem) -> PadicElem:
        acc = x.ctx.zero()
        for c in reversed(list(coeffs)):
            acc = acc * x + c
        return acc

    x = x0
    for _ in range(max_iter):
        fx = ev(f, x)
        if fx.is_zero():
            return x
        step = fx / ev(df, x)
        if step.is_zero():
            return x
        x = x - step
    raise PrecisionError("Newton iteration did not converge")
