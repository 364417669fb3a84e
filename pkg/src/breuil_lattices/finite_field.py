"""Finite fields F_{p^f} as F_p[x] modulo a fixed monic irreducible polynomial."""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _poly_trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _poly_trim(a)
    return a


def _poly_mulmod(a, b, m, p) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_mod(out, m, p)


def _poly_powmod(a, n, m, p) -> list[int]:
    result = [1]
    base = _poly_mod(list(a), m, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        n >>= 1
    return result


def _poly_gcd(a, b, p) -> list[int]:
    a, b = _poly_trim([c % p for c in a]), _poly_trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(m: list[int], p: int) -> bool:
    """Rabin-style test: x^(p^k) - x shares no factor with m for k <= deg/2."""
    d = len(m) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _poly_powmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] -= 1
        if len(_poly_gcd(m, diff, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def _modulus(p: int, f: int) -> tuple[int, ...]:
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        m = list(tail) + [1]
        if m[0] and is_irreducible(m, p):
            return tuple(m)
    raise ValueError("no irreducible polynomial found")


class FiniteField:
    """F_{p^f}; use GF(p, f) to obtain the cached instance."""

    def __init__(self, p: int, f: int):
        self.p, self.f = p, f
        self.modulus = list(_modulus(p, f))
        self.order = p ** f

    def __repr__(self):
        return f"GF({self.p}^{self.f})"

    def __call__(self, x) -> "FFElem":
        if isinstance(x, FFElem):
            if x.field is self:
                return x
            if x.field.p == self.p and x.field.f == 1:
                return FFElem(self, (x.coeffs[0],) + (0,) * (self.f - 1))
            raise ValueError("cannot coerce between these fields")
        if isinstance(x, int):
            return FFElem(self, (x % self.p,) + (0,) * (self.f - 1))
        coeffs = _poly_mod(list(x), self.modulus, self.p)
        coeffs = list(coeffs) + [0] * (self.f - len(coeffs))
        return FFElem(self, tuple(coeffs))

    def zero(self) -> "FFElem":
        return self(0)

    def one(self) -> "FFElem":
        return self(1)

    def gen(self) -> "FFElem":
        return self([0, 1]) if self.f > 1 else self(0)

    def elements(self) -> Iterator["FFElem"]:
        """All elements in a fixed total order (lexicographic on coefficients)."""
        for tail in itertools.product(range(self.p), repeat=self.f):
            yield FFElem(self, tuple(reversed(tail)))

    def nonzero_elements(self) -> Iterator["FFElem"]:
        return (x for x in self.elements() if x)

    def random(self, rng, nonzero: bool = False) -> "FFElem":
        while True:
            x = FFElem(self, tuple(rng.randrange(self.p) for _ in range(self.f)))
            if x or not nonzero:
                return x


@lru_cache(maxsize=None)
def GF(p: int, f: int = 1) -> FiniteField:
    return FiniteField(p, f)


class FFElem:
    """Element of F_{p^f}, coefficients on 1, x, ..., x^(f-1)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.field is self.field:
                return other
            return self.field(other)
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        F = self.field
        if F.f == 1:
            return FFElem(F, ((self.coeffs[0] * o.coeffs[0]) % F.p,))
        return F(_poly_mulmod(list(self.coeffs), list(o.coeffs), F.modulus, F.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        F = self.field
        if n < 0:
            return self.inverse() ** (-n)
        if F.f == 1:
            return FFElem(F, (pow(self.coeffs[0], n, F.p),))
        return F(_poly_powmod(list(self.coeffs), n, F.modulus, F.p))

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def frobenius(self, k: int = 1):
        return self ** (self.field.p ** k)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.field.p == other.field.p and self._coerce(other).coeffs == self.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.f, self.coeffs))

    def sort_key(self):
        return tuple(reversed(self.coeffs))

    def to_json(self):
        return self.coeffs[0] if self.field.f == 1 else list(self.coeffs)

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return "(" + " + ".join(terms or ["0"]) + ")"
