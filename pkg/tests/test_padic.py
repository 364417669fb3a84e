from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from breuil_lattices.padic import (IndeterminateError, PadicContext, PrecisionError, Val,
                                   from_json, newton_root, v)

CTX = PadicContext(5, 2, 16)
digits = st.lists(st.integers(0, 4), min_size=1, max_size=8)


def elem(ds, shift=0):
    return CTX.from_poly(ds, shift=shift)


def test_context_validation():
    assert v(CTX.pi()) == Fraction(1, 2)
    PadicContext(7, 1, 10)
    with pytest.raises(ValueError):
        PadicContext(4, 2, 16)
    with pytest.raises(ValueError):
        PadicContext(3, 1, 16)


def test_difference_of_squares():
    pi = CTX.pi()
    assert (2 + pi) * (2 - pi) == CTX(-1)


def test_inverse_of_one_plus_pi():
    # geometric series 1 - pi + pi^2 - pi^3 = 6 - 6 pi mod pi^4
    x = (CTX(1) / (1 + CTX.pi())).reduce_prec(4)
    assert x == CTX.from_poly([6, -6], prec=4)
    assert ((1 + CTX.pi()) * CTX.from_poly([6, -6]) - 1).valuation() >= 2


def test_valuations():
    pi = CTX.pi()
    assert v(CTX(5) * pi) == Fraction(3, 2)
    z = CTX(5) - pi * pi
    assert z.is_zero() and not v(z).exact and v(z) >= 8
    assert v(CTX(5)) == 1


def test_add_inverse_is_zero_at_known_prec():
    x = CTX.from_digits([1, 2, 3], known_prec=7)
    z = x + (-x)
    assert z.is_zero() and z.prec == 7


def test_residues():
    assert CTX.pi().residue() == 0
    assert CTX.from_poly([6, -6]).residue() == 1
    assert (CTX.pi() ** 2 / 5).residue() == 1


def test_indeterminate_comparison_raises():
    z = CTX.zero(3)
    with pytest.raises(IndeterminateError):
        v(z) >= 2
    assert v(z) >= 1


def test_json_forms():
    assert from_json(CTX, 5) == CTX(5)
    assert from_json(CTX, [0, 1]) == CTX.pi()
    x = CTX.from_poly([3, 1, 4], shift=-3)
    assert from_json(CTX, x.to_json()) == x


def test_newton_root_of_square():
    # sqrt(1 + 5) with residue 1
    f = [CTX(-6), CTX(0), CTX(1)]
    r = newton_root(f, CTX(1))
    assert (r * r - 6).is_zero()


@given(digits, digits, digits)
def test_ring_laws(a, b, c):
    x, y, z = elem(a), elem(b), elem(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x


@given(digits, digits)
def test_valuation_is_multiplicative(a, b):
    x, y = elem(a), elem(b)
    if x.is_zero() or y.is_zero():
        return
    assert v(x * y) == v(x) + v(y)


@given(digits.filter(lambda d: d[0] != 0), st.integers(-3, 3))
def test_inverse(ds, k):
    x = elem(ds, shift=k)
    assert (x * x.inverse() - 1).is_zero()


@given(digits, st.integers(0, 5))
def test_json_round_trip(ds, k):
    x = elem(ds, shift=k)
    assert from_json(CTX, x.to_json()) == x


def test_division_by_zero_to_precision():
    with pytest.raises(PrecisionError):
        CTX(1) / CTX.zero()


def test_val_arithmetic():
    a = Val(Fraction(1, 2), True)
    assert a + a == 1
    assert Val(Fraction(3), False) >= 2
