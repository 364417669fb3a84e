from hypothesis import given, strategies as st

from breuil_lattices.finite_field import GF, is_irreducible

FIELDS = [GF(5, 1), GF(7, 1), GF(5, 2), GF(5, 3)]


def test_modulus_is_irreducible():
    for F in FIELDS:
        assert is_irreducible(list(F.modulus), F.p)


def test_element_counts():
    assert len(list(GF(5, 2).elements())) == 25
    assert len(list(GF(7).nonzero_elements())) == 6


@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(F, data):
    els = list(F.elements())
    a, b, c = (data.draw(st.sampled_from(els)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == F.one()


@given(st.sampled_from(FIELDS), st.data())
def test_frobenius_is_additive_and_fixes_prime_field(F, data):
    els = list(F.elements())
    a, b = data.draw(st.sampled_from(els)), data.draw(st.sampled_from(els))
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()
    assert F(3).frobenius() == F(3)
    assert a ** (F.p ** F.f) == a
