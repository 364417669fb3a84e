import itertools
import random

import pytest
from hypothesis import given, strategies as st

from breuil_lattices import breuil, sdm
from breuil_lattices.breuil import (classify_irreducible, clause_verdict, constant_map,
                                    check_morphism, cross_morphism_exists, eigen_quotient,
                                    exponent_orbit_ok, expected_shape, find_isomorphism,
                                    inertia_weights, module_b, reduce, shapes_match,
                                    simple_iso_test, simple_module, span_is_submodule)
from breuil_lattices.families import H01, H03, ONE, ZERO, glue_isomorphism, make_params
from breuil_lattices.finite_field import GF
from breuil_lattices.padic import PadicContext
from breuil_lattices.sampling import random_unit

CTX = PadicContext(5, 2, 16)
PI = CTX.pi()
F5, F7 = GF(5), GF(7)


def test_inertia_weights():
    assert set(inertia_weights(1, 5)) == {11, 55, 27}
    assert set(inertia_weights(2, 5)) == {7, 35, 51}
    assert set(inertia_weights(1, 7)) == {15, 105, 51}
    for p in (5, 7, 11):
        for i in (1, 2):
            assert exponent_orbit_ok(inertia_weights(i, p), p)


def test_simple_iso_examples():
    ok, d = simple_iso_test(F7, 1, (1, 2, 3), 1, (6, 1, 1))
    assert ok
    A, B = simple_module(F7, 7, 1, 1, 2, 3), simple_module(F7, 7, 1, 6, 1, 1)
    f = constant_map(F7, 7, [[d[k] if k == j else 0 for j in range(3)] for k in range(3)])
    assert check_morphism(f, A, B)["ok"]
    assert not simple_iso_test(F7, 1, (1, 1, 1), 2, (1, 1, 1))[0]
    assert simple_iso_test(F7, 2, (1, 2, 3), 2, (1, 2, 3))[0]
    with pytest.raises(ValueError):
        simple_iso_test(F7, 1, (0, 1, 1), 1, (1, 1, 1))


@given(st.integers(0, 10 ** 6))
def test_iso_criterion_is_product(seed):
    rng = random.Random(seed)
    t1 = [rng.randrange(1, 5) for _ in range(3)]
    t2 = [rng.randrange(1, 5) for _ in range(3)]
    i = rng.choice((1, 2))
    ok, d = simple_iso_test(F5, i, t1, i, t2)
    assert ok == (t1[0] * t1[1] * t1[2] % 5 == t2[0] * t2[1] * t2[2] % 5)


def test_iso_negative_is_exhaustive():
    A, B = simple_module(F5, 5, 1, 1, 1, 1), simple_module(F5, 5, 1, 1, 1, 2)
    assert find_isomorphism(A, B) is None
    assert find_isomorphism(A, simple_module(F5, 5, 1, 2, 3, 1)) is not None


def test_eigen_quotient_examples():
    eq = eigen_quotient(F5, 5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert eq.root == F5(1) and list(eq.eigenvector) == [F5(1), F5(0), F5(0)]
    # companion matrix of x^3 + x + 1, irreducible over F5
    comp = [[0, 1, 0], [0, 0, 1], [-1, -1, 0]]
    eq = eigen_quotient(F5, 5, comp)
    assert not eq.exists and eq.extension_degree == 3
    F125 = GF(5, 3)
    assert eigen_quotient(F125, 5, comp).exists
    eq = eigen_quotient(F7, 7, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert eq.root == F7(1) and list(eq.eigenvector) == [F7(1), F7(0), F7(0)]
    with pytest.raises(ValueError):
        eigen_quotient(F5, 5, [[1, 0, 0], [0, 0, 0], [0, 0, 1]])


def test_cross_morphism():
    ok, mat = cross_morphism_exists(F5, (1, 1, 2, 3), (4, 1, 1, 1))
    assert ok
    f = constant_map(F5, 5, mat)
    src, dst = breuil.module_c(F5, 5, 4, 1, 1, 1), module_b(F5, 5, 1, 1, 2, 3)
    assert check_morphism(f, src, dst)["ok"]
    # the same matrix is not a morphism once x is moved off -cdw
    assert not check_morphism(f, breuil.module_c(F5, 5, 3, 1, 1, 1), dst)["ok"]
    assert not cross_morphism_exists(F5, (1, 1, 2, 3), (1, 1, 1, 1))[0]
    # homogeneity in (x, w)
    assert cross_morphism_exists(F5, (1, 1, 2, 3), (3, 1, 1, 2))[0]


def test_verdict_examples():
    ver = classify_irreducible(make_params(ZERO, PI, 5, 1, 5, ctx=CTX))
    assert ver.irreducible and ver.clause == "zero-1" and set(ver.inertia_exponents) == {7, 35, 51}
    red = classify_irreducible(make_params(ZERO, PI, 5, 1, 0, ctx=CTX, exact_zero={"L2"}))
    assert not red.irreducible and red.clause == "submodule"
    one = classify_irreducible(make_params(ONE, PI, 5, 5 + PI, 1, ctx=CTX))
    assert one.irreducible and one.clause == "one-1"
    assert ver.to_json()["shape"] == "c"


def test_h01_residues_are_one():
    P = make_params(ZERO, PI, 5, 1 + PI, 0, ctx=CTX)
    exp = expected_shape(P, H01)
    assert not exp.degenerate
    img = [exp.phi2(g) for g in exp.gens]
    # uE1 -> a E1 - E2, uE2 -> b E1 - c E2 + top E3 with a = b = c = top = 1
    assert img[0][0][0] == 1 and img[1][0][0] == 1
    assert img[1][1][0] == -F5(1) and img[1][2][0] == 1


@pytest.mark.parametrize("params,region", [
    (make_params(ZERO, PI, 5, 1 + PI, 0, ctx=CTX), H01),
    (make_params(ZERO, PI, 5, 1, 5, ctx=CTX), H03),
])
def test_reduction_matches_table(params, region):
    red = reduce(sdm.verify(sdm.build(params, region)))
    exp = expected_shape(params, region)
    assert shapes_match(red, exp) and shapes_match(red, red)
    assert red.is_valid()
    assert all(all(not c for poly in row for c in poly) for row in red.N)


def test_shapes_differ():
    P = make_params(ZERO, PI, 5, 1 + PI, 0, ctx=CTX)
    assert not shapes_match(expected_shape(P, H01), expected_shape(P, "H02"))


def test_span_is_submodule():
    M = simple_module(F5, 5, 1, 1, 1, 1)
    assert not any(span_is_submodule(M, idx) for r in (1, 2)
                   for idx in itertools.combinations(range(3), r))
    assert span_is_submodule(M, (0, 1, 2))


@given(st.integers(0, 10 ** 6))
def test_gluing_preserves_verdict(seed):
    rng = random.Random(seed)
    P = make_params(ZERO, PI, 5, random_unit(CTX, rng), random_unit(CTX, rng) * 5, ctx=CTX)
    a, b = clause_verdict(P), clause_verdict(glue_isomorphism(P))
    assert a.irreducible == b.irreducible
    if a.irreducible:
        assert a.i == b.i
