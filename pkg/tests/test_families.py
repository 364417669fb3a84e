import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from breuil_lattices.families import (H01, H03, H11, ONE, ZERO, FamilyParams, ParameterError,
                                      classify_region, fil2_ambient_element, glue_basis_map,
                                      glue_inverse, glue_isomorphism, has_submodule,
                                      in_fil2_ambient, lift_params, make_params, N_matrix,
                                      newton_hodge, phi_matrix, validate)
from breuil_lattices.padic import IndeterminateError, PadicContext, v
from breuil_lattices.sampling import random_unit
from breuil_lattices.sdm import working_ring

CTX = PadicContext(5, 2, 16)
PI = CTX.pi()


def running(**kw):
    vals = dict(lam=PI, lamt=5, L1=1, L2=5)
    vals.update(kw)
    return make_params(ZERO, vals["lam"], vals["lamt"], vals["L1"], vals["L2"], ctx=CTX)


def test_validate_examples():
    P = validate(running())
    assert v(P.lam) == Fraction(1, 2) and v(P.lamt) == 1
    validate(make_params(ZERO, 1, 25, 1, 5, ctx=CTX))
    with pytest.raises(ParameterError, match="!= 2"):
        validate(make_params(ZERO, PI, PI, 1, 5, ctx=CTX))


def test_newton_equals_hodge():
    assert newton_hodge(running()) == (3, 3)
    assert newton_hodge(make_params(ONE, 5, 1, 1, 2, ctx=CTX)) == (3, 3)


def test_submodule_criteria():
    assert has_submodule(make_params(ZERO, 1, 25, 1, 5, ctx=CTX))
    assert has_submodule(make_params(ZERO, PI, 5, 1, 0, ctx=CTX, exact_zero={"L2"}))
    assert not has_submodule(running())
    c4 = PadicContext(5, 4, 24)
    pi4 = c4.pi()
    assert not has_submodule(make_params(ZERO, pi4, pi4 ** 6, 1, 0, ctx=c4, exact_zero={"L2"}))
    with pytest.raises(IndeterminateError):
        has_submodule(make_params(ZERO, PI, 5, 1, 0, ctx=CTX))


def test_classify_examples():
    assert classify_region(running()) == {H03}
    assert classify_region(running(L1=1 + PI, L2=-5 * PI)) == {H01}
    assert classify_region(make_params(ONE, PI, 5, 5, 1 - PI, ctx=CTX)) == {H11}


def test_classify_rejects_outside_domain():
    with pytest.raises(ParameterError):
        classify_region(make_params(ZERO, 1, 25, 1, 5, ctx=CTX))


def test_gluing():
    P = running()
    Q = glue_isomorphism(P)
    assert Q.family == ONE and Q.lam == P.lam and Q.lamt == P.lamt
    back = glue_inverse(Q)
    assert back.L1 == P.L1 and back.L2 == P.L2
    with pytest.raises(ParameterError):
        glue_isomorphism(running(L2=0))


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), CTX.zero()) for j in range(3)]
            for i in range(3)]


@given(st.integers(0, 10 ** 6))
def test_gluing_intertwines_phi_and_N(seed):
    rng = random.Random(seed)
    P = running(L1=random_unit(CTX, rng), L2=random_unit(CTX, rng) * PI ** rng.randrange(0, 4))
    Q = glue_isomorphism(P)
    T = glue_basis_map(P)
    for A, B in ((phi_matrix(P), phi_matrix(Q)), (N_matrix(P), N_matrix(Q))):
        lhs, rhs = _matmul(T, A), _matmul(B, T)
        assert all((lhs[i][j] - rhs[i][j]).is_zero() for i in range(3) for j in range(3))


def test_fil2_ambient_examples():
    S = working_ring(CTX)
    X = S.X()
    zero = fil2_ambient_element(running(), S, 0, 0, 0)
    assert all(x.is_zero() for x in zero)
    P = running(L1=2)
    w = fil2_ambient_element(P, S, 5, 0, 0)
    want = [S.scalar(5), S.zero(), S.scalar(CTX(10)) + X]
    assert all((a - b).is_zero() for a, b in zip(w, want))
    Q = make_params(ONE, PI, 5, 3, 7, ctx=CTX)
    w = fil2_ambient_element(Q, S, 5, 0, 0)
    want = [S.scalar(5), S.scalar(CTX(15)), S.scalar(CTX(35)) + X]
    assert all((a - b).is_zero() for a, b in zip(w, want))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_fil2_ambient_membership(c0, c1, c2):
    S = working_ring(CTX)
    for P in (running(L1=2), make_params(ONE, PI, 5, 3, 7, ctx=CTX)):
        assert in_fil2_ambient(P, fil2_ambient_element(P, S, c0, c1, c2))
    # e1 alone is not in Fil^2
    P = running()
    assert not in_fil2_ambient(P, [S.one(), S.zero(), S.zero()])


def test_json_and_lift():
    P = make_params(ZERO, PI, 5, 1, 0, ctx=CTX, exact_zero={"L2"})
    Q = FamilyParams.from_json(CTX, P.to_json())
    assert Q == P
    hi = lift_params(P, 40)
    assert hi.ctx.cap == 40 and hi.lam.prec == 40
