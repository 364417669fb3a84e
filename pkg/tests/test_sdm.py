from fractions import Fraction

import pytest

from breuil_lattices import sdm
from breuil_lattices.families import (H01, H02, H03, H11, H12, H13, ONE, ZERO, ParameterError,
                                      make_params)
from breuil_lattices.padic import PadicContext, v
from breuil_lattices.sampling import overlap_point, sample_points

CTX = PadicContext(5, 2, 16)
PI = CTX.pi()
H01_POINT = make_params(ZERO, PI, 5, 1 + PI, 0, ctx=CTX)
H03_POINT = make_params(ZERO, PI, 5, 1, 5, ctx=CTX)


def scalar_of(x):
    assert x.degree() <= 0
    return x.coeff(0)


def test_working_depth():
    assert sdm.working_depth(5) == 72
    assert sdm.working_ring(CTX).m == 72


def test_h01_basis():
    M = sdm.build(H01_POINT, H01)
    E3 = M.basis_vectors()[2]
    assert E3[0].is_zero() and E3[1].is_zero()
    assert scalar_of(E3[2]) == CTX(5) / PI


def test_h11_basis():
    P = make_params(ONE, PI, 5, 5, 1 - PI, ctx=CTX)
    E2 = sdm.build(P, H11).basis_vectors()[1]
    assert scalar_of(E2[1]) == CTX(5) / PI * 5
    assert scalar_of(E2[2]) == CTX(5) / PI


def test_h03_coefficient_valuation():
    M = sdm.build(H03_POINT, H03)
    assert v(scalar_of(M.basis_vectors()[2][2])) == Fraction(1, 2)
    assert v(M.delta - 1) > 0


@pytest.mark.parametrize("params,region", [(H01_POINT, H01), (H03_POINT, H03)])
def test_running_examples_verify(params, region):
    ver = sdm.verify(sdm.build(params, region))
    assert ver.ok, [c.name for r in ver.reports for c in r.failures()]
    assert ver.lattice.contains([CTX.zero()] * 3)


@pytest.mark.parametrize("params,region", [(H01_POINT, H01), (H03_POINT, H03)])
def test_pi_scaled_e3_fails(params, region):
    M = sdm.build(params, region)
    bad = sdm.verify(M.scaled(2, PI), cross_check=False)
    assert not bad.ok
    failed = [c for r in bad.reports for c in r.failures()]
    assert failed and all(c.name for c in failed)


def test_builder_refuses_other_region():
    with pytest.raises(ParameterError):
        sdm.build(H03_POINT, H01)
    with pytest.raises(ParameterError):
        sdm.build(H03_POINT, H11)


@pytest.mark.parametrize("region", [H01, H02, H03, H11, H12, H13])
def test_sampled_points_verify(region):
    ctx = PadicContext(5, 4, 24) if region in (H02, H12) else CTX
    for P in sample_points(region, ctx, 2, seed=7):
        assert sdm.verify(sdm.build(P, region)).ok


def test_overlap_lattices_are_not_homothetic():
    P = overlap_point(PadicContext(5, 4, 24))
    M2, M3 = sdm.build(P, H02), sdm.build(P, H03)
    assert sdm.verify(M2).ok and sdm.verify(M3).ok
    assert not sdm.non_homothety(M2, M3)["homothetic"]
    assert sdm.non_homothety(M2, M2)["homothetic"]
    assert sdm.non_homothety(M2, M2.scaled(0, 5).scaled(1, 5).scaled(2, 5))["homothetic"]
