from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from breuil_lattices import limits
from breuil_lattices.families import ZERO, ParameterError, lift_params, make_params
from breuil_lattices.limits import D0_2, D0_3, D1_2, D1_3, KIND_OF, KINDS, REGION_OF
from breuil_lattices.padic import PadicContext, v
from breuil_lattices.sampling import sample_points

CTX = PadicContext(5, 2, 16)
CTX4 = PadicContext(5, 4, 24)
PI = CTX.pi()
RUNNING = make_params(ZERO, PI, 5, 1, 5, ctx=CTX)


def test_region_kind_pairing():
    assert KIND_OF == {"H02": D0_2, "H03": D0_3, "H12": D1_2, "H13": D1_3}
    assert all(KIND_OF[REGION_OF[k]] == k for k in KINDS)


def test_first_step_of_running_example():
    G1, H1 = limits.step(D0_3, RUNNING, CTX.one(), CTX.one())
    assert G1 == CTX.from_poly([150, 50])
    assert H1 == CTX.from_poly([25, 50])
    # G1 - H1 = 125 and v(H1) = v(25) = 2, so the first ratio sits at distance 1
    assert v(H1) == 2
    assert v(G1 - H1) == 3
    assert v(G1 / H1 - 1) == 1


def test_gap_at_zero_matches_lemma_bound():
    cert = limits.recursion_certificate(D0_3, RUNNING, M=3)
    assert cert.records[0].gap == 1
    assert cert.records[0].bound == 1
    assert cert.ok()


def test_delta_and_limit_equation():
    d, cert = limits.delta(D0_3, RUNNING)
    assert v(d - 1) > 0
    ach = cert.achieved_prec
    assert ach > 0 and not cert.refuted()
    res = limits.representative_residual(D0_3, RUNNING, d)
    assert res.meets(ach, Fraction(1, 2))
    # Delta = 1 leaves lamt((L1-1)(L2+p lam) + p lamt) = 125
    at_one = limits.limit_equation_residual(D0_3, RUNNING, CTX.one())
    assert at_one.raw == 3


def test_hensel_oracle_agrees():
    d, cert = limits.delta(D0_3, RUNNING)
    hi = lift_params(RUNNING, 32)
    h = CTX.convert(limits.hensel_oracle(D0_3, hi))
    assert v(h - d) >= cert.achieved_prec


def test_unit_ratio():
    d, _ = limits.delta(D0_3, RUNNING)
    chk = limits.unit_ratio_checks(D0_3, RUNNING, d)
    assert chk["in_1_plus_mE"] and chk["valuation_equal"] and not chk["trivial"]
    triv = limits.unit_ratio_checks(D0_3, RUNNING, CTX.one())
    assert triv["trivial"] and triv["in_1_plus_mE"]


def test_out_of_region_is_refused():
    h01 = make_params(ZERO, PI, 5, 1 + PI, -5 * PI, ctx=CTX)
    with pytest.raises(ParameterError):
        limits.delta(D0_3, h01)
    with pytest.raises(ParameterError):
        limits.delta(D1_3, RUNNING)


def test_certify_decides_every_record():
    cert, cap = limits.certify(D0_3, RUNNING, M=20)
    assert cap > CTX.cap
    assert len(cert.records) == 21 and cert.ok()


@settings(max_examples=12)
@given(st.sampled_from(KINDS), st.sampled_from([CTX, CTX4]), st.integers(0, 50))
def test_certificates_on_sampled_points(kind, ctx, seed):
    (P,) = sample_points(REGION_OF[kind], ctx, 1, seed=seed)
    cert, _ = limits.certify(kind, P, M=20)
    assert cert.ok()
    assert all(r.gap >= r.bound for r in cert.records)
    d, c = limits.delta(kind, P)
    assert v(d - 1) > 0
    assert limits.representative_residual(kind, P, d).meets(c.achieved_prec, Fraction(1, ctx.e))
