"""Random parameter points inside a prescribed region.

Points are drawn by choosing valuations of the controlling differences
(L1 - 1, L2 + p lam in family zero; L1 - lamt, 1 - L2 in family one)
on the lattice (1/e)Z and multiplying by random units.  A draw is kept
only if classify_region confirms it, so the region predicates stay the
single source of truth.
"""
from __future__ import annotations

import random

from .families import (ZERO, REGIONS, FamilyParams, ParameterError, classify_region,
                       make_params)
from .padic import IndeterminateError, PadicContext, PadicElem

REGION_FAMILY = {r: fam for fam, regs in REGIONS.items() for r in regs}


def random_unit(ctx: PadicContext, rng: random.Random, digits: int = 3) -> PadicElem:
    coeffs = [rng.randrange(1, ctx.p)] + [rng.randrange(ctx.p) for _ in range(digits - 1)]
    return ctx.from_poly(coeffs)


def lambda_exponents(ctx: PadicContext, family: str) -> list[int]:
    """pi-exponents a with v(lam) = a/e in the irreducibility domain."""
    e = ctx.e
    if family == ZERO:
        return [a for a in range(1, e + 1) if 2 * a <= e]
    return [a for a in range(1, e + 1) if e <= 2 * a < 2 * e]


def _term(ctx, rng, k):
    """pi^k times a unit, or exact zero (k = None)."""
    if k is None:
        return ctx.zero()
    return random_unit(ctx, rng).times_pi_power(k)


def draw(region: str, ctx: PadicContext, rng: random.Random, span: int | None = None) -> FamilyParams:
    """One unverified draw aimed at region."""
    fam = REGION_FAMILY[region]
    e, p = ctx.e, ctx.p
    span = 3 * e if span is None else span
    a = rng.choice(lambda_exponents(ctx, fam))
    lam = random_unit(ctx, rng).times_pi_power(a)
    lamt = random_unit(ctx, rng).times_pi_power(2 * e - 2 * a)
    P = ctx(p)

    def pick(lo, hi, allow_inf=False):
        # exponent in [lo, hi); None stands for an exact zero difference
        opts = list(range(max(lo, 0), hi))
        if allow_inf and (not opts or rng.random() < 0.2):
            return None
        if not opts:
            raise ParameterError("empty exponent range")
        return rng.choice(opts)

    if region == "H01":
        k1 = pick(e - a, e - a + span, True)
        k2 = pick(2 * e - a, 2 * e - a + span, True)
        L1 = 1 + _term(ctx, rng, k1)
        L2 = _term(ctx, rng, k2) - P * lam
    elif region == "H02":
        k1 = pick(0, e - a)
        k2 = pick(e + k1, e + k1 + span, True)
        L1 = 1 + _term(ctx, rng, k1)
        L2 = _term(ctx, rng, k2) - P * lam
    elif region == "H03":
        k1 = pick(0, span, True)
        hi = 2 * e - a
        if k1 is not None:
            hi = min(hi, 2 * e - 2 * a + k1, e + k1 + 1)
        k2 = pick(0, hi)
        L1 = 1 + _term(ctx, rng, k1)
        L2 = _term(ctx, rng, k2) - P * lam
    elif region == "H11":
        k1 = pick(e, e + span, True)
        k2 = pick(a, a + span, True)
        L1 = lamt + _term(ctx, rng, k1)
        L2 = 1 - _term(ctx, rng, k2)
    elif region == "H12":
        k2 = pick(0, a)
        k1 = pick(e + k2 - a, e + k2 - a + span, True)
        L1 = lamt + _term(ctx, rng, k1)
        L2 = 1 - _term(ctx, rng, k2)
    elif region == "H13":
        k2 = pick(0, span, True)
        hi = e
        if k2 is not None:
            hi = min(hi, a + k2, e + k2 - a + 1)
        k1 = pick(0, hi)
        L1 = lamt + _term(ctx, rng, k1)
        L2 = 1 - _term(ctx, rng, k2)
    else:
        raise ParameterError(f"unknown region {region!r}")
    return make_params(fam, lam, lamt, L1, L2, ctx=ctx)


def sample_point(region: str, ctx: PadicContext, rng: random.Random,
                 tries: int = 200) -> FamilyParams:
    """A random point whose classification contains region."""
    for _ in range(tries):
        try:
            params = draw(region, ctx, rng)
            if region in classify_region(params):
                return params
        except (ParameterError, IndeterminateError):
            continue
    raise ParameterError(f"no point of {region} found over {ctx}")


def sample_points(region: str, ctx: PadicContext, n: int, seed: int = 0) -> list[FamilyParams]:
    rng = random.Random(f"{region}:{ctx.p}:{ctx.e}:{seed}")
    return [sample_point(region, ctx, rng) for _ in range(n)]


def overlap_point(ctx: PadicContext | None = None) -> FamilyParams:
    """A point of H02 and H03 at once: v(L2 + p lam) = v(p(L1 - 1))."""
    if ctx is None:
        ctx = PadicContext(5, 4, 16)
    p = ctx.p
    pi = ctx.pi()
    lam = pi
    lamt = pi ** (2 * ctx.e - 2)
    return make_params(ZERO, lam, lamt, ctx(2), ctx(p) * (ctx(2) - lam), ctx=ctx)
