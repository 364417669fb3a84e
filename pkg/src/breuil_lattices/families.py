"""The two families of 3-dimensional filtered (phi, N)-modules.

Family ``zero`` (v(lambda) in [0, 1/2]):
    phi(e1) = p lam e1 + e2, phi(e2) = lamt e2, phi(e3) = lam e3, N(e1) = e3,
    Fil^1 = <e1 + L1 e3, e2 + L2 e3>, Fil^2 = <e1 + L1 e3>.

Family ``one`` (v(lambda) in [1/2, 1]):
    phi(e1) = p lam e1, phi(e2) = lamt e2 + e3, phi(e3) = lam e3, N(e1) = e3,
    Fil^1 = <e1 + L1 e2 + L2 e3, e2>, Fil^2 = <e1 + L1 e2 + L2 e3>.

Matrices act on column vectors: column j holds the image of e_j.
Both families require 2 v(lam) + v(lamt) = 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .padic import IndeterminateError, PadicContext, PadicElem, Val, from_json, v, vmin
from .sring import SElem, SRingContext

ZERO, ONE = "zero", "one"

H01, H02, H03 = "H01", "H02", "H03"
H11, H12, H13 = "H11", "H12", "H13"
REGIONS = {ZERO: (H01, H02, H03), ONE: (H11, H12, H13)}

HALF = Fraction(1, 2)


class ParameterError(ValueError):
    """Parameters violate a constraint of their family."""


@dataclass(frozen=True)
class FamilyParams:
    family: str
    lam: PadicElem
    lamt: PadicElem
    L1: PadicElem
    L2: PadicElem
    exact_zero: frozenset = field(default_factory=frozenset)

    @property
    def ctx(self) -> PadicContext:
        return self.lam.ctx

    @property
    def p(self) -> int:
        return self.lam.ctx.p

    def is_exact_zero(self, name: str) -> bool:
        return name in self.exact_zero

    def to_json(self) -> dict:
        return {"family": self.family, "lambda": self.lam.to_json(),
                "lambda_tilde": self.lamt.to_json(), "L1": self.L1.to_json(),
                "L2": self.L2.to_json(),
                "exact_zero": {k: True for k in sorted(self.exact_zero)}}

    @staticmethod
    def from_json(ctx: PadicContext, data: dict) -> "FamilyParams":
        fam = str(data["family"]).lower()
        if fam not in (ZERO, ONE):
            raise ParameterError(f"unknown family {data['family']!r}")
        flags = data.get("exact_zero", {})
        if isinstance(flags, list):
            flags = {k: True for k in flags}
        exact = frozenset(k for k, on in flags.items() if on)
        vals = {k: from_json(ctx, data[k]) for k in ("lambda", "lambda_tilde", "L1", "L2")}
        for k in exact:
            if k not in ("L1", "L2"):
                raise ParameterError(f"exact-zero flag only applies to L1, L2, not {k}")
            vals[k] = ctx.zero()
        return FamilyParams(fam, vals["lambda"], vals["lambda_tilde"], vals["L1"], vals["L2"], exact)


def make_params(family: str, lam, lamt, L1, L2, ctx: PadicContext | None = None,
                exact_zero=()) -> FamilyParams:
    """Convenience constructor accepting integers for the p-adic entries."""
    if ctx is None:
        ctx = next(x.ctx for x in (lam, lamt, L1, L2) if isinstance(x, PadicElem))
    conv = [x if isinstance(x, PadicElem) else ctx(x) for x in (lam, lamt, L1, L2)]
    return FamilyParams(family, *conv, frozenset(exact_zero))


def lift_params(params: FamilyParams, cap: int) -> FamilyParams:
    """The same parameters in a context of larger cap, stored digits taken as exact.

    Appropriate for parameters entered as integer polynomials in pi.
    """
    ctx = params.ctx.with_cap(cap)
    vals = [ctx.convert(x).lift_prec(cap) for x in (params.lam, params.lamt, params.L1, params.L2)]
    return FamilyParams(params.family, *vals, params.exact_zero)


# validation


def validate(params: FamilyParams) -> FamilyParams:
    """Check the valuation constraints of the family; return params unchanged."""
    if params.family not in (ZERO, ONE):
        raise ParameterError(f"unknown family {params.family!r}")
    for name in ("lam", "lamt"):
        x = getattr(params, name)
        if x.is_zero():
            raise ParameterError(f"{name} must be nonzero at working precision")
    vl, vt = v(params.lam).lb, v(params.lamt).lb
    if vl < 0 or vt < 0:
        raise ParameterError("lambda and lambda_tilde must be integral")
    if 2 * vl + vt != 2:
        raise ParameterError(f"2 v(lambda) + v(lambda_tilde) = {2 * vl + vt} != 2")
    lo, hi = (0, HALF) if params.family == ZERO else (HALF, 1)
    if not lo <= vl <= hi:
        raise ParameterError(f"v(lambda) = {vl} outside [{lo}, {hi}] for family {params.family}")
    return params


def in_irreducible_domain(params: FamilyParams) -> bool:
    """Family zero: 0 < v(lam) <= 1/2; family one: 1/2 <= v(lam) < 1."""
    vl = v(params.lam).lb
    if params.family == ZERO:
        return 0 < vl <= HALF
    return HALF <= vl < 1


def phi_matrix(params: FamilyParams) -> list[list[PadicElem]]:
    ctx = params.ctx
    z, o = ctx.zero(), ctx.one()
    pl = params.lam * params.p
    if params.family == ZERO:
        return [[pl, z, z], [o, params.lamt, z], [z, z, params.lam]]
    return [[pl, z, z], [z, params.lamt, z], [z, o, params.lam]]


def N_matrix(params: FamilyParams) -> list[list[PadicElem]]:
    ctx = params.ctx
    z, o = ctx.zero(), ctx.one()
    return [[z, z, z], [z, z, z], [o, z, z]]


def fil_basis(params: FamilyParams, i: int) -> list[list[PadicElem]]:
    """Generators of Fil^i D as coordinate vectors."""
    ctx = params.ctx
    z, o = ctx.zero(), ctx.one()
    L1, L2 = params.L1, params.L2
    if i <= 0:
        return [[o, z, z], [z, o, z], [z, z, o]]
    if i >= 3:
        return []
    if params.family == ZERO:
        gens = [[o, z, L1], [z, o, L2]]
    else:
        gens = [[o, L1, L2], [z, o, z]]
    return gens[:1] if i == 2 else gens


def newton_hodge(params: FamilyParams) -> tuple[Fraction, int]:
    """(t_N, t_H) with t_N = v(det [phi]) and t_H = 0 + 1 + 2."""
    validate(params)
    tN = v(params.lam * params.p * params.lamt * params.lam)
    return tN.lb, 3


def has_submodule(params: FamilyParams) -> bool:
    """Submodule criteria: v(lam) = 0 (zero) or 1 (one), or v(lam) = 1/2 with L2 = 0 (zero) / L1 = 0 (one)."""
    validate(params)
    vl = v(params.lam).lb
    if params.family == ZERO:
        if vl == 0:
            return True
        name, x = "L2", params.L2
    else:
        if vl == 1:
            return True
        name, x = "L1", params.L1
    if vl != HALF:
        return False
    if not x.is_zero():
        return False
    if params.is_exact_zero(name):
        return True
    raise IndeterminateError(f"{name} is zero only to precision; pass the exact-zero flag")


# regions


def region_predicates(params: FamilyParams) -> dict[str, bool]:
    """Truth value of each region predicate of the family."""
    lam, lamt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    p = params.p
    if params.family == ZERO:
        a = v(L1 - 1)
        b = v(L2 + lam * p)
        return {
            H01: a >= 1 - v(lam) and b >= v(lam * lamt),
            H02: b >= a + 1 and a < 1 - v(lam),
            H03: b <= a + 1 and b < vmin(v(lamt) + a, v(lam * lamt)),
        }
    a = v(L1 - lamt)
    b = v(1 - L2)
    return {
        H11: a >= 1 and b >= v(lam),
        H12: v(lam) + a >= b + 1 and b < v(lam),
        H13: v(lam) + a <= b + 1 and a < vmin(v(lam) + b, Val.of(1)),
    }


def classify_region(params: FamilyParams) -> frozenset:
    """The set of regions containing params (two on a boundary overlap)."""
    validate(params)
    if not in_irreducible_domain(params):
        raise ParameterError("parameters outside the irreducibility domain")
    found = frozenset(r for r, ok in region_predicates(params).items() if ok)
    if not found:
        raise ParameterError("unclassified: no region predicate holds")
    return found


def in_region(params: FamilyParams, region: str) -> bool:
    try:
        return region_predicates(params)[region]
    except KeyError:
        return False


# gluing at v(lam) = 1/2


def glue_isomorphism(params: FamilyParams) -> FamilyParams:
    """Zero-family params at v(lam) = 1/2, L2 != 0 -> isomorphic one-family params."""
    validate(params)
    if params.family != ZERO:
        raise ParameterError("gluing starts from the zero family")
    if v(params.lam).lb != HALF:
        raise ParameterError("gluing requires v(lambda) = 1/2")
    if params.L2.is_zero():
        raise ParameterError("gluing requires L2 != 0")
    lam, lamt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    d = lamt - lam * params.p
    return FamilyParams(ONE, lam, lamt, (lam - lamt) * L2 / d, L1 - L2 / d)


def glue_inverse(params: FamilyParams) -> FamilyParams:
    """Inverse of glue_isomorphism."""
    validate(params)
    if params.family != ONE or v(params.lam).lb != HALF:
        raise ParameterError("inverse gluing needs one-family params with v(lambda) = 1/2")
    if params.L1.is_zero():
        raise ParameterError("inverse gluing requires L1 != 0")
    lam, lamt, L1p, L2p = params.lam, params.lamt, params.L1, params.L2
    d = lamt - lam * params.p
    L2 = d * L1p / (lam - lamt)
    return FamilyParams(ZERO, lam, lamt, L2p + L2 / d, L2)


def glue_basis_map(zero_params: FamilyParams) -> list[list[PadicElem]]:
    """Matrix (columns = images of e1, e2, e3) of the isomorphism D_zero -> D_one."""
    one = glue_isomorphism(zero_params)
    ctx = zero_params.ctx
    z, o = ctx.zero(), ctx.one()
    lam, lamt, L1, L2 = zero_params.lam, zero_params.lamt, zero_params.L1, zero_params.L2
    col1 = [o, one.L1, -(L1 - one.L2)]
    col2 = [z, (lam - lamt) * L2, -L2]
    col3 = [z, z, o]
    return [[col1[i], col2[i], col3[i]] for i in range(3)]


# the ambient Fil^2 element


def fil2_ambient_element(params: FamilyParams, S: SRingContext, C0, C1, C2) -> list[SElem]:
    """Coordinates in (e1, e2, e3) of the general element of Fil^2 modulo Fil^2 S."""
    ctx = params.ctx
    C0, C1, C2 = (c if isinstance(c, PadicElem) else ctx(c) for c in (C0, C1, C2))
    p, L1, L2 = params.p, params.L1, params.L2
    X = S.X()
    if params.family == ZERO:
        const = [C0, ctx.zero(), C0 * L1]
        lin = [C1, C2, (C0 + L1 * C1 * p + L2 * C2 * p) / p]
    else:
        const = [C0, C0 * L1, C0 * L2]
        lin = [C1, L1 * C1 + C2, (C0 + L2 * C1 * p) / p]
    return [S.scalar(a) + X.scale(b) for a, b in zip(const, lin)]


def in_fil2_ambient(params: FamilyParams, vec: list[SElem]) -> bool:
    """Membership of an element of S_E (x) D in Fil^2 via f_pi(x) in Fil^2 D, f_pi(N x) in Fil^1 D.

    f_pi sends u to p, i.e. keeps the X^[0] coefficient.
    """
    Nm = N_matrix(params)
    Nvec = [vec[i].N() + sum((vec[j].scale(Nm[i][j]) for j in range(3)), vec[i].ctx.zero())
            for i in range(3)]
    f0 = [x.coeff(0) for x in vec]
    f1 = [x.coeff(0) for x in Nvec]
    return _in_span(f0, fil_basis(params, 2)) and _in_span(f1, fil_basis(params, 1))


def _in_span(w: list[PadicElem], gens: list[list[PadicElem]]) -> bool:
    """Whether w lies in the E-span of gens (each gen has a pivot 1 in a distinct slot)."""
    rest = list(w)
    for g in gens:
        piv = next(i for i, c in enumerate(g) if not c.is_zero())
        coef = rest[piv] / g[piv]
        rest = [r - coef * gi for r, gi in zip(rest, g)]
    return all(r.is_zero() for r in rest)
