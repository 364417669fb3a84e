"""The recursive sequences (G_m, H_m) and their limits Delta = lim G_m / H_m.

Four kinds, one per non-trivial region:

* D0_2 (region H02)  B = (L1-1) H - (lamt/lam) G,
                     G' = (L1-1) B^2,
                     H' = G' - (1/lam)([(L2+p lam) - lamt (L1-1)] B + p lamt G) G
* D0_3 (region H03)  A = L2 H + p lam G,
                     G' = A^2,
                     H' = G' - lamt [(L1-1) A + p lamt G] H
* D1_2 (region H12)  B = (1-L2) H + (p lam/lamt) G,
                     G' = (1-L2) B^2,
                     H' = G' + (p/lamt)([(L1-lamt) - lam (1-L2)] B + p lam G) G
* D1_3 (region H13)  A = L1 H - lamt G,
                     G' = A^2,
                     H' = G' - lam [(1-L2) A + p lam G] H

All start from G_0 = H_0 = 1.  The maps are homogeneous of degree 2, so the
ratio G_m / H_m is unchanged if the pair is rescaled; the iteration in
``delta`` normalises H to 1 after each step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .families import H02, H03, H12, H13, FamilyParams, ParameterError, in_region, validate
from .padic import (IndeterminateError, PadicElem, PrecisionError, Val, newton_root, v,
                    vmin)

D0_2, D0_3, D1_2, D1_3 = "D0_2", "D0_3", "D1_2", "D1_3"
KINDS = (D0_2, D0_3, D1_2, D1_3)
REGION_OF = {D0_2: H02, D0_3: H03, D1_2: H12, D1_3: H13}
KIND_OF = {r: k for k, r in REGION_OF.items()}


def _check_kind(kind: str, params: FamilyParams):
    if kind not in KINDS:
        raise ValueError(f"unknown recursion kind {kind!r}")
    fam = "zero" if kind.startswith("D0") else "one"
    if params.family != fam:
        raise ParameterError(f"kind {kind} needs the {fam} family")


def step(kind: str, params: FamilyParams, G: PadicElem, H: PadicElem) -> tuple[PadicElem, PadicElem]:
    """One step (G_m, H_m) -> (G_{m+1}, H_{m+1})."""
    _check_kind(kind, params)
    lam, lamt, L1, L2, p = params.lam, params.lamt, params.L1, params.L2, params.p
    if kind == D0_2:
        a = L1 - 1
        B = a * H - lamt / lam * G
        G1 = a * B * B
        K = (L2 + lam * p) - lamt * a
        H1 = G1 - (K * B + lamt * p * G) * G / lam
    elif kind == D0_3:
        A = L2 * H + lam * p * G
        G1 = A * A
        H1 = G1 - lamt * ((L1 - 1) * A + lamt * p * G) * H
    elif kind == D1_2:
        a = 1 - L2
        B = a * H + lam * p / lamt * G
        G1 = a * B * B
        K = (L1 - lamt) - lam * a
        H1 = G1 + (K * B + lam * p * G) * G * p / lamt
    else:
        A = L1 * H - lamt * G
        G1 = A * A
        H1 = G1 - lam * ((1 - L2) * A + lam * p * G) * H
    return G1, H1


def lemma_constants(kind: str, params: FamilyParams) -> tuple[Val, Val]:
    """(part-one minimum, per-step slope) of the convergence lemma.

    The part-three bound for step m is (m + 1) * slope for D0_2 / D1_2 and
    first + m * slope for D0_3 / D1_3.
    """
    _check_kind(kind, params)
    lam, lamt, L1, L2, p = params.lam, params.lamt, params.L1, params.L2, params.p
    if kind == D0_2:
        a = v(L1 - 1)
        K = (L2 + lam * p) - lamt * (L1 - 1)
        mu = vmin(v(K / lam) - 2 * a, 3 * (v(p / lam) - a))
        return mu, mu
    if kind == D0_3:
        b = v(L2 + lam * p)
        first = vmin(v(lamt * (L1 - 1)) - b, v(lamt * lamt * p) - 2 * b)
        slope = vmin(v(lam * lamt * (L1 - 1) * p) - 2 * b, 3 * (v(lam * lamt) - b),
                     v(lamt * lamt * p) - 2 * b)
        return first, slope
    if kind == D1_2:
        a = v(1 - L2)
        K = (L1 - lamt) - lam * (1 - L2)
        mu = vmin(v(K * p / lamt) - 2 * a, 3 * (v(lam) - a))
        return mu, mu
    b = v(L1 - lamt)
    first = vmin(v(lam * (1 - L2)) - b, v(lam * lam * p) - 2 * b)
    slope = vmin(v(lam * lamt * (1 - L2)) - 2 * b, v(lam * lam * p) - 2 * b, 3 * (1 - b))
    return first, slope


def lemma_bound(kind: str, params: FamilyParams, m: int) -> Fraction:
    first, slope = lemma_constants(kind, params)
    if kind in (D0_2, D1_2):
        return (m + 1) * slope.lb
    return first.lb + m * slope.lb


def part2_lhs(kind: str, params: FamilyParams, G: PadicElem, H: PadicElem) -> tuple[PadicElem, PadicElem]:
    """(the linear form of part two, the scalar whose valuation it should add to v(H))."""
    lam, lamt, L1, L2, p = params.lam, params.lamt, params.L1, params.L2, params.p
    if kind == D0_2:
        return (L1 - 1) * H - lamt / lam * G, L1 - 1
    if kind == D0_3:
        return L2 * H + lam * p * G, L2 + lam * p
    if kind == D1_2:
        return (1 - L2) * H + lam * p / lamt * G, 1 - L2
    return L1 * H - lamt * G, L1 - lamt


@dataclass
class StepRecord:
    m: int
    gap: Val
    bound: Fraction
    gap_ok: bool | None
    vG_eq_vH: bool | None
    part2_ok: bool | None


@dataclass
class ConvergenceCertificate:
    kind: str
    bound_first: Fraction
    bound_slope: Fraction
    records: list[StepRecord] = field(default_factory=list)
    steps: int = 0
    achieved_prec: Fraction | None = None
    delta: PadicElem | None = None

    @property
    def gaps(self) -> list[Val]:
        return [r.gap for r in self.records]

    def ok(self) -> bool:
        """Every recorded check decided and passed."""
        return all(r.gap_ok and r.vG_eq_vH and r.part2_ok for r in self.records)

    def refuted(self) -> bool:
        """Some recorded check was decided and failed."""
        return any(False in (r.gap_ok, r.vG_eq_vH, r.part2_ok) for r in self.records)

    def undecided(self) -> int:
        """Records whose comparison needs more precision than the cap holds."""
        return sum(None in (r.gap_ok, r.vG_eq_vH, r.part2_ok) for r in self.records)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "refuted": self.refuted(),
            "undecided": self.undecided(),
            "gaps": [str(g) for g in self.gaps],
            "bounds": [str(r.bound) for r in self.records],
            "bound_first": str(self.bound_first),
            "bound_slope": str(self.bound_slope),
            "steps": self.steps,
            "achieved_prec": None if self.achieved_prec is None else str(self.achieved_prec),
            "delta": None if self.delta is None else self.delta.to_json(),
            "ok": self.ok(),
        }


def _decide(f):
    try:
        return bool(f())
    except IndeterminateError:
        return None


def _region_check(kind: str, params: FamilyParams):
    validate(params)
    _check_kind(kind, params)
    if not in_region(params, REGION_OF[kind]):
        raise ParameterError(f"parameters not in region {REGION_OF[kind]} required by {kind}")
    first, slope = lemma_constants(kind, params)
    if not (first > 0 and slope > 0):
        raise ParameterError(f"lemma minima not positive ({first}, {slope}): non-contracting")


def _run(kind, params, n_steps, cert, record=True):
    """Iterate n_steps normalised steps, appending records; return the last ratio."""
    ctx = params.ctx
    G, H = ctx.one(), ctx.one()
    for m in range(n_steps):
        G1, H1 = step(kind, params, G, H)
        if H1.is_zero():
            raise PrecisionError("H_m vanished to working precision")
        if record:
            gap = v(G * H1 - H * G1) - v(H * H1)
            bound = lemma_bound(kind, params, m)
            lhs, c = part2_lhs(kind, params, G, H)
            cert.records.append(StepRecord(
                m, gap, bound,
                _decide(lambda: gap >= bound),
                _decide(lambda: v(G) == v(H)),
                _decide(lambda: v(lhs) == v(c) + v(H)),
            ))
        G, H = G1 / H1, ctx.one()
    cert.steps = n_steps
    return G


def recursion_certificate(kind: str, params: FamilyParams, M: int = 20) -> ConvergenceCertificate:
    """Run M steps recording every lemma check for m = 0..M-1 (and v(G)=v(H) up to M)."""
    _region_check(kind, params)
    first, slope = lemma_constants(kind, params)
    cert = ConvergenceCertificate(kind, first.lb, slope.lb)
    r = _run(kind, params, M + 1, cert)
    cert.delta = r
    return cert


def certify(kind: str, params: FamilyParams, M: int = 20,
            max_cap: int | None = None) -> tuple[ConvergenceCertificate, int]:
    """recursion_certificate at a cap large enough to decide every record.

    The parameters are lifted (their digits taken as exact) and the cap is
    doubled while some comparison is undecided.  A record that is decided
    and false is returned as is.  Returns (certificate, cap used).
    """
    from .families import lift_params

    ctx = params.ctx
    first, slope = lemma_constants(kind, params)
    need = lemma_bound(kind, params, M) + 2 * (first.lb + slope.lb) + 2
    cap = max(ctx.cap, int(need * ctx.e) + 1)
    limit = max_cap if max_cap is not None else 16 * cap
    while True:
        cert = recursion_certificate(kind, lift_params(params, cap) if cap > ctx.cap else params, M)
        undecided = [r for r in cert.records
                     if None in (r.gap_ok, r.vG_eq_vH, r.part2_ok)]
        if not undecided or 2 * cap > limit:
            return cert, cap
        cap *= 2


def steps_needed(kind: str, params: FamilyParams, target: Fraction) -> int:
    """Least n with lemma_bound(n) >= target (a-priori iteration count)."""
    n = 0
    while lemma_bound(kind, params, n) < target:
        n += 1
    return n


def delta(kind: str, params: FamilyParams, target_prec: Fraction | None = None,
          max_iter: int = 20) -> tuple[PadicElem, ConvergenceCertificate]:
    """The limit Delta with a convergence certificate.

    target_prec is a p-adic valuation.  Without it the iteration runs until
    the lemma bound passes the working cap (or max_iter steps) and reports
    whatever precision that certifies.
    """
    _region_check(kind, params)
    ctx = params.ctx
    first, slope = lemma_constants(kind, params)
    cert = ConvergenceCertificate(kind, first.lb, slope.lb)
    if target_prec is None:
        n = min(steps_needed(kind, params, Fraction(ctx.cap, ctx.e)), max_iter)
    else:
        target_prec = Fraction(target_prec)
        n = steps_needed(kind, params, target_prec)
        if n > max_iter:
            raise PrecisionError(f"{n} steps needed for target {target_prec}, max_iter is {max_iter}")
    n = max(n, 1)
    r = _run(kind, params, n, cert)
    bad = [rec for rec in cert.records if rec.gap_ok is False]
    if bad:
        raise ParameterError(f"gap below lemma bound at m = {bad[0].m}")
    # every later gap is at least bound(n), so v(Delta - r_n) >= bound(n)
    achieved = min(lemma_bound(kind, params, n), Fraction(r.prec, ctx.e))
    if target_prec is not None and achieved < target_prec:
        raise PrecisionError(f"cap too small: reached {achieved}, target {target_prec}")
    prec_digits = int(achieved * ctx.e)
    d = r.reduce_prec(prec_digits)
    if not v(d - 1) > 0:
        raise ParameterError("limit not in 1 + m_E")
    cert.achieved_prec = Fraction(prec_digits, ctx.e)
    cert.delta = d
    return d, cert


# the limit equations


def _padd(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else None
        y = b[i] if i < len(b) else None
        out.append(x + y if x is not None and y is not None else (x if y is None else y))
    return out


def _pmul(a, b):
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return out


def _pscale(a, c):
    return [x * c for x in a]


def limit_polynomial(kind: str, params: FamilyParams) -> list[PadicElem]:
    """Coefficients (constant first) of the polynomial whose root is Delta."""
    _check_kind(kind, params)
    ctx = params.ctx
    lam, lamt, L1, L2, p = params.lam, params.lamt, params.L1, params.L2, params.p
    one = ctx.one()
    x = [ctx.zero(), one]
    one_minus_x = [one, -one]
    if kind == D0_2:
        a = L1 - 1
        K = (L2 + lam * p) - lamt * a
        lin = [lam * a, -lamt]                       # lam (L1-1) - lamt x
        first = _pscale(_pmul(_pmul(lin, lin), one_minus_x), a)
        inner = _padd(_pscale(lin, K), [ctx.zero(), lam * lamt * p])
        return _padd(first, _pmul(inner, _pmul(x, x)))
    if kind == D0_3:
        lin = [L2, lam * p]                          # L2 + p lam x
        first = _pmul(_pmul(lin, lin), one_minus_x)
        inner = _padd(_pscale(lin, L1 - 1), [ctx.zero(), lamt * p])
        return _padd(first, _pscale(_pmul(inner, x), lamt))
    if kind == D1_2:
        a = 1 - L2
        K = (L1 - lamt) - lam * a
        lin = [lamt * a, lam * p]                    # lamt (1-L2) + p lam x
        first = _pscale(_pmul(_pmul(lin, lin), one_minus_x), a)
        inner = _padd(_pscale(lin, K), [ctx.zero(), lam * lamt * p])
        return _padd(first, _pscale(_pmul(inner, _pmul(x, x)), -ctx(p)))
    lin = [L1, -lamt]                                # L1 - lamt x
    first = _pmul(_pmul(lin, lin), one_minus_x)
    inner = _padd(_pscale(lin, 1 - L2), [ctx.zero(), lam * p])
    return _padd(first, _pscale(_pmul(inner, x), lam))


def _peval(f, x):
    acc = x.ctx.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _pderiv(f):
    return [c * i for i, c in enumerate(f)][1:]


@dataclass
class Residual:
    raw: Val          # v(f(Delta))
    derivative: Val   # v(f'(Delta))
    normalized: Val   # v(f(Delta)) - v(f'(Delta)), the Newton-step size

    def meets(self, achieved: Fraction, slack: Fraction) -> bool:
        return self.normalized >= achieved - slack


def limit_equation_residual(kind: str, params: FamilyParams, d: PadicElem) -> Residual:
    f = limit_polynomial(kind, params)
    fx = _peval(f, d)
    dfx = _peval(_pderiv(f), d)
    raw, dv = v(fx), v(dfx)
    norm = Val(raw.lb - dv.lb, raw.exact) if dv.exact else Val(raw.lb - dv.lb, False)
    return Residual(raw, dv, norm)


def representative_residual(kind: str, params: FamilyParams, d: PadicElem,
                            cap: int | None = None) -> Residual:
    """The residual of the stored digits of d, evaluated at a larger cap.

    At the working cap f(d) is only known to the precision of d plus the
    least coefficient valuation of f, which may sit below v(f'(d)).
    """
    from .families import lift_params

    cap = 2 * params.ctx.cap if cap is None else cap
    hi = lift_params(params, cap)
    return limit_equation_residual(kind, hi, hi.ctx.convert(d).lift_prec(cap))


def hensel_oracle(kind: str, params: FamilyParams, start: PadicElem | None = None) -> PadicElem:
    """Root of the limit polynomial by Newton iteration from the residue of Delta (= 1)."""
    ctx = params.ctx
    x0 = start if start is not None else ctx.one()
    return newton_root(limit_polynomial(kind, params), x0)


def unit_ratio_checks(kind: str, params: FamilyParams, d: PadicElem) -> dict:
    """The membership in 1 + m_E of the normalised linear forms at Delta."""
    lam, lamt, L1, L2, p = params.lam, params.lamt, params.L1, params.L2, params.p
    if kind == D0_2:
        num, den = lam * (L1 - 1) - lamt * d, lam * (L1 - 1)
    elif kind == D0_3:
        num, den = L2 + lam * p * d, L2 + lam * p
    elif kind == D1_2:
        num, den = lamt * (1 - L2) + lam * p * d, lamt * (1 - L2)
    else:
        num, den = L1 - lamt * d, L1 - lamt
    ratio = num / den
    in_one_plus_m = v(ratio - 1) > 0
    return {
        "ratio": ratio,
        "in_1_plus_mE": in_one_plus_m,
        "valuation_equal": v(num) == v(den),
        "delta_in_1_plus_mE": v(d - 1) > 0,
        "trivial": (d - 1).is_zero(),
    }
