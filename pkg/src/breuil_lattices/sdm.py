"""Strongly divisible lattices inside S_E (x) D for the six regions.

A lattice is stored through the matrix P whose column j holds the
e-coordinates of the basis vector E_j.  In every region P is lower
triangular with scalar diagonal, so its inverse Q is explicit and the
E-coordinates of w are Q w.

The checks performed here:

* stability: phi(E_j) and N(E_j) have integral E-coordinates;
* Fil^2: the general element X(C) of Fil^2 D_S has E-coordinates whose
  X^[0], X^[1] parts must be integral; this cuts out a lattice of C's;
* phi(Fil^2) lies in p^2 M and the images phi(g)/p^2 generate M.

Integrality of an element of S_E is tested on its divided-power
coefficients.  The working truncation depth is large enough that the
Frobenius of every basis entry is computed without loss.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import limits
from .families import (ONE, ZERO, H01, H02, H03, H11, H12, H13, REGIONS, FamilyParams,
                       ParameterError, classify_region, fil2_ambient_element, in_region,
                       phi_matrix, N_matrix, validate)
from .finite_field import GF
from .padic import IndeterminateError, PadicContext, PadicElem, PrecisionError, Val, v
from .sring import SElem, SRingContext

DELTA_REGIONS = (H02, H03, H12, H13)


def working_depth(p: int) -> int:
    """Truncation depth at which phi of every basis entry is exact."""
    return 2 * p * p + 4 * p + 2


@lru_cache(maxsize=None)
def working_ring(ctx: PadicContext, m: int | None = None) -> SRingContext:
    return SRingContext(ctx, working_depth(ctx.p) if m is None else m)


# vectors of SElem


def _vadd(a, b):
    return [x + y for x, y in zip(a, b)]


def _vsub(a, b):
    return [x - y for x, y in zip(a, b)]


def _vscale(a, k):
    return [x.scale(k) for x in a]


def _vnorm(a) -> Val:
    from .padic import vmin
    return vmin(*[x.norm() for x in a])


def _decide(f):
    try:
        return f()
    except IndeterminateError:
        return None


@dataclass
class Check:
    name: str
    ok: bool | None
    margin: Fraction | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "margin": None if self.margin is None else str(self.margin),
                "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok is True for c in self.checks)

    def add(self, name, ok, margin=None, detail=""):
        self.checks.append(Check(name, ok, margin, detail))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.ok is not True]

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _integrality(name: str, vec, shift: Fraction = Fraction(0)) -> Check:
    """Check norm(vec) >= shift; margin is the excess (a lower bound if inexact)."""
    n = _vnorm(vec)
    ok = _decide(lambda: n >= shift)
    margin = n.lb - shift
    return Check(name, ok, margin, "" if n.exact else "bound")


# the module


class SDModule:
    """A lattice of S_O (x) D given by its basis matrix over S_E."""

    def __init__(self, params: FamilyParams, region: str, P: list[list[SElem]],
                 delta: PadicElem | None = None, S: SRingContext | None = None):
        self.params = params
        self.region = region
        self.delta = delta
        self.S = S if S is not None else P[0][0].ctx
        self.P = P
        self.Q = _lower_inverse(P)
        self._phiE = None
        self._NE = None

    def __repr__(self):
        return f"SDModule({self.params.family}, {self.region}, p={self.params.p})"

    def basis_vectors(self) -> list[list[SElem]]:
        return [[self.P[i][j] for i in range(3)] for j in range(3)]

    def to_E(self, w) -> list[SElem]:
        """E-coordinates of a vector given in e-coordinates."""
        Q = self.Q
        return [sum((Q[i][k] * w[k] for k in range(i + 1) if not Q[i][k].is_zero()), self.S.zero())
                for i in range(3)]

    def from_E(self, c) -> list[SElem]:
        P = self.P
        return [sum((P[i][k] * c[k] for k in range(i + 1) if not P[i][k].is_zero()), self.S.zero())
                for i in range(3)]

    def phi_e(self, w) -> list[SElem]:
        """phi on S_E (x) D in e-coordinates."""
        Phi = phi_matrix(self.params)
        fw = [x.phi() for x in w]
        return [sum((fw[k].scale(Phi[i][k]) for k in range(3) if not Phi[i][k].is_zero()),
                    self.S.zero()) for i in range(3)]

    def N_e(self, w) -> list[SElem]:
        Nm = N_matrix(self.params)
        return [w[i].N() + sum((w[k].scale(Nm[i][k]) for k in range(3) if not Nm[i][k].is_zero()),
                               self.S.zero()) for i in range(3)]

    def phi_images(self) -> list[list[SElem]]:
        """E-coordinates of phi(E_j), j = 0, 1, 2."""
        if self._phiE is None:
            self._phiE = [self.to_E(self.phi_e(col)) for col in self.basis_vectors()]
        return self._phiE

    def N_images(self) -> list[list[SElem]]:
        if self._NE is None:
            self._NE = [self.to_E(self.N_e(col)) for col in self.basis_vectors()]
        return self._NE

    def scaled(self, j: int, k) -> "SDModule":
        """The lattice with E_j replaced by k E_j."""
        P = [row[:] for row in self.P]
        for i in range(3):
            P[i][j] = P[i][j].scale(k)
        return SDModule(self.params, self.region, P, self.delta, self.S)

    def to_json(self) -> dict:
        return {"family": self.params.family, "region": self.region,
                "params": self.params.to_json(),
                "delta": None if self.delta is None else self.delta.to_json(),
                "truncation": self.S.m,
                "basis": [[x.to_json() for x in col] for col in self.basis_vectors()]}


def _lower_inverse(P):
    S = P[0][0].ctx
    d = [P[i][i].coeff(0) for i in range(3)]
    for i in range(3):
        if P[i][i].degree() > 0:
            raise ValueError("basis matrix must have scalar diagonal")
        if d[i].is_zero():
            raise ParameterError("degenerate basis: zero diagonal entry")
    inv = [x.inverse() for x in d]
    z = S.zero()
    Q = [[z] * 3 for _ in range(3)]
    for i in range(3):
        Q[i][i] = S.scalar(inv[i])
    if not P[0][1].is_zero() or not P[0][2].is_zero() or not P[1][2].is_zero():
        raise ValueError("basis matrix must be lower triangular")
    Q[1][0] = (P[1][0] * Q[0][0]).scale(-inv[1])
    Q[2][1] = (P[2][1] * Q[1][1]).scale(-inv[2])
    Q[2][0] = (P[2][0] * Q[0][0] + P[2][1] * Q[1][0]).scale(-inv[2])
    return Q


# construction


def _columns_to_P(S, cols):
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def basis_columns(params: FamilyParams, region: str, delta: PadicElem | None,
                  S: SRingContext) -> list[list[SElem]]:
    """e-coordinates of E1, E2, E3."""
    ctx = params.ctx
    p = params.p
    lam, lt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    gam = S.gamma()
    g1 = gam - 1
    z = S.zero()
    sc = S.scalar

    def U0():
        return [sc(ctx(p)), sc(lam.inverse()), gam + (L1 - 1)]

    def U1():
        a = L1 / lam
        return [sc(ctx(p)), sc(a * lt), gam + (L2 - 1) + a]

    if region == H01:
        E1 = U0()
        E2 = [z, sc(lt / (lam * p)), sc(L2 / p) - g1.scale(lam)]
        E3 = [z, z, sc(ctx(p) / lam)]
    elif region == H02:
        T = lam * (L1 - 1) - lt * delta
        k = T / (lam * (L1 - 1) * p)
        E2 = [z, sc(k * lt), sc(k * lam * L2) - g1.scale(lam * lam)]
        E1 = _vadd(U0(), [x * g1.scale(delta * p / (lam * T)) for x in E2])
        E3 = [z, z, sc(T)]
    elif region == H03:
        A = L2 + lam * delta * p
        k = lt / (lam * lam * A)
        E1 = _vadd(U0(), [z, g1.scale(k * lt), g1.scale(k * lam * L2)])
        E2 = [z, sc(lt / (lam * p)), sc(L2 / p) - g1.scale(lam * delta)]
        E3 = [z, z, sc(lam * A / p)]
    elif region == H11:
        k = lt / lam
        E1 = _vadd(U1(), [z, g1.scale(k * lt), g1.scale(k)])
        E2 = [z, sc(lt * p / lam), sc(ctx(p) / lam)]
        E3 = [z, z, sc(lam)]
    elif region == H12:
        B = lt * (1 - L2) + lam * delta * p
        k = lt * lt * (1 - L2) / (lam * B)
        E1 = _vadd(U1(), [z, g1.scale(k * lt), g1.scale(k)])
        c = lt * (1 - L2) / p
        E2 = [z, sc(c * lt), sc(c) - g1.scale(lam * delta)]
        E3 = [z, z, sc(lam * B / p)]
    elif region == H13:
        T = L1 - lt * delta
        c = lt * T / p
        E2 = [z, sc(c * lt), sc(c) - g1.scale(lam * lam)]
        E1 = _vadd(U1(), [x * g1.scale(delta * p / (lam * T)) for x in E2])
        E3 = [z, z, sc(T)]
    else:
        raise ParameterError(f"unknown region {region!r}")
    return [E1, E2, E3]


def build(params: FamilyParams, region: str | None = None, delta: PadicElem | None = None,
          S: SRingContext | None = None, check_region: bool = True,
          max_iter: int = 20) -> SDModule:
    """The lattice of the given region (or the region containing params).

    On an overlap of two regions the first in sorted order is used unless
    a region is named.  The limit Delta is computed when needed and not
    supplied.
    """
    validate(params)
    if region is None:
        region = sorted(classify_region(params))[0]
    if region not in REGIONS[params.family]:
        raise ParameterError(f"region {region} does not belong to family {params.family}")
    if check_region and not in_region(params, region):
        raise ParameterError(f"parameters are not in region {region}")
    if region in DELTA_REGIONS and delta is None:
        delta, _ = limits.delta(limits.KIND_OF[region], params, max_iter=max_iter)
    if S is None:
        S = working_ring(params.ctx)
    cols = basis_columns(params, region, delta, S)
    return SDModule(params, region, _columns_to_P(S, cols), delta, S)


# stability


def verify_stability(M: SDModule) -> Report:
    rep = Report(f"stability {M.region}")
    for j, img in enumerate(M.phi_images()):
        rep.checks.append(_integrality(f"phi(E{j + 1}) in M", img))
    for j, img in enumerate(M.N_images()):
        rep.checks.append(_integrality(f"N(E{j + 1}) in M", img))
    return rep


def residue_image(vec) -> list[dict]:
    """Nonzero residues of the divided-power coefficients of each coordinate."""
    out = []
    for x in vec:
        d = {}
        if x.tail is not None and x.tail <= 0 or x.perr is not None and x.perr <= 0:
            raise IndeterminateError("residues undecidable at this precision")
        for j, c in enumerate(x.c):
            if not c.is_zero() and v(c).lb <= 0:
                r = c.residue()
                if r:
                    d[j] = r
        out.append(d)
    return out


def mod_mE_images(M: SDModule) -> dict:
    """phi(E_j) and N(E_j) modulo m_E M, as residues of E-coordinate coefficients."""
    return {"phi": [residue_image(x) for x in M.phi_images()],
            "N": [residue_image(x) for x in M.N_images()]}


# Fil^2


def _row_reduce(rows: list[list[PadicElem]]) -> list[list[PadicElem]]:
    """Upper triangular T with {C : rows(C) integral} = {C : T C integral}."""
    R = [list(r) for r in rows]
    T = []
    for col in range(3):
        cands = [r for r in R if not r[col].is_zero()]
        if not cands:
            raise ParameterError("Fil^2 constraints do not bound the lattice")
        piv = min(cands, key=lambda r: r[col].valuation().lb)
        R.remove(piv)
        for r in R:
            if not r[col].is_zero():
                f = r[col] / piv[col]
                r[:] = [a - f * b for a, b in zip(r, piv)]
        T.append(piv)
    return T


def _upper_inverse_columns(T) -> list[list[PadicElem]]:
    """Columns of T^-1 for upper triangular T."""
    ctx = T[0][0].ctx
    cols = []
    for k in range(3):
        x = [ctx.zero()] * 3
        for i in (2, 1, 0):
            rhs = ctx.one() if i == k else ctx.zero()
            for j in range(i + 1, 3):
                rhs = rhs - T[i][j] * x[j]
            x[i] = rhs / T[i][i]
        cols.append(x)
    return cols


def _apply_rows(rows, C) -> list[PadicElem]:
    return [sum((a * c for a, c in zip(r, C)), C[0].ctx.zero()) for r in rows]


@dataclass
class Fil2Lattice:
    """The lattice of C = (C0, C1, C2) with X(C) in Fil^2 M."""
    rows: list            # linear forms that must be integral
    T: list               # triangular reduction of rows
    basis: list           # columns of T^-1
    coords: list          # E-coordinates of X(e_k), k = 0, 1, 2

    def element(self, C) -> list[SElem]:
        """E-coordinates of X(C)."""
        out = [c.ctx.zero() for c in self.coords[0]]
        for k in range(3):
            if not C[k].is_zero():
                out = _vadd(out, _vscale(self.coords[k], C[k]))
        return out

    def contains(self, C) -> bool:
        return all(x.is_integral() for x in _apply_rows(self.rows, C))

    def to_json(self) -> dict:
        return {"basis": [[c.to_json() for c in col] for col in self.basis]}


def fil2_lattice(M: SDModule) -> Fil2Lattice:
    params, S = M.params, M.S
    ctx = params.ctx
    units = [[ctx.one() if i == k else ctx.zero() for i in range(3)] for k in range(3)]
    coords = [M.to_E(fil2_ambient_element(params, S, *u)) for u in units]
    rows = []
    for i in range(3):
        for d in range(2):
            rows.append([coords[k][i].coeff(d) for k in range(3)])
    T = _row_reduce(rows)
    basis = _upper_inverse_columns(T)
    return Fil2Lattice(rows, T, basis, coords)


def constraint_rows(params: FamilyParams, region: str, delta: PadicElem | None) -> list:
    """Closed-form linear conditions on C: each listed form must be integral."""
    ctx = params.ctx
    p = params.p
    lam, lt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    z = ctx.zero()
    P = ctx(p)
    rows = [[(lam * lt).inverse(), z, z], [z, P.inverse(), z]]
    if region == H01:
        rows.append([z, lt.inverse(), -(P * lam) / lt])
    elif region == H02:
        T = lam * (L1 - 1) - lt * delta
        den = lam * lt * T
        rows.append([z, T / den, -(P * lam * lam * (L1 - 1)) / den])
        rows.append([delta / (P * T), z, -(lam * (L1 - 1)) / T])
    elif region == H03:
        A = L2 + lam * delta * p
        den = lam * lt * A
        rows.append([z, lt.inverse(), -(P * lam) / lt])
        rows.append([lt * delta / den, A / den, -(A * P * lam * delta) / den])
    elif region == H11:
        rows.append([z, z, lam / (P * lt)])
        rows.append([(P * lam).inverse(), z, -(lam * lt).inverse()])
    elif region == H12:
        B = lt * (1 - L2) + lam * delta * p
        w = lt * (1 - L2)
        den = lam * lt * w * B
        rows.append([lt * w * delta / den, w * B / den, -(P * B * delta) / den])
        den2 = P * w * B
        rows.append([lt * w / den2, z, -(P * B) / den2])
    elif region == H13:
        T = L1 - lt * delta
        den = lam * lt * lt * T
        rows.append([z, lt * T / den, -(P * lam) / den])
        den2 = P * lt * T
        rows.append([lt * delta / den2, z, -P / den2])
    else:
        raise ParameterError(f"unknown region {region!r}")
    return rows


def _in_GL3(Bmat) -> bool:
    """Whether a 3x3 matrix over E lies in GL_3(O_E)."""
    if not all(x.is_integral() for row in Bmat for x in row):
        return False
    a = Bmat
    det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
           - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    return not det.is_zero() and v(det) == 0


def compare_constraints(M: SDModule, lat: Fil2Lattice) -> Report:
    """Cross-check the computed Fil^2 lattice against the closed-form conditions."""
    rep = Report(f"Fil^2 constraints {M.region}")
    rows = constraint_rows(M.params, M.region, M.delta)
    for k, C in enumerate(lat.basis):
        vals = _apply_rows(lat.rows, C)
        rep.add(f"basis C{k} satisfies derived forms", all(x.is_integral() for x in vals))
        rep.add(f"basis C{k} tight", any(not x.is_zero() and v(x) == 0 for x in vals))
    T2 = _row_reduce(rows)
    B2 = _upper_inverse_columns(T2)
    # columns of B2 expressed in the computed lattice: T B2
    change = [[sum((lat.T[i][j] * B2[k][j] for j in range(3)), M.params.ctx.zero())
               for k in range(3)] for i in range(3)]
    rep.add("closed-form lattice equals computed lattice", _in_GL3(change))
    return rep


# phi(Fil^2) and generation


@dataclass
class Fil2Generator:
    name: str
    coords: list          # E-coordinates of the generator
    image: list           # E-coordinates of phi(generator) / p^2


def _split_integral(x: SElem) -> tuple[SElem, SElem]:
    """x = y + t with t the non-integral part of degree >= 2."""
    S = x.ctx
    keep, drop = [], []
    for j, c in enumerate(x.c):
        if j >= 2 and not c.is_zero() and not v(c) >= 0:
            keep.append(S.base.zero())
            drop.append(c)
        else:
            keep.append(c)
            drop.append(S.base.zero())
    return SElem(S, tuple(keep), x.tail, x.perr), SElem(S, tuple(drop))


def fil2_generators(M: SDModule, lat: Fil2Lattice) -> list[Fil2Generator]:
    """Generators of Fil^2 M (modulo Fil^p S M) with phi(g)/p^2.

    The generator attached to a lattice vector C is X(C) minus the
    non-integral part of its E-coordinates in degrees >= 2, which lies in
    Fil^2 S_E (x) M; the remaining generators are X^[2] E_i.
    """
    S, params = M.S, M.params
    ctx = params.ctx
    inv_p2 = ctx(params.p * params.p).inverse()
    phiE = M.phi_images()
    units = [[ctx.one() if i == k else ctx.zero() for i in range(3)] for k in range(3)]
    phiX = [M.to_E(M.phi_e(fil2_ambient_element(params, S, *u))) for u in units]
    gens = []
    for k, C in enumerate(lat.basis):
        x = lat.element(C)
        y, ts = [], []
        for xi in x:
            a, b = _split_integral(xi)
            y.append(a)
            ts.append(b)
        img = [S.zero()] * 3
        for kk in range(3):
            if not C[kk].is_zero():
                img = _vadd(img, _vscale(phiX[kk], C[kk]))
        for i, t in enumerate(ts):
            if t.c and any(not c.is_zero() for c in t.c):
                ft = t.phi()
                img = _vsub(img, [ft * w for w in phiE[i]])
        gens.append(Fil2Generator(f"y(C{k})", y, _vscale(img, inv_p2)))
    X2 = S.basis(2)
    fX2 = X2.phi()
    for i in range(3):
        coords = [X2 if r == i else S.zero() for r in range(3)]
        gens.append(Fil2Generator(f"X^[2]E{i + 1}", coords, _vscale([fX2 * w for w in phiE[i]], inv_p2)))
    return gens


def verify_phi_fil2(M: SDModule, gens: list[Fil2Generator]) -> Report:
    rep = Report(f"phi(Fil^2) in p^2 M {M.region}")
    for g in gens:
        rep.add(f"{g.name} in M", all(_decide(x.is_integral) is True for x in g.coords))
        rep.checks.append(_integrality(f"phi({g.name})/p^2 in M", g.image))
    return rep


def _rank_mod_p(rows: list[list]) -> int:
    R = [list(r) for r in rows]
    rank = 0
    ncols = len(R[0]) if R else 0
    for col in range(ncols):
        piv = next((r for r in R if r[col]), None)
        if piv is None:
            continue
        R.remove(piv)
        inv = piv[col].inverse()
        for r in R:
            if r[col]:
                f = r[col] * inv
                r[:] = [a - f * b for a, b in zip(r, piv)]
        rank += 1
    return rank


def verify_generation(M: SDModule, gens: list[Fil2Generator]) -> Report:
    """phi(Fil^2 M)/p^2 generates M iff the constant residues have rank 3."""
    rep = Report(f"generation {M.region}")
    F = GF(M.params.p, 1)
    rows = []
    for g in gens:
        row = []
        for x in g.image:
            c = x.coeff(0)
            row.append(c.residue() if v(c) >= 0 else None)
        if None in row:
            rep.add(f"{g.name} image integral", False)
            return rep
        rows.append(row)
    rank = _rank_mod_p(rows)
    rep.add("images span M / m M", rank == 3, detail=f"rank {rank}")
    return rep


@dataclass
class Verification:
    module: SDModule
    lattice: Fil2Lattice | None
    generators: list
    reports: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def to_json(self) -> dict:
        return {"module": self.module.to_json(), "ok": self.ok,
                "fil2": None if self.lattice is None else self.lattice.to_json(),
                "reports": [r.to_json() for r in self.reports]}


def verify(M: SDModule, cross_check: bool = True) -> Verification:
    """Run every check on M."""
    reports = [verify_stability(M)]
    try:
        lat = fil2_lattice(M)
    except ParameterError as exc:
        rep = Report("Fil^2 lattice")
        rep.add("lattice bounded", False, detail=str(exc))
        return Verification(M, None, [], reports + [rep])
    gens = fil2_generators(M, lat)
    reports.append(verify_phi_fil2(M, gens))
    reports.append(verify_generation(M, gens))
    if cross_check and M.region in REGIONS[M.params.family]:
        reports.append(compare_constraints(M, lat))
    return Verification(M, lat, gens, reports)


# homothety


def non_homothety(M2: SDModule, M3: SDModule) -> dict:
    """Decide whether two lattices in S_E (x) D differ by a scalar.

    With B the matrix of the M2 basis in M3 coordinates, the lattices are
    homothetic iff c B lies in GL_3(S_O) for some c in E^x, which on the
    divided-power norm means norm(B) + norm(B^-1) = 0.
    """
    B = [M3.to_E(col) for col in M2.basis_vectors()]
    Binv = [M2.to_E(col) for col in M3.basis_vectors()]
    nb = min(_vnorm(c).lb for c in B)
    ni = min(_vnorm(c).lb for c in Binv)
    return {"norm": nb, "norm_inverse": ni, "sum": nb + ni, "homothetic": nb + ni == 0}
