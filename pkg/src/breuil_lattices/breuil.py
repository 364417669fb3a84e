"""Breuil modules over F[u]/u^p with Hodge-Tate weights (0, 1, 2).

A module is free of rank r over F[u]/u^p with basis E_1..E_r.  It is
given by generators of its Fil^2 submodule together with their images
under phi_2, and by N on the basis.  A vector is a list of r polynomials,
each a list of p coefficients in F (coefficient of u^j at index j).

phi_2 is semilinear for u -> u^p, so phi_2(u^j g) = 0 for j >= 1 and
phi_2 on the F-span of {u^j g_k} is determined by the values on the g_k.
Everything here is finite linear algebra over F.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .families import (ZERO, H01, H02, H03, H11, H12, H13, FamilyParams, ParameterError,
                       classify_region, has_submodule, validate)
from .finite_field import GF, FFElem, FiniteField
from .padic import PadicElem, v

SHAPE_OF = {H01: "a", H02: "b", H03: "c", H11: "a", H12: "b", H13: "c"}


# polynomials and vectors over F[u]/u^p


def poly_const(F: FiniteField, p: int, c) -> list:
    return [F(c)] + [F.zero()] * (p - 1)


def poly_mul(a: list, b: list) -> list:
    p = len(a)
    z = a[0].field.zero()
    out = [z] * p
    for i, x in enumerate(a):
        if x:
            for j in range(p - i):
                if b[j]:
                    out[i + j] = out[i + j] + x * b[j]
    return out


def poly_N(a: list) -> list:
    """N(a(u)) = -u a'(u)."""
    return [c * (-j) for j, c in enumerate(a)]


def vec(F: FiniteField, p: int, r: int, terms: dict) -> list:
    """Vector from {(i, j): c} meaning c u^j E_{i+1}."""
    out = [[F.zero()] * p for _ in range(r)]
    for (i, j), c in terms.items():
        out[i][j] = out[i][j] + F(c)
    return out


def flatten(x: list) -> list:
    return [c for poly in x for c in poly]


def unflatten(flat: list, r: int, p: int) -> list:
    return [list(flat[i * p:(i + 1) * p]) for i in range(r)]


def vadd(a, b):
    return [[x + y for x, y in zip(pa, pb)] for pa, pb in zip(a, b)]


def vscale(a, c):
    return [[x * c for x in pa] for pa in a]


def vpoly_scale(a, poly):
    return [poly_mul(poly, pa) for pa in a]


def is_zero_vec(a) -> bool:
    return not any(c for poly in a for c in poly)


def rank_F(rows: list[list]) -> int:
    return len(_echelon_rows(rows))


def _echelon_rows(rows):
    R = []
    for r in rows:
        r = list(r)
        for piv, row in R:
            if r[piv]:
                f = r[piv]
                r = [a - f * b for a, b in zip(r, row)]
        piv = next((i for i, c in enumerate(r) if c), None)
        if piv is not None:
            inv = r[piv].inverse()
            R.append((piv, [c * inv for c in r]))
    return R


def null_space(rows: list[list], n: int, F: FiniteField) -> list[list]:
    """Basis of {x in F^n : row . x = 0 for every row}."""
    R = []
    for r in rows:
        r = list(r)
        for piv, row in R:
            if r[piv]:
                f = r[piv]
                r = [a - f * b for a, b in zip(r, row)]
        piv = next((i for i, c in enumerate(r) if c), None)
        if piv is not None:
            inv = r[piv].inverse()
            r = [c * inv for c in r]
            # keep the rows fully reduced
            R = [(pv, [a - row[piv] * b for a, b in zip(row, r)]) if row[piv] else (pv, row)
                 for pv, row in R]
            R.append((piv, r))
    pivots = {pv for pv, _ in R}
    basis = []
    for free in range(n):
        if free in pivots:
            continue
        x = [F.zero()] * n
        x[free] = F.one()
        for pv, row in R:
            x[pv] = -row[free]
        basis.append(x)
    return basis


class _Echelon:
    """Row echelon form of (vector, image) pairs; reduction is F-linear."""

    def __init__(self, width: int, iwidth: int, F: FiniteField):
        self.rows = []
        self.width, self.iwidth, self.F = width, iwidth, F
        self.consistent = True

    def reduce(self, x):
        """(remainder, image of the part of x spanned by the rows)."""
        x = list(x)
        img = [self.F.zero()] * self.iwidth
        for piv, row, rimg in self.rows:
            c = x[piv]
            if c:
                x = [a - c * b for a, b in zip(x, row)]
                img = [a + c * b for a, b in zip(img, rimg)]
        return x, img

    def add(self, x, img):
        rest, acc = self.reduce(x)
        img = [a - b for a, b in zip(img, acc)]
        piv = next((i for i, c in enumerate(rest) if c), None)
        if piv is None:
            if any(img):
                self.consistent = False
            return
        inv = rest[piv].inverse()
        self.rows.append((piv, [c * inv for c in rest], [c * inv for c in img]))


# the module


class BreuilModule:
    """(M, Fil^2 M, phi_2, N) over F[u]/u^p."""

    def __init__(self, F: FiniteField, p: int, gens: list, images: list, N: list | None = None,
                 label: str = "", rank: int | None = None):
        self.F, self.p = F, p
        self.rank = rank if rank is not None else len(gens[0])
        self.gens = [self._coerce(g) for g in gens]
        self.images = [self._coerce(g) for g in images]
        if len(self.gens) != len(self.images):
            raise ValueError("every generator needs an image")
        r = self.rank
        self.N = [self._coerce(x) for x in N] if N is not None else [
            vec(F, p, r, {}) for _ in range(r)]
        self.label = label
        self._ech = None
        self.degenerate: list[str] = []

    def _coerce(self, x):
        F = self.F
        return [[F(c) for c in poly] for poly in x]

    def __repr__(self):
        return f"BreuilModule({self.label or 'rank ' + str(self.rank)}, {self.F})"

    @property
    def dim(self) -> int:
        return self.rank * self.p

    def zero(self):
        return vec(self.F, self.p, self.rank, {})

    def basis_vector(self, i: int, j: int = 0):
        return vec(self.F, self.p, self.rank, {(i, j): 1})

    def echelon(self) -> _Echelon:
        if self._ech is None:
            ech = _Echelon(self.dim, self.dim, self.F)
            zero_img = flatten(self.zero())
            for g, im in zip(self.gens, self.images):
                ech.add(flatten(g), flatten(im))
                for j in range(1, self.p):
                    shifted = vpoly_scale(g, [self.F.zero()] * j + [self.F.one()] + [self.F.zero()] * (self.p - j - 1))
                    ech.add(flatten(shifted), zero_img)
            self._ech = ech
        return self._ech

    def fil_dim(self) -> int:
        return len(self.echelon().rows)

    def in_fil(self, x) -> bool:
        rest, _ = self.echelon().reduce(flatten(self._coerce(x)))
        return not any(rest)

    def phi2(self, x):
        """phi_2 of an element of Fil^2 M."""
        rest, img = self.echelon().reduce(flatten(self._coerce(x)))
        if any(rest):
            raise ValueError("element not in Fil^2")
        return unflatten(img, self.rank, self.p)

    def apply_N(self, x):
        out = [poly_N(a) for a in x]
        for j, a in enumerate(x):
            out = vadd(out, vpoly_scale(self.N[j], a))
        return out

    def invariants(self) -> dict:
        """u^2 M in Fil^2 M, phi_2 well defined, phi_2(Fil^2) generates M."""
        ech = self.echelon()
        u2 = all(self.in_fil(self.basis_vector(i, 2)) for i in range(self.rank)) if self.p > 2 else True
        consts = [[poly[0] for poly in im] for im in self.images]
        gen = rank_F(consts) == self.rank
        return {"u2_in_fil": u2, "well_defined": ech.consistent, "generates": gen}

    def is_valid(self) -> bool:
        return all(self.invariants().values())

    def to_json(self) -> dict:
        def enc(x):
            return [[c.to_json() for c in poly] for poly in x]
        return {"label": self.label, "field": [self.F.p, self.F.f], "rank": self.rank,
                "fil2_gens": [enc(g) for g in self.gens],
                "phi2": [enc(g) for g in self.images],
                "N": [enc(g) for g in self.N],
                "degenerate": list(self.degenerate)}


def shapes_match(A: BreuilModule, B: BreuilModule) -> bool:
    """Same Fil^2, same phi_2 on it and same N."""
    if A.rank != B.rank or A.p != B.p or A.F.p != B.F.p:
        return False
    if A.fil_dim() != B.fil_dim():
        return False
    for g in A.gens + B.gens:
        if not (A.in_fil(g) and B.in_fil(g)):
            return False
        if A.phi2(g) != B.phi2(g):
            return False
    return A.N == B.N


def span_is_submodule(M: BreuilModule, idx) -> bool:
    """Whether the span of the E_i (i in idx) is a Breuil submodule of M.

    The span must be N-stable, phi_2 must map Fil^2 M meeting the span back
    into it, and those images must generate it.
    """
    F, p, r = M.F, M.p, M.rank
    idx = sorted(idx)
    inside = {i * p + k for i in idx for k in range(p)}

    def in_span(flat):
        return not any(c for t, c in enumerate(flat) if t not in inside)

    if not all(in_span(flatten(M.apply_N(M.basis_vector(i)))) for i in idx):
        return False
    fil = [row for _, row, _ in M.echelon().rows]
    sub = [flatten(M.basis_vector(i, k)) for i in idx for k in range(p)]
    system = [[f[c] for f in fil] + [-s[c] for s in sub] for c in range(M.dim)]
    consts = []
    for x in null_space(system, len(fil) + len(sub), F):
        y = [F.zero()] * M.dim
        for a, f in zip(x, fil):
            if a:
                y = [u + a * w for u, w in zip(y, f)]
        img = flatten(M.phi2(unflatten(y, r, p)))
        if not in_span(img):
            return False
        consts.append([img[i * p] for i in idx])
    return rank_F(consts) == len(idx)


# morphisms


def check_morphism(f: list, A: BreuilModule, B: BreuilModule) -> dict:
    """f[i][j] in F[u]/u^p is the E'_i-coefficient of f(E_j), for f: A -> B."""
    def apply(x):
        out = B.zero()
        for j, a in enumerate(x):
            col = [f[i][j] for i in range(B.rank)]
            out = vadd(out, vpoly_scale(col, a))
        return out

    fil = all(B.in_fil(apply(g)) for g in A.gens)
    phi = fil and all(B.phi2(apply(g)) == apply(im) for g, im in zip(A.gens, A.images))
    N = all(apply(A.apply_N(A.basis_vector(j))) == B.apply_N(apply(A.basis_vector(j)))
            for j in range(A.rank))
    return {"fil": fil, "phi": phi, "N": N, "ok": fil and phi and N}


def constant_map(F: FiniteField, p: int, mat: list) -> list:
    """Constant matrix as a matrix over F[u]/u^p."""
    return [[poly_const(F, p, c) for c in row] for row in mat]


def morphism_space(A: BreuilModule, B: BreuilModule) -> list:
    """F-basis of Hom(A, B), each element as a matrix over F[u]/u^p."""
    F, p = A.F, A.p
    ra, rb = A.rank, B.rank
    n = ra * rb * p
    dB = B.dim
    ech = B.echelon()
    # remainder and (extended) phi_2 of B as matrices on F^dB
    rem_cols, phi_cols = [], []
    for t in range(dB):
        e = [F.zero()] * dB
        e[t] = F.one()
        rest, img = ech.reduce(e)
        rem_cols.append(rest)
        phi_cols.append(img)

    def var(i, j, k):
        return (i * ra + j) * p + k

    def apply_sym(x):
        """f(x) as a dB x n matrix (linear in the unknowns)."""
        M = [[F.zero()] * n for _ in range(dB)]
        for j, a in enumerate(x):
            for s, c in enumerate(a):
                if not c:
                    continue
                for i in range(rb):
                    for k in range(p - s):
                        M[i * p + s + k][var(i, j, k)] += c
        return M

    def compose(cols, M):
        out = [[F.zero()] * n for _ in range(dB)]
        for t in range(dB):
            col = cols[t]
            row = M[t]
            if not any(row):
                continue
            for s in range(dB):
                if col[s]:
                    out[s] = [a + col[s] * b for a, b in zip(out[s], row)]
        return out

    rows = []
    for g, im in zip(A.gens, A.images):
        fg = apply_sym(g)
        rows += compose(rem_cols, fg)
        lhs = compose(phi_cols, fg)
        rhs = apply_sym(im)
        rows += [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
    for j in range(ra):
        ej = A.basis_vector(j)
        left = apply_sym(A.apply_N(ej))
        # N_B(f(E_j)) = sum_i N(f_ij) E'_i + f_ij N(E'_i)
        right = [[F.zero()] * n for _ in range(dB)]
        for i in range(rb):
            for k in range(p):
                x = var(i, j, k)
                # -k u^k E'_i
                right[i * p + k][x] += F(-k)
                for i2 in range(rb):
                    for s, c in enumerate(B.N[i][i2]):
                        if c and s + k < p:
                            right[i2 * p + s + k][x] += c
        rows += [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(left, right)]
    basis = null_space(rows, n, F)
    out = []
    for x in basis:
        out.append([[[x[var(i, j, k)] for k in range(p)] for j in range(ra)] for i in range(rb)])
    return out


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def is_isomorphism(f: list) -> bool:
    """Invertible over F[u]/u^p iff the constant term is invertible."""
    const = [[poly[0] for poly in row] for row in f]
    return len(const) == len(const[0]) and rank_F(const) == len(const)


def find_isomorphism(A: BreuilModule, B: BreuilModule, limit: int = 4096):
    """An isomorphism A -> B, searching the Hom space exhaustively when small."""
    if A.rank != B.rank:
        return None
    basis = morphism_space(A, B)
    if not basis:
        return None
    F = A.F
    if F.order ** len(basis) > limit:
        raise ValueError("Hom space too large for exhaustive search")
    for coeffs in itertools.product(list(F.elements()), repeat=len(basis)):
        if not any(coeffs):
            continue
        f = [[[sum((c * b[i][j][k] for c, b in zip(coeffs, basis)), F.zero())
               for k in range(A.p)] for j in range(A.rank)] for i in range(B.rank)]
        if is_isomorphism(f):
            return f
    return None


# the example modules


def _cycle(i: int, k: int) -> int:
    """s^i(k) for s = (1 2 3), 0-based."""
    return (k + i) % 3


def simple_module(F: FiniteField, p: int, i: int, a, b, c) -> BreuilModule:
    """Fil^2 = <u^2 E1, u E2, E3>, images a E_{s^i(1)}, b E_{s^i(2)}, c E_{s^i(3)}."""
    gens = [vec(F, p, 3, {(0, 2): 1}), vec(F, p, 3, {(1, 1): 1}), vec(F, p, 3, {(2, 0): 1})]
    imgs = [vec(F, p, 3, {(_cycle(i, k), 0): x}) for k, x in enumerate((a, b, c))]
    return BreuilModule(F, p, gens, imgs, label=f"M(s^{i},{a},{b},{c})")


def matrix_module(F: FiniteField, p: int, A: list) -> BreuilModule:
    """Fil^2 = u M, phi_2(u E_i) = sum_j A[i][j] E_j."""
    r = len(A)
    gens = [vec(F, p, r, {(i, 1): 1}) for i in range(r)]
    imgs = [vec(F, p, r, {(j, 0): A[i][j] for j in range(r)}) for i in range(r)]
    return BreuilModule(F, p, gens, imgs, label="M(a_ij)", rank=r)


def module_b(F: FiniteField, p: int, a, b, c, d) -> BreuilModule:
    """Fil^2 = <u^2 E1, E2 + d E3, u E3> with images a E3, b E1, c E2."""
    gens = [vec(F, p, 3, {(0, 2): 1}), vec(F, p, 3, {(1, 0): 1, (2, 0): d}), vec(F, p, 3, {(2, 1): 1})]
    imgs = [vec(F, p, 3, {(2, 0): a}), vec(F, p, 3, {(0, 0): b}), vec(F, p, 3, {(1, 0): c})]
    return BreuilModule(F, p, gens, imgs, label=f"M({a},{b},{c},{d})")


def module_c(F: FiniteField, p: int, a, b, c, d) -> BreuilModule:
    """Fil^2 = <u E1 + d u E2, u^2 E2, E3> with images a E2, b E3, c E1."""
    gens = [vec(F, p, 3, {(0, 1): 1, (1, 1): d}), vec(F, p, 3, {(1, 2): 1}), vec(F, p, 3, {(2, 0): 1})]
    imgs = [vec(F, p, 3, {(1, 0): a}), vec(F, p, 3, {(2, 0): b}), vec(F, p, 3, {(0, 0): c})]
    return BreuilModule(F, p, gens, imgs, label=f"M'({a},{b},{c},{d})")


def rank_one_module(F: FiniteField, p: int, d) -> BreuilModule:
    """Fil^2 = u M, phi_2(u E) = d E."""
    return BreuilModule(F, p, [vec(F, p, 1, {(0, 1): 1})], [vec(F, p, 1, {(0, 0): d})],
                        label=f"rank one ({d})", rank=1)


# criteria on the examples


def inertia_weights(i: int, p: int) -> tuple[int, int, int]:
    """Exponents of the fundamental character of level 3 for the simple module of type i."""
    if i == 1:
        return (2 * p + 1, 2 * p * p + p, 2 + p * p)
    if i == 2:
        return (p + 2, p * p + 2 * p, 1 + 2 * p * p)
    raise ValueError("i must be 1 or 2")


def _nonzero(*xs):
    if not all(xs):
        raise ValueError("all entries must be nonzero")


def simple_iso_test(F: FiniteField, i: int, abc, j: int, alpha) -> tuple[bool, list | None]:
    """Isomorphism test between simple modules and the diagonal basis change when it exists.

    The returned list gives the images E_k -> d_k E_k of the isomorphism
    from the (i, abc) module to the (j, alpha) module.
    """
    a, b, c = (F(x) for x in abc)
    al, be, ga = (F(x) for x in alpha)
    _nonzero(a, b, c, al, be, ga)
    if i != j or a * b * c != al * be * ga:
        return False, None
    if i == 1:
        return True, [F.one(), al / a, al * be / (a * b)]
    return True, [F.one(), b / be, b * c / (be * ga)]


@dataclass
class EigenQuotient:
    root: FFElem | None
    eigenvector: list | None
    quotient: BreuilModule | None
    extension_degree: int | None = None

    @property
    def exists(self) -> bool:
        return self.root is not None


def char_poly(A: list) -> list:
    """Coefficients (constant first) of det(x I - A) for a 3x3 matrix."""
    F = A[0][0].field
    tr = A[0][0] + A[1][1] + A[2][2]
    minors = (A[0][0] * A[1][1] - A[0][1] * A[1][0]
              + A[0][0] * A[2][2] - A[0][2] * A[2][0]
              + A[1][1] * A[2][2] - A[1][2] * A[2][1])
    return [-_det3(A), minors, -tr, F.one()]


def _poly_roots(f: list, F: FiniteField) -> list:
    out = []
    for x in F.elements():
        acc = F.zero()
        for c in reversed(f):
            acc = acc * x + c
        if not acc:
            out.append(x)
    return out


def eigen_quotient(F: FiniteField, p: int, A: list) -> EigenQuotient:
    """Rank-one quotient of the module with phi_2(u E_i) = sum_j A[i][j] E_j."""
    A = [[F(x) for x in row] for row in A]
    if not _det3(A):
        raise ValueError("matrix must be invertible")
    roots = _poly_roots(char_poly(A), F)
    if not roots:
        # a cubic without roots is irreducible: it splits over the degree 3 extension
        return EigenQuotient(None, None, None, 3)
    d = roots[0]
    rows = [[A[i][j] - (d if i == j else F.zero()) for j in range(3)] for i in range(3)]
    x = null_space(rows, 3, F)[0]
    return EigenQuotient(d, x, rank_one_module(F, p, d), 1)


def eigen_quotient_map(F: FiniteField, p: int, eq: EigenQuotient) -> list:
    """The quotient map E_i -> x_i E as a 1 x 3 matrix over F[u]/u^p."""
    return [[poly_const(F, p, c) for c in eq.eigenvector]]


def cross_morphism_exists(F: FiniteField, abcd, xyzw) -> tuple[bool, list | None]:
    """The morphism M'(x,y,z,w) -> M(a,b,c,d): E1 -> 0, E2 -> E2, E3 -> 0, when x = -cdw."""
    a, b, c, d = (F(t) for t in abcd)
    x, y, z, w = (F(t) for t in xyzw)
    _nonzero(a, b, c, d, x, y, z, w)
    if x != -(c * d * w):
        return False, None
    return True, [[F.zero()] * 3, [F.zero(), F.one(), F.zero()], [F.zero()] * 3]


def recognize_simple(M: BreuilModule):
    """(i, (a, b, c), sigma) if M is a simple module in a permuted basis, else None.

    sigma lists the original basis indices playing the roles of E1, E2, E3.
    """
    if M.rank != 3:
        return None
    F, p = M.F, M.p
    for sigma in itertools.permutations(range(3)):
        gens = [M.basis_vector(sigma[0], 2), M.basis_vector(sigma[1], 1), M.basis_vector(sigma[2], 0)]
        if not all(M.in_fil(g) for g in gens):
            continue
        test = BreuilModule(F, p, gens, [M.phi2(g) for g in gens])
        if test.fil_dim() != M.fil_dim():
            continue
        pos = {s: k for k, s in enumerate(sigma)}
        targets, coeffs = [], []
        for g in gens:
            im = M.phi2(g)
            support = [(i, j) for i in range(3) for j in range(p) if im[i][j]]
            if len(support) != 1 or support[0][1] != 0:
                break
            targets.append(pos[support[0][0]])
            coeffs.append(im[support[0][0]][0])
        else:
            for i in (1, 2):
                if all(targets[k] == _cycle(i, k) for k in range(3)):
                    return i, tuple(coeffs), sigma
    return None


# the mod p reduction of lattices


def _reduce_vec(x, F) -> list:
    return [[F(c) for c in s.reduce_mod_p()] for s in x]


def reduce(verification) -> BreuilModule:
    """The Breuil module of a verified lattice."""
    if not verification.ok:
        raise ParameterError("refusing to reduce a lattice that failed verification")
    M = verification.module
    p = M.params.p
    F = GF(p, 1)
    gens = [_reduce_vec(g.coords, F) for g in verification.generators]
    imgs = [_reduce_vec(g.image, F) for g in verification.generators]
    N = [_reduce_vec(x, F) for x in M.N_images()]
    return BreuilModule(F, p, gens, imgs, N, label=f"reduction {M.region}")


def _res(x: PadicElem, name: str, degenerate: list, unit: bool = False):
    if not v(x) >= 0:
        raise ParameterError(f"coefficient {name} is not integral")
    r = x.residue()
    if unit and not r:
        degenerate.append(name)
    return r


def expected_shape(params: FamilyParams, region: str) -> BreuilModule:
    """The tabulated reduction of the lattice of region, residues evaluated at params."""
    validate(params)
    p = params.p
    F = GF(p, 1)
    lam, lt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    P = params.ctx(p)
    P2 = P * P
    deg: list[str] = []
    top = _res(lam * lam * lt / P2, "lam^2 lamt / p^2", deg, unit=True)

    def V(terms):
        return vec(F, p, 3, terms)

    if region == H01:
        a = _res(lam * (L1 - 1) / P, "lam(L1-1)/p", deg)
        b = _res(lam * (L2 + P * lam) / P2, "lam(L2+p lam)/p^2", deg)
        c = _res(lt / P, "lamt/p", deg)
        gens = [V({(0, 1): 1}), V({(1, 1): 1}), V({(2, 1): 1})]
        imgs = [V({(0, 0): a, (1, 0): -1}), V({(0, 0): b, (1, 0): -c, (2, 0): top}), V({(0, 0): 1})]
    elif region in (H02, H13):
        if region == H02:
            k = _res(((L2 + P * lam) - lt * (L1 - 1)) / (P * (L1 - 1)), "kappa", deg)
        else:
            k = _res(lam * lt * (1 - L2) / (P * (L1 - lt)), "kappa", deg)
        gens = [V({(0, 2): 1}), V({(1, 0): 1, (2, 0): -k}), V({(2, 1): 1})]
        imgs = [V({(2, 0): 1}), V({(0, 0): -top}), V({(1, 0): 1})]
    elif region in (H03, H12):
        if region == H03:
            k = _res(P * (L1 - 1) / (L2 + P * lam), "kappa", deg)
        else:
            k = _res(P * ((L1 - lt) - lam * (1 - L2)) / (lam * lt * (1 - L2)), "kappa", deg)
        gens = [V({(0, 1): 1, (1, 1): -k}), V({(1, 2): 1}), V({(2, 0): 1})]
        imgs = [V({(1, 0): -1}), V({(2, 0): 1}), V({(0, 0): top})]
    elif region == H11:
        a = _res(((L1 - lt) - lam * (1 - L2)) / P, "((L1-lamt)-lam(1-L2))/p", deg)
        b = _res(lam * lt * (1 - L2) / P2, "lam lamt(1-L2)/p^2", deg)
        c = _res(lam * lam / P, "lam^2/p", deg)
        gens = [V({(0, 1): 1}), V({(1, 1): 1}), V({(2, 1): 1})]
        imgs = [V({(0, 0): a, (1, 0): -b, (2, 0): -1}), V({(0, 0): 1}), V({(0, 0): c, (1, 0): top})]
    else:
        raise ParameterError(f"unknown region {region!r}")
    M = BreuilModule(F, p, gens, imgs, label=f"expected {region}")
    M.degenerate = deg
    return M


# irreducibility


@dataclass
class Verdict:
    irreducible: bool
    shape: str | None
    clause: str
    i: int | None = None
    inertia_exponents: tuple | None = None
    regions: tuple = ()

    def to_json(self) -> dict:
        return {"irreducible": self.irreducible, "shape": self.shape, "clause": self.clause,
                "inertia_exponents": None if self.inertia_exponents is None
                else list(self.inertia_exponents),
                "regions": list(self.regions)}


def _shape_of(regions) -> str | None:
    shapes = sorted({SHAPE_OF[r] for r in regions})
    return shapes[0] if shapes else None


def classify_irreducible(params: FamilyParams) -> Verdict:
    """Irreducibility of the mod p reduction from valuation criteria.

    Clauses: zero-1 and zero-2 for the first family, one-1 and one-2 for
    the second; a matched clause yields the inertia exponents of the
    simple module it produces.
    """
    validate(params)
    if has_submodule(params):
        return Verdict(False, None, "submodule")
    return clause_verdict(params)


def clause_verdict(params: FamilyParams) -> Verdict:
    """The irreducibility clauses alone, without the submodule shortcut."""
    validate(params)
    p = params.p
    try:
        regions = tuple(sorted(classify_region(params)))
    except ParameterError:
        regions = ()
    lam, lt, L1, L2 = params.lam, params.lamt, params.L1, params.L2
    P = params.ctx(p)
    if params.family == ZERO:
        a = v(L2 + P * lam)
        if a < v(P * (L1 - 1)) and a < v(lam * lt):
            return Verdict(True, "c", "zero-1", 2, inertia_weights(2, p), regions)
        if (v((L2 + P * lam) - lt * (L1 - 1)) > v(P * (L1 - 1))
                and v(L1 - 1) < 1 - v(lam)):
            return Verdict(True, "b", "zero-2", 1, inertia_weights(1, p), regions)
    else:
        b = v(L1 - lt)
        if v(lam) + b < v(P * (1 - L2)) and b < 1:
            return Verdict(True, "c", "one-1", 1, inertia_weights(1, p), regions)
        if (v(P * ((L1 - lt) - lam * (1 - L2))) > v(lam * lt * (1 - L2))
                and v(1 - L2) < v(lam)):
            return Verdict(True, "b", "one-2", 2, inertia_weights(2, p), regions)
    return Verdict(False, _shape_of(regions), "none", regions=regions)


def module_verdict(M: BreuilModule) -> Verdict:
    """Verdict read off a reduced module: simple type or not."""
    rec = recognize_simple(M)
    if rec is None:
        return Verdict(False, None, "not simple")
    i = rec[0]
    return Verdict(True, None, f"simple i={i}", i, inertia_weights(i, M.p))


def exponent_orbit_ok(exps, p: int) -> bool:
    """The exponents form one orbit under multiplication by p modulo p^3 - 1."""
    n = p ** 3 - 1
    k = exps[0]
    orbit = {k % n, k * p % n, k * p * p % n}
    return orbit == {x % n for x in exps}
