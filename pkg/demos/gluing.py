"""The two families agree at v(lambda) = 1/2.

A random zero-family point with L2 != 0 is carried to the one family by
the gluing isomorphism.  The basis map intertwines phi and N, and the
irreducibility clauses give the same answer on both sides.

    python3 demos/gluing.py [seed]
"""
import random
import sys

from breuil_lattices.breuil import clause_verdict
from breuil_lattices.families import (N_matrix, glue_basis_map, glue_inverse, glue_isomorphism,
                                      make_params, phi_matrix)
from breuil_lattices.padic import PadicContext
from breuil_lattices.sampling import random_unit

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
rng = random.Random(seed)
ctx = PadicContext(5, 2, 16)
pi = ctx.pi()


def mul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), ctx.zero()) for j in range(3)] for i in range(3)]


for _ in range(5):
    P = make_params("zero", pi * random_unit(ctx, rng), 5 * random_unit(ctx, rng),
                    random_unit(ctx, rng), random_unit(ctx, rng) * pi ** rng.randrange(4), ctx=ctx)
    Q = glue_isomorphism(P)
    T = glue_basis_map(P)
    comm = all((x - y).is_zero() for A, B in ((phi_matrix(P), phi_matrix(Q)), (N_matrix(P), N_matrix(Q)))
               for r1, r2 in zip(mul(T, A), mul(B, T)) for x, y in zip(r1, r2))
    back = glue_inverse(Q)
    a, b = clause_verdict(P), clause_verdict(Q)
    print(f"L1={P.L1}  L2={P.L2}")
    print(f"  intertwines phi and N: {comm}; round trip: {back.L1 == P.L1 and back.L2 == P.L2}")
    print(f"  zero side: {a.clause} (i={a.i});  one side: {b.clause} (i={b.i})")
