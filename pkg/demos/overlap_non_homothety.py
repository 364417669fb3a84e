"""Two different lattices at a point lying in both H02 and H03.

At lambda = pi (e = 4), lambda_tilde = pi^6, L1 = 2 and
L2 = p(2 - lambda) the two region predicates hold at once.  Both
constructions give strongly divisible lattices; the basis-change matrix
between them shows they are not scalar multiples of each other.

    python3 demos/overlap_non_homothety.py
"""
from breuil_lattices import sdm
from breuil_lattices.families import classify_region
from breuil_lattices.padic import PadicContext
from breuil_lattices.sampling import overlap_point

ctx = PadicContext(5, 4, 24)
params = overlap_point(ctx)
print("regions:", sorted(classify_region(params)))

M2 = sdm.build(params, "H02")
M3 = sdm.build(params, "H03")
for M in (M2, M3):
    print(f"{M.region}: verified = {sdm.verify(M).ok}, Delta = {M.delta}")

h = sdm.non_homothety(M2, M3)
print("\nnorm(B) =", h["norm"], " norm(B^-1) =", h["norm_inverse"])
print("homothetic:", h["homothetic"])
print("control, M2 against 5 M2:", sdm.non_homothety(M2, M2.scaled(0, 5).scaled(1, 5).scaled(2, 5))["homothetic"])
