"""Walk one point of region H03 through the whole pipeline.

p = 5, e = 2, lambda = pi, lambda_tilde = 5, L1 = 1, L2 = 5.  The point is
classified, the limit Delta is computed with its convergence record, the
lattice is built and checked, and its reduction is compared with the
tabulated Breuil module before the irreducibility verdict is read off.

    python3 demos/running_example.py
"""
from breuil_lattices import breuil, limits, sdm
from breuil_lattices.families import classify_region, make_params, newton_hodge
from breuil_lattices.padic import PadicContext, v

ctx = PadicContext(5, 2, 16)
pi = ctx.pi()
params = make_params("zero", pi, 5, 1, 5, ctx=ctx)

print("parameters:", params.to_json())
print("t_N, t_H =", newton_hodge(params))
(region,) = classify_region(params)
print("region:", region)

kind = limits.KIND_OF[region]
d, cert = limits.delta(kind, params)
print(f"\n{kind}: {cert.steps} steps, Delta known to valuation {cert.achieved_prec}")
for rec in cert.records[:4]:
    print(f"  m={rec.m}: gap {rec.gap} >= bound {rec.bound}")
print("  Delta - 1 has valuation", v(d - 1))
res = limits.representative_residual(kind, params, d)
print("  limit equation residual (Newton step size):", res.normalized)

M = sdm.build(params, region, delta=d)
ver = sdm.verify(M)
print("\nlattice checks:")
for rep in ver.reports:
    print(f"  {rep.title}: {'ok' if rep.ok else 'FAILED'} ({len(rep.checks)} checks)")

bad = sdm.verify(M.scaled(2, pi), cross_check=False)
print("with E3 scaled by pi:", "ok" if bad.ok else "fails, as it should:",
      ", ".join(c.name for r in bad.reports for c in r.failures())[:120])

red = breuil.reduce(ver)
exp = breuil.expected_shape(params, region)
print("\nreduction matches the table:", breuil.shapes_match(red, exp))
verdict = breuil.classify_irreducible(params)
print("verdict:", verdict.to_json())
