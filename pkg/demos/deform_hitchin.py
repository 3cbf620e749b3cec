"""Deform the SL(3) Hitchin representation along a pants decomposition.

Prints how far each generator moves, the relator residual before and after,
and recovers the cycle values from the shearing maps.
"""
import numpy as np

from cataclysms import (
    BoundaryOracle,
    cataclysm,
    fuchsian_octagon,
    hitchin,
    random_cycle,
    standard_multicurve,
)
from cataclysms.cataclysm import busemann_recover
from cataclysms.cycles import evaluate_arc

rng = np.random.default_rng(1)
rho0 = fuchsian_octagon()
rep = hitchin(rho0, 3)
lam = standard_multicurve(rho0, "pants")
eps = random_cycle(rng, lam.curve_ids(), rep.theta, scale=0.2)

print("curves:", lam.curve_ids())
for cid, h in eps.weights.items():
    print(f"  weight[{cid}] = {np.round(h.array(), 4)}")

res = cataclysm(rep, lam, eps)
print("relator residual before: %.2e  after: %.2e" % (rep.relator_residual, res.deformed.relator_residual))
for name, a, b, chain in zip(rep.presentation.generator_names, rep.images, res.deformed.images, res.chains):
    print(f"  {name}: {len(chain)} crossings, max entry change {np.abs(a - b).max():.4f}")

oracle = BoundaryOracle(rep)
print("recovered eps(P, gamma P) from the shearing maps:")
for name, chain, sm in zip(rep.presentation.generator_names, res.chains, res.shearing):
    got = busemann_recover(chain, sm.partials, oracle)
    want = evaluate_arc(eps, chain)
    print(f"  {name}: {np.round(got.array(), 6)}  error {np.abs(got.array() - want.array()).max():.1e}")
