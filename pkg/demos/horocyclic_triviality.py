"""Cycles valued in the centraliser line of a (3,1)-horocyclic representation.

A separating curve has zero algebraic intersection with every generator loop,
so the deformation is trivial; a non-separating one is not.
"""
import numpy as np

from cataclysms import TwistedCycle, fuchsian_octagon, horocyclic, standard_multicurve
from cataclysms.cataclysm import h_trivial_check, horocyclic_weight

rho0 = fuchsian_octagon()
rep = horocyclic(rho0, 3, 1)
w = horocyclic_weight(3, 1, 0.25)
print("weight:", w.array())

for name, cid in (("separating", "c"), ("nonseparating", "a1")):
    lam = standard_multicurve(rho0, name)
    out = h_trivial_check(rep, lam, TwistedCycle({cid: w}, rep.theta))
    print(f"{name}: trivial={out['trivial']} witness={out['witness']} deviation={out['deviation']:.3e}")
    for g, v in out["values"].items():
        print(f"    eps(P, {g} P) = {np.round(v, 4)}")
