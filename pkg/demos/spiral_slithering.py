"""Slithering along a family of leaves spiralling onto the axis of a1.

Consecutive leaves share an endpoint; the composed transporters converge
and the increments decay geometrically.
"""
from cataclysms import BoundaryOracle, fuchsian_octagon, hitchin
from cataclysms.cataclysm import slithering_chain, spiral_prefix
from cataclysms.surface import Word

rho0 = fuchsian_octagon()
oracle = BoundaryOracle(hitchin(rho0, 3))
for ratio in (0.8, 0.6, 0.5):
    leaves = spiral_prefix(rho0, Word.parse("a1"), 24, ratio=ratio)
    _, report = slithering_chain(leaves, oracle)
    inc = report["increments"]
    print(f"ratio {ratio}: first {inc[0]:.3e} last {inc[-1]:.3e} "
          f"slope {report['slope']:.3f} R^2 {report['r_squared']:.5f}")
