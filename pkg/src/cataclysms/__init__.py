"""Cataclysm deformations of surface group representations into SL(n, R)."""
from .anosov import (
    BoundaryOracle,
    Representation,
    divergence_report,
    exterior_square,
    from_fuchsian,
    hitchin,
    horocyclic,
)
from .cataclysm import (
    ShearingEngine,
    busemann_recover,
    cataclysm,
    deformed_flag,
    shearing_map,
    slithering_adjacent,
    slithering_chain,
    stretching_map,
)
from .cycles import TwistedCycle, dim_maximal, dim_multicurve, dim_twisted, evaluate_arc, random_cycle
from .flags import Flag, adapted_frame, attracting_flag
from .lamination import Curve, Leaf, MultiCurve, SeparationChain, standard_multicurve
from .liealg import CartanVector, RootSubset
from .surface import FuchsianRep, SurfaceGroupPresentation, Word, fuchsian_octagon

__all__ = [
    "BoundaryOracle", "CartanVector", "Curve", "Flag", "FuchsianRep", "Leaf", "MultiCurve",
    "Representation", "RootSubset", "SeparationChain", "ShearingEngine", "SurfaceGroupPresentation",
    "TwistedCycle", "Word", "adapted_frame", "attracting_flag", "busemann_recover", "cataclysm",
    "deformed_flag", "dim_maximal", "dim_multicurve", "dim_twisted", "divergence_report",
    "evaluate_arc", "exterior_square", "random_cycle", "from_fuchsian", "fuchsian_octagon", "hitchin", "horocyclic",
    "shearing_map", "slithering_adjacent", "slithering_chain", "standard_multicurve", "stretching_map",
]
