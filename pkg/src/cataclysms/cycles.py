"""Twisted transverse cycles on finite laminations with values in a_theta."""
from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from .lamination import MultiCurve, Region, SeparationChain, divergence_radius_proxy
from .liealg import (
    CartanVector,
    RootSubset,
    a_theta_basis,
    a_theta_coordinates,
    in_a_theta,
    opposition_involution,
    theta_prime,
)


class CycleError(ValueError):
    pass


class TwistedCycle:
    """Per-curve weights for the chosen orientation; the other orientation carries iota(weight)."""

    def __init__(self, weights: Mapping[str, CartanVector], theta: RootSubset):
        if not theta.is_iota_invariant():
            raise CycleError("theta must be invariant under the opposition involution")
        self.theta = theta
        self.weights = {}
        for cid, h in weights.items():
            h = h if isinstance(h, CartanVector) else CartanVector(h)
            if h.n != theta.n:
                raise CycleError(f"weight of {cid} has wrong dimension")
            if not in_a_theta(h, theta):
                raise CycleError(f"weight of {cid} is not in a_theta")
            self.weights[str(cid)] = h
        self._norm: Optional[float] = None

    @classmethod
    def zero(cls, curve_ids, theta: RootSubset) -> "TwistedCycle":
        return cls({c: CartanVector.zero(theta.n) for c in curve_ids}, theta)

    @property
    def n(self) -> int:
        return self.theta.n

    def weight(self, cid: str, orientation: int = 1) -> CartanVector:
        try:
            h = self.weights[cid]
        except KeyError:
            raise CycleError(f"no weight for curve {cid!r}") from None
        return h if orientation > 0 else opposition_involution(h)

    def crossing_value(self, cid: str, sign: int) -> CartanVector:
        return self.weight(cid, sign)

    def is_zero(self) -> bool:
        return all(h.is_zero() for h in self.weights.values())

    def __add__(self, other: "TwistedCycle") -> "TwistedCycle":
        self._compatible(other)
        keys = set(self.weights) | set(other.weights)
        z = CartanVector.zero(self.n)
        return TwistedCycle({k: self.weights.get(k, z) + other.weights.get(k, z) for k in keys}, self.theta)

    def __mul__(self, t: float) -> "TwistedCycle":
        return TwistedCycle({k: h * t for k, h in self.weights.items()}, self.theta)

    __rmul__ = __mul__

    def __neg__(self) -> "TwistedCycle":
        return self * -1.0

    def _compatible(self, other: "TwistedCycle") -> None:
        if other.theta != self.theta:
            raise CycleError("cycles have different theta")

    def to_json(self) -> dict:
        return {
            "theta": self.theta.dims,
            "n": self.n,
            "weights": {k: list(h.entries) for k, h in sorted(self.weights.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "TwistedCycle":
        weights = {k: CartanVector(v) for k, v in data["weights"].items()}
        n = int(data.get("n") or len(next(iter(data["weights"].values()))))
        return cls(weights, RootSubset(n, data["theta"]))


def evaluate_arc(eps: TwistedCycle, chain: SeparationChain) -> CartanVector:
    """Sum of crossing values along the chain."""
    total = CartanVector.zero(eps.n)
    for c in chain.crossings:
        total = total + eps.crossing_value(c.leaf.curve, c.sign)
    return total


def partial_values(eps: TwistedCycle, chain: SeparationChain) -> list:
    """eps(P, R_i) for every region R_0 = P, ..., R_N = Q of the chain."""
    out = [CartanVector.zero(eps.n)]
    for c in chain.crossings:
        out.append(out[-1] + eps.crossing_value(c.leaf.curve, c.sign))
    return out


def evaluate_pair(eps: TwistedCycle, p: Region, q: Region, lam: MultiCurve) -> CartanVector:
    """eps(P, Q) through the geodesic arc between the sample points."""
    return evaluate_arc(eps, lam.lift_crossings(p.sample, q.sample))


def dim_twisted(chi: int, n_components: int, n_orientable: int, theta: RootSubset) -> int:
    """|theta| (-chi + n_o) + |theta'| (n - n_o)."""
    if n_orientable > n_components or chi > 0:
        raise CycleError("need n_o <= n and chi <= 0")
    return len(theta) * (-chi + n_orientable) + len(theta_prime(theta)) * (n_components - n_orientable)


def dim_maximal(genus: int, theta: RootSubset) -> int:
    """Dimension for a maximal lamination: connected, non-orientable, with -chi = 6g - 6."""
    return dim_twisted(-(6 * genus - 6), 1, 0, theta)


def dim_multicurve(m: int, theta: RootSubset) -> int:
    return dim_twisted(0, m, m, theta)


def a_norm_theta(h: CartanVector, theta: RootSubset) -> float:
    """Max norm in the coweight basis of a_theta."""
    coords = a_theta_coordinates(h, theta)
    return float(np.abs(coords).max()) if len(coords) else 0.0


def norm(eps: TwistedCycle) -> float:
    """Max over curves and both orientations of the a_theta norm of the weight."""
    best = 0.0
    for h in eps.weights.values():
        best = max(best, a_norm_theta(h, eps.theta), a_norm_theta(opposition_involution(h), eps.theta))
    return best


def random_cycle(rng, curve_ids, theta: RootSubset, scale: float = 0.1) -> TwistedCycle:
    """Weights with iid normal coordinates in the coweight basis of a_theta."""
    basis = a_theta_basis(theta)
    weights = {}
    for cid in curve_ids:
        coeffs = rng.normal(scale=scale, size=len(basis))
        h = sum((b * c for b, c in zip(basis, coeffs)), CartanVector.zero(theta.n))
        weights[cid] = CartanVector(h.array())
    return TwistedCycle(weights, theta)


def growth_report(eps: TwistedCycle, chain: SeparationChain) -> dict:
    """Observed |eps(P, R)| against r(R) + 1 along a chain (diagnostic only)."""
    vals = partial_values(eps, chain)
    radii = divergence_radius_proxy(chain)
    ratios = [a_norm_theta(v, eps.theta) / (r + 1) for v, r in zip(vals, radii)]
    return {"radii": radii, "ratio_max": max(ratios) if ratios else 0.0}

