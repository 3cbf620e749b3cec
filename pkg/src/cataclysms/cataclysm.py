"""Stretching, slithering and shearing maps, and the cataclysm deformation."""
from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .anosov import (
    BoundaryOracle,
    Representation,
    from_fuchsian,
    horocyclic,
    horocyclic_a_prime,
    iota_nk,
    wedge_weights,
)
from .cycles import TwistedCycle, evaluate_arc, partial_values
from .flags import (
    Flag,
    adapted_frame,
    stabilizer_dimension,
    unipotent_transporter,
)
from .hypgeom import BoundaryPoint, GeodesicLine, axis, moebius
from .lamination import Leaf, MultiCurve, Region, SeparationChain
from .liealg import (
    CartanVector,
    RootSubset,
    a_theta_basis,
    a_theta_projection,
    busemann,
    cartan_projection,
    in_a_theta,
)
from .surface import FuchsianRep, Word, evaluate

DEFORM_RELATOR_TOL = 1e-7


class CataclysmError(ValueError):
    pass


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CATACLYSM_THREADS", "1")))
    except ValueError:
        return 1


def d_G(a, b) -> float:
    """Diagnostic left-invariant distance |mu(a^{-1} b)|."""
    x = np.linalg.solve(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return float(np.linalg.norm(cartan_projection(x).array()))


@dataclass
class StretchContext:
    leaf: Leaf
    fp: Flag
    fm: Flag
    m: np.ndarray
    minv: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.minv is None:
            self.minv = np.linalg.inv(self.m)

    @property
    def theta(self) -> RootSubset:
        return self.fp.theta


def stretch_context(oracle: BoundaryOracle, leaf: Leaf) -> StretchContext:
    fp, fm = oracle.leaf_flags(leaf)
    return StretchContext(leaf, fp, fm, adapted_frame(fp, fm))


def stretching_map(ctx: StretchContext, H: CartanVector) -> np.ndarray:
    """m exp(H) m^{-1} for H in a_theta."""
    if not in_a_theta(H, ctx.theta, tol=1e-10):
        raise CataclysmError("stretch parameter is not in a_theta")
    if H.is_zero():
        return np.eye(H.n)
    return (ctx.m * np.exp(H.array())[None, :]) @ ctx.minv


@dataclass
class ShearingMap:
    P: Region
    Q: Region
    value: np.ndarray
    truncation: object = "exact"
    residual: float = 0.0
    partials: list = field(default_factory=list, repr=False)
    psi_distance: float = 0.0

    def to_json(self) -> dict:
        return {
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "value": self.value.tolist(),
            "truncation": self.truncation,
            "residual": self.residual,
            "psi_distance": self.psi_distance,
            "partials": [p.tolist() for p in self.partials],
        }


class ShearingEngine:
    """Shearing maps of a representation along chains of a finite lamination."""

    def __init__(self, rep: Representation, eps: TwistedCycle, oracle: Optional[BoundaryOracle] = None):
        if eps.theta.n != rep.n:
            raise CataclysmError("cycle and representation dimensions differ")
        self.rep = rep
        self.eps = eps
        self.oracle = oracle or BoundaryOracle(rep, eps.theta)
        if self.oracle.theta != eps.theta:
            raise CataclysmError("oracle flag type differs from the cycle's theta")
        self._ctx: dict = {}
        self._lock = threading.Lock()

    def context(self, leaf: Leaf) -> StretchContext:
        key = _leaf_key(leaf)
        with self._lock:
            hit = self._ctx.get(key)
        if hit is None:
            hit = stretch_context(self.oracle, leaf)
            with self._lock:
                hit = self._ctx.setdefault(key, hit)
        return hit

    def stretch(self, leaf: Leaf, H: CartanVector) -> np.ndarray:
        return stretching_map(self.context(leaf), H)

    def shearing(self, chain: SeparationChain, eps: Optional[TwistedCycle] = None) -> ShearingMap:
        """phi_{PQ} over the chain, with phi_{P R_j} for every region R_j.

        Adjacent factors along the same leaf are merged first
        (T^{-E_{i-1}} T^{E_i} = T^{E_i - E_{i-1}}), which is exact and avoids
        cancellation between large stretches.
        """
        eps = eps or self.eps
        vals = partial_values(eps, chain)
        leaves = chain.positive_leaves()
        n = self.rep.n
        partials = [np.eye(n)]
        for c, leaf in zip(chain.crossings, leaves):
            step = self.stretch(leaf, eps.crossing_value(c.leaf.curve, c.sign))
            partials.append(partials[-1] @ step)
        value = partials[-1]
        psi = value @ self.stretch(leaves[-1], -vals[-1]) if leaves else np.eye(n)
        regs = chain.regions
        return ShearingMap(regs[0], regs[-1], value, "exact", 0.0, partials, d_G(np.eye(n), psi))

    def product_formula(self, chain: SeparationChain, eps: Optional[TwistedCycle] = None) -> np.ndarray:
        """Unmerged product (T_1^{E_1} T_2^{-E_1}) ... (T_{N-1}^{E_{N-1}} T_N^{-E_{N-1}}) T_N^{E_N}."""
        eps = eps or self.eps
        vals = partial_values(eps, chain)
        leaves = chain.positive_leaves()
        out = np.eye(self.rep.n)
        for j in range(1, len(leaves)):
            out = out @ self.stretch(leaves[j - 1], vals[j]) @ self.stretch(leaves[j], -vals[j])
        if leaves:
            out = out @ self.stretch(leaves[-1], vals[-1])
        return out


def _leaf_key(leaf: Leaf) -> tuple:
    ln = leaf.line
    return (leaf.curve, round(ln.neg.u, 10), round(ln.neg.v, 10), round(ln.pos.u, 10), round(ln.pos.v, 10))


def shearing_map(rep: Representation, lam: MultiCurve, eps: TwistedCycle, p, q,
                 oracle: Optional[BoundaryOracle] = None) -> ShearingMap:
    """phi_{PQ} for the regions containing the plane points p and q."""
    chain = lam.lift_crossings(p, q)
    return ShearingEngine(rep, eps, oracle).shearing(chain)


@dataclass
class DeformationResult:
    deformed: Representation
    base: Representation
    base_region: Region
    cycle: TwistedCycle
    shearing: list
    chains: list
    diagnostics: dict

    def to_json(self) -> dict:
        out = self.deformed.to_json()
        out["base_point"] = self.base_region.sample.to_json()
        out["cycle"] = self.cycle.to_json()
        out["diagnostics"] = self.diagnostics
        return out


def cataclysm(rep: Representation, lam: MultiCurve, eps: TwistedCycle, base_point=None,
              oracle: Optional[BoundaryOracle] = None, relator_tol: float = DEFORM_RELATOR_TOL,
              threads: Optional[int] = None) -> DeformationResult:
    """Deformed generator images phi_{P, gamma P} rho(gamma)."""
    p0 = base_point or lam.base_point
    engine = ShearingEngine(rep, eps, oracle)
    gens = rep.presentation.generators()

    def one(g: Word):
        chain = lam.region_between(g, p0)
        sm = engine.shearing(chain)
        return chain, sm, sm.value @ evaluate(rep, g)

    workers = threads or thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, gens))
    else:
        results = [one(g) for g in gens]
    chains = [r[0] for r in results]
    shears = [r[1] for r in results]
    images = [r[2] for r in results]
    prov = {"kind": "deformed", "from": rep.provenance}
    try:
        deformed = Representation(images, rep.genus, prov, rep.theta, relator_tol=relator_tol)
    except ValueError as exc:
        raise CataclysmError(f"deformed relator check failed: {exc}") from exc
    diag = {
        "relator_residual": deformed.relator_residual,
        "relator_tol": deformed.relator_tol,
        "chain_lengths": [len(c) for c in chains],
        "max_psi_distance": max((s.psi_distance for s in shears), default=0.0),
    }
    return DeformationResult(deformed, rep, Region(p0), eps, shears, chains, diag)


def deformed_flag(result: DeformationResult, chain: SeparationChain, index: int, end: int = 1,
                  oracle: Optional[BoundaryOracle] = None) -> Flag:
    """phi_{P Q_x} zeta(x) for x an endpoint of the index-th leaf crossed by a chain from P.

    ``end`` is +1 / -1 for the positive / negative endpoint of the leaf as
    oriented by the crossing.  Q_x is the region entered across the leaf.
    """
    if chain.arc[0] != result.base_region.sample:
        raise CataclysmError("chain must start at the base point")
    engine = ShearingEngine(result.base, result.cycle, oracle)
    sm = engine.shearing(chain)
    leaf = chain.positive_leaves()[index]
    fp, fm = engine.oracle.leaf_flags(leaf)
    return (fp if end > 0 else fm).act(sm.partials[index + 1])


def reference_flag_change(result: DeformationResult, chain: SeparationChain, index: int, end: int = 1) -> float:
    """Distance between the images of zeta(x) under phi_{P R} for the two regions R adjacent to the leaf."""
    engine = ShearingEngine(result.base, result.cycle)
    sm = engine.shearing(chain)
    leaf = chain.positive_leaves()[index]
    f = engine.oracle.leaf_flags(leaf)[0 if end > 0 else 1]
    return f.act(sm.partials[index]).distance(f.act(sm.partials[index + 1]))


# ---------------------------------------------------------------- slithering


def _shares(a, b, tol=1e-9) -> bool:
    return a.close(b, tol)


def slithering_adjacent(g: Leaf, h: Leaf, oracle: BoundaryOracle) -> np.ndarray:
    """Transporter for two leaves sharing an endpoint (a wedge).

    With a common positive endpoint this is the unipotent element of the
    stabiliser of zeta(g+) sending zeta(h-) to zeta(g-).  A common negative
    endpoint is handled by reversing both leaves.
    """
    if g.same(h) and g.line.same_oriented(h.line):
        return np.eye(oracle.rep.n)
    if not _shares(g.line.pos, h.line.pos):
        if _shares(g.line.neg, h.line.neg):
            g, h = g.reversed(), h.reversed()
        else:
            raise CataclysmError("leaves do not share an endpoint with matching orientation")
    gp, gm = oracle.leaf_flags(g)
    _, hm = oracle.leaf_flags(h)
    return unipotent_transporter(gp, hm, gm)


def slithering_chain(leaves: Sequence[Leaf], oracle: BoundaryOracle) -> tuple:
    """Compose adjacent transporters along leaves l_0, l_1, ..., l_m (consecutive ones form wedges).

    Returns (Sigma_{l_0 l_m}, report) where the report holds the increments
    d_G(Sigma_{l_0 l_j}, Sigma_{l_0 l_{j+1}}) and a log-linear decay fit.
    """
    n = oracle.rep.n
    acc = np.eye(n)
    partial = [acc]
    for a, b in zip(leaves, leaves[1:]):
        acc = acc @ slithering_adjacent(a, b, oracle)
        partial.append(acc)
    incs = [d_G(x, y) for x, y in zip(partial, partial[1:])]
    return acc, {"increments": incs, **decay_fit(incs)}


def decay_fit(increments: Sequence[float]) -> dict:
    """Fit log(increment) = a + b j; report slope b, R^2 and monotonicity."""
    inc = np.asarray(increments, dtype=float)
    out = {"monotone": bool(np.all(np.diff(inc) < 0)) if len(inc) > 1 else True}
    pos = inc > 0
    if pos.sum() < 3:
        out.update(slope=float("nan"), r_squared=float("nan"))
        return out
    j = np.arange(len(inc))[pos]
    fit = stats.linregress(j, np.log(inc[pos]))
    out.update(slope=float(fit.slope), r_squared=float(fit.rvalue ** 2))
    return out


def spiral_prefix(rho0: FuchsianRep, base: Word, count: int, ratio: float = 0.5, start: float = 1.0,
                  curve: str = "spiral") -> list:
    """Leaves sharing the attracting endpoint of ``base`` whose other endpoints approach its repelling one.

    In coordinates where the axis of ``base`` runs from 0 to ∞, leaf j is the
    vertical geodesic from ``start * ratio**j`` to ∞, pulled back to the
    upper half plane; it is returned oriented towards the shared endpoint.
    """
    ax = axis(evaluate(rho0, base))
    b = np.column_stack([ax.pos.vector, ax.neg.vector])
    if np.linalg.det(b) < 0:
        b[:, 1] = -b[:, 1]
    b = b / np.sqrt(np.linalg.det(b))
    inf = BoundaryPoint.infinity()
    out = []
    for j in range(count):
        line = GeodesicLine(BoundaryPoint.from_real(start * ratio ** j), inf)
        out.append(Leaf(curve, moebius(b, line)))
    return out


def truncated_shearing(leaves: Sequence[Leaf], deltas: Sequence[CartanVector], oracle: BoundaryOracle) -> dict:
    """Shearing products over the first m supplied leaves for every m.

    ``leaves`` are oriented positively for the transverse arc and ``deltas``
    are the crossing values.  Reports the increments of
    psi_m = phi_m T_{l_m}^{-eps_m} between successive truncations.
    """
    n = oracle.rep.n
    ctxs = [stretch_context(oracle, l) for l in leaves]
    eps = [CartanVector.zero(n)]
    for d in deltas:
        eps.append(eps[-1] + d)
    acc = np.eye(n)
    psis, phis = [np.eye(n)], []
    for j in range(1, len(leaves) + 1):
        phis.append(acc @ stretching_map(ctxs[j - 1], eps[j]))
        if j < len(leaves):
            acc = acc @ stretching_map(ctxs[j - 1], eps[j]) @ stretching_map(ctxs[j], -eps[j])
            psis.append(acc)
    incs = [d_G(x, y) for x, y in zip(psis, psis[1:])]
    return {"value": phis[-1], "phis": phis, "increments": incs, **decay_fit(incs)}


# ---------------------------------------------------------------- recovery


def busemann_recover(chain: SeparationChain, partials: Sequence[np.ndarray], oracle: BoundaryOracle,
                     theta: Optional[RootSubset] = None) -> CartanVector:
    """delta = sum over interior R of sigma(phi_R, zeta(g_R^0 +)) - sigma(phi_R, zeta(g_R^1 +)), plus sigma(phi_Q, zeta(g_Q^0 +)).

    ``partials[j]`` is phi_{P R_j} for the regions R_0 = P, ..., R_N = Q.
    """
    theta = theta or oracle.theta
    leaves = chain.positive_leaves()
    N = len(leaves)
    if len(partials) != N + 1:
        raise CataclysmError("need a shearing map for every region of the chain")
    if N == 0:
        return CartanVector.zero(theta.n)
    plus = [oracle.leaf_flags(l)[0] for l in leaves]
    total = CartanVector.zero(theta.n)
    for i in range(1, N):
        total = total + busemann(partials[i], plus[i - 1], theta) - busemann(partials[i], plus[i], theta)
    return total + busemann(partials[N], plus[N - 1], theta)


# ---------------------------------------------------------------- horocyclic


def _is_a_prime(h: CartanVector, n: int, k: int, tol: float = 1e-12) -> bool:
    gen = horocyclic_a_prime(n, k)
    a = h.entries[0]
    return np.allclose(h.array(), a * gen, rtol=0, atol=tol * max(1.0, abs(a)))


def h_trivial_check(rep: Representation, lam: MultiCurve, eps: TwistedCycle, base_point=None) -> dict:
    """Triviality criterion for a'-valued cycles on horocyclic representations.

    Returns ``trivial`` (all eps(P, gamma P) vanish on generators), the values,
    a witness generator otherwise, and the observed deviation of the
    cataclysm from ``rep``.
    """
    prov = rep.provenance
    if prov.get("kind") != "horocyclic":
        raise CataclysmError("representation is not horocyclic")
    n, k = prov["n"], prov["k"]
    for cid, h in eps.weights.items():
        if not _is_a_prime(h, n, k):
            raise CataclysmError(f"weight of {cid} is not in a'")
    p0 = base_point or lam.base_point
    names = rep.presentation.generator_names
    values = {}
    witness = None
    for name, g in zip(names, rep.presentation.generators()):
        v = evaluate_arc(eps, lam.region_between(g, p0))
        values[name] = list(v.entries)
        if witness is None and np.abs(v.array()).max() > 1e-12:
            witness = name
    res = cataclysm(rep, lam, eps, p0)
    return {
        "trivial": witness is None,
        "witness": witness,
        "values": values,
        "deviation": res.deformed.max_deviation(rep),
    }


def push_cycle_iota(eps2: TwistedCycle, n: int, k: int) -> TwistedCycle:
    """Push an SL(2) cycle through the block embedding: (h, -h) -> (h 1_k, 0, -h 1_k)."""
    theta = RootSubset(n, {k, n - k})
    weights = {}
    for cid, h in eps2.weights.items():
        v = np.zeros(n)
        v[:k] = h.entries[0]
        v[n - k :] = h.entries[1]
        weights[cid] = CartanVector(v)
    return TwistedCycle(weights, theta)


def compose_check(rho0: FuchsianRep, lam: MultiCurve, eps2: TwistedCycle, n: int, k: int) -> dict:
    """Compare the cataclysm of iota o rho0 along iota_* eps with iota of the SL(2) cataclysm."""
    base2 = from_fuchsian(rho0)
    big = horocyclic(rho0, n, k)
    left = cataclysm(big, lam, push_cycle_iota(eps2, n, k)).deformed
    small = cataclysm(base2, lam, eps2).deformed
    right = [iota_nk(m, n, k) for m in small.images]
    dev = max(float(np.abs(a - b).max()) for a, b in zip(left.images, right))
    return {"max_deviation": dev, "left": left, "right": right}


def exterior_witness(n: int = 5, theta_dims=(2, 3), theta_prime_dims=(1, 9)) -> dict:
    """An H in a_theta of SL(n) whose wedge-square image leaves a_{theta'} of SL(n(n-1)/2).

    Maps a basis of a_theta through the induced map on diagonals and keeps
    the basis vector whose image is farthest (max norm) from its projection.
    """
    theta = RootSubset(n, theta_dims)
    big = n * (n - 1) // 2
    thp = RootSubset(big, theta_prime_dims)
    best = None
    for h in a_theta_basis(theta):
        img = CartanVector(wedge_weights(h.entries), check=False)
        resid = float(np.abs(img.array() - a_theta_projection(img, thp).array()).max())
        if best is None or resid > best[2]:
            best = (h, img, resid)
    h, img, resid = best
    return {"H": list(h.entries), "image": list(img.entries), "residual": resid}


# ---------------------------------------------------------------- injectivity


def injectivity_sample(rep: Representation, lam: MultiCurve, eps1: TwistedCycle, eps2: TwistedCycle) -> float:
    """Max entrywise difference of the generator images of the two deformations."""
    a = cataclysm(rep, lam, eps1).deformed
    b = cataclysm(rep, lam, eps2).deformed
    return a.max_deviation(b)


def joint_stabilizer_dimension(oracle: BoundaryOracle, words: Sequence[Word]) -> int:
    """Dimension of the joint stabiliser of the flags at the attracting points of ``words``."""
    return stabilizer_dimension([oracle.flag_at(w) for w in words])


def horocyclic_weight(n: int, k: int, a: float) -> CartanVector:
    return CartanVector(horocyclic_a_prime(n, k, a))
