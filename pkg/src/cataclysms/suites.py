"""Randomised verification suites for the deformation engine.

Each suite returns a report ``{"suite", "seed", "checks": [...], "passed"}``
where every check records the worst observed error and its tolerance.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .anosov import (
    BoundaryOracle,
    divergence_report,
    from_fuchsian,
    hitchin,
    horocyclic,
)
from .cataclysm import (
    ShearingEngine,
    StretchContext,
    busemann_recover,
    cataclysm,
    compose_check,
    deformed_flag,
    exterior_witness,
    h_trivial_check,
    horocyclic_weight,
    injectivity_sample,
    joint_stabilizer_dimension,
    slithering_adjacent,
    slithering_chain,
    spiral_prefix,
    stretching_map,
)
from .cycles import TwistedCycle, dim_maximal, dim_multicurve, evaluate_arc, random_cycle
from .flags import adapted_frame
from .hypgeom import PlanePoint, axis, moebius
from .lamination import Leaf, MultiCurve, standard_multicurve
from .liealg import CartanVector, RootSubset, a_theta_basis, opposition_involution
from .surface import Word, evaluate, fuchsian_octagon

DEFAULT_TOLERANCES = {
    "lemma32": 1e-9,
    "prop53": 1e-8,
    "thm56": 1e-7,
    "thm58": 1e-7,
    "additivity": 1e-7,
    "factorization": 1e-8,
    "compose": 1e-8,
    "exterior": 1e-3,
    "htrivial_equal": 1e-9,
    "htrivial_differ": 1e-3,
    "busemann": 1e-8,
    "slithering": 1e-9,
    "decay_r2": 0.9,
    "injectivity": 1e-6,
}


class Report:
    def __init__(self, suite: str, seed: int, tolerances: dict):
        self.suite = suite
        self.seed = seed
        self.tolerances = tolerances
        self.checks: list = []
        self._t0 = time.perf_counter()

    def check(self, name: str, value: float, tol: float, mode: str = "le", count: int = 1) -> None:
        ok = value <= tol if mode == "le" else value >= tol
        self.checks.append({"name": name, "value": float(value), "tol": tol, "mode": mode,
                            "count": count, "passed": bool(ok)})

    def flag(self, name: str, ok: bool, detail=None) -> None:
        self.checks.append({"name": name, "value": detail, "tol": None, "mode": "bool",
                            "count": 1, "passed": bool(ok)})

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def first_failure(self):
        return next((c for c in self.checks if not c["passed"]), None)

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "tolerances": self.tolerances,
               "checks": self.checks, "passed": self.passed}
        if timing:
            out["seconds"] = time.perf_counter() - self._t0
        return out


def _tol(tols, key):
    return (tols or {}).get(key, DEFAULT_TOLERANCES[key])


def random_word(rng, rank: int, lo: int, hi: int) -> Word:
    while True:
        ln = int(rng.integers(lo, hi + 1))
        w = Word(int(rng.choice([-1, 1])) * int(rng.integers(1, rank + 1)) for _ in range(ln))
        if len(w) >= lo:
            return w


def random_hyperbolic_word(rng, rank: int, lo: int = 1, hi: int = 4) -> Word:
    while True:
        w = random_word(rng, rank, lo, hi)
        if w.is_cyclically_reduced() and not w.is_identity():
            return w


def random_a_theta(rng, theta: RootSubset, scale: float = 0.5) -> CartanVector:
    basis = a_theta_basis(theta)
    h = sum((b * float(c) for b, c in zip(basis, rng.normal(scale=scale, size=len(basis)))),
            CartanVector.zero(theta.n))
    return CartanVector(h.array())


def random_point(rng, lam: MultiCurve, radius: float = 2.5, min_dist: float = 1e-3) -> PlanePoint:
    """Uniform point in the hyperbolic disc of the given radius about i, off the lamination."""
    while True:
        # area measure of a hyperbolic disc: density proportional to sinh(r)
        r = math.acosh(1.0 + rng.random() * (math.cosh(radius) - 1.0))
        phi = rng.uniform(0, 2 * math.pi)
        w = math.tanh(r / 2) * complex(math.cos(phi), math.sin(phi))
        z = (1j * (1 + w)) / (1 - w)
        p = PlanePoint(z.real, z.imag)
        if lam.distance_to_lamination(p) > min_dist:
            return p


def _rep(name: str, rho0):
    if name == "fuchsian":
        return from_fuchsian(rho0)
    if name.startswith("hitchin"):
        return hitchin(rho0, int(name[len("hitchin"):] or 3))
    if name.startswith("horocyclic"):
        n, k = name[len("horocyclic"):].split(",") if "," in name else ("3", "1")
        return horocyclic(rho0, int(n), int(k))
    raise ValueError(f"unknown representation {name!r}")


# ---------------------------------------------------------------------------


def suite_lemma32(seed: int = 0, samples: int = 100, rep_name: str = "hitchin3", tolerances=None) -> Report:
    """Stretching-map identities on random (leaf, H) samples."""
    tol = _tol(tolerances, "lemma32")
    rep_ = Report("lemma32", seed, {"lemma32": tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = _rep(rep_name, rho0)
    oracle = BoundaryOracle(rep)
    theta = rep.theta
    rank = rho0.presentation.rank
    errs = {"additive": 0.0, "inverse": 0.0, "reversed": 0.0, "equivariant": 0.0}
    for _ in range(samples):
        w = random_hyperbolic_word(rng, rank, 1, 3)
        leaf = Leaf("w", axis(evaluate(rho0, w)), Word(), w)
        ctx = _ctx_direct(oracle, leaf)
        h1, h2 = random_a_theta(rng, theta), random_a_theta(rng, theta)
        t1, t2 = stretching_map(ctx, h1), stretching_map(ctx, h2)
        errs["additive"] = max(errs["additive"], _err(t1 @ t2, stretching_map(ctx, h1 + h2)))
        errs["inverse"] = max(errs["inverse"], _err(np.linalg.inv(t1), stretching_map(ctx, -h1)))
        rev = leaf.reversed()
        ctx_rev = _ctx_direct(oracle, rev)
        errs["reversed"] = max(errs["reversed"],
                               _err(stretching_map(ctx_rev, h1), stretching_map(ctx, -opposition_involution(h1))))
        g = random_word(rng, rank, 1, 1)
        moved = leaf.translate(rho0, g)
        ctx_g = _ctx_direct(oracle, moved)
        rg = evaluate(rep, g)
        errs["equivariant"] = max(errs["equivariant"],
                                  _err(stretching_map(ctx_g, h1), rg @ t1 @ np.linalg.inv(rg)))
    for k, v in errs.items():
        rep_.check(k, v, tol, count=samples)
    return rep_


def _ctx_direct(oracle: BoundaryOracle, leaf: Leaf) -> StretchContext:
    """Stretch context from the explicit boundary map at the leaf's endpoints (no word data)."""
    fp = oracle.flag_at_point(leaf.line.pos)
    fm = oracle.flag_at_point(leaf.line.neg)
    return StretchContext(leaf, fp, fm, adapted_frame(fp, fm))


def _err(a, b) -> float:
    """Max-entry difference, relative to the larger entry when that exceeds 1."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    return float(np.abs(a - b).max()) / scale


def suite_prop53(seed: int = 0, pairs: int = 50, rep_name: str = "hitchin3", lam_name: str = "pants",
                 tolerances=None) -> Report:
    """Inverse, composition and equivariance of shearing maps on random region pairs."""
    tol = _tol(tolerances, "prop53")
    rep_ = Report("prop53", seed, {"prop53": tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = _rep(rep_name, rho0)
    lam = standard_multicurve(rho0, lam_name)
    rank = rho0.presentation.rank
    errs = {"inverse": 0.0, "composition": 0.0, "equivariance": 0.0}
    crossings = 0
    for _ in range(pairs):
        eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.3)
        eng = ShearingEngine(rep, eps)
        p, q = random_point(rng, lam), random_point(rng, lam)
        chain = lam.lift_crossings(p, q)
        crossings += len(chain)
        phi = eng.shearing(chain).value
        back = eng.shearing(lam.lift_crossings(q, p)).value
        errs["inverse"] = max(errs["inverse"], _err(np.linalg.inv(phi), back))
        # composition through an interior region, or a third random point
        if len(chain) >= 2:
            r = chain.regions[int(rng.integers(1, len(chain)))].sample
        else:
            r = random_point(rng, lam)
        comp = eng.shearing(lam.lift_crossings(p, r)).value @ eng.shearing(lam.lift_crossings(r, q)).value
        errs["composition"] = max(errs["composition"], _err(phi, comp))
        g = random_word(rng, rank, 1, 1)
        mg = evaluate(rho0, g)
        moved = eng.shearing(lam.lift_crossings(moebius(mg, p), moebius(mg, q))).value
        rg = evaluate(rep, g)
        errs["equivariance"] = max(errs["equivariance"], _err(moved, rg @ phi @ np.linalg.inv(rg)))
    for k, v in errs.items():
        rep_.check(k, v, tol, count=pairs)
    rep_.flag("chains_nontrivial", crossings > pairs, crossings)
    return rep_


def suite_thm56(seed: int = 0, cycles: int = 20, lam_name: str = "pants", tolerances=None) -> Report:
    """Relator of the deformed representation, zero-cycle identity, and change of reference region."""
    tol = _tol(tolerances, "thm56")
    rep_ = Report("thm56", seed, {"thm56": tol, "reference_change": _tol(tolerances, "prop53")})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    lam = standard_multicurve(rho0, lam_name)
    for name in ("fuchsian", "hitchin3", "horocyclic"):
        rep = _rep(name, rho0)
        worst, ref = 0.0, 0.0
        for _ in range(cycles):
            eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.1)
            res = cataclysm(rep, lam, eps, relator_tol=1.0)
            worst = max(worst, res.deformed.relator_residual)
            q = random_point(rng, lam)
            res_q = cataclysm(rep, lam, eps, base_point=q, relator_tol=1.0)
            phi = ShearingEngine(rep, eps).shearing(lam.lift_crossings(lam.base_point, q)).value
            phinv = np.linalg.inv(phi)
            # phi_{Q, gQ} = phi_{PQ}^{-1} phi_{P, gP} rho(g) phi_{PQ} rho(g)^{-1}
            ref = max(ref, max(_err(a, phinv @ b @ phi)
                               for a, b in zip(res_q.deformed.images, res.deformed.images)))
        rep_.check(f"{name}:relator", worst, tol, count=cycles)
        rep_.check(f"{name}:reference_change", ref, _tol(tolerances, "prop53"), count=cycles)
        zero = cataclysm(rep, lam, TwistedCycle.zero(lam.curve_ids(), rep.theta))
        exact = all(np.array_equal(a, b) for a, b in zip(zero.deformed.images, rep.images))
        rep_.flag(f"{name}:zero_cycle_exact", exact)
    return rep_


def suite_thm58(seed: int = 0, rep_name: str = "hitchin3", lam_name: str = "pants", min_vertices: int = 20,
                tolerances=None) -> Report:
    """Deformed flags at leaf endpoints versus eigenflags of the deformed holonomy."""
    tol = _tol(tolerances, "thm58")
    rep_ = Report("thm58", seed, {"thm58": tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = _rep(rep_name, rho0)
    lam = standard_multicurve(rho0, lam_name)
    eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.2)
    res = cataclysm(rep, lam, eps)
    oracle = BoundaryOracle(rep)
    new_oracle = BoundaryOracle(res.deformed)
    worst, ref_worst, count, ref_count = 0.0, 0.0, 0, 0
    tries = 0
    while count < min_vertices and tries < 200:
        tries += 1
        chain = lam.lift_crossings(lam.base_point, random_point(rng, lam))
        for i, leaf in enumerate(chain.positive_leaves()):
            for end in (1, -1):
                w = leaf.word if end > 0 else leaf.word.inverse()
                new = deformed_flag(res, chain, i, end)
                worst = max(worst, new.distance(new_oracle.flag_at(w)))
                count += 1
                if i == 0:
                    old = oracle.flag_at(w)
                    ref_worst = max(ref_worst, new.distance(old), new_oracle.flag_at(w).distance(old))
                    ref_count += 1
    rep_.check("eigenflag_match", worst, tol, count=count)
    rep_.check("reference_vertices_unchanged", ref_worst, tol, count=ref_count)
    rep_.flag("enough_vertices", count >= min_vertices, count)
    return rep_


def suite_additivity(seed: int = 0, pairs: int = 10, rep_name: str = "hitchin3", lam_name: str = "pants",
                     tolerances=None) -> Report:
    """Additivity of cataclysms, factorisation of shearing maps and the stretch conjugation identity."""
    tol = _tol(tolerances, "additivity")
    ftol = _tol(tolerances, "factorization")
    rep_ = Report("additivity", seed, {"additivity": tol, "factorization": ftol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = _rep(rep_name, rho0)
    lam = standard_multicurve(rho0, lam_name)
    add, fac, conj = 0.0, 0.0, 0.0
    for _ in range(pairs):
        eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.1)
        eta = random_cycle(rng, lam.curve_ids(), rep.theta, 0.1)
        direct = cataclysm(rep, lam, eps + eta).deformed
        mid = cataclysm(rep, lam, eta).deformed
        twice = cataclysm(mid, lam, eps).deformed
        add = max(add, direct.max_deviation(twice))
        eng = ShearingEngine(rep, eta)
        eng_sum = ShearingEngine(rep, eps + eta)
        eng_mid = ShearingEngine(mid, eps)
        for _ in range(3):
            q = random_point(rng, lam)
            chain = lam.lift_crossings(lam.base_point, q)
            phi_eta = eng.shearing(chain).value
            lhs = eng_sum.shearing(chain).value
            rhs = eng_mid.shearing(chain).value @ phi_eta
            fac = max(fac, _err(lhs, rhs))
            if len(chain):
                leaf = chain.positive_leaves()[-1]
                h = random_a_theta(rng, rep.theta, 0.3)
                t_new = eng_mid.stretch(leaf, h)
                t_old = eng.stretch(leaf, h)
                conj = max(conj, _err(t_new, phi_eta @ t_old @ np.linalg.inv(phi_eta)))
    rep_.check("additivity", add, tol, count=pairs)
    rep_.check("factorization", fac, ftol, count=3 * pairs)
    rep_.check("stretch_conjugation", conj, ftol, count=3 * pairs)
    return rep_


def suite_compose(seed: int = 0, samples: int = 5, lam_name: str = "pants", tolerances=None) -> Report:
    """Equivariance under the block embedding, and the exterior-square counterexample."""
    tol = _tol(tolerances, "compose")
    etol = _tol(tolerances, "exterior")
    rep_ = Report("compose", seed, {"compose": tol, "exterior": etol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    lam = standard_multicurve(rho0, lam_name)
    worst = 0.0
    theta2 = RootSubset.full(2)
    for _ in range(samples):
        eps2 = random_cycle(rng, lam.curve_ids(), theta2, 0.2)
        worst = max(worst, compose_check(rho0, lam, eps2, 3, 1)["max_deviation"])
    rep_.check("iota31_equivariance", worst, tol, count=samples)
    zero = compose_check(rho0, lam, TwistedCycle.zero(lam.curve_ids(), theta2), 3, 1)
    rep_.check("iota31_zero_cycle", zero["max_deviation"], 0.0)
    wit = exterior_witness()
    rep_.check("exterior_square_residual", wit["residual"], etol, mode="ge")
    return rep_


def suite_htrivial(seed: int = 0, tolerances=None) -> Report:
    """a'-valued cycles on the (3,1)-horocyclic representation."""
    eq_tol = _tol(tolerances, "htrivial_equal")
    diff_tol = _tol(tolerances, "htrivial_differ")
    rep_ = Report("htrivial", seed, {"equal": eq_tol, "differ": diff_tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = horocyclic(rho0, 3, 1)
    sep = standard_multicurve(rho0, "separating")
    for _ in range(3):
        a = float(rng.uniform(0.05, 0.5)) * float(rng.choice([-1, 1]))
        eps = TwistedCycle({"c": horocyclic_weight(3, 1, a)}, rep.theta)
        out = h_trivial_check(rep, sep, eps)
        rep_.flag("separating:criterion_trivial", out["trivial"], out["witness"])
        rep_.check("separating:deviation", out["deviation"], eq_tol)
    nonsep = standard_multicurve(rho0, "nonseparating")
    eps = TwistedCycle({"a1": horocyclic_weight(3, 1, 0.3)}, rep.theta)
    out = h_trivial_check(rep, nonsep, eps)
    rep_.flag("nonseparating:criterion_nontrivial", not out["trivial"], out["witness"])
    rep_.flag("nonseparating:witness_b1", out["witness"] == "b1", out["witness"])
    rep_.check("nonseparating:deviation", out["deviation"], diff_tol, mode="ge")
    zero = h_trivial_check(rep, nonsep, TwistedCycle.zero(["a1"], rep.theta))
    rep_.flag("zero_cycle_trivial", zero["trivial"] and zero["deviation"] == 0.0)
    return rep_


def suite_busemann(seed: int = 0, instances: int = 50, rep_name: str = "hitchin3", tolerances=None) -> Report:
    """Recover eps(P, Q) from shearing maps via the Busemann cocycle."""
    tol = _tol(tolerances, "busemann")
    rep_ = Report("busemann", seed, {"busemann": tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = _rep(rep_name, rho0)
    lam = standard_multicurve(rho0, "pants")
    oracle = BoundaryOracle(rep)
    worst, single, lengths = 0.0, 0.0, []
    done = 0
    # keep sampling past the quota until some chain crosses at least three leaves
    while done < instances or (max(lengths) < 3 and done < instances + 200):
        done += 1
        eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.3)
        eng = ShearingEngine(rep, eps, oracle)
        chain = lam.lift_crossings(random_point(rng, lam), random_point(rng, lam))
        lengths.append(len(chain))
        sm = eng.shearing(chain)
        delta = busemann_recover(chain, sm.partials, oracle)
        worst = max(worst, _err(delta.array(), evaluate_arc(eps, chain).array()))
    rep_.check("recovery", worst, tol, count=done)
    # single-leaf chains
    for _ in range(10):
        eps = random_cycle(rng, lam.curve_ids(), rep.theta, 0.3)
        eng = ShearingEngine(rep, eps, oracle)
        chain = lam.region_between(Word.parse("b2"))
        sm = eng.shearing(chain)
        c = chain.crossings[0]
        h = eps.crossing_value(c.leaf.curve, c.sign)
        single = max(single, _err(busemann_recover(chain, sm.partials, oracle).array(), h.array()))
    rep_.check("single_leaf", single, tol, count=10)
    rep_.flag("multi_leaf_instances", max(lengths) >= 3, max(lengths))
    zero = TwistedCycle.zero(lam.curve_ids(), rep.theta)
    chain = lam.region_between(Word.parse("b1 a2 B2"))
    z = busemann_recover(chain, ShearingEngine(rep, zero, oracle).shearing(chain).partials, oracle)
    rep_.check("zero_cycle", float(np.abs(z.array()).max()), 0.0)
    return rep_


def suite_dims(seed: int = 0, tolerances=None) -> Report:
    rep_ = Report("dims", seed, {})
    rep_.flag("maximal_g2_sl3", dim_maximal(2, RootSubset.full(3)) == 13, dim_maximal(2, RootSubset.full(3)))
    rep_.flag("maximal_g2_sl2", dim_maximal(2, RootSubset.full(2)) == 6, dim_maximal(2, RootSubset.full(2)))
    for m in (1, 2, 3):
        for theta in (RootSubset.full(3), RootSubset(4, {1, 3}), RootSubset(5, {2, 3})):
            val = dim_multicurve(m, theta)
            rep_.flag(f"multicurve_m{m}_n{theta.n}_{theta.dims}", val == len(theta) * m, val)
    return rep_


def suite_slithering(seed: int = 0, prefix_length: int = 24, ratio: float = 0.5, tolerances=None) -> Report:
    """Wedge identities for slithering maps and Cauchy decay along a spiralling prefix."""
    tol = _tol(tolerances, "slithering")
    r2_tol = _tol(tolerances, "decay_r2")
    rep_ = Report("slithering", seed, {"slithering": tol, "decay_r2": r2_tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = hitchin(rho0, 3)
    oracle = BoundaryOracle(rep)
    rank = rho0.presentation.rank
    ident, inv, comp, pair = 0.0, 0.0, 0.0, 0.0
    for _ in range(20):
        base = random_hyperbolic_word(rng, rank, 1, 3)
        starts = sorted(rng.uniform(0.2, 3.0, size=3))
        g, h, h2 = [spiral_prefix(rho0, base, 1, start=s)[0] for s in starts]
        s_gh = slithering_adjacent(g, h, oracle)
        s_hh2 = slithering_adjacent(h, h2, oracle)
        s_gh2 = slithering_adjacent(g, h2, oracle)
        ident = max(ident, _err(slithering_adjacent(g, g, oracle), np.eye(3)))
        inv = max(inv, _err(slithering_adjacent(h, g, oracle), np.linalg.inv(s_gh)))
        comp = max(comp, _err(s_gh2, s_gh @ s_hh2))
        gp, gm = oracle.leaf_flags(g)
        hp, hm = oracle.leaf_flags(h)
        pair = max(pair, hp.act(s_gh).distance(gp), hm.act(s_gh).distance(gm))
    rep_.check("identity", ident, tol, count=20)
    rep_.check("inverse", inv, tol, count=20)
    rep_.check("composition", comp, tol, count=20)
    rep_.check("sends_flag_pair", pair, tol, count=20)
    base = Word.parse("a1 b2")
    prefix = spiral_prefix(rho0, base, prefix_length, ratio=ratio)
    _, report = slithering_chain(prefix, oracle)
    rep_.flag("decay_monotone", report["monotone"])
    rep_.check("decay_slope", report["slope"], 0.0, mode="le")
    rep_.check("decay_r2", report["r_squared"], r2_tol, mode="ge")
    rep_.flag("prefix_length", prefix_length >= 20, prefix_length)
    return rep_


def suite_divergence(seed: int = 0, max_length: int = 6, tolerances=None) -> Report:
    rep_ = Report("divergence", seed, {})
    rho0 = fuchsian_octagon()
    for name in ("fuchsian", "hitchin3"):
        r = divergence_report(_rep(name, rho0), max_length=max_length)
        rep_.flag(f"{name}:strictly_increasing", r["strictly_increasing"], r["minima"])
    return rep_


def suite_injectivity(seed: int = 0, samples: int = 5, tolerances=None) -> Report:
    """Distinct cycles give distinct Hitchin deformations; joint stabilisers of three flags are trivial."""
    tol = _tol(tolerances, "injectivity")
    rep_ = Report("injectivity", seed, {"injectivity": tol})
    rng = np.random.default_rng(seed)
    rho0 = fuchsian_octagon()
    rep = hitchin(rho0, 3)
    lam = standard_multicurve(rho0, "pants")
    smallest = math.inf
    for _ in range(samples):
        e1 = random_cycle(rng, lam.curve_ids(), rep.theta, 0.1)
        e2 = random_cycle(rng, lam.curve_ids(), rep.theta, 0.1)
        smallest = min(smallest, injectivity_sample(rep, lam, e1, e2))
    rep_.check("distinct_images", smallest, tol, mode="ge", count=samples)
    oracle = BoundaryOracle(rep)
    dims, tries = [], 0
    while len(dims) < samples and tries < 200:
        tries += 1
        chain = lam.lift_crossings(lam.base_point, random_point(rng, lam))
        leaves = chain.positive_leaves()
        if len(leaves) < 2:
            continue
        words = [leaves[0].word, leaves[0].word.inverse(), leaves[1].word]
        dims.append(joint_stabilizer_dimension(oracle, words))
    rep_.flag("stabilizer_trivial", bool(dims) and max(dims) == 0, dims)
    return rep_


SUITES: dict = {
    "lemma32": suite_lemma32,
    "prop53": suite_prop53,
    "thm56": suite_thm56,
    "thm58": suite_thm58,
    "additivity": suite_additivity,
    "compose": suite_compose,
    "htrivial": suite_htrivial,
    "busemann": suite_busemann,
    "dims": suite_dims,
    "slithering": suite_slithering,
    "divergence": suite_divergence,
    "injectivity": suite_injectivity,
}


def run_suite(name: str, seed: int = 0, tolerances=None) -> Report:
    try:
        fn: Callable = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(seed=seed, tolerances=tolerances)
