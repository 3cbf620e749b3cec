import math

import numpy as np
import pytest

from cataclysms.anosov import BoundaryOracle, iota_nk
from cataclysms.cataclysm import (
    CataclysmError,
    ShearingEngine,
    busemann_recover,
    cataclysm,
    compose_check,
    deformed_flag,
    exterior_witness,
    h_trivial_check,
    horocyclic_weight,
    slithering_adjacent,
    slithering_chain,
    spiral_prefix,
    stretch_context,
    stretching_map,
)
from cataclysms.cycles import TwistedCycle, random_cycle
from cataclysms.flags import attracting_flag
from cataclysms.hypgeom import BoundaryPoint, GeodesicLine
from cataclysms.lamination import Leaf
from cataclysms.liealg import CartanVector, RootSubset, busemann
from cataclysms.surface import Word, evaluate

from test_lamination import brute_force_crossings


def relerr(a, b):
    return float(np.abs(a - b).max()) / max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))


def boundary_vector(x: BoundaryPoint) -> np.ndarray:
    return np.array([1.0, 0.0]) if x.v == 0 else np.array([x.value, 1.0])


def sl2_stretch(line: GeodesicLine, t: float) -> np.ndarray:
    m = np.column_stack([boundary_vector(line.pos), boundary_vector(line.neg)])
    return m @ np.diag([math.exp(t / 2), math.exp(-t / 2)]) @ np.linalg.inv(m)


def test_sl2_brute_force_product(rho0, fuchsian, nonseparating):
    t = 0.37
    eps = TwistedCycle({"a1": CartanVector([t / 2, -t / 2])}, RootSubset.full(2))
    res = cataclysm(fuchsian, nonseparating, eps)
    p0 = nonseparating.base_point
    for g, image in zip(rho0.presentation.generators(), res.deformed.images):
        q = rho0.act(g, p0)
        hits = brute_force_crossings(rho0, nonseparating, p0, q)
        # oriented so the arc crosses positively; iota is trivial in SL(2)
        lines = [line if s > 0 else line.reversed() for line, _, s in hits]
        phi = np.eye(2)
        for j in range(1, len(lines)):
            phi = phi @ sl2_stretch(lines[j - 1], j * t) @ sl2_stretch(lines[j], -j * t)
        if lines:
            phi = phi @ sl2_stretch(lines[-1], len(lines) * t)
        assert relerr(image, phi @ rho0(g)) <= 1e-10


def test_zero_stretch_and_single_leaf(hitchin3, nonseparating, rng):
    oracle = BoundaryOracle(hitchin3)
    chain = nonseparating.region_between(Word.parse("b1"))
    assert len(chain) == 1
    ctx = stretch_context(oracle, chain.positive_leaves()[0])
    assert np.array_equal(stretching_map(ctx, CartanVector.zero(3)), np.eye(3))
    eps = random_cycle(rng, ["a1"], RootSubset.full(3))
    sm = ShearingEngine(hitchin3, eps, oracle).shearing(chain)
    c = chain.crossings[0]
    expected = stretching_map(ctx, eps.crossing_value("a1", c.sign))
    assert relerr(sm.value, expected) <= 1e-14


def test_stretch_requires_a_theta(rho0, nonseparating):
    from cataclysms.anosov import horocyclic

    rep = horocyclic(rho0, 4, 1)
    chain = nonseparating.region_between(Word.parse("b1"))
    ctx = stretch_context(BoundaryOracle(rep), chain.positive_leaves()[0])
    stretching_map(ctx, CartanVector([0.3, -0.1, -0.1, -0.1]))
    with pytest.raises(CataclysmError):
        stretching_map(ctx, CartanVector([0.3, 0.1, -0.1, -0.3]))


def test_product_formula_matches_merged(hitchin3, pants, rng):
    eps = random_cycle(rng, pants.curve_ids(), RootSubset.full(3), 0.1)
    engine = ShearingEngine(hitchin3, eps)
    for text in ("b1", "b1 b2", "a1 b2 b1"):
        chain = pants.region_between(Word.parse(text))
        assert relerr(engine.shearing(chain).value, engine.product_formula(chain)) <= 1e-9


def test_zero_cycle_is_exact(hitchin3, pants):
    eps = TwistedCycle.zero(pants.curve_ids(), RootSubset.full(3))
    res = cataclysm(hitchin3, pants, eps)
    for a, b in zip(res.deformed.images, hitchin3.images):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("rep_name", ["fuchsian", "hitchin3", "horo31"])
def test_relator_after_deformation(request, rep_name, pants, rng):
    rep = request.getfixturevalue(rep_name)
    for _ in range(3):
        eps = random_cycle(rng, pants.curve_ids(), rep.theta, 0.1)
        res = cataclysm(rep, pants, eps)
        assert res.deformed.relator_residual <= 1e-7


def test_deformed_flag_is_eigenflag(hitchin3, pants, rng):
    eps = random_cycle(rng, pants.curve_ids(), RootSubset.full(3), 0.1)
    res = cataclysm(hitchin3, pants, eps)
    chain = pants.region_between(Word.parse("b1 b2"))
    for i, leaf in enumerate(chain.positive_leaves()):
        f = deformed_flag(res, chain, i, +1)
        hol = evaluate(res.deformed, leaf.word)
        assert f.distance(attracting_flag(hol, RootSubset.full(3))) <= 1e-7


def test_busemann_single_leaf(hitchin3, nonseparating, rng):
    oracle = BoundaryOracle(hitchin3)
    chain = nonseparating.region_between(Word.parse("b1"))
    leaf = chain.positive_leaves()[0]
    ctx = stretch_context(oracle, leaf)
    h = CartanVector([0.3, -0.1, -0.2])
    assert busemann(stretching_map(ctx, h), ctx.fp).allclose(h, 1e-10)
    eps = random_cycle(rng, ["a1"], RootSubset.full(3))
    sm = ShearingEngine(hitchin3, eps, oracle).shearing(chain)
    got = busemann_recover(chain, sm.partials, oracle)
    assert got.allclose(eps.crossing_value("a1", chain.crossings[0].sign), 1e-10)
    zero = TwistedCycle.zero(["a1"], RootSubset.full(3))
    sm0 = ShearingEngine(hitchin3, zero, oracle).shearing(chain)
    assert busemann_recover(chain, sm0.partials, oracle).is_zero()


def test_slithering_sl2_closed_form(fuchsian):
    oracle = BoundaryOracle(fuchsian)
    inf = BoundaryPoint.infinity()
    g = Leaf("g", GeodesicLine(BoundaryPoint.from_real(0.5), inf))
    h = Leaf("h", GeodesicLine(BoundaryPoint.from_real(-1.5), inf))
    h2 = Leaf("h2", GeodesicLine(BoundaryPoint.from_real(2.25), inf))
    s_gh = slithering_adjacent(g, h, oracle)
    # unipotent fixing infinity and sending -1.5 to 0.5
    assert np.allclose(s_gh, [[1.0, 2.0], [0.0, 1.0]], atol=1e-12)
    assert np.allclose(slithering_adjacent(g, g, oracle), np.eye(2))
    assert np.allclose(slithering_adjacent(h, g, oracle), np.linalg.inv(s_gh), atol=1e-12)
    total, report = slithering_chain([g, h, h2], oracle)
    assert np.allclose(total, s_gh @ slithering_adjacent(h, h2, oracle), atol=1e-12)
    assert np.allclose(slithering_adjacent(g, h2, oracle), total, atol=1e-12)
    assert len(report["increments"]) == 2
    assert np.allclose(slithering_chain([g], oracle)[0], np.eye(2))


def test_slithering_rejects_disjoint_leaves(fuchsian):
    oracle = BoundaryOracle(fuchsian)
    a = Leaf("a", GeodesicLine(BoundaryPoint.from_real(0.0), BoundaryPoint.from_real(1.0)))
    b = Leaf("b", GeodesicLine(BoundaryPoint.from_real(2.0), BoundaryPoint.from_real(3.0)))
    with pytest.raises(CataclysmError):
        slithering_adjacent(a, b, oracle)


def test_spiral_slithering_decays(rho0, hitchin3):
    leaves = spiral_prefix(rho0, Word.parse("a1"), 12)
    _, report = slithering_chain(leaves, BoundaryOracle(hitchin3))
    inc = report["increments"]
    assert report["monotone"] and inc[-1] < 1e-2 * inc[0]
    assert report["slope"] < 0


def test_h_trivial(rho0, horo31, separating, nonseparating):
    w = horocyclic_weight(3, 1, 0.2)
    assert np.allclose(w.array(), [0.2, -0.4, 0.2])
    rep = horo31
    sep = h_trivial_check(rep, separating, TwistedCycle({"c": w}, rep.theta))
    assert sep["trivial"] and sep["deviation"] <= 1e-9
    non = h_trivial_check(rep, nonseparating, TwistedCycle({"a1": w}, rep.theta))
    assert not non["trivial"] and non["witness"] == "b1" and non["deviation"] > 1e-6
    zero = h_trivial_check(rep, nonseparating, TwistedCycle.zero(["a1"], rep.theta))
    assert zero["trivial"] and zero["deviation"] == 0.0
    with pytest.raises(CataclysmError):
        h_trivial_check(rep, separating, TwistedCycle({"c": CartanVector([0.2, 0.0, -0.2])}, rep.theta))


def test_compose_with_block_embedding(rho0, pants, rng):
    eps2 = random_cycle(rng, pants.curve_ids(), RootSubset.full(2), 0.1)
    assert compose_check(rho0, pants, eps2, 3, 1)["max_deviation"] <= 1e-8
    assert compose_check(rho0, pants, eps2, 5, 2)["max_deviation"] <= 1e-8
    zero = compose_check(rho0, pants, TwistedCycle.zero(pants.curve_ids(), RootSubset.full(2)), 3, 1)
    for m, base in zip(zero["left"].images, rho0.images):
        assert np.array_equal(m, iota_nk(base, 3, 1))


def test_exterior_witness():
    w = exterior_witness()
    h = np.array(w["H"])
    assert abs(h.sum()) < 1e-12
    assert np.isclose(h[0], h[1]) and np.isclose(h[3], h[4])
    assert w["residual"] >= 1e-3
