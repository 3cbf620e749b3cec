import numpy as np
import pytest

from cataclysms.cycles import (
    CycleError,
    TwistedCycle,
    dim_maximal,
    dim_multicurve,
    dim_twisted,
    evaluate_arc,
    evaluate_pair,
    norm,
    partial_values,
    random_cycle,
)
from cataclysms.liealg import CartanVector, RootSubset, a_norm, opposition_involution
from cataclysms.surface import Word

from test_lamination import reduced_words

THETA3 = RootSubset.full(3)


def test_dimensions():
    assert dim_maximal(2, RootSubset.full(3)) == 13
    for g in (2, 3, 4):
        assert dim_maximal(g, RootSubset.full(2)) == 6 * g - 6
    for m in (1, 2, 3):
        for theta in (RootSubset.full(3), RootSubset(4, [2]), RootSubset(5, [2, 3])):
            assert dim_multicurve(m, theta) == len(theta) * m
    assert dim_twisted(-2, 2, 1, RootSubset.full(3)) == 2 * 3 + 1 * 1
    with pytest.raises(CycleError):
        dim_twisted(0, 1, 2, THETA3)


def test_weights_must_lie_in_a_theta():
    with pytest.raises(CycleError):
        TwistedCycle({"c": CartanVector([1.0, 0.0, -1.0])}, RootSubset(3, []))
    with pytest.raises(CycleError):
        TwistedCycle({"c": CartanVector([1.0, -1.0])}, RootSubset(3, [1, 2]))
    TwistedCycle({"c": CartanVector([0.5, 0.5, -1.0])}, RootSubset(3, [1, 2]))


def test_single_crossing_and_twist(nonseparating, rng):
    eps = random_cycle(rng, nonseparating.curve_ids(), THETA3)
    chain = nonseparating.region_between(Word.parse("b1"))
    assert len(chain) == 1
    c = chain.crossings[0]
    expected = eps.weights[c.leaf.curve] if c.sign > 0 else opposition_involution(eps.weights[c.leaf.curve])
    assert evaluate_arc(eps, chain).allclose(expected, 0)
    assert evaluate_arc(eps, chain.reversed()).allclose(opposition_involution(expected), 0)
    empty = nonseparating.lift_crossings(chain.arc[0], chain.arc[0])
    assert evaluate_arc(eps, empty).is_zero()


def test_reversed_arc_is_iota(pants, rng):
    words = [w for w in reduced_words(3) if not w.is_identity()]
    for _ in range(100):
        eps = random_cycle(rng, pants.curve_ids(), THETA3)
        chain = pants.region_between(words[int(rng.integers(len(words)))])
        fwd = evaluate_arc(eps, chain)
        assert evaluate_arc(eps, chain.reversed()).allclose(opposition_involution(fwd), 1e-12)


def test_additivity(pants, rng):
    eps = random_cycle(rng, pants.curve_ids(), THETA3)
    chain = pants.region_between(Word.parse("b1 b2 a1"))
    vals = partial_values(eps, chain)
    total = evaluate_arc(eps, chain)
    assert vals[-1].allclose(total, 1e-14)
    for k in range(1, len(chain.regions) - 1):
        left = evaluate_arc(eps, chain.sub(0, k))
        right = evaluate_arc(eps, chain.sub(k, len(chain.regions) - 1))
        assert (left + right).allclose(total, 1e-12)
        assert left.allclose(vals[k], 1e-12)


def test_evaluate_pair(pants, rng):
    eps = random_cycle(rng, pants.curve_ids(), THETA3)
    chain = pants.region_between(Word.parse("b1 b2"))
    p, q = chain.regions[0], chain.regions[-1]
    assert evaluate_pair(eps, p, p, pants).is_zero()
    assert evaluate_pair(eps, p, q, pants).allclose(evaluate_arc(eps, chain), 1e-12)


def test_norm(rng):
    theta = RootSubset.full(3)
    assert norm(TwistedCycle.zero(["a", "b"], theta)) == 0.0
    h = CartanVector([0.3, -0.1, -0.2])
    single = TwistedCycle({"a": h}, theta)
    # coweight coordinates of h are its simple roots (0.4, 0.1)
    assert np.isclose(norm(single), 0.4)
    eps = random_cycle(rng, ["a", "b", "c"], theta)
    for t in (2.0, -0.5, 0.0):
        assert np.isclose(norm(eps * t), abs(t) * norm(eps))


def test_signed_count_for_a_prime_weights(rho0, pants):
    """eps(P, gamma P) = (signed intersection) * weight when all weights are one iota-odd vector."""
    h = CartanVector([1.0, -2.0, 1.0]) * 0.1
    assert opposition_involution(h).allclose(-h)
    eps = TwistedCycle({c: h for c in pants.curve_ids()}, THETA3)
    for w in reduced_words(2)[1:]:
        k = sum(pants.signed_intersection(w, c) for c in pants.curve_ids())
        val = evaluate_arc(eps, pants.region_between(w))
        assert val.allclose(h * k, 1e-12)


def test_json_round_trip(rng):
    eps = random_cycle(rng, ["a1", "c"], RootSubset(4, [1, 3]))
    again = TwistedCycle.from_json(eps.to_json())
    assert again.to_json() == eps.to_json()
    assert a_norm(eps.weights["c"]) >= 0
