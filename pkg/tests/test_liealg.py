import numpy as np
import pytest
from hypothesis import given, strategies as st

from cataclysms.liealg import (
    CartanVector,
    IwasawaError,
    LieAlgebraError,
    RootSubset,
    a_theta_basis,
    a_theta_coordinates,
    a_theta_projection,
    busemann,
    cartan_projection,
    exp_cartan,
    in_a_theta,
    iwasawa,
    opposition_involution,
    theta_prime,
)

from conftest import random_sl


def test_cartan_vector_must_be_traceless():
    with pytest.raises(LieAlgebraError):
        CartanVector([1.0, 0.0, 0.0])


@pytest.mark.parametrize(
    "h, expected",
    [((0, 0, 0), (0, 0, 0)), ((1, 0, -1), (1, 0, -1)), ((2, -1, -1), (1, 1, -2))],
)
def test_opposition_involution_examples(h, expected):
    assert opposition_involution(CartanVector(h)).entries == tuple(float(x) for x in expected)


traceless = st.lists(st.floats(-5, 5), min_size=2, max_size=6).map(lambda v: CartanVector(np.array(v) - np.mean(v)))


@given(traceless)
def test_opposition_involution_is_involutive_and_keeps_dominance(h):
    assert opposition_involution(opposition_involution(h)).allclose(h, 1e-12)
    dom = CartanVector(sorted(h.entries, reverse=True), check=False)
    img = opposition_involution(dom).array()
    assert np.all(np.diff(img) <= 1e-12)


def test_projection_examples():
    h = CartanVector([2.0, 0.0, -2.0])
    assert a_theta_projection(h, RootSubset.full(3)).entries == h.entries
    assert a_theta_projection(h, RootSubset(3, {2})).allclose(CartanVector([1, 1, -2]), 1e-15)
    assert a_theta_projection(h, RootSubset(3, set())).is_zero()


@given(traceless, st.data())
def test_projection_is_idempotent_and_lands_in_a_theta(h, data):
    idx = data.draw(st.sets(st.integers(1, h.n - 1)))
    theta = RootSubset(h.n, idx)
    p = a_theta_projection(h, theta)
    assert in_a_theta(p, theta, tol=1e-10)
    assert a_theta_projection(p, theta).allclose(p, 1e-12)


@pytest.mark.parametrize("n, theta, expected", [(3, {1, 2}, [1]), (4, {2}, []), (5, {1, 2, 3, 4}, [1, 2])])
def test_theta_prime_examples(n, theta, expected):
    assert theta_prime(RootSubset(n, theta)).dims == expected


def test_theta_prime_requires_invariance():
    with pytest.raises(LieAlgebraError):
        theta_prime(RootSubset(3, {1}))


def test_coweight_basis_dual_to_roots():
    theta = RootSubset(5, {1, 2, 3, 4})
    for i, h in enumerate(a_theta_basis(theta)):
        coords = a_theta_coordinates(h, theta)
        assert np.allclose(coords, np.eye(4)[i])


def test_iwasawa_trivial_cases():
    k, a, u = iwasawa(np.eye(3))
    assert np.allclose(k, np.eye(3)) and a.allclose(CartanVector.zero(3), 0) and np.allclose(u, np.eye(3))
    h = CartanVector([0.7, 0.1, -0.8])
    k, a, u = iwasawa(exp_cartan(h))
    assert np.allclose(k, np.eye(3), atol=1e-15) and a.allclose(h, 1e-14) and np.allclose(u, np.eye(3))


def test_iwasawa_round_trip(rng):
    for n in (2, 3, 5):
        for _ in range(20):
            g = random_sl(rng, n, 1.0)
            k, a, u = iwasawa(g)
            assert np.abs(k @ exp_cartan(a) @ u - g).max() <= 1e-9
            assert np.abs(k.T @ k - np.eye(n)).max() <= 1e-10
            assert np.allclose(np.tril(u, -1), 0) and np.allclose(np.diag(u), 1)


def test_iwasawa_rejects_singular():
    with pytest.raises(IwasawaError):
        iwasawa(np.diag([1.0, 1.0, 0.0]))


def test_busemann_examples():
    theta = RootSubset.full(3)
    frame = np.eye(3)
    assert busemann(np.eye(3), frame, theta).is_zero()
    h = CartanVector([0.4, 0.2, -0.6])
    assert busemann(exp_cartan(h), frame, theta).allclose(h, 1e-14)


def test_busemann_cocycle(rng):
    for n in (2, 3, 4):
        for theta in (RootSubset.full(n), RootSubset(n, {1, n - 1})):
            for _ in range(20):
                g1, g2, f = random_sl(rng, n), random_sl(rng, n), random_sl(rng, n)
                lhs = busemann(g1 @ g2, f, theta)
                rhs = busemann(g1, g2 @ f, theta) + busemann(g2, f, theta)
                assert lhs.allclose(rhs, 1e-9)


def test_cartan_projection(rng):
    assert cartan_projection(np.eye(4)).allclose(CartanVector.zero(4), 1e-15)
    h = CartanVector([1.0, 0.5, -1.5])
    assert cartan_projection(exp_cartan(h)).allclose(h, 1e-14)
    for _ in range(20):
        g = random_sl(rng, 4, 1.0)
        assert cartan_projection(np.linalg.inv(g)).allclose(opposition_involution(cartan_projection(g)), 1e-10)
