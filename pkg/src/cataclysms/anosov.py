"""Representations into SL(n, R), their boundary flags, and divergence diagnostics."""
from __future__ import annotations

import itertools
import threading
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .flags import Flag, attracting_flag, standard_flag
from .liealg import RootSubset
from .surface import FuchsianRep, SurfaceGroupPresentation, Word, evaluate

RELATOR_TOL = 1e-8


class RepresentationError(ValueError):
    pass


class Representation:
    """Generator images of a surface group representation into SL(n, R).

    ``kappa`` (optional) is a homomorphism SL(2) -> SL(n) with
    ``images = kappa(base)``; it provides an explicit boundary map.
    """

    def __init__(self, images: Sequence, genus: int = 2, provenance: Optional[dict] = None,
                 theta: Optional[RootSubset] = None, base: Optional[FuchsianRep] = None,
                 kappa: Optional[Callable] = None, relator_tol: float = RELATOR_TOL,
                 psl: bool = False):
        self.presentation = SurfaceGroupPresentation(genus)
        self.images = [np.array(m, dtype=float) for m in images]
        if len(self.images) != self.presentation.rank:
            raise RepresentationError("wrong number of generator images")
        self.n = self.images[0].shape[0]
        self.inverse_images = [np.linalg.inv(m) for m in self.images]
        self.provenance = dict(provenance or {"kind": "custom"})
        self.theta = theta or RootSubset.full(self.n)
        self.base = base
        self.kappa = kappa
        self.psl = psl
        self.relator_residual = relator_residual(self)
        self.relator_tol = max(relator_tol, rounding_bound(self))
        if self.relator_residual > self.relator_tol:
            raise RepresentationError(
                f"relator residual {self.relator_residual:.3e} exceeds {self.relator_tol:.3e}"
            )

    @property
    def genus(self) -> int:
        return self.presentation.genus

    def __call__(self, w: Word) -> np.ndarray:
        return evaluate(self, w)

    def max_deviation(self, other: "Representation") -> float:
        return max(float(np.abs(a - b).max()) for a, b in zip(self.images, other.images))

    def to_json(self) -> dict:
        return {
            "kind": "representation",
            "n": self.n,
            "genus": self.genus,
            "provenance": self.provenance,
            "theta": self.theta.dims,
            "generators": {
                name: m.tolist() for name, m in zip(self.presentation.generator_names, self.images)
            },
            "relator_residual": self.relator_residual,
        }


def relator_residual(rep) -> float:
    r = evaluate(rep, rep.presentation.relator)
    eye = np.eye(rep.n)
    res = float(np.abs(r - eye).max())
    if rep.n % 2 == 0 or getattr(rep, "psl", False):
        res = min(res, float(np.abs(r + eye).max()))
    return res


def rounding_bound(rep) -> float:
    """First-order bound on the rounding error of the relator product.

    Sum over letters of ``eps |P_{i-1}| |A_i| |P_i^{-1}|`` for the partial
    products ``P_i``; the relator certificate cannot be sharper than this.
    """
    eps = np.finfo(float).eps
    mats = [rep.images[x - 1] if x > 0 else rep.inverse_images[-x - 1]
            for x in rep.presentation.relator.letters]
    parts = [np.eye(rep.n)]
    for a in mats:
        parts.append(parts[-1] @ a)
    total = 0.0
    for i, a in enumerate(mats):
        total += (np.linalg.norm(parts[i], 2) * np.linalg.norm(a, 2)
                  * np.linalg.norm(np.linalg.inv(parts[i + 1]), 2))
    return 4.0 * eps * total


def from_fuchsian(rho0: FuchsianRep) -> Representation:
    return Representation(rho0.images, rho0.genus, {"kind": "fuchsian"}, RootSubset.full(2),
                          base=rho0, kappa=lambda g: np.asarray(g, dtype=float))


def symmetric_power(g, n: int) -> np.ndarray:
    """Irreducible SL(2) -> SL(n) in the orthonormalised monomial basis.

    Basis vector i is ``sqrt(C(n-1, i)) x^{n-1-i} y^i``; rotations map to
    orthogonal matrices.
    """
    g = np.asarray(g, dtype=float)
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    m = n - 1
    out = np.zeros((n, n))
    # x -> a x + c y, y -> b x + d y (columns of g act on the basis x, y)
    for j in range(n):
        px = np.polynomial.polynomial.polypow([a, c], m - j) if m - j else np.array([1.0])
        py = np.polynomial.polynomial.polypow([b, d], j) if j else np.array([1.0])
        # coefficient k of y^k in x^{m-j}... represented as polynomials in t = y/x
        poly = np.polynomial.polynomial.polymul(px, py)
        for i in range(min(len(poly), n)):
            out[i, j] = poly[i]
    scale = np.sqrt([comb(m, i) for i in range(n)])
    return out * scale[None, :] / scale[:, None]


def iota_nk(g, n: int, k: int) -> np.ndarray:
    """Block embedding SL(2) -> SL(n) stabilising a k-plane."""
    if not (1 <= k and 2 * k <= n):
        raise RepresentationError(f"invalid (n, k) = ({n}, {k})")
    g = np.asarray(g, dtype=float)
    out = np.eye(n)
    ik = np.eye(k)
    lo, hi = slice(0, k), slice(n - k, n)
    out[lo, lo] = g[0, 0] * ik
    out[lo, hi] = g[0, 1] * ik
    out[hi, lo] = g[1, 0] * ik
    out[hi, hi] = g[1, 1] * ik
    return out


def wedge_square(g) -> np.ndarray:
    """Action on the basis e_i ∧ e_j, i < j, in lexicographic order (2x2 minors)."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    pairs = list(itertools.combinations(range(n), 2))
    out = np.empty((len(pairs), len(pairs)))
    for r, (i, j) in enumerate(pairs):
        for c, (k, l) in enumerate(pairs):
            out[r, c] = g[i, k] * g[j, l] - g[i, l] * g[j, k]
    return out


def wedge_weights(h: Sequence[float]) -> np.ndarray:
    """Induced map on diagonals: (h_i + h_j) for i < j in lexicographic order."""
    return np.array([h[i] + h[j] for i, j in itertools.combinations(range(len(h)), 2)])


def hitchin(rho0: FuchsianRep, n: int) -> Representation:
    if n < 2:
        raise RepresentationError("n must be >= 2")
    kappa = lambda g: symmetric_power(g, n)  # noqa: E731
    return Representation([kappa(m) for m in rho0.images], rho0.genus,
                          {"kind": "hitchin", "n": n}, RootSubset.full(n), base=rho0, kappa=kappa)


def horocyclic_theta(n: int, k: int) -> RootSubset:
    return RootSubset(n, {k, n - k})


def horocyclic(rho0: FuchsianRep, n: int, k: int) -> Representation:
    iota_nk(np.eye(2), n, k)
    kappa = lambda g: iota_nk(g, n, k)  # noqa: E731
    return Representation([kappa(m) for m in rho0.images], rho0.genus,
                          {"kind": "horocyclic", "n": n, "k": k}, horocyclic_theta(n, k),
                          base=rho0, kappa=kappa)


def exterior_square(rep: Representation) -> Representation:
    n = rep.n
    kappa = None
    if rep.kappa is not None:
        inner = rep.kappa
        kappa = lambda g: wedge_square(inner(g))  # noqa: E731
    big = n * (n - 1) // 2
    theta = RootSubset(big, {1, big - 1}) if big > 2 else RootSubset.full(big)
    return Representation([wedge_square(m) for m in rep.images], rep.genus,
                          {"kind": "exterior", "of": rep.provenance}, theta,
                          base=rep.base, kappa=kappa)


def horocyclic_a_prime(n: int, k: int, a: float = 1.0) -> np.ndarray:
    """Generator of the line centralising iota_{n,k}(SL(2)): a on the outer k-blocks, traceless."""
    h = np.full(n, a)
    if n > 2 * k:
        h[k : n - k] = -2.0 * k * a / (n - 2 * k)
    else:
        raise RepresentationError("a' is zero when n = 2k")
    return h


class BoundaryOracle:
    """Boundary map of an Anosov representation at fixed points of group elements.

    ``flag_at(w)`` is the attracting flag at the attracting fixed point of
    ``w``.  A cyclically reduced form ``w = c v c^{-1}`` is used so that the
    eigen-computation runs on the short word ``v``.  Representations built
    as ``kappa o rho0`` also have ``flag_at_point`` at any boundary point.
    """

    def __init__(self, rep, theta: Optional[RootSubset] = None):
        self.rep = rep
        self.theta = theta or rep.theta
        self._cache: dict = {}
        self._lock = threading.Lock()

    def flag_at(self, w: Word) -> Flag:
        if w.is_identity():
            raise RepresentationError("identity has no fixed point")
        key = w.letters
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        c, v = w.cyclic_reduce()
        root, _ = v.root(max(1, len(v)))
        f = attracting_flag(evaluate(self.rep, root), self.theta)
        if not c.is_identity():
            f = f.act(evaluate(self.rep, c))
        with self._lock:
            self._cache.setdefault(key, f)
            return self._cache[key]

    def flag_at_point(self, x) -> Flag:
        """Explicit boundary map zeta(x) = kappa(g_x) std, with g_x in SL(2) sending ∞ to x."""
        kappa = getattr(self.rep, "kappa", None)
        if kappa is None:
            raise RepresentationError("representation has no explicit boundary map")
        u, v = x.u, x.v
        gx = np.array([[u, -v], [v, u]])
        return standard_flag(self.theta).act(kappa(gx))

    def leaf_flags(self, leaf) -> tuple:
        """(zeta(leaf^+), zeta(leaf^-))."""
        w = leaf.word
        if w is not None and not w.is_identity():
            return self.flag_at(w), self.flag_at(w.inverse())
        return self.flag_at_point(leaf.line.pos), self.flag_at_point(leaf.line.neg)


def cyclic_words(rank: int, length: int) -> np.ndarray:
    """All cyclically reduced words of the given length as arrays of signed letters."""
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    words = [[x] for x in letters]
    for _ in range(length - 1):
        words = [w + [x] for w in words for x in letters if x != -w[-1]]
    words = [w for w in words if length < 2 or w[0] != -w[-1]]
    return np.array(words, dtype=int)


def _letter_codes(words: np.ndarray, rank: int) -> np.ndarray:
    return np.where(words > 0, words - 1, rank - words - 1)


def dehn_reduced_mask(words: np.ndarray, relator: Word, rank: int) -> np.ndarray:
    """True for words with no cyclic subword longer than half a relator rotation.

    Such a subword can be replaced by the shorter complementary piece, so
    these are the words whose length is not trivially reducible.
    """
    rel = list(relator.letters)
    half = len(rel) // 2
    n = words.shape[1]
    if n <= half:
        return np.ones(len(words), dtype=bool)
    base = 2 * rank
    weights = base ** np.arange(half + 1)
    pieces = set()
    for r in (rel, [-x for x in reversed(rel)]):
        for i in range(len(r)):
            rot = np.array((r[i:] + r[:i])[: half + 1])[None, :]
            pieces.add(int((_letter_codes(rot, rank) * weights).sum()))
    codes = _letter_codes(words, rank)
    doubled = np.concatenate([codes, codes], axis=1)
    ok = np.ones(len(words), dtype=bool)
    piece_arr = np.array(sorted(pieces))
    for i in range(n):
        window = doubled[:, i : i + half + 1] @ weights
        ok &= ~np.isin(window, piece_arr)
    return ok


def _batched_products(rep, words: np.ndarray, inverse: bool = False) -> np.ndarray:
    n = rep.n
    rank = len(rep.images)
    if inverse:
        words = -words[:, ::-1]
    table = np.stack(list(rep.images) + list(rep.inverse_images))
    idx = _letter_codes(words, rank)
    out = np.broadcast_to(np.eye(n), (len(words), n, n)).copy()
    for col in range(words.shape[1]):
        out = out @ table[idx[:, col]]
    return out


def root_gaps(rep, words: np.ndarray, theta: RootSubset) -> np.ndarray:
    """alpha_d(mu(rho(w))) for d in theta, one row per word.

    Gaps in the lower half of the spectrum are read off the inverse word,
    where they are the large singular values and numerically reliable.
    """
    n = rep.n
    lo = np.log(np.linalg.svd(_batched_products(rep, words), compute_uv=False))
    hi = np.log(np.linalg.svd(_batched_products(rep, words, inverse=True), compute_uv=False))
    cols = []
    for d in theta.dims:
        if 2 * d <= n:
            cols.append(lo[:, d - 1] - lo[:, d])
        else:
            cols.append(hi[:, n - d - 1] - hi[:, n - d])
    return np.stack(cols, axis=1)


EXHAUSTIVE_MAX_LENGTH = 7
SAMPLE_SIZE = 200_000


def divergence_report(rep, theta: Optional[RootSubset] = None, max_length: int = 6,
                      seed: int = 0) -> dict:
    """min over words of each length of min_{alpha in theta} alpha(mu(rho(w))).

    Words are cyclically reduced and Dehn-reduced (see ``dehn_reduced_mask``).
    Lengths above ``EXHAUSTIVE_MAX_LENGTH`` use a seeded random sample.
    """
    if max_length > 10:
        raise ValueError("max_length is capped at 10")
    theta = theta or rep.theta
    rank = rep.presentation.rank
    rng = np.random.default_rng(seed)
    minima, counts, sampled = [], [], []
    for ell in range(1, max_length + 1):
        if ell <= EXHAUSTIVE_MAX_LENGTH:
            words = cyclic_words(rank, ell)
            sampled.append(False)
        else:
            words = _random_cyclic_words(rng, rank, ell, SAMPLE_SIZE)
            sampled.append(True)
        words = words[dehn_reduced_mask(words, rep.presentation.relator, rank)]
        gaps = root_gaps(rep, words, theta)
        minima.append(float(gaps.min()))
        counts.append(int(len(words)))
    increasing = all(b > a for a, b in zip(minima, minima[1:]))
    divergent = minima[-1] > 1e-9 and minima[-1] > minima[0]
    return {
        "theta": theta.dims,
        "lengths": list(range(1, max_length + 1)),
        "minima": minima,
        "word_counts": counts,
        "sampled": sampled,
        "strictly_increasing": increasing,
        "divergent_trend": divergent,
    }


def _random_cyclic_words(rng, rank: int, length: int, size: int) -> np.ndarray:
    letters = np.array([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
    out = np.empty((size, length), dtype=int)
    out[:, 0] = rng.choice(letters, size)
    for j in range(1, length):
        col = rng.choice(letters, size)
        bad = col == -out[:, j - 1]
        while bad.any():
            col[bad] = rng.choice(letters, int(bad.sum()))
            bad = col == -out[:, j - 1]
        out[:, j] = col
    return out[out[:, 0] != -out[:, -1]]


def representation_from_json(data: dict) -> Representation:
    gens = data["generators"]
    genus = int(data.get("genus", 2))
    names = SurfaceGroupPresentation(genus).generator_names
    images = [np.asarray(gens[nm], dtype=float) for nm in names]
    n = images[0].shape[0]
    theta = RootSubset(n, data["theta"]) if "theta" in data else None
    prov = data.get("provenance", {"kind": data.get("kind", "custom")})
    rep = Representation(images, genus, prov, theta)
    return rep
