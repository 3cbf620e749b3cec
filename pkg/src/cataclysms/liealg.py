"""Lie-theoretic structure of SL(n, R).

The Cartan subspace is the traceless diagonal; simple roots are
``alpha_i(H) = h_i - h_{i+1}`` for ``i = 1, ..., n-1``.  Root subsets are
given by the set of their indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TRACE_TOL = 1e-12
DET_TOL = 1e-9
IWASAWA_COND_MAX = 1e14


class LieAlgebraError(ValueError):
    """Invalid Lie-theoretic input."""


class IwasawaError(LieAlgebraError):
    """The Iwasawa decomposition is numerically singular."""


@dataclass(frozen=True)
class CartanVector:
    """An element of the Cartan subspace: the diagonal of a traceless matrix."""

    entries: tuple

    def __init__(self, entries: Iterable[float], *, check: bool = True):
        vals = tuple(float(x) for x in entries)
        if check:
            if len(vals) < 2:
                raise LieAlgebraError("CartanVector needs n >= 2")
            if abs(sum(vals)) > TRACE_TOL * max(1.0, max(abs(x) for x in vals)):
                raise LieAlgebraError(f"entries not traceless (sum={sum(vals)!r})")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def zero(cls, n: int) -> "CartanVector":
        return cls([0.0] * n)

    @classmethod
    def from_array(cls, arr) -> "CartanVector":
        return cls(np.asarray(arr, dtype=float).ravel())

    @property
    def n(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries)

    def exp(self) -> np.ndarray:
        return np.diag(np.exp(self.array()))

    def is_zero(self) -> bool:
        return all(x == 0.0 for x in self.entries)

    def __add__(self, other: "CartanVector") -> "CartanVector":
        return CartanVector(self.array() + other.array(), check=False)

    def __sub__(self, other: "CartanVector") -> "CartanVector":
        return CartanVector(self.array() - other.array(), check=False)

    def __neg__(self) -> "CartanVector":
        return CartanVector(-self.array(), check=False)

    def __mul__(self, t: float) -> "CartanVector":
        return CartanVector(float(t) * self.array(), check=False)

    __rmul__ = __mul__

    def allclose(self, other: "CartanVector", atol: float = 1e-9) -> bool:
        return self.n == other.n and np.allclose(self.array(), other.array(), rtol=0, atol=atol)


@dataclass(frozen=True)
class RootSubset:
    """A subset theta of the simple roots of SL(n), by index in 1..n-1."""

    n: int
    indices: frozenset

    def __init__(self, n: int, indices: Iterable[int]):
        idx = frozenset(int(i) for i in indices)
        if n < 2:
            raise LieAlgebraError("n must be >= 2")
        if not all(1 <= i <= n - 1 for i in idx):
            raise LieAlgebraError(f"root indices {sorted(idx)} out of range for n={n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "indices", idx)

    @classmethod
    def full(cls, n: int) -> "RootSubset":
        return cls(n, range(1, n))

    @property
    def dims(self) -> list:
        """Subspace dimensions of a flag of this type, increasing."""
        return sorted(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def is_iota_invariant(self) -> bool:
        return all((self.n - i) in self.indices for i in self.indices)

    def blocks(self) -> list:
        """Consecutive index blocks (0-based, half open) not separated by theta."""
        cuts = [0] + self.dims + [self.n]
        return [(cuts[j], cuts[j + 1]) for j in range(len(cuts) - 1)]

    def to_list(self) -> list:
        return self.dims


def simple_root(H: CartanVector, i: int) -> float:
    h = H.entries
    return h[i - 1] - h[i]


def opposition_involution(H: CartanVector) -> CartanVector:
    """``(h_1, ..., h_n) -> (-h_n, ..., -h_1)``."""
    return CartanVector([-x for x in reversed(H.entries)], check=False)


def a_theta_projection(H: CartanVector, theta: RootSubset) -> CartanVector:
    """Average entries over each block of indices not separated by theta."""
    if theta.n != H.n:
        raise LieAlgebraError("dimension mismatch")
    h = H.array()
    out = np.empty_like(h)
    for lo, hi in theta.blocks():
        out[lo:hi] = h[lo:hi].mean()
    return CartanVector(out, check=False)


def in_a_theta(H: CartanVector, theta: RootSubset, tol: float = 1e-12) -> bool:
    return all(
        abs(simple_root(H, i)) <= tol * max(1.0, np.abs(H.array()).max())
        for i in range(1, H.n)
        if i not in theta
    )


def theta_prime(theta: RootSubset) -> RootSubset:
    """A maximal subset of theta disjoint from its image under iota."""
    if not theta.is_iota_invariant():
        raise LieAlgebraError("theta must be invariant under the opposition involution")
    n = theta.n
    return RootSubset(n, [i for i in theta.indices if i < n - i])


def a_norm(H: CartanVector) -> float:
    """max over all roots |h_i - h_j|, i.e. max(h) - min(h)."""
    h = H.array()
    return float(h.max() - h.min())


def a_theta_basis(theta: RootSubset) -> list:
    """Basis ``H_alpha`` of a_theta indexed by alpha in theta with iota(H_alpha) = H_{iota(alpha)}.

    ``H_d`` is the traceless vector equal to ``(n-d)/n`` on the first d
    coordinates and ``-d/n`` on the rest (the fundamental coweight).
    """
    n = theta.n
    basis = []
    for d in theta.dims:
        v = np.full(n, -d / n)
        v[:d] = (n - d) / n
        basis.append(CartanVector(v, check=False))
    return basis


def a_theta_coordinates(H: CartanVector, theta: RootSubset) -> np.ndarray:
    """Coordinates of H in the coweight basis of a_theta (= alpha_d(H), d in theta)."""
    return np.array([simple_root(H, d) for d in theta.dims])


def check_group_element(g, n: int | None = None, psl: bool = False) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise LieAlgebraError("group element must be a square matrix")
    if n is not None and g.shape[0] != n:
        raise LieAlgebraError(f"expected {n}x{n} matrix")
    det = np.linalg.det(g)
    if not (abs(det - 1) <= DET_TOL or (psl and abs(det + 1) <= DET_TOL)):
        raise LieAlgebraError(f"determinant {det!r} is not 1")
    return g


def group_allclose(a, b, atol: float = 1e-9, psl: bool = False) -> bool:
    """Entrywise comparison of group elements, optionally up to global sign."""
    a = np.asarray(a)
    b = np.asarray(b)
    if np.allclose(a, b, rtol=0, atol=atol):
        return True
    return psl and np.allclose(a, -b, rtol=0, atol=atol)


def group_distance_max(a, b, psl: bool = False) -> float:
    d = float(np.abs(np.asarray(a) - np.asarray(b)).max())
    if psl:
        d = min(d, float(np.abs(np.asarray(a) + np.asarray(b)).max()))
    return d


def iwasawa(g) -> tuple:
    """Decompose ``g = k @ exp(a) @ u`` with k orthogonal, a in the Cartan subspace
    (up to the trace of log|det g|), u upper unitriangular."""
    g = np.asarray(g, dtype=float)
    if np.linalg.cond(g) > IWASAWA_COND_MAX:
        raise IwasawaError("matrix is numerically singular")
    q, r = np.linalg.qr(g)
    s = np.sign(np.diag(r))
    s[s == 0] = 1.0
    q = q * s
    r = s[:, None] * r
    d = np.diag(r)
    u = r / d[:, None]
    return q, CartanVector(np.log(d), check=False), u


def busemann_full(g, k) -> CartanVector:
    """sigma(g, k B+) for an orthonormal frame k."""
    _, a, _ = iwasawa(np.asarray(g) @ np.asarray(k))
    return a


def busemann(g, flag, theta: RootSubset | None = None) -> CartanVector:
    """Busemann cocycle ``sigma_theta(g, F)``.

    ``flag`` is either a :class:`~cataclysms.flags.Flag` or an orthonormal
    frame whose leading columns span the flag subspaces.
    """
    frame = getattr(flag, "frame", flag)
    if theta is None:
        theta = getattr(flag, "theta", None)
    g = np.asarray(g, dtype=float)
    if np.array_equal(g, np.eye(g.shape[0])):
        return CartanVector.zero(g.shape[0])
    k = orthonormal_frame(np.asarray(frame, dtype=float))
    a = busemann_full(g, k)
    if theta is None:
        return a
    return a_theta_projection(a, theta)


def orthonormal_frame(frame: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the columns (keeps the nested leading spans)."""
    q, r = np.linalg.qr(frame)
    s = np.sign(np.diag(r))
    s[s == 0] = 1.0
    return q * s


def cartan_projection(g) -> CartanVector:
    """Logs of the singular values, in decreasing order."""
    s = np.linalg.svd(np.asarray(g, dtype=float), compute_uv=False)
    return CartanVector(np.log(s), check=False)


def group_distance(a, b) -> float:
    """Diagnostic left-invariant distance ``|mu(a^{-1} b)|`` (Euclidean norm)."""
    x = np.linalg.solve(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return float(np.linalg.norm(cartan_projection(x).array()))


def exp_cartan(H: CartanVector | Sequence[float]) -> np.ndarray:
    h = H.array() if isinstance(H, CartanVector) else np.asarray(H, dtype=float)
    return np.diag(np.exp(h))
