"""Partial flags in R^n, transversality, adapted frames and unipotent transporters."""
from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .liealg import RootSubset

ANGLE_TOL = 1e-8
TRANSVERSE_TOL = 1e-8
GAP_TOL = 1e-8


class FlagError(ValueError):
    """Invalid flag configuration (type mismatch, non-transverse pair, ...)."""


class NotProximalError(FlagError):
    """The element has no attracting flag of the requested type."""


class TransporterWarning(RuntimeWarning):
    pass


def _canonical_basis(basis: np.ndarray, rank: int) -> np.ndarray:
    """Deterministic orthonormal basis of span(basis) via pivoted QR of its projector."""
    if rank == 0:
        return basis[:, :0]
    q0, _ = np.linalg.qr(basis)
    proj = q0[:, :rank] @ q0[:, :rank].T
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    q = q[:, :rank]
    for j in range(rank):
        col = q[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            q[:, j] = -col
    return q


class Flag:
    """A partial flag of type theta, stored as a canonical orthonormal frame.

    The subspace of dimension ``d`` (``d`` in ``theta``) is the span of the
    first ``d`` columns of ``frame``.
    """

    __slots__ = ("frame", "theta", "condition")

    def __init__(self, frame, theta: RootSubset, canonical: bool = True):
        frame = np.asarray(frame, dtype=float)
        n = theta.n
        if frame.shape != (n, n):
            raise FlagError(f"frame must be {n}x{n}")
        self.condition = float(np.linalg.cond(frame))
        if not np.isfinite(self.condition) or self.condition > 1e15:
            raise FlagError("frame is not invertible")
        self.theta = theta
        self.frame = self._canonicalize(frame) if canonical else frame

    def _canonicalize(self, frame: np.ndarray) -> np.ndarray:
        q, _ = np.linalg.qr(frame)
        cols = []
        for lo, hi in self.theta.blocks():
            cols.append(_canonical_basis(q[:, lo:hi], hi - lo))
        return np.hstack(cols)

    @property
    def n(self) -> int:
        return self.theta.n

    def subspace(self, d: int) -> np.ndarray:
        if d != 0 and d != self.n and d not in self.theta:
            raise FlagError(f"flag has no subspace of dimension {d}")
        return self.frame[:, :d]

    def act(self, g) -> "Flag":
        return Flag(np.asarray(g) @ self.frame, self.theta)

    def distance(self, other: "Flag") -> float:
        """Largest sine of a principal angle between corresponding subspaces."""
        if other.theta != self.theta:
            raise FlagError("flags of different type")
        worst = 0.0
        for d in self.theta.dims:
            a = self.subspace(d)
            b = other.subspace(d)
            resid = b - a @ (a.T @ b)
            worst = max(worst, float(np.linalg.norm(resid, 2)))
        return worst

    def equals(self, other: "Flag", tol: float = ANGLE_TOL) -> bool:
        return self.distance(other) <= tol

    def __repr__(self) -> str:
        return f"Flag(theta={self.theta.dims}, n={self.n})"

    def to_json(self) -> dict:
        return {"type": self.theta.dims, "frame": self.frame.tolist()}

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "Flag":
        frame = np.asarray(data["frame"], dtype=float)
        theta = RootSubset(n or frame.shape[0], data["type"])
        return cls(frame, theta)


def standard_flag(theta: RootSubset) -> Flag:
    return Flag(np.eye(theta.n), theta)


def opposite_flag(theta: RootSubset) -> Flag:
    return Flag(np.eye(theta.n)[:, ::-1], theta)


def _check_types(fp: Flag, fm: Flag) -> None:
    if fp.theta != fm.theta:
        raise FlagError("flag types differ")
    if not fp.theta.is_iota_invariant():
        raise FlagError("flag type must be invariant under the opposition involution")


def transversality(fp: Flag, fm: Flag) -> float:
    """min over d in theta of |det[F+_d, F-_{n-d}]| for orthonormal bases."""
    _check_types(fp, fm)
    n = fp.n
    worst = 1.0
    for d in fp.theta.dims:
        m = np.hstack([fp.subspace(d), fm.subspace(n - d)])
        worst = min(worst, abs(float(np.linalg.det(m))))
    return worst


def is_transverse(fp: Flag, fm: Flag, tol: float = TRANSVERSE_TOL) -> bool:
    return transversality(fp, fm) > tol


def attracting_flag(g, theta: RootSubset, gap_tol: float = GAP_TOL) -> Flag:
    """Flag spanned by generalized eigenspaces sorted by decreasing modulus."""
    g = np.asarray(g, dtype=float)
    moduli = np.sort(np.abs(np.linalg.eigvals(g)))[::-1]
    frame_cols = []
    prev = 0
    for d in theta.dims:
        hi, lo = moduli[d - 1], moduli[d]
        if lo == 0 or hi / lo < 1 + gap_tol:
            raise NotProximalError(
                f"eigenvalue moduli not separated at dimension {d} ({hi!r} vs {lo!r})"
            )
        thr = np.sqrt(hi * lo)
        _, z, sdim = scipy.linalg.schur(g, output="real", sort=lambda re, im: np.hypot(re, im) > thr)
        if sdim != d:
            raise NotProximalError(f"invariant subspace of dimension {sdim}, expected {d}")
        sub = z[:, :d]
        # new directions of sub not already in the previous subspace
        if frame_cols:
            basis = np.hstack(frame_cols)
            resid = sub - basis @ (basis.T @ sub)
            u, _, _ = np.linalg.svd(resid)
            frame_cols.append(u[:, : d - prev])
        else:
            frame_cols.append(sub)
        prev = d
    basis = np.hstack(frame_cols) if frame_cols else np.zeros((g.shape[0], 0))
    rest = scipy.linalg.null_space(basis.T) if basis.shape[1] else np.eye(g.shape[0])
    return Flag(np.hstack([basis, rest]), theta)


def _intersection(a: np.ndarray, b: np.ndarray, dim: int) -> tuple:
    """Orthonormal basis of span(a) ∩ span(b), expected dimension ``dim``.

    Returns the basis and the smallest singular value not belonging to the
    intersection (a transversality margin).
    """
    resid = a - b @ (b.T @ a)
    _, s, vt = np.linalg.svd(resid)
    k = a.shape[1]
    vecs = vt[k - dim :].T
    margin = float(s[k - dim - 1]) if k - dim - 1 >= 0 else 1.0
    return a @ vecs, margin


def adapted_frame(fp: Flag, fm: Flag, tol: float = TRANSVERSE_TOL) -> np.ndarray:
    """Return m in SL(n) with m·(standard flag) = fp and m·(opposite flag) = fm.

    Block ``j`` of the columns spans ``fp_{d_j} ∩ fm_{n - d_{j-1}}``.  The
    choice is unique up to the Levi factor; the canonical basis makes
    ``adapted_frame(standard, opposite)`` the identity.
    """
    _check_types(fp, fm)
    if not is_transverse(fp, fm, tol):
        raise FlagError("flags are not transverse")
    n = fp.n
    cols = []
    for lo, hi in fp.theta.blocks():
        a = fp.subspace(hi) if hi < n else np.eye(n)
        b = fm.subspace(n - lo) if lo > 0 else np.eye(n)
        v, margin = _intersection(a, b, hi - lo)
        if margin < tol:
            raise FlagError("flags are not transverse")
        cols.append(_canonical_basis(v, hi - lo))
    m = np.hstack(cols)
    det = np.linalg.det(m)
    if det < 0:
        m[:, -1] = -m[:, -1]
        det = -det
    return m / det ** (1.0 / n)


def levi_part(m: np.ndarray, theta: RootSubset) -> np.ndarray:
    out = np.zeros_like(m)
    for lo, hi in theta.blocks():
        out[lo:hi, lo:hi] = m[lo:hi, lo:hi]
    return out


def unipotent_transporter(fgp: Flag, fhm: Flag, fgm: Flag, tol: float = TRANSVERSE_TOL) -> np.ndarray:
    """The unique u in the unipotent radical of Stab(fgp) with u·fhm = fgm."""
    theta = fgp.theta
    if not (is_transverse(fgp, fgm, tol) and is_transverse(fgp, fhm, tol)):
        raise FlagError("transporter needs fgp transverse to both fhm and fgm")
    m = adapted_frame(fgp, fgm, tol)
    minv = np.linalg.inv(m)
    e = fhm.act(minv)
    me = adapted_frame(standard_flag(theta), e, tol)
    levi = levi_part(me, theta)
    nmat = me @ np.linalg.inv(levi)
    u = m @ np.linalg.solve(nmat, minv)
    resid = fhm.act(u).distance(fgm)
    if resid > 1e-6:
        warnings.warn(f"ill-conditioned transporter, residual {resid:.2e}", TransporterWarning)
    return u


def stabilizer_dimension(flags: list, tol: float = 1e-8) -> int:
    """Dimension of the Lie algebra of the joint stabilizer in SL(n) of the flags."""
    n = flags[0].n
    rows = []
    eye = np.eye(n)
    for f in flags:
        for d in f.theta.dims:
            q = f.subspace(d)
            comp = eye - q @ q.T
            # vec(comp X q) = (q^T kron comp) vec(X), column-major vec
            rows.append(np.kron(q.T, comp))
    rows.append(eye.reshape(1, -1, order="F"))
    a = np.vstack(rows)
    s = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(s > tol * s[0]))
    return n * n - rank
