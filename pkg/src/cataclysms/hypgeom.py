"""Upper half-plane geometry: Möbius actions, oriented geodesics, crossings."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

TANGENCY_TOL = 1e-10
ENDPOINT_TOL = 1e-12


class GeometryError(ValueError):
    pass


class TransversalityError(GeometryError):
    """An arc meets a geodesic non-transversally (tangent, or at an arc endpoint)."""


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise GeometryError(f"plane point needs y > 0, got {self.y!r}")

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def to_json(self) -> list:
        return [float(self.x), float(self.y)]


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of RP^1 = R ∪ {∞}, as a unit vector (first nonzero coordinate > 0).

    The real number ``t`` is the vector ``(t, 1)``; infinity is ``(1, 0)``.
    """

    u: float
    v: float

    def __init__(self, u: float, v: float):
        r = math.hypot(u, v)
        if r == 0:
            raise GeometryError("zero projective vector")
        if abs(r - 1.0) > 4 * np.finfo(float).eps:
            u, v = u / r, v / r
        if u < 0 or (u == 0 and v < 0):
            u, v = -u, -v
        object.__setattr__(self, "u", float(u))
        object.__setattr__(self, "v", float(v))

    @classmethod
    def from_real(cls, t: float) -> "BoundaryPoint":
        return cls(float(t), 1.0)

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(1.0, 0.0)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.u, self.v])

    def is_infinity(self, tol: float = ENDPOINT_TOL) -> bool:
        return abs(self.v) <= tol

    @property
    def value(self) -> float:
        return math.inf if self.v == 0 else self.u / self.v

    def close(self, other: "BoundaryPoint", tol: float = 1e-9) -> bool:
        return abs(self.u * other.v - self.v * other.u) <= tol

    def to_json(self) -> list:
        return [float(self.u), float(self.v)]


@dataclass(frozen=True)
class GeodesicLine:
    neg: BoundaryPoint
    pos: BoundaryPoint

    def __post_init__(self):
        if self.neg.close(self.pos, 1e-14):
            raise GeometryError("geodesic endpoints coincide")

    def reversed(self) -> "GeodesicLine":
        return GeodesicLine(self.pos, self.neg)

    def same_line(self, other: "GeodesicLine", tol: float = 1e-9) -> bool:
        """Same unoriented geodesic."""
        return (self.neg.close(other.neg, tol) and self.pos.close(other.pos, tol)) or (
            self.neg.close(other.pos, tol) and self.pos.close(other.neg, tol)
        )

    def same_oriented(self, other: "GeodesicLine", tol: float = 1e-9) -> bool:
        return self.neg.close(other.neg, tol) and self.pos.close(other.pos, tol)

    def to_json(self) -> list:
        return [self.neg.to_json(), self.pos.to_json()]


Point = Union[PlanePoint, BoundaryPoint, GeodesicLine]


def moebius(g, p):
    """Fractional-linear action of g in SL(2, R) on plane points, boundary points or lines."""
    g = np.asarray(g, dtype=float)
    if isinstance(p, PlanePoint):
        z = p.z
        w = (g[0, 0] * z + g[0, 1]) / (g[1, 0] * z + g[1, 1])
        return PlanePoint(w.real, w.imag)
    if isinstance(p, BoundaryPoint):
        w = g @ p.vector
        return BoundaryPoint(w[0], w[1])
    if isinstance(p, GeodesicLine):
        return GeodesicLine(moebius(g, p.neg), moebius(g, p.pos))
    raise TypeError(f"cannot act on {type(p).__name__}")


def distance(p: PlanePoint, q: PlanePoint) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y))


def is_hyperbolic(g) -> bool:
    return abs(float(np.trace(g))) > 2.0


def axis(g) -> GeodesicLine:
    """Axis of a hyperbolic element, oriented from repelling to attracting fixed point."""
    g = np.asarray(g, dtype=float)
    if not is_hyperbolic(g):
        raise GeometryError(f"element is not hyperbolic (trace {np.trace(g)!r})")
    w, v = np.linalg.eig(g)
    order = np.argsort(np.abs(w))
    rep = np.real(v[:, order[0]])
    att = np.real(v[:, order[1]])
    return GeodesicLine(BoundaryPoint(*rep), BoundaryPoint(*att))


def translation_length(g) -> float:
    t = abs(float(np.trace(g)))
    return 2.0 * math.acosh(t / 2.0)


def standardize(p: PlanePoint, q: PlanePoint) -> tuple:
    """Return (M, L): M in SL(2,R) maps p to i and q to i e^L on the imaginary axis."""
    if p == q:
        raise GeometryError("arc endpoints coincide")
    line = line_through(p, q)
    # columns e (end) and s (start): M^{-1} sends (1,0)->e (infinity) and (0,1)->s (zero)
    b = np.column_stack([line.pos.vector, line.neg.vector])
    if np.linalg.det(b) < 0:
        b[:, 1] = -b[:, 1]
    b = b / math.sqrt(np.linalg.det(b))
    m = np.linalg.inv(b)
    y0 = moebius(m, p).y
    s = np.diag([1.0 / math.sqrt(y0), math.sqrt(y0)])
    m = s @ m
    return m, distance(p, q)


def line_through(p: PlanePoint, q: PlanePoint) -> GeodesicLine:
    """Geodesic through p and q oriented from p towards q."""
    if abs(p.x - q.x) <= 1e-15 * max(1.0, abs(p.x)):
        up = q.y > p.y
        base = BoundaryPoint.from_real(p.x)
        inf = BoundaryPoint.infinity()
        return GeodesicLine(base, inf) if up else GeodesicLine(inf, base)
    c = (abs(p.z) ** 2 - abs(q.z) ** 2) / (2.0 * (p.x - q.x))
    r = abs(p.z - c)
    left = BoundaryPoint.from_real(c - r)
    right = BoundaryPoint.from_real(c + r)
    return GeodesicLine(left, right) if q.x > p.x else GeodesicLine(right, left)


def point_at(p: PlanePoint, q: PlanePoint, t: float) -> PlanePoint:
    """Point at hyperbolic-arclength fraction t along the segment from p to q."""
    m, length = standardize(p, q)
    w = complex(0.0, math.exp(t * length))
    minv = np.linalg.inv(m)
    return moebius(minv, PlanePoint.from_complex(w))


def crossing(p: PlanePoint, q: PlanePoint, line: GeodesicLine, tol: float = TANGENCY_TOL) -> Optional[tuple]:
    """Transverse intersection of the segment [p, q] with ``line``.

    Returns ``(t, sign)`` with t in (0, 1) the arclength fraction along the
    segment, and sign = +1 when the line crosses from the right of the arc
    to its left (the frame (arc, line) is positively oriented), else -1.
    Returns None if they do not meet.
    """
    m, length = standardize(p, q)
    return _crossing_std(m, length, line, tol)


def _crossing_std(m, length, line, tol=TANGENCY_TOL):
    u = m @ line.neg.vector
    v = m @ line.pos.vector
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # degenerate: an endpoint of the line at 0 or ∞ means it is asymptotic to the arc's line
    if min(abs(u[0]), abs(u[1]), abs(v[0]), abs(v[1])) <= tol:
        if _same_support(u, v, tol):
            raise TransversalityError("arc lies along the geodesic")
        return None
    su = u[0] * u[1]
    sv = v[0] * v[1]
    if su * sv > 0:
        return None
    y = math.sqrt(-(u[0] / u[1]) * (v[0] / v[1]))
    s = math.log(y)
    t = s / length
    if abs(s) <= tol or abs(s - length) <= tol:
        raise TransversalityError("arc endpoint lies on the geodesic")
    if t <= 0 or t >= 1:
        return None
    # line moving towards negative x (right-to-left for an upward arc) is a positive crossing
    sign = 1 if su > 0 else -1
    return t, sign


def _same_support(u, v, tol):
    zero_u = abs(u[0]) <= tol
    zero_v = abs(v[0]) <= tol
    inf_u = abs(u[1]) <= tol
    inf_v = abs(v[1]) <= tol
    return (zero_u and inf_v) or (inf_u and zero_v)


def crossing_parameter(arc: tuple, line: GeodesicLine, tol: float = TANGENCY_TOL) -> Optional[tuple]:
    """``crossing`` for an arc given as an ordered pair of plane points."""
    return crossing(arc[0], arc[1], line, tol)


def distance_to_segment(m, length: float, z: PlanePoint) -> float:
    """Distance from z to the standardized segment [i, i e^length] (m standardizes)."""
    w = moebius(m, z)
    r = abs(w.z)
    if r < 1.0:
        return distance(w, PlanePoint(0.0, 1.0))
    if r > math.exp(length):
        return distance(w, PlanePoint(0.0, math.exp(length)))
    return math.asinh(abs(w.x) / w.y)


def distance_to_line(line: GeodesicLine, z: PlanePoint) -> float:
    b = np.column_stack([line.pos.vector, line.neg.vector])
    if np.linalg.det(b) < 0:
        b[:, 1] = -b[:, 1]
    b = b / math.sqrt(np.linalg.det(b))
    w = moebius(np.linalg.inv(b), z)
    return math.asinh(abs(w.x) / w.y)


def lines_cross(a: GeodesicLine, b: GeodesicLine, tol: float = 1e-10) -> bool:
    """Whether two geodesics intersect transversally (endpoints interleave)."""
    pts = [a.neg, a.pos]

    def side(p):
        # sign of the cross ratio-type determinant relative to line a
        d1 = pts[0].u * p.v - pts[0].v * p.u
        d2 = pts[1].u * p.v - pts[1].v * p.u
        return d1 * d2

    s1 = side(b.neg)
    s2 = side(b.pos)
    if abs(s1) <= tol or abs(s2) <= tol:
        return False
    # in RP^1 endpoints interleave iff the cross-ratio is negative
    return _cross_ratio_sign(a.neg, a.pos, b.neg, b.pos) < 0


def _cross_ratio_sign(a, b, c, d) -> float:
    def det(x, y):
        return x.u * y.v - x.v * y.u

    return np.sign(det(a, c) * det(b, d) * det(a, d) * det(b, c))
