"""Finite laminations from multicurves, their lifts, and separation chains along arcs.

Lifts of a closed curve crossing a compact arc are found by a breadth-first
search over translates of the fundamental polygon lying in a tube around the
arc.  Every translate meeting the arc lies within the circumradius of it, so
the search is complete once it stops growing; ``depth`` caps the number of
search steps and results are checked for stability under ``depth + 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .hypgeom import (
    BoundaryPoint,
    GeodesicLine,
    PlanePoint,
    TransversalityError,
    _crossing_std,
    axis,
    distance_to_line,
    distance_to_segment,
    moebius,
    point_at,
    standardize,
)
from .surface import BASE_POINT, FuchsianRep, Word, circumradius, evaluate, reduce_point

DEFAULT_DEPTH = 8
MAX_DEPTH = 128
TUBE_MARGIN = 0.05
DEFAULT_BASE_POINT = PlanePoint(0.0123, 1.0171)


class LaminationError(ValueError):
    pass


class DepthInsufficientError(LaminationError):
    pass


class NotTightlyTransverseError(LaminationError):
    pass


@dataclass(frozen=True)
class Curve:
    id: str
    word: Word
    orientation: int = 1

    def oriented_word(self) -> Word:
        return self.word if self.orientation > 0 else self.word.inverse()

    def to_json(self) -> dict:
        return {"id": self.id, "word": str(self.word), "orientation": self.orientation}


@dataclass(frozen=True)
class Leaf:
    """A lift of a lamination leaf: an oriented geodesic of the universal cover.

    ``conjugator`` and ``curve_word`` give the deck element ``c w c^{-1}``
    whose axis is ``line`` (oriented by the curve's chosen orientation).
    Supplied leaves may have no deck word.
    """

    curve: str
    line: GeodesicLine
    conjugator: Optional[Word] = None
    curve_word: Optional[Word] = None

    @property
    def word(self) -> Optional[Word]:
        if self.conjugator is None or self.curve_word is None:
            return None
        return self.conjugator * self.curve_word * self.conjugator.inverse()

    def reversed(self) -> "Leaf":
        cw = None if self.curve_word is None else self.curve_word.inverse()
        return Leaf(self.curve, self.line.reversed(), self.conjugator, cw)

    def same(self, other: "Leaf", tol: float = 1e-9) -> bool:
        return self.curve == other.curve and self.line.same_line(other.line, tol)

    def translate(self, rho0: FuchsianRep, g: Word) -> "Leaf":
        conj = None if self.conjugator is None else g * self.conjugator
        return Leaf(self.curve, moebius(evaluate(rho0, g), self.line), conj, self.curve_word)

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "line": self.line.to_json(),
            "conjugator": None if self.conjugator is None else str(self.conjugator),
            "curve_word": None if self.curve_word is None else str(self.curve_word),
        }


@dataclass(frozen=True)
class Crossing:
    leaf: Leaf
    t: float
    sign: int

    def positive_leaf(self) -> Leaf:
        """The leaf oriented so that the arc crosses it positively."""
        return self.leaf if self.sign > 0 else self.leaf.reversed()


def side_of(line: GeodesicLine, z: PlanePoint) -> int:
    """+1 if z is to the left of the oriented line, -1 if to the right."""
    b = np.column_stack([line.pos.vector, line.neg.vector])
    if np.linalg.det(b) < 0:
        b[:, 1] = -b[:, 1]
    w = moebius(np.linalg.inv(b / math.sqrt(np.linalg.det(b))), z)
    return 1 if w.x < 0 else -1


@dataclass(frozen=True)
class Region:
    """A complementary region, identified locally by its sides relative to a leaf set."""

    sample: PlanePoint
    signature: tuple = ()

    def to_json(self) -> dict:
        return {"sample": self.sample.to_json(), "signature": list(self.signature)}


@dataclass
class SeparationChain:
    """Ordered crossings of an arc with lifted leaves, and the regions between them."""

    arc: tuple
    crossings: list
    regions: list = field(default_factory=list)
    depth: int = 0
    exact: bool = True

    def __post_init__(self):
        ts = [c.t for c in self.crossings]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise NotTightlyTransverseError("crossing parameters are not strictly increasing")
        for a, b in zip(self.crossings, self.crossings[1:]):
            if a.leaf.same(b.leaf):
                raise NotTightlyTransverseError("consecutive crossings of the same leaf")
        if not self.regions:
            self.regions = self._build_regions()

    def _build_regions(self) -> list:
        p, q = self.arc
        ts = [0.0] + [c.t for c in self.crossings] + [1.0]
        regs = []
        for i in range(len(ts) - 1):
            if i == 0:
                z = p
            elif i == len(ts) - 2:
                z = q
            else:
                z = point_at(p, q, 0.5 * (ts[i] + ts[i + 1]))
            sig = tuple(side_of(c.leaf.line, z) for c in self.crossings)
            regs.append(Region(z, sig))
        return regs

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def leaves(self) -> list:
        return [c.leaf for c in self.crossings]

    def positive_leaves(self) -> list:
        return [c.positive_leaf() for c in self.crossings]

    def entry_leaf(self, i: int) -> Optional[Leaf]:
        """g_R^0 for region i (the leaf crossed to enter it)."""
        return self.crossings[i - 1].positive_leaf() if i >= 1 else None

    def exit_leaf(self, i: int) -> Optional[Leaf]:
        """g_R^1 for region i (the leaf crossed to leave it)."""
        return self.crossings[i].positive_leaf() if i < len(self.crossings) else None

    @property
    def length(self) -> float:
        return standardize(*self.arc)[1]

    def piece_lengths(self) -> list:
        ts = [0.0] + [c.t for c in self.crossings] + [1.0]
        L = self.length
        return [(b - a) * L for a, b in zip(ts, ts[1:])]

    def reversed(self) -> "SeparationChain":
        cs = [Crossing(c.leaf, 1.0 - c.t, -c.sign) for c in reversed(self.crossings)]
        return SeparationChain((self.arc[1], self.arc[0]), cs, depth=self.depth, exact=self.exact)

    def sub(self, i: int, j: int) -> "SeparationChain":
        """Chain between regions i and j (i < j) along the same arc."""
        regs = self.regions
        p, q = regs[i].sample, regs[j].sample
        m, L = standardize(p, q)
        cs = []
        for c in self.crossings[i:j]:
            hit = _crossing_std(m, L, c.leaf.line)
            if hit is None:
                raise LaminationError("sub-chain lost a crossing")
            cs.append(Crossing(c.leaf, hit[0], hit[1]))
        return SeparationChain((p, q), cs, depth=self.depth, exact=self.exact)

    def to_json(self) -> dict:
        return {
            "arc": [self.arc[0].to_json(), self.arc[1].to_json()],
            "crossings": [
                {"leaf": c.leaf.to_json(), "t": c.t, "sign": c.sign} for c in self.crossings
            ],
            "regions": [r.to_json() for r in self.regions],
            "depth": self.depth,
            "exact": self.exact,
        }


def divergence_radius_proxy(chain: SeparationChain) -> list:
    """r(R) = max(0, ceil(-log l)) for the length l of the arc inside each region."""
    out = []
    for ell in chain.piece_lengths():
        out.append(max(0, math.ceil(-math.log(ell) - 1e-12)) if ell > 0 else math.inf)
    return out


def radius_from_length(ell: float) -> int:
    return max(0, math.ceil(-math.log(ell) - 1e-12))


class _Tiling:
    """Translates of the fundamental polygon, keyed by their centres."""

    def __init__(self, rho0: FuchsianRep):
        self.rho0 = rho0
        self.radius = circumradius(rho0.genus)
        gens = [Word([i]) for i in range(1, rho0.presentation.rank + 1)]
        self.gens = gens + [g.inverse() for g in gens]
        self.gen_mats = [evaluate(rho0, g) for g in self.gens]

    @staticmethod
    def key(mat) -> tuple:
        c = moebius(mat, BASE_POINT)
        return (round(c.x, 7), round(math.log(c.y), 7))

    def tiles_near_segment(self, p: PlanePoint, q: PlanePoint, depth: int) -> tuple:
        """Tiles whose centre lies within circumradius + margin of [p, q].

        Returns (tiles, truncated) where tiles is a list of (Word, matrix).
        """
        m, L = standardize(p, q)
        reach = self.radius + TUBE_MARGIN
        w0, _ = reduce_point(self.rho0, p)
        start = (w0, evaluate(self.rho0, w0))
        seen = {self.key(start[1])}
        out = [start]
        frontier = [start]
        truncated = False
        for step in range(depth + 1):
            nxt = []
            for w, mat in frontier:
                for g, gm in zip(self.gens, self.gen_mats):
                    nm = mat @ gm
                    k = self.key(nm)
                    if k in seen:
                        continue
                    seen.add(k)
                    if distance_to_segment(m, L, moebius(nm, BASE_POINT)) > reach:
                        continue
                    if step == depth:
                        truncated = True
                        continue
                    nxt.append((w * g, nm))
            out.extend(nxt)
            frontier = nxt
            if not frontier:
                break
        return out, truncated


class MultiCurve:
    """A finite lamination: disjoint simple closed geodesics given by words."""

    def __init__(self, rho0: FuchsianRep, curves: Sequence[Curve], depth: int = DEFAULT_DEPTH,
                 base_point: PlanePoint = DEFAULT_BASE_POINT, validate: bool = True):
        self.rho0 = rho0
        self.tiling = _Tiling(rho0)
        self.depth = depth
        ids = [c.id for c in curves]
        if len(set(ids)) != len(ids):
            raise LaminationError("curve ids must be unique")
        self.curves = {}
        for c in curves:
            rho0.presentation.check_word(c.word)
            if c.word.is_identity():
                raise LaminationError(f"curve {c.id} is trivial")
            if not c.word.is_cyclically_reduced():
                raise LaminationError(f"curve {c.id} word is not cyclically reduced")
            if c.word.root(4)[1] > 1:
                raise LaminationError(f"curve {c.id} is a proper power")
            if c.orientation not in (1, -1):
                raise LaminationError("orientation must be +1 or -1")
            self.curves[c.id] = c
        self._axes = {cid: axis(evaluate(rho0, c.oriented_word())) for cid, c in self.curves.items()}
        self._local = {cid: self._local_lifts(cid) for cid in self.curves}
        if validate:
            self.validate_disjoint()
        self.base_point = self._choose_base_point(base_point)

    def __len__(self) -> int:
        return len(self.curves)

    def curve_ids(self) -> list:
        return list(self.curves)

    def curve_leaf(self, cid: str) -> Leaf:
        c = self.curves[cid]
        return Leaf(cid, self._axes[cid], Word(), c.oriented_word())

    def _period_segment(self, cid: str) -> tuple:
        line = self._axes[cid]
        x0 = _closest_point(line, BASE_POINT)
        g = evaluate(self.rho0, self.curves[cid].oriented_word())
        return x0, moebius(g, x0)

    def _local_lifts(self, cid: str) -> list:
        """Lifts of curve cid passing near the base polygon (conjugators h^{-1})."""
        p, q = self._period_segment(cid)
        tiles, trunc = self.tiling.tiles_near_segment(p, q, MAX_DEPTH)
        if trunc:
            raise DepthInsufficientError(f"could not enclose one period of curve {cid}")
        base = self.curve_leaf(cid)
        lifts = []
        for w, _ in tiles:
            leaf = base.translate(self.rho0, w.inverse())
            if not any(leaf.same(o) for o in lifts):
                lifts.append(leaf)
        return lifts

    def candidate_leaves(self, p: PlanePoint, q: PlanePoint, depth: int) -> tuple:
        tiles, trunc = self.tiling.tiles_near_segment(p, q, depth)
        out = []
        for w, mat in tiles:
            for cid, local in self._local.items():
                for s in local:
                    line = moebius(mat, s.line)
                    out.append(Leaf(cid, line, w * s.conjugator, s.curve_word))
        return out, trunc

    def _crossings(self, p: PlanePoint, q: PlanePoint, depth: int) -> tuple:
        m, L = standardize(p, q)
        cands, trunc = self.candidate_leaves(p, q, depth)
        hits = []
        for leaf in cands:
            hit = _crossing_std(m, L, leaf.line)
            if hit is None:
                continue
            if any(leaf.same(h.leaf) for h in hits):
                continue
            hits.append(Crossing(leaf, hit[0], hit[1]))
        hits.sort(key=lambda c: c.t)
        return hits, trunc

    def lift_crossings(self, p: PlanePoint, q: PlanePoint, depth: Optional[int] = None) -> SeparationChain:
        """Separation chain for the geodesic arc from p to q."""
        d = depth or self.depth
        if p == q:
            return SeparationChain((p, q), [], depth=d)
        while True:
            hits, trunc = self._crossings(p, q, d)
            if not trunc:
                hits2, trunc2 = self._crossings(p, q, d + 2)
                if not trunc2 and _same_hits(hits, hits2):
                    return SeparationChain((p, q), hits, depth=d)
            if 2 * d > MAX_DEPTH:
                raise DepthInsufficientError(f"crossing set not stable up to depth {d}")
            d *= 2

    def region_between(self, gamma: Word, p0: Optional[PlanePoint] = None,
                       depth: Optional[int] = None) -> SeparationChain:
        """Chain from the region of p0 to its translate by gamma."""
        p0 = p0 or self.base_point
        if gamma.is_identity():
            return SeparationChain((p0, p0), [], depth=depth or self.depth)
        q = moebius(evaluate(self.rho0, gamma), p0)
        if abs(q.x - p0.x) <= 1e-12 and abs(q.y - p0.y) <= 1e-12:
            return SeparationChain((p0, p0), [], depth=depth or self.depth)
        return self.lift_crossings(p0, q, depth)

    def validate_disjoint(self) -> None:
        """Check that no lift of any curve crosses one period of any axis."""
        for cid in self.curves:
            p, q = self._period_segment(cid)
            m, L = standardize(p, q)
            cands, trunc = self.candidate_leaves(p, q, MAX_DEPTH)
            if trunc:
                raise DepthInsufficientError("disjointness check did not terminate")
            own = self._axes[cid]
            for leaf in cands:
                if leaf.curve == cid and leaf.line.same_line(own):
                    continue
                if leaf.line.same_line(own):
                    raise LaminationError(f"curves {cid} and {leaf.curve} have the same geodesic")
                try:
                    hit = _crossing_std(m, L, leaf.line)
                except TransversalityError:
                    hit = (0.0, 0)
                if hit is not None:
                    what = "is not simple" if leaf.curve == cid else f"meets curve {leaf.curve}"
                    raise LaminationError(f"curve {cid} {what}")

    def _choose_base_point(self, p: PlanePoint) -> PlanePoint:
        rng = np.random.default_rng(12345)
        for _ in range(100):
            if self.distance_to_lamination(p) > 1e-4:
                return p
            p = PlanePoint(p.x + 0.01 * rng.normal(), p.y * math.exp(0.01 * rng.normal()))
        raise LaminationError("could not place a base point off the lamination")

    def distance_to_lamination(self, p: PlanePoint) -> float:
        """Distance from p to the nearest lift (searched over the tile of p and its neighbours)."""
        w, _ = reduce_point(self.rho0, p)
        h = evaluate(self.rho0, w)
        best = math.inf
        for mat in [h] + [h @ g for g in self.tiling.gen_mats]:
            for loc in self._local.values():
                for s in loc:
                    best = min(best, distance_to_line(moebius(mat, s.line), p))
        return best

    def signed_intersection(self, gamma: Word, cid: str) -> int:
        """Signed count of crossings of the gamma-loop (from the base point) with curve cid."""
        chain = self.region_between(gamma)
        return sum(c.sign for c in chain.crossings if c.leaf.curve == cid)

    def to_json(self) -> list:
        return [c.to_json() for c in self.curves.values()]


def _same_hits(a: list, b: list) -> bool:
    return len(a) == len(b) and all(x.leaf.same(y.leaf) and abs(x.t - y.t) < 1e-9 for x, y in zip(a, b))


def _closest_point(line: GeodesicLine, z: PlanePoint) -> PlanePoint:
    b = np.column_stack([line.pos.vector, line.neg.vector])
    if np.linalg.det(b) < 0:
        b[:, 1] = -b[:, 1]
    b = b / math.sqrt(np.linalg.det(b))
    w = moebius(np.linalg.inv(b), z)
    return moebius(b, PlanePoint(0.0, abs(w.z)))


def multicurve_from_json(rho0: FuchsianRep, data: list, depth: int = DEFAULT_DEPTH) -> MultiCurve:
    curves = []
    for i, item in enumerate(data):
        cid = str(item.get("id", f"c{i + 1}"))
        curves.append(Curve(cid, Word.parse(item["word"]), int(item.get("orientation", 1))))
    return MultiCurve(rho0, curves, depth=depth)


def leaf_from_json(data: dict) -> Leaf:
    neg, pos = data["line"]
    conj = data.get("conjugator")
    cw = data.get("curve_word")
    return Leaf(str(data["curve"]), GeodesicLine(BoundaryPoint(*neg), BoundaryPoint(*pos)),
                None if conj is None else Word.parse(conj),
                None if cw is None else Word.parse(cw))


def chain_from_json(data: dict) -> SeparationChain:
    arc = tuple(PlanePoint(*xy) for xy in data["arc"])
    crossings = [Crossing(leaf_from_json(c["leaf"]), float(c["t"]), int(c["sign"]))
                 for c in data["crossings"]]
    return SeparationChain(arc, crossings, depth=int(data.get("depth", 0)),
                           exact=bool(data.get("exact", True)))


STANDARD_MULTICURVES = {
    "separating": [("c", "[a1,b1]")],
    "nonseparating": [("a1", "a1")],
    "pair": [("a1", "a1"), ("a2", "a2")],
    "pants": [("a1", "a1"), ("c", "[a1,b1]"), ("a2", "a2")],
}


def standard_multicurve(rho0: FuchsianRep, name: str, orientations: Sequence[int] | None = None,
                        depth: int = DEFAULT_DEPTH) -> MultiCurve:
    entries = STANDARD_MULTICURVES[name]
    orientations = orientations or [1] * len(entries)
    curves = [Curve(cid, Word.parse(w), o) for (cid, w), o in zip(entries, orientations)]
    return MultiCurve(rho0, curves, depth=depth)
