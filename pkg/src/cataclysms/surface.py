"""Closed surface group: words, the standard presentation and an explicit Fuchsian representation."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce as _fold
from typing import Iterable, Sequence

import numpy as np

from .hypgeom import PlanePoint, distance, moebius

RELATOR_TOL = 1e-9


class WordError(ValueError):
    pass


def _free_reduce(letters: Iterable[int]) -> tuple:
    out: list = []
    for x in letters:
        if x == 0:
            raise WordError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in signed generator indices.

    With genus g, index ``2h-1`` is ``a_h`` and ``2h`` is ``b_h``; a negative
    index is the inverse letter.
    """

    letters: tuple

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", _free_reduce(int(x) for x in letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse e.g. ``"a1 b1 A1 B1"``, ``"a1 b1^-1"`` or ``"[a1,b1]"``; ``"1"``/``""`` is the identity."""
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return cls()
        m = re.fullmatch(r"\[\s*(.+?)\s*,\s*(.+?)\s*\]", text)
        if m:
            return commutator(cls.parse(m.group(1)), cls.parse(m.group(2)))
        letters = []
        for tok in re.findall(r"[aAbB]\d+(?:\^-?\d+)?|\S", text):
            mt = re.fullmatch(r"([aAbB])(\d+)(?:\^(-?\d+))?", tok)
            if not mt:
                raise WordError(f"cannot parse token {tok!r} in {text!r}")
            ch, h, p = mt.group(1), int(mt.group(2)), int(mt.group(3) or 1)
            if h < 1:
                raise WordError(f"handle index must be >= 1 in {tok!r}")
            idx = 2 * h - 1 if ch.lower() == "a" else 2 * h
            sign = -1 if ch.isupper() else 1
            sign *= 1 if p > 0 else -1
            letters.extend([sign * idx] * abs(p))
        return cls(letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        out = []
        for x in self.letters:
            h = (abs(x) + 1) // 2
            ch = "a" if abs(x) % 2 == 1 else "b"
            out.append(f"{ch.upper() if x < 0 else ch}{h}")
        return " ".join(out)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self.letters))

    def is_identity(self) -> bool:
        return not self.letters

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def cyclic_reduce(self) -> tuple:
        """Return (c, w) with self = c w c^{-1} and w cyclically reduced."""
        lt = list(self.letters)
        i = 0
        while len(lt) - 2 * i >= 2 and lt[i] == -lt[len(lt) - 1 - i]:
            i += 1
        return Word(lt[:i]), Word(lt[i : len(lt) - i])

    def root(self, max_exponent: int = 4) -> tuple:
        """(v, k) with self = v^k for the largest k <= max_exponent (cyclically reduced input)."""
        n = len(self.letters)
        for k in range(min(max_exponent, n), 1, -1):
            if n % k == 0:
                v = self.letters[: n // k]
                if v * k == self.letters:
                    return Word(v), k
        return self, 1

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def to_json(self) -> str:
        return str(self)


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def reduce(w: Word | Sequence[int]) -> Word:
    return w if isinstance(w, Word) else Word(w)


@dataclass(frozen=True)
class SurfaceGroupPresentation:
    genus: int = 2

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be >= 2")

    @property
    def rank(self) -> int:
        return 2 * self.genus

    @property
    def generator_names(self) -> list:
        return [str(Word([i])) for i in range(1, self.rank + 1)]

    @property
    def relator(self) -> Word:
        return _fold(
            lambda acc, h: acc * commutator(Word([2 * h - 1]), Word([2 * h])),
            range(1, self.genus + 1),
            Word(),
        )

    def generators(self) -> list:
        return [Word([i]) for i in range(1, self.rank + 1)]

    def check_word(self, w: Word) -> None:
        if w.max_generator() > self.rank:
            raise WordError(f"unknown generator in {w} for genus {self.genus}")


def evaluate(rep, w: Word) -> np.ndarray:
    """Product of generator images; ``rep`` is any object with ``images`` (list of matrices) and ``n``."""
    images = rep.images
    inverses = rep.inverse_images
    if w.max_generator() > len(images):
        raise WordError(f"unknown generator in {w}")
    out = np.eye(rep.n)
    for x in w.letters:
        out = out @ (images[x - 1] if x > 0 else inverses[-x - 1])
    return out


class FuchsianRep:
    """Discrete faithful representation into SL(2, R), acting on the upper half plane."""

    def __init__(self, images: Sequence, genus: int = 2):
        self.presentation = SurfaceGroupPresentation(genus)
        self.images = [np.array(m, dtype=float) for m in images]
        if len(self.images) != self.presentation.rank:
            raise ValueError("wrong number of generators")
        self.inverse_images = [_inv2(m) for m in self.images]
        self.n = 2
        self.relator_residual = self._relator_residual()
        if self.relator_residual > RELATOR_TOL:
            raise ValueError(f"relator residual {self.relator_residual:.2e} too large")
        for i, m in enumerate(self.images):
            if abs(np.trace(m)) <= 2:
                raise ValueError(f"generator {i + 1} is not hyperbolic")

    @property
    def genus(self) -> int:
        return self.presentation.genus

    def _relator_residual(self) -> float:
        r = evaluate(self, self.presentation.relator)
        return min(float(np.abs(r - np.eye(2)).max()), float(np.abs(r + np.eye(2)).max()))

    def __call__(self, w: Word) -> np.ndarray:
        return evaluate(self, w)

    def act(self, w: Word, p):
        return moebius(evaluate(self, w), p)

    def to_json(self) -> dict:
        return {
            "kind": "fuchsian",
            "genus": self.genus,
            "n": 2,
            "generators": {
                name: m.tolist() for name, m in zip(self.presentation.generator_names, self.images)
            },
            "relator_residual": self.relator_residual,
        }


def _inv2(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _rot(phi: float) -> np.ndarray:
    """Rotation by angle phi about i."""
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return np.array([[c, s], [-s, c]])


def fuchsian_octagon(genus: int = 2) -> FuchsianRep:
    """Side pairings of the regular 4g-gon with vertex angle 2π/4g centred at i.

    The side ``j`` has its midpoint in direction ``2πj/4g``.  Handle ``h``
    pairs sides ``4h, 4h+2`` (giving ``a_h``) and ``4h+1, 4h+3`` (giving
    ``b_h^{-1}``), so that ``[a_1,b_1]...[a_g,b_g] = Id``.
    """
    nsides = 4 * genus
    r_in = math.acosh(1.0 / math.tan(math.pi / nsides))
    t = np.diag([math.exp(r_in), math.exp(-r_in)])

    def pair(j, jp):
        return _rot(2 * math.pi * j / nsides) @ t @ _rot(math.pi - 2 * math.pi * jp / nsides)

    images = []
    for h in range(genus):
        images.append(pair(4 * h, 4 * h + 2))
        images.append(_inv2(pair(4 * h + 1, 4 * h + 3)))
    return FuchsianRep(images, genus)


BASE_POINT = PlanePoint(0.0, 1.0)


def inradius(genus: int = 2) -> float:
    return math.acosh(1.0 / math.tan(math.pi / (4 * genus)))


def circumradius(genus: int = 2) -> float:
    return math.acosh(1.0 / math.tan(math.pi / (4 * genus)) ** 2)


def reduce_point(rho: FuchsianRep, p: PlanePoint, max_steps: int = 10000) -> tuple:
    """Dirichlet reduction: return (w, q) with q = rho(w)^{-1} p in the fundamental polygon.

    Repeatedly applies the generator (or inverse) that most decreases the
    distance to i.
    """
    w = Word()
    q = p
    gens = [Word([i]) for i in range(1, rho.presentation.rank + 1)]
    gens += [g.inverse() for g in gens]
    for _ in range(max_steps):
        d0 = distance(q, BASE_POINT)
        best = None
        for g in gens:
            q2 = moebius(evaluate(rho, g), q)
            d2 = distance(q2, BASE_POINT)
            if d2 < d0 - 1e-12 and (best is None or d2 < best[0]):
                best = (d2, g, q2)
        if best is None:
            return w, q
        _, g, q = best
        # q_new = g q_old, so p = rho(w) q_old = rho(w g^{-1}) q_new
        w = w * g.inverse()
    raise RuntimeError("point reduction did not terminate")
