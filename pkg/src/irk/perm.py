"""Permutations on {0..n-1} stored as image tuples.

Points are 0-based internally. Everything that leaves the library (JSON,
``str``) is 1-based. Products are right-to-left: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence


def mul(p: tuple, q: tuple) -> tuple:
    """Raw composition of image tuples, q applied first."""
    return tuple(map(p.__getitem__, q))


def inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def ident(n: int) -> tuple:
    return tuple(range(n))


def raw_cycles(p: tuple) -> list[list[int]]:
    """Nontrivial cycles, each starting at its minimum, sorted by minimum."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        out.append(cyc)
    return out


def raw_displacement(p: tuple) -> int:
    return sum(len(c) - 1 for c in raw_cycles(p))


class Permutation:
    """An immutable permutation of {0..n-1}.

    Built from 0-based images. Use :meth:`from_cycles` or :func:`parse_perm`
    for the 1-based cycle notation.
    """

    __slots__ = ("_img",)

    def __init__(self, images: Iterable[int]):
        img = tuple(images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img) - 1}: {img}")
        object.__setattr__(self, "_img", img)

    @classmethod
    def _trusted(cls, img: tuple) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "_img", img)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(ident(n))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build from 1-based cycles. The cycles must be disjoint."""
        img = list(range(n))
        used = set()
        for cyc in cycles:
            pts = [int(c) - 1 for c in cyc]
            for x in pts:
                if not 0 <= x < n:
                    raise ValueError(f"point {x + 1} outside 1..{n}")
                if x in used:
                    raise ValueError(f"cycles are not disjoint at point {x + 1}")
                used.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls._trusted(tuple(img))

    @classmethod
    def cycle(cls, points: Sequence[int], n: int) -> "Permutation":
        """A single 1-based cycle."""
        return cls.from_cycles([points], n)

    @property
    def images(self) -> tuple:
        return self._img

    @property
    def degree(self) -> int:
        return len(self._img)

    def __call__(self, x: int) -> int:
        return self._img[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self._img) != len(other._img):
            raise ValueError("degree mismatch")
        return Permutation._trusted(mul(self._img, other._img))

    def inverse(self) -> "Permutation":
        return Permutation._trusted(inv(self._img))

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = ident(len(self._img))
        b = base._img
        while e:
            if e & 1:
                out = mul(out, b)
            b = mul(b, b)
            e >>= 1
        return Permutation._trusted(out)

    def conjugate(self, by: "Permutation") -> "Permutation":
        """by * self * by^-1."""
        return by * self * by.inverse()

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self._img) if i != x]

    def cycles(self) -> list[list[int]]:
        """0-based canonical cycles."""
        return raw_cycles(self._img)

    def cycle_decomposition(self) -> list[list[int]]:
        """1-based canonical cycles."""
        return [[x + 1 for x in c] for c in raw_cycles(self._img)]

    def cycle_type(self) -> tuple:
        return tuple(sorted((len(c) for c in raw_cycles(self._img)), reverse=True))

    def displacement(self) -> int:
        return raw_displacement(self._img)

    def parity(self) -> str:
        return "odd" if self.displacement() % 2 else "even"

    def is_even(self) -> bool:
        return self.displacement() % 2 == 0

    def order(self) -> int:
        from math import lcm

        out = 1
        for c in raw_cycles(self._img):
            out = lcm(out, len(c))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, n={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)

    def __reduce__(self):
        return (Permutation, (self._img,))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p∘q, with q applied first."""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def transposition(a: int, b: int, n: int) -> Permutation:
    """The 1-based transposition (a b)."""
    return Permutation.from_cycles([[a, b]], n)


def parity(p: Permutation) -> str:
    return p.parity()


def displacement(p: Permutation) -> int:
    return p.displacement()


def from_cycles(cycles, n: int) -> Permutation:
    return Permutation.from_cycles(cycles, n)


def cycle_decomposition(p: Permutation) -> list[list[int]]:
    return p.cycle_decomposition()


def format_cycles(p: Permutation) -> str:
    cyc = p.cycle_decomposition()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse '(1 2)(3 4 5)' or '(1,2)(3,4,5)' into 1-based cycle lists."""
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return []
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"cannot parse cycle notation: {text!r}")
    out = []
    for body in _CYCLE_RE.findall(text):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(pts) > 1:
            out.append(pts)
    return out


def parse_perm(text: str, n: int | None = None) -> Permutation:
    """Parse 1-based cycle notation. Degree defaults to the largest point."""
    cycles = parse_cycles(text)
    top = max((max(c) for c in cycles), default=1)
    if n is None:
        n = top
    if top > n:
        raise ValueError(f"point {top} exceeds degree {n}")
    # A product of non-disjoint cycles is allowed and multiplied right to left.
    out = Permutation.identity(n)
    for c in cycles:
        out = out * Permutation.cycle(c, n)
    return out


def perm_to_json(p: Permutation) -> dict:
    return {"n": p.degree, "cycles": p.cycle_decomposition()}


def perm_from_json(obj, n: int | None = None) -> Permutation:
    """Accept {"n", "cycles"}, {"n", "images"}, or a cycle string."""
    if isinstance(obj, str):
        return parse_perm(obj, n)
    if not isinstance(obj, dict):
        raise ValueError(f"unsupported permutation encoding: {obj!r}")
    deg = int(obj.get("n", n or 0))
    if n is not None and deg != n:
        raise ValueError(f"degree {deg} does not match expected {n}")
    if "images" in obj:
        imgs = [int(x) - 1 for x in obj["images"]]
        if len(imgs) != deg:
            raise ValueError("images length does not match n")
        return Permutation(imgs)
    if "cycles" in obj:
        cycles = [list(c) for c in obj["cycles"]]
        out = Permutation.identity(deg)
        for c in cycles:
            if len(c) > 1:
                out = out * Permutation.cycle(c, deg)
        return out
    raise ValueError("permutation object needs 'cycles' or 'images'")
