"""Exact placing triangulation of full-dimensional integer point sets.

This is the one convex-hull engine in the package.  The volume oracle sums
the simplices it produces; the lower-hull code reads its boundary facets.
"""
from __future__ import annotations

from itertools import combinations
from math import gcd
from typing import Sequence

from .exact_linalg import determinant, rank

Point = tuple[int, ...]


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return 0
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for a in v:
        g = gcd(g, a)
    return [a // g for a in v] if g > 1 else v


def hyperplane_through(points: Sequence[Point]) -> tuple[tuple[int, ...], int]:
    """Primitive integer ``(a, b)`` with ``a.p == b`` for ``len(points) == dim``
    affinely independent points in Z^dim."""
    p0 = points[0]
    D = len(p0)
    W = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    a = []
    for j in range(D):
        minor = [row[:j] + row[j + 1:] for row in W]
        a.append((-1) ** j * determinant(minor))
    a = _primitive(a)
    return tuple(a), sum(x * y for x, y in zip(a, p0))


def initial_simplex(points: Sequence[Point]) -> list[int]:
    """Greedy affinely independent subset, taken in input order."""
    chosen: list[int] = []
    diffs: list[list[int]] = []
    for i, p in enumerate(points):
        if not chosen:
            chosen.append(i)
            continue
        cand = diffs + [[a - b for a, b in zip(p, points[chosen[0]])]]
        if rank(cand) == len(cand):
            chosen.append(i)
            diffs = cand
    return chosen


class PlacingTriangulation:
    """Incremental (placing) triangulation of a full-dimensional point set.

    ``simplices`` are tuples of point indices.  ``facets`` maps each boundary
    facet (sorted index tuple) to its outward hyperplane ``(a, b)`` so that
    ``a.x <= b`` holds on the hull.  Points that are not strictly beyond any
    current facet are skipped, as usual for placing.
    """

    def __init__(self, points: Sequence[Point]):
        self.points = [tuple(p) for p in points]
        D = len(self.points[0]) if self.points else 0
        self.dim = D
        start = initial_simplex(self.points)
        if len(start) != D + 1:
            raise ValueError(f"point set is not full-dimensional in Z^{D}")
        self.simplices: list[tuple[int, ...]] = [tuple(sorted(start))]
        self.facets: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
        for opposite in start:
            face = tuple(sorted(i for i in start if i != opposite))
            self.facets[face] = self._oriented(face, opposite)
        used = set(start)
        for i in range(len(self.points)):
            if i not in used:
                self._place(i)

    def _oriented(self, face: tuple[int, ...], inside: int):
        a, b = hyperplane_through([self.points[i] for i in face])
        if sum(x * y for x, y in zip(a, self.points[inside])) > b:
            a, b = tuple(-x for x in a), -b
        return a, b

    def _place(self, i: int) -> None:
        p = self.points[i]
        visible = [
            F for F, (a, b) in self.facets.items() if sum(x * y for x, y in zip(a, p)) > b
        ]
        if not visible:
            return
        ridge_owner: dict[tuple[int, ...], tuple[int, ...] | None] = {}
        for F in visible:
            self.simplices.append(tuple(sorted(F + (i,))))
            for ridge in combinations(F, len(F) - 1):
                ridge_owner[ridge] = None if ridge in ridge_owner else F
        for F in visible:
            del self.facets[F]
        for ridge, F in ridge_owner.items():
            if F is None:
                continue
            (opposite,) = set(F) - set(ridge)
            face = tuple(sorted(ridge + (i,)))
            self.facets[face] = self._oriented(face, opposite)

    def volume(self) -> int:
        """Sum of |det| over the simplices (normalized volume in Z^dim)."""
        total = 0
        for s in self.simplices:
            v0 = self.points[s[0]]
            total += abs(determinant([[a - b for a, b in zip(self.points[j], v0)] for j in s[1:]]))
        return total


def facets_bruteforce(points: Sequence[Point]) -> list[tuple[tuple[int, ...], int]]:
    """All facet hyperplanes of a full-dimensional point set, by trying every
    ``dim``-subset.  Deliberately naive; used as an independent oracle."""
    D = len(points[0])
    out = {}
    for combo in combinations(range(len(points)), D):
        pts = [points[i] for i in combo]
        if affine_rank(pts) != D - 1:
            continue
        a, b = hyperplane_through(pts)
        vals = [sum(x * y for x, y in zip(a, p)) for p in points]
        if all(v <= b for v in vals):
            out[(a, b)] = None
        elif all(v >= b for v in vals):
            out[(tuple(-x for x in a), -b)] = None
    return list(out)
