"""Regular subdivisions from exact (possibly layered) height functions.

A layered height assigns every point a vector of rationals ``(h_0, ..., h_L)``
read as ``h_0 + eps*h_1 + eps^2*h_2 + ...`` for infinitesimal ``eps``.  The
induced subdivision is obtained by taking the lower hull for ``h_0`` and then
refining every cell by the next level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exact_linalg import solve_rational
from .hull import PlacingTriangulation, affine_rank
from .lattice_polytope import PointConfiguration

Cell = tuple[int, ...]
# affine functional: (constant, coefficients) over the ambient space
Functional = tuple[Fraction, tuple[Fraction, ...]]


class EpsilonError(RuntimeError):
    pass


@dataclass(frozen=True)
class HeightFunction:
    domain: PointConfiguration
    levels: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        levels = tuple(tuple(Fraction(x) for x in lvl) for lvl in self.levels)
        if any(len(lvl) != len(self.domain) for lvl in levels):
            raise ValueError("every level needs one height per point")
        object.__setattr__(self, "levels", levels)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def flatten(self, eps: Fraction) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * len(self.domain)
        w = Fraction(1)
        for lvl in self.levels:
            out = [a + w * b for a, b in zip(out, lvl)]
            w *= eps
        return tuple(out)


@dataclass(frozen=True)
class Subdivision:
    """Maximal cells (sorted point-index tuples) over ``base``.

    ``witnesses[c][k]`` is an affine functional equal to level ``k`` on cell
    ``c`` and, lexicographically together with the earlier levels, strictly
    below it on every point outside the cell.
    """

    base: PointConfiguration
    cells: tuple[Cell, ...]
    witnesses: tuple[tuple[Functional, ...], ...] | None = None
    heights: HeightFunction | None = None
    epsilon: Fraction | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def cell_sets(self) -> frozenset[frozenset[tuple[int, ...]]]:
        pts = self.base.points
        return frozenset(frozenset(pts[i] for i in c) for c in self.cells)

    def same_cells(self, other: "Subdivision") -> bool:
        return self.cell_sets() == other.cell_sets()

    def cell_points(self, c: Cell) -> PointConfiguration:
        return PointConfiguration(tuple(self.base.points[i] for i in c))

    def __len__(self) -> int:
        return len(self.cells)


class Triangulation(Subdivision):
    """A subdivision whose cells are simplices: ``dim + 1`` affinely
    independent points each."""

    def __post_init__(self):
        d = self.base.dim
        for c in self.cells:
            pts = [self.base.points[i] for i in c]
            if len(c) != d + 1 or affine_rank(pts) != d:
                raise ValueError(f"cell {c} is not a {d}-simplex")

    @classmethod
    def from_subdivision(cls, S: Subdivision) -> "Triangulation":
        return cls(S.base, S.cells, S.witnesses, S.heights, S.epsilon, dict(S.metadata))


def _evaluate(w: Functional, p: Sequence[int]) -> Fraction:
    return w[0] + sum(c * x for c, x in zip(w[1], p))


def interpolant(points: Sequence[Sequence[int]], values: Sequence[Fraction]) -> Functional:
    """An ambient affine functional matching ``values`` on ``points``."""
    n = len(points[0])
    sol = solve_rational([[1, *p] for p in points], list(values))
    if sol is None:
        raise ValueError("values are not affine on the given points")
    return sol[0], tuple(sol[1:]) if n else ()


def _lower_hull_local(P: PointConfiguration, h: Sequence[Fraction]) -> list[Cell]:
    d = P.dim
    if d == 0 or len(P) == 1:
        return [tuple(range(len(P)))]
    scale = lcm(*(Fraction(x).denominator for x in h))
    H = [int(Fraction(x) * scale) for x in h]
    lifted = [c + (hi,) for c, hi in zip(P.coords, H)]
    if affine_rank(lifted) == d:
        return [tuple(range(len(P)))]
    hull = PlacingTriangulation(lifted)
    planes = {ab for ab in hull.facets.values() if ab[0][-1] < 0}
    cells = set()
    for a, b in planes:
        cells.add(tuple(i for i, q in enumerate(lifted) if sum(x * y for x, y in zip(a, q)) == b))
    return sorted(cells)


def lower_hull_subdivision(P: PointConfiguration, h: Sequence) -> Subdivision:
    """Regular subdivision of ``conv(P)`` induced by single-level heights ``h``."""
    h = [Fraction(x) for x in h]
    cells = _lower_hull_local(P, h)
    witnesses = tuple(
        (interpolant([P.points[i] for i in c], [h[i] for i in c]),) for c in cells
    )
    return Subdivision(P, tuple(cells), witnesses, HeightFunction(P, (tuple(h),)))


def refine(S: Subdivision, h: Sequence) -> Subdivision:
    """Split every cell of ``S`` by the lower hull of ``h`` restricted to it."""
    h = [Fraction(x) for x in h]
    new_cells: list[Cell] = []
    new_wit: list[tuple[Functional, ...]] = []
    old_wit = S.witnesses or tuple(() for _ in S.cells)
    for cell, wit in zip(S.cells, old_wit):
        sub = PointConfiguration(tuple(S.base.points[i] for i in cell))
        for local in _lower_hull_local(sub, [h[i] for i in cell]):
            glob = tuple(cell[j] for j in local)
            new_cells.append(glob)
            w = interpolant([S.base.points[i] for i in glob], [h[i] for i in glob])
            new_wit.append(wit + (w,))
    order = sorted(range(len(new_cells)), key=lambda k: new_cells[k])
    levels = (S.heights.levels if S.heights else ()) + (tuple(h),)
    return Subdivision(
        S.base,
        tuple(new_cells[k] for k in order),
        tuple(new_wit[k] for k in order),
        HeightFunction(S.base, levels),
    )


def trivial_subdivision(P: PointConfiguration) -> Subdivision:
    return Subdivision(P, (tuple(range(len(P))),), ((),), HeightFunction(P, ()))


def induced_subdivision(P: PointConfiguration, h: HeightFunction) -> Subdivision:
    """Subdivision induced by ``sum_k eps^k * level_k`` for all small ``eps > 0``."""
    S = trivial_subdivision(P)
    for lvl in h.levels:
        S = refine(S, lvl)
    return S


def witnesses_hold(S: Subdivision) -> bool:
    """Check the stored lexicographic witnesses against ``S.heights``."""
    if S.witnesses is None or S.heights is None:
        return False
    levels = S.heights.levels
    for cell, wit in zip(S.cells, S.witnesses):
        if len(wit) != len(levels):
            return False
        inside = set(cell)
        for i, p in enumerate(S.base.points):
            diff = [lvl[i] - _evaluate(w, p) for lvl, w in zip(levels, wit)]
            first = next((x for x in diff if x != 0), Fraction(0))
            if i in inside:
                if first != 0:
                    return False
            elif first <= 0:
                return False
    return True


def concretize_epsilon(
    P: PointConfiguration,
    h: HeightFunction,
    target: Subdivision | None = None,
    max_halvings: int = 64,
) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Smallest ``m`` with ``eps = 2^-m`` whose flat heights reproduce ``target``.

    ``target`` defaults to the lexicographic subdivision of ``h``.  Returns
    ``(eps, flat_heights)``.
    """
    if target is None:
        target = induced_subdivision(P, h)
    want = target.cell_sets()
    eps = Fraction(1, 2)
    for _ in range(max_halvings):
        flat = h.flatten(eps)
        if lower_hull_subdivision(P, flat).cell_sets() == want:
            return eps, flat
        eps /= 2
    raise EpsilonError(f"no eps >= 2^-{max_halvings} reproduces the target subdivision")
