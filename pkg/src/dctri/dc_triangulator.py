"""Deletion-contraction triangulation of matroid base polytopes.

The recursion splits on the first coordinate.  Vertices with ``x_1 = 0`` form
the base polytope of the deletion, those with ``x_1 = 1`` the contraction.
Lifting the contraction side by a generic linear functional subdivides
``P_M`` into cells ``conv(F0 x {0} ∪ F1 x {1})``; joining triangulations of
the two sides (restricted to ``F0`` and ``F1``) gives the final simplices.

The same triangulation is induced by the layered height
``level_k(x) = l_{x_1..x_k}(x_{k+1}, ..., x_n)``; :func:`build_height_function`
produces it and the tests check the two agree.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact_linalg import (
    are_complementary,
    independent_affine_spans,
    integer_kernel,
    rank,
    saturate,
)
from .lattice_polytope import PointConfiguration, base_polytope, restrict_to_face
from .matroid import Matroid, contract, delete
from .regular_subdivision import HeightFunction, Triangulation, lower_hull_subdivision

Prefix = tuple[int, ...]

MAX_GENERIC_CHECK_DIM = 5


class GenericityError(RuntimeError):
    """A functional was not generic enough for the join step."""


class RetryCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GenericFunctional:
    """Affine functional ``constant + sum(c_i * y_i)`` on Q^dim."""

    coefficients: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __call__(self, y: Sequence[int]) -> Fraction:
        return self.constant + sum(c * v for c, v in zip(self.coefficients, y))

    def scaled(self, k: int) -> "GenericFunctional":
        return GenericFunctional(tuple(k * c for c in self.coefficients), k * self.constant)


def make_generic_functional(m: int, t: int) -> GenericFunctional:
    """Linear functional given by the moment-curve point ``(t, t^2, ..., t^m)``."""
    if t < 2 and m > 0:
        raise ValueError("moment-curve parameter must be >= 2")
    return GenericFunctional(tuple(Fraction(t**k) for k in range(1, m + 1)))


def resonance_flats(m: int) -> list[list[tuple[int, ...]]]:
    """Positive-dimensional flats of the resonance arrangement in Q^m.

    Each flat comes back as a lattice basis of its subspace.  Flats are
    found breadth-first by intersecting with one hyperplane ``x_S = 0`` at a
    time and deduplicating on the (saturated) span of the normals used.
    """
    normals = [
        [int(i in S) for i in range(m)]
        for size in range(1, m + 1)
        for S in combinations(range(m), size)
    ]
    flats = [[tuple(int(i == j) for j in range(m)) for i in range(m)]]
    seen = set()
    frontier: list[list[list[int]]] = [[]]
    while frontier:
        nxt = []
        for rows in frontier:
            for v in normals:
                new = rows + [v]
                if len(new) == m or rank(new) != len(new):
                    continue
                key = tuple(saturate(new, m))
                if key in seen:
                    continue
                seen.add(key)
                flats.append([tuple(b) for b in integer_kernel(new, m)])
                nxt.append(new)
        frontier = nxt
    return flats


def is_generic_bruteforce(ell: GenericFunctional, max_dim: int = MAX_GENERIC_CHECK_DIM) -> bool:
    """Whether the linear part of ``ell`` is non-constant on every
    positive-dimensional flat of the resonance arrangement."""
    m = ell.dim
    if m > max_dim:
        raise ValueError(f"flat enumeration capped at dim {max_dim}, got {m}")
    if m == 0:
        return True
    for basis in resonance_flats(m):
        if all(sum(c * b for c, b in zip(ell.coefficients, v)) == 0 for v in basis):
            return False
    return True


@dataclass
class FunctionalSchedule:
    """The family ``l_s`` indexed by prefixes ``s`` of vertex coordinates.

    ``l_{s'c} = c * lam_{s'}`` where ``lam_{s'}`` is a moment-curve functional
    with coordinates permuted by a seed-derived shuffle.  Consecutive letters
    therefore differ by ``lam_{s'}``, which is generic whenever the moment
    point is.
    """

    n: int
    seed: int = 0
    t: int = 2
    _cache: dict = field(default_factory=dict, repr=False)

    def lam(self, prefix: Prefix) -> GenericFunctional:
        prefix = tuple(prefix)
        if prefix not in self._cache:
            m = self.n - len(prefix) - 1
            base = make_generic_functional(m, self.t).coefficients
            perm = list(range(m))
            if self.seed:
                random.Random(f"{self.seed}:{','.join(map(str, prefix))}").shuffle(perm)
            self._cache[prefix] = GenericFunctional(tuple(base[perm[i]] for i in range(m)))
        return self._cache[prefix]

    def ell(self, s: Sequence[int]) -> GenericFunctional:
        """``l_s`` on Q^{n - |s|}, for ``1 <= |s| <= n - 1``."""
        s = tuple(s)
        return self.lam(s[:-1]).scaled(s[-1])

    def level(self, x: Sequence[int], k: int) -> Fraction:
        """``l_{x_1..x_k}(x_{k+1}, ..., x_n)``."""
        return self.ell(x[:k])(x[k:])


def default_t(M: Matroid) -> int:
    return M.n * len(M.bases) + 2


def certify_join(F0: PointConfiguration, F1: PointConfiguration) -> bool:
    """Affine spans independent and their lattices complementary."""
    return independent_affine_spans(F0.span, F1.span) and are_complementary(F0.span, F1.span)


def _split(points: Sequence[tuple[int, ...]]):
    bottom = [p[1:] for p in points if p[0] == 0]
    top = [p[1:] for p in points if p[0] == 1]
    return bottom, top


def _tri_cells(M: Matroid, prefix: Prefix, sched: FunctionalSchedule, stats: dict) -> list[frozenset]:
    """Cells of the triangulation of ``P_M``, as frozensets of vertex tuples."""
    P = base_polytope(M)
    if M.n == 1:
        return [frozenset(P.points)]
    if M.is_loop(1) or M.is_coloop(1):
        c = 1 if M.is_coloop(1) else 0
        minor = contract(M, 1) if c else delete(M, 1)
        sub = _tri_cells(minor, prefix + (c,), sched, stats)
        return [frozenset((c,) + v for v in cell) for cell in sub]

    stats["split_order"].append(M.labels[0])
    T0 = _as_triangulation(_tri_cells(delete(M, 1), prefix + (0,), sched, stats))
    T1 = _as_triangulation(_tri_cells(contract(M, 1), prefix + (1,), sched, stats))

    lam = sched.lam(prefix)
    g = [lam(p[1:]) if p[0] == 1 else Fraction(0) for p in P.points]
    S = lower_hull_subdivision(P, g)

    out = []
    for cell in S.cells:
        bottom, top = _split([P.points[i] for i in cell])
        if not bottom or not top:
            raise GenericityError(f"cell {cell} misses one side of the split")
        F0, F1 = PointConfiguration(tuple(bottom)), PointConfiguration(tuple(top))
        if not certify_join(F0, F1):
            raise GenericityError(f"join not certified at prefix {prefix}")
        R0, R1 = restrict_to_face(T0, F0), restrict_to_face(T1, F1)
        for c0 in R0.cells:
            for c1 in R1.cells:
                out.append(
                    frozenset([(0,) + F0.points[i] for i in c0] + [(1,) + F1.points[i] for i in c1])
                )
    return out


def _as_triangulation(cells: list[frozenset]) -> Triangulation:
    P = PointConfiguration(tuple(sorted({p for c in cells for p in c})))
    return Triangulation(P, tuple(sorted(tuple(sorted(P.index(p) for p in c)) for c in cells)))


def triangulate_base_polytope(
    M: Matroid,
    seed: int = 0,
    t_start: int | None = None,
    max_retries: int = 16,
) -> Triangulation:
    """Regular unimodular triangulation of ``P_M`` by deletion-contraction.

    Genericity is certified per join cell; on failure the moment-curve
    parameter is bumped and the construction restarts.  The returned
    triangulation carries the layered height function in ``heights`` and the
    run metadata (seed, the ``t`` values tried, split order).
    """
    t = default_t(M) if t_start is None else t_start
    tried = []
    for _ in range(max_retries + 1):
        tried.append(t)
        sched = FunctionalSchedule(M.n, seed, t)
        stats = {"split_order": []}
        try:
            cells = _tri_cells(M, (), sched, stats)
        except GenericityError:
            t += 1
            continue
        P = base_polytope(M)
        idx = tuple(sorted(tuple(sorted(P.index(p) for p in c)) for c in cells))
        meta = {"seed": seed, "t_sequence": tried, "split_order": stats["split_order"]}
        return Triangulation(
            P, idx, heights=build_height_function(M, sched), metadata=meta
        )
    raise RetryCapExceeded(f"no certified schedule after t in {tried}")


def build_height_function(M: Matroid, sched: FunctionalSchedule) -> HeightFunction:
    """Layered heights on ``V(P_M)``: level 0 is zero, level ``k`` is
    ``l_{x_1..x_k}(x_{k+1}, ..., x_n)``."""
    P = base_polytope(M)
    levels = [tuple(Fraction(0) for _ in P.points)]
    for k in range(1, M.n):
        levels.append(tuple(sched.level(x, k) for x in P.points))
    return HeightFunction(P, tuple(levels))


def schedule_for(T: Triangulation, M: Matroid) -> FunctionalSchedule:
    """The schedule that produced ``T`` (last ``t`` tried)."""
    return FunctionalSchedule(M.n, T.metadata["seed"], T.metadata["t_sequence"][-1])
