"""Integral generalized permutahedra: dicing and triangulation.

A polytope is given by an integer submodular table ``f`` on subsets of
``[n]`` (``x_S <= f(S)``, ``x_[n] = f([n])``).  It is diced by the unit
cube grid, every die is a translated matroid base polytope, and each die is
then triangulated by the same layered heights used for matroids.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Sequence

from .dc_triangulator import FunctionalSchedule, RetryCapExceeded
from .exact_linalg import smith_diagonal
from .lattice_polytope import PointConfiguration, independence_polytope_points, is_matroid_polytope
from .matroid import Matroid
from .regular_subdivision import (
    HeightFunction,
    Subdivision,
    Triangulation,
    induced_subdivision,
    lower_hull_subdivision,
)
from .verifier import is_unimodular

MAX_N = 12


class SubmodularError(ValueError):
    pass


@dataclass(frozen=True)
class SubmodularFunction:
    """Integer set function as a full table indexed by bitmask (bit i-1 = element i)."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.n > MAX_N:
            raise SubmodularError(f"n={self.n} exceeds the table cap {MAX_N}")
        if len(self.values) != 1 << self.n:
            raise SubmodularError("table needs 2^n entries")
        if self.values[0] != 0:
            raise SubmodularError("f(empty set) must be 0")

    def __call__(self, mask: int) -> int:
        return self.values[mask]

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int]) -> "SubmodularFunction":
        return cls(n, tuple(int(fn(m)) for m in range(1 << n)))

    @classmethod
    def matroid_rank(cls, M: Matroid) -> "SubmodularFunction":
        return cls.from_callable(M.n, M.rank)


def submodularity_violation(f: SubmodularFunction) -> tuple[int, int] | None:
    """A pair of masks ``(S, T)`` with ``f(S) + f(T) < f(S|T) + f(S&T)``, or None.

    Uses the local form: checking ``S+i, S+j`` for all ``S`` and ``i, j``
    outside ``S`` is equivalent to full submodularity.
    """
    n = f.n
    for S in range(1 << n):
        free = [i for i in range(n) if not S >> i & 1]
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                i, j = 1 << free[a], 1 << free[b]
                if f(S | i) + f(S | j) < f(S | i | j) + f(S):
                    return S | i, S | j
    return None


def vertices_from_submodular(f: SubmodularFunction) -> PointConfiguration:
    """Greedy vertex for every ordering of the ground set, deduplicated."""
    bad = submodularity_violation(f)
    if bad is not None:
        raise SubmodularError(f"not submodular at S={bad[0]:b}, T={bad[1]:b}")
    verts = set()
    for sigma in permutations(range(f.n)):
        v = [0] * f.n
        prev, mask = 0, 0
        for i in sigma:
            mask |= 1 << i
            v[i] = f(mask) - prev
            prev = f(mask)
        verts.add(tuple(v))
    return PointConfiguration(tuple(sorted(verts)))


def submodular_from_points(points: Sequence[Sequence[int]]) -> SubmodularFunction:
    """Tight function ``f(S) = max_p p_S`` of an integral generalized permutahedron."""
    n = len(points[0])
    return SubmodularFunction.from_callable(
        n, lambda m: 0 if m == 0 else max(sum(p[i] for i in range(n) if m >> i & 1) for p in points)
    )


def lattice_points(f: SubmodularFunction) -> list[tuple[int, ...]]:
    n = f.n
    full = (1 << n) - 1
    hi = [f(1 << i) for i in range(n)]
    lo = [f(full) - f(full & ~(1 << i)) for i in range(n)]
    out = []
    for head in product(*(range(lo[i], hi[i] + 1) for i in range(n - 1))):
        last = f(full) - sum(head)
        if not lo[n - 1] <= last <= hi[n - 1]:
            continue
        x = head + (last,)
        if all(
            sum(x[i] for i in range(n) if m >> i & 1) <= f(m) for m in range(1, full)
        ):
            out.append(x)
    return sorted(out)


def box_offset(f: SubmodularFunction) -> tuple[int, ...]:
    """Translation putting the polytope into the nonnegative orthant.

    Only coordinates with a negative minimum move, so 0-1 polytopes stay
    where they are and keep the same prefix letters in the height schedule.
    """
    verts = vertices_from_submodular(f).points
    return tuple(min(0, min(v[k] for v in verts)) for k in range(f.n))


def dicing_heights(P: PointConfiguration) -> tuple[int, ...]:
    return tuple(sum(x * x for x in p) for p in P.points)


def _box_cells(P: PointConfiguration) -> set[frozenset]:
    d = P.dim
    n = P.ambient_dim
    origins = {tuple(a - b for a, b in zip(p, delta)) for p in P.points for delta in product((0, 1), repeat=n)}
    cells = set()
    for c in origins:
        pts = [p for p in P.points if all(0 <= a - b <= 1 for a, b in zip(p, c))]
        if len(pts) > d and PointConfiguration(tuple(pts)).dim == d:
            cells.add(frozenset(pts))
    return cells


def dice(P: PointConfiguration) -> Subdivision:
    """Cut ``P`` (its lattice points, inside the nonnegative box) by all
    hyperplanes ``x_k = c``.  Regular via heights ``sum x_k^2``; every die
    is checked to be a translated matroid base polytope."""
    if any(x < 0 for p in P.points for x in p):
        raise SubmodularError("translate into the nonnegative orthant before dicing")
    S = lower_hull_subdivision(P, dicing_heights(P))
    if S.cell_sets() != _box_cells(P):
        raise SubmodularError("lower hull of sum x^2 does not match the unit-cube dicing")
    for c in S.cells:
        pts = [P.points[i] for i in c]
        lo = [min(p[k] for p in pts) for k in range(P.ambient_dim)]
        if not is_matroid_polytope([tuple(a - b for a, b in zip(p, lo)) for p in pts]):
            raise SubmodularError(f"die {c} is not a matroid base polytope")
    return S


@dataclass
class GenpermResult:
    triangulation: Triangulation
    offset: tuple[int, ...]
    dicing: Subdivision


def genperm_heights(P: PointConfiguration, sched: FunctionalSchedule) -> HeightFunction:
    n = P.ambient_dim
    levels = [tuple(Fraction(h) for h in dicing_heights(P))]
    for k in range(1, n):
        levels.append(tuple(sched.level(x, k) for x in P.points))
    return HeightFunction(P, tuple(levels))


def triangulate_genperm(
    f: SubmodularFunction,
    seed: int = 0,
    t_start: int | None = None,
    max_retries: int = 16,
) -> GenpermResult:
    """Regular unimodular triangulation of the polytope of ``f``.

    Level 0 of the certificate is the dicing height, the remaining levels
    are the per-prefix generic functionals over the alphabet ``{0..R}``.
    """
    offset = box_offset(f)
    pts = tuple(tuple(a - b for a, b in zip(p, offset)) for p in lattice_points(f))
    P = PointConfiguration(pts)
    diced = dice(P)
    t = t_start if t_start is not None else f.n * len(P) + 2
    tried = []
    for _ in range(max_retries + 1):
        tried.append(t)
        sched = FunctionalSchedule(f.n, seed, t)
        h = genperm_heights(P, sched)
        S = induced_subdivision(P, h)
        try:
            T = Triangulation.from_subdivision(S)
        except ValueError:
            t += 1
            continue
        if not all(is_unimodular([P.points[i] for i in c]) for c in T.cells):
            t += 1
            continue
        T.metadata.update(
            {"seed": seed, "t_sequence": tried, "offset": list(offset), "R": max(max(p) for p in pts)}
        )
        return GenpermResult(T, offset, diced)
    raise RetryCapExceeded(f"no unimodular triangulation after t in {tried}")


def psi_matrix(n: int) -> list[list[int]]:
    """Linear part of ``v -> (r - sum v, v)`` as an ``(n+1) x n`` matrix."""
    return [[-1] * n] + [[int(i == j) for j in range(n)] for i in range(n)]


def lift_independence(M: Matroid):
    """Image of the independence polytope under ``v -> (r(E) - sum v, v)``.

    Returns ``(points, inverse)`` where ``inverse`` drops coordinate 0.
    """
    r = M.rank_total
    P = independence_polytope_points(M)
    lifted = PointConfiguration(tuple((r - sum(v),) + v for v in P.points))
    return lifted, lambda w: tuple(w[1:])


def triangulate_independence_polytope(
    M: Matroid, seed: int = 0, t_start: int | None = None, max_retries: int = 16
) -> Triangulation:
    lifted, back = lift_independence(M)
    res = triangulate_genperm(submodular_from_points(lifted.points), seed, t_start, max_retries)
    T = res.triangulation
    pts = tuple(back(tuple(a + b for a, b in zip(p, res.offset))) for p in T.base.points)
    P = PointConfiguration(pts)
    heights = HeightFunction(P, T.heights.levels) if T.heights else None
    meta = dict(T.metadata, lifted=True)
    return Triangulation(P, T.cells, None, heights, None, meta)


def psi_is_unimodular(n: int) -> bool:
    return all(d == 1 for d in smith_diagonal(psi_matrix(n)))


def from_json(obj: dict) -> SubmodularFunction:
    from . import matroid as _m

    if "matroid_rank" in obj:
        return SubmodularFunction.matroid_rank(_m.from_json(obj["matroid_rank"]))
    n = int(obj["n"])
    table = [None] * (1 << n)
    for key, val in obj["values"].items():
        # digit strings only work below 10 elements; beyond that keys are comma lists
        if "," in key or n > 9:
            elems = [int(x) for x in key.split(",") if x]
        else:
            elems = [int(ch) for ch in key]
        mask = 0
        for e in elems:
            if not 1 <= e <= n:
                raise SubmodularError(f"element {e} out of range in key {key!r}")
            mask |= 1 << (e - 1)
        table[mask] = int(val)
    if any(v is None for v in table):
        raise SubmodularError("submodular table is missing subsets")
    f = SubmodularFunction(n, tuple(table))
    bad = submodularity_violation(f)
    if bad is not None:
        raise SubmodularError(f"not submodular at S={bad[0]:b}, T={bad[1]:b}")
    return f


def to_json(f: SubmodularFunction) -> dict:
    def key(m):
        elems = [str(i + 1) for i in range(f.n) if m >> i & 1]
        return ("," if f.n > 9 else "").join(elems)

    return {"n": f.n, "values": {key(m): f(m) for m in range(1 << f.n)}}
