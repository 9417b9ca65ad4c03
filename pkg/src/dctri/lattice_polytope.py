"""Lattice point configurations and the matroid polytopes built on them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

from .exact_linalg import AffineLattice, lattice_coordinates, lp_maximize, rank
from .hull import PlacingTriangulation, facets_bruteforce
from .matroid import Matroid, indicator

if TYPE_CHECKING:
    from .regular_subdivision import Triangulation

Point = tuple[int, ...]


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class PointConfiguration:
    """Distinct integer points together with the lattice of their affine hull."""

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        if not pts:
            raise PolytopeError("empty point configuration")
        if len(set(pts)) != len(pts):
            raise PolytopeError("points must be distinct")
        if len({len(p) for p in pts}) != 1:
            raise PolytopeError("points of mixed dimension")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable[Sequence[int]]) -> "PointConfiguration":
        return cls(tuple(tuple(p) for p in points))

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    @cached_property
    def span(self) -> AffineLattice:
        return AffineLattice.from_points(self.points)

    @property
    def dim(self) -> int:
        return self.span.dim

    @cached_property
    def coords(self) -> tuple[Point, ...]:
        """Points written in the lattice basis of ``aff(P) ∩ Z^n``.

        The map is a lattice isomorphism onto Z^dim, so normalized volumes
        can be read off as plain determinants there.
        """
        p0, basis = self.span.basepoint, self.span.basis
        return tuple(
            lattice_coordinates(basis, [a - b for a, b in zip(p, p0)]) for p in self.points
        )

    def index(self, p: Sequence[int]) -> int:
        return self._index[tuple(p)]

    @cached_property
    def _index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SpanFlag:
    """``aff(P) = ⋂ {x_{S_i} = b_i}`` for a chain ``S_1 ⊊ ... ⊊ S_j = [n]``."""

    subsets: tuple[frozenset[int], ...]
    values: tuple[int, ...]


def base_polytope(M: Matroid) -> PointConfiguration:
    return PointConfiguration(tuple(sorted(indicator(b, M.n) for b in M.bases)))


def independence_polytope_points(M: Matroid) -> PointConfiguration:
    return PointConfiguration(tuple(sorted(indicator(s, M.n) for s in M.independent_sets())))


def span_flag(P: PointConfiguration) -> SpanFlag:
    """Flag of coordinate subsets whose sums cut out ``aff(P)``.

    The blocks are the connected components of the graph joining ``i`` and
    ``j`` whenever ``e_i - e_j`` lies in the direction space of ``P``; the
    flag is their running union, blocks ordered by smallest element.
    """
    n = P.ambient_dim
    basis = list(P.span.basis)
    r = rank(basis)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            e = [0] * n
            e[i], e[j] = 1, -1
            if rank(basis + [e]) == r:
                parent[find(i)] = find(j)
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    ordered = sorted(blocks.values(), key=min)
    if n - len(ordered) != P.dim:
        raise PolytopeError("affine hull is not cut out by coordinate-sum equations")
    p = P.points[0]
    subsets, values, acc = [], [], set()
    for blk in ordered:
        acc |= {i + 1 for i in blk}
        subsets.append(frozenset(acc))
        values.append(sum(p[i - 1] for i in acc))
    return SpanFlag(tuple(subsets), tuple(values))


def _is_root_direction(d: Sequence[int]) -> bool:
    nz = [x for x in d if x]
    return sorted(nz) == [-1, 1]


def is_edge(points: Sequence[Point], i: int, j: int) -> bool:
    """Whether ``[points[i], points[j]]`` is an edge of their convex hull.

    Exact LP: the midpoint must have no convex representation that puts
    weight on any other point.  Assumes every point is a vertex.
    """
    u, v = points[i], points[j]
    n = len(u)
    A = [[p[c] for p in points] for c in range(n)] + [[1] * len(points)]
    b = [u[c] + v[c] for c in range(n)] + [2]
    obj = [0 if k in (i, j) else 1 for k in range(len(points))]
    status, value, _ = lp_maximize(obj, A, b)
    if status != "optimal":
        raise PolytopeError(f"edge LP returned {status}")
    return value == 0


def is_matroid_polytope(points: Iterable[Sequence[int]]) -> bool:
    pts = sorted({tuple(p) for p in points})
    if any(x not in (0, 1) for p in pts for x in p):
        raise PolytopeError("is_matroid_polytope expects 0-1 points")
    if len(pts) <= 1:
        return True
    if len({sum(p) for p in pts}) != 1:
        # root-direction edges keep the coordinate sum constant
        return False
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = [a - b for a, b in zip(pts[i], pts[j])]
            if _is_root_direction(d):
                continue
            if is_edge(pts, i, j):
                return False
    return True


def normalized_volume(P: PointConfiguration) -> int:
    """Normalized volume relative to ``aff(P) ∩ Z^n`` via a placing triangulation.

    A single point has volume 1 by convention.
    """
    if P.dim == 0:
        return 1
    return PlacingTriangulation(P.coords).volume()


def pyramid_volume(P: PointConfiguration) -> int:
    """Second, independent volume oracle: cone every facet over a fixed apex.

    ``vol(P) = sum over facets F missing the apex of latticeheight * vol(F)``,
    recursively, with facets found by brute force.  Exponential; keep to
    small inputs.
    """
    d = P.dim
    if d == 0:
        return 1
    pts = P.coords
    if d == 1:
        xs = [p[0] for p in pts]
        return max(xs) - min(xs)
    apex = pts[0]
    total = 0
    for a, b in facets_bruteforce(pts):
        h = b - sum(x * y for x, y in zip(a, apex))
        if h == 0:
            continue
        face = [p for p in pts if sum(x * y for x, y in zip(a, p)) == b]
        total += h * pyramid_volume(PointConfiguration(tuple(face)))
    return total


def restrict_to_face(T: "Triangulation", F: PointConfiguration) -> "Triangulation":
    """Faces of cells of ``T`` that triangulate the face ``F`` of its polytope."""
    from .regular_subdivision import Triangulation

    fset = set(F.points)
    d = F.dim
    cells = set()
    for cell in T.cells:
        verts = tuple(sorted(F.index(T.base.points[i]) for i in cell if T.base.points[i] in fset))
        if len(verts) == d + 1:
            cells.add(verts)
    out = Triangulation(F, tuple(sorted(cells)))
    vol = sum(simplex_volume([F.points[i] for i in c]) for c in out.cells)
    if vol != normalized_volume(F):
        raise PolytopeError("face is not a union of faces of the triangulation")
    return out


def simplex_volume(vertices: Sequence[Point]) -> int:
    """Normalized volume of a lattice simplex in the lattice of its own span."""
    from .exact_linalg import smith_diagonal

    v0 = vertices[0]
    edges = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    if not edges:
        return 1
    diag = smith_diagonal(edges)
    if 0 in diag:
        raise PolytopeError("vertices are affinely dependent")
    # index of the edge lattice inside its saturation
    out = 1
    for x in diag:
        out *= x
    return out
