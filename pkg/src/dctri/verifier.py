"""Independent checks on a triangulation: unimodularity, the subdivision
axioms, regularity, volume, plus h-vector and flagness reporting.

Nothing here trusts the construction.  Regularity is re-derived from the
heights alone: for each cell we interpolate every level on the cell's
vertices and demand that all other points sit lexicographically above.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .exact_linalg import lp_maximize, smith_diagonal
from .hull import affine_rank, initial_simplex
from .lattice_polytope import PointConfiguration, normalized_volume, simplex_volume
from .regular_subdivision import HeightFunction, Subdivision

DEFAULT_FLAG_BUDGET = 64


class NotASimplex(ValueError):
    pass


def is_unimodular(vertices: Sequence[Sequence[int]]) -> bool:
    v0 = vertices[0]
    edges = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    if not edges:
        return True
    diag = smith_diagonal(edges)
    if 0 in diag:
        raise NotASimplex(f"affinely dependent vertices {list(map(tuple, vertices))}")
    return all(d == 1 for d in diag)


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def _lex_sign(diff: Sequence[Fraction]) -> int:
    for x in diff:
        if x:
            return 1 if x > 0 else -1
    return 0


def regularity_failures(
    base: PointConfiguration, cells: Sequence[Sequence[int]], levels: Sequence[Sequence[Fraction]]
) -> list[dict]:
    """Cells whose interpolated heights are not strictly (lexicographically)
    below all points outside the cell, or not exact on the cell."""
    coords = base.coords
    d = base.dim
    bad = []
    for ci, cell in enumerate(cells):
        cell = list(cell)
        if d == 0:
            continue
        basis = [cell[j] for j in initial_simplex([coords[i] for i in cell])]
        if len(basis) != d + 1:
            bad.append({"cell": ci, "reason": "cell not full-dimensional"})
            continue
        o = coords[basis[0]]
        E = [[Fraction(a - b) for a, b in zip(coords[v], o)] for v in basis[1:]]
        Einv = _inverse(E)
        inside = set(cell)
        for i, q in enumerate(coords):
            y = [a - b for a, b in zip(q, o)]
            mu = [sum(y[r] * Einv[r][c] for r in range(d)) for c in range(d)]
            weights = [1 - sum(mu)] + mu
            diff = [
                lvl[i] - sum(w * lvl[v] for w, v in zip(weights, basis)) for lvl in levels
            ]
            s = _lex_sign(diff)
            if i in inside and s != 0:
                bad.append({"cell": ci, "point": i, "reason": "heights not affine on cell"})
                break
            if i not in inside and s <= 0:
                bad.append({"cell": ci, "point": i, "reason": "point not above cell"})
                break
    return bad


def check_regularity(T: Subdivision, heights: HeightFunction | None = None, flat: Sequence | None = None):
    """True/False, or ``"unverifiable"`` when no certificate is available.

    Uses ``flat`` (single-level heights) when given, otherwise the layered
    heights of ``T``.
    """
    if flat is not None:
        levels = [tuple(Fraction(x) for x in flat)]
    else:
        heights = heights or T.heights
        if heights is None:
            return "unverifiable"
        levels = heights.levels
    if not levels:
        return len(T.cells) == 1
    return not regularity_failures(T.base, T.cells, levels)


def intersect_properly(
    coords: Sequence[Sequence[int]], cell_a: Sequence[int], cell_b: Sequence[int]
) -> bool:
    """Whether conv(A) ∩ conv(B) = conv(A ∩ B) and that is a face of both.

    Exact LP for an affine ``w`` with ``w = 0`` on shared vertices,
    ``w <= -1`` on the rest of A and ``w >= 1`` on the rest of B.
    """
    shared = set(cell_a) & set(cell_b)
    only_a = [v for v in cell_a if v not in shared]
    only_b = [v for v in cell_b if v not in shared]
    d = len(coords[0])
    nvar = 2 * d + 2 + len(only_a) + len(only_b)
    A, b = [], []

    def row(v, slack_col=None, slack_sign=0):
        p = coords[v]
        r = list(p) + [-x for x in p] + [1, -1] + [0] * (len(only_a) + len(only_b))
        if slack_col is not None:
            r[2 * d + 2 + slack_col] = slack_sign
        return r

    for v in sorted(shared):
        A.append(row(v))
        b.append(0)
    for k, v in enumerate(only_a):
        A.append(row(v, k, 1))
        b.append(-1)
    for k, v in enumerate(only_b):
        A.append(row(v, len(only_a) + k, -1))
        b.append(1)
    status, _, _ = lp_maximize([0] * nvar, A, b)
    return status == "optimal"


def check_subdivision(T: Subdivision, certificate_ok: bool | None = None) -> dict:
    """Cover and face-to-face checks with failure witnesses.

    When a validated regularity certificate is at hand (``certificate_ok``),
    the cells are lower faces of one lifted polytope and so intersect
    properly; otherwise every pair is tested by exact LP.
    """
    failures: list[dict] = []
    pts = T.base.points
    vol = 0
    simplicial = True
    for ci, cell in enumerate(T.cells):
        if len(set(cell)) != len(cell) or any(not 0 <= i < len(pts) for i in cell):
            failures.append({"cell": ci, "reason": "duplicate or out-of-range vertex"})
            simplicial = False
            continue
        verts = [pts[i] for i in cell]
        if len(cell) == T.base.dim + 1 and affine_rank(verts) == T.base.dim:
            vol += simplex_volume(verts)
        else:
            simplicial = False
            sub = PointConfiguration(tuple(verts))
            if sub.dim == T.base.dim:
                vol += normalized_volume(sub)
            else:
                failures.append({"cell": ci, "reason": "cell not full-dimensional"})
    expected = normalized_volume(T.base)
    if vol != expected:
        failures.append({"reason": "volume mismatch", "cells_volume": vol, "polytope_volume": expected})
    proper = True
    if failures:
        proper = False
    elif not certificate_ok:
        coords = T.base.coords
        for i, j in combinations(range(len(T.cells)), 2):
            if not intersect_properly(coords, T.cells[i], T.cells[j]):
                failures.append({"cells": [i, j], "reason": "improper intersection"})
                proper = False
    return {
        "covers": vol == expected and proper,
        "face_to_face": proper,
        "volume": expected,
        "cells_volume": vol,
        "simplicial": simplicial,
        "failures": failures,
    }


def faces(cells: Sequence[Sequence[int]]) -> set[frozenset]:
    out: set[frozenset] = set()
    for c in cells:
        for k in range(len(c) + 1):
            out.update(frozenset(s) for s in combinations(c, k))
    return out


def f_vector(cells: Sequence[Sequence[int]]) -> list[int]:
    """``(f_{-1}, f_0, ..., f_{d-1})`` of the complex generated by ``cells``."""
    fs = faces(cells)
    top = max(len(c) for c in cells)
    return [sum(1 for F in fs if len(F) == k) for k in range(top + 1)]


def h_vector(T: Subdivision) -> list[int]:
    """h-vector of the triangulation; length ``dim + 1`` for a ball."""
    f = f_vector(T.cells)
    d = len(f) - 1
    h = [
        sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1))
        for k in range(d + 1)
    ]
    if len(h) > 1 and h[-1] == 0:
        h.pop()
    return h


@dataclass
class FlagStatus:
    status: str  # "flag" | "not_flag" | "not_computed"
    witness: tuple[int, ...] | None = None


def flagness(T: Subdivision, max_vertices: int = DEFAULT_FLAG_BUDGET) -> FlagStatus:
    """Flag iff every minimal non-face has two elements."""
    verts = sorted({v for c in T.cells for v in c})
    if len(verts) > max_vertices:
        return FlagStatus("not_computed")
    fs = faces(T.cells)
    level = [F for F in fs if len(F) == 2]
    k = 3
    while level:
        seen = set()
        nxt = []
        for F in level:
            for v in verts:
                if v in F:
                    continue
                G = F | {v}
                if G in seen:
                    continue
                seen.add(G)
                if all(G - {u} in fs for u in G):
                    if G not in fs:
                        return FlagStatus("not_flag", tuple(sorted(G)))
                    nxt.append(G)
        level = nxt
        k += 1
    return FlagStatus("flag")


@dataclass
class VerificationReport:
    unimodular_all: bool
    face_to_face: bool
    covers: bool
    regular_certified: bool | str
    regular_flat: bool | str
    cells: int
    volume: int
    f_vector: list[int]
    h_vector: list[int]
    flag_status: str
    flag_witness: list[int] | None = None
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.unimodular_all
            and self.face_to_face
            and self.covers
            and self.regular_certified is True
            and self.regular_flat in (True, "unverifiable")
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def verify(
    T: Subdivision,
    flat_heights: Sequence | None = None,
    flag_budget: int = DEFAULT_FLAG_BUDGET,
) -> VerificationReport:
    failures: list[dict] = []
    unimodular = True
    for ci, cell in enumerate(T.cells):
        verts = [T.base.points[i] for i in cell]
        try:
            ok = len(set(cell)) == len(cell) and len(cell) == T.base.dim + 1 and is_unimodular(verts)
        except NotASimplex:
            ok = False
        if not ok:
            unimodular = False
            failures.append({"cell": ci, "reason": "not a unimodular simplex"})
    regular = check_regularity(T)
    if regular is False:
        failures.append({"reason": "layered certificate rejected"})
    flat_ok: bool | str = "unverifiable"
    if flat_heights is not None:
        flat_ok = check_regularity(T, flat=flat_heights)
        if flat_ok is False:
            failures.append({"reason": "flat certificate rejected"})
    sub = check_subdivision(T, certificate_ok=regular is True)
    failures.extend(sub["failures"])
    h = h_vector(T) if sub["simplicial"] and T.cells else []
    flag = flagness(T, flag_budget) if sub["simplicial"] else FlagStatus("not_computed")
    return VerificationReport(
        unimodular_all=unimodular,
        face_to_face=sub["face_to_face"],
        covers=sub["covers"],
        regular_certified=regular,
        regular_flat=flat_ok,
        cells=len(T.cells),
        volume=sub["volume"],
        f_vector=f_vector(T.cells) if T.cells else [],
        h_vector=h,
        flag_status=flag.status,
        flag_witness=list(flag.witness) if flag.witness else None,
        failures=failures,
    )
