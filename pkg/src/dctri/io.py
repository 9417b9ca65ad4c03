"""JSON forms of subdivisions and triangulations.

Rationals are written as ``"p/q"`` strings, integers bare, so files
round-trip exactly and diff cleanly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .lattice_polytope import PointConfiguration
from .regular_subdivision import HeightFunction, Subdivision, Triangulation


def q_out(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def q_in(x) -> Fraction:
    return Fraction(x) if isinstance(x, (int, str)) else Fraction(str(x))


def subdivision_to_json(
    S: Subdivision, flat: tuple | None = None, include_certificate: bool = True
) -> dict[str, Any]:
    out: dict[str, Any] = {
        "points": [list(p) for p in S.base.points],
        "cells": [list(c) for c in S.cells],
    }
    if include_certificate and S.heights is not None:
        cert: dict[str, Any] = {
            "levels": S.heights.depth,
            "layers": [[q_out(x) for x in lvl] for lvl in S.heights.levels],
        }
        if flat is not None:
            cert["epsilon"] = q_out(S.epsilon) if S.epsilon is not None else None
            cert["heights"] = [q_out(x) for x in flat]
        out["certificate"] = cert
    if S.metadata:
        out["metadata"] = S.metadata
    return out


def subdivision_from_json(obj: dict) -> tuple[Subdivision, tuple | None]:
    """Returns the subdivision and the flat heights, if the file has them.

    Cells are taken as written (sorted, but not deduplicated), so corrupted
    files reach the verifier intact.
    """
    P = PointConfiguration(tuple(tuple(p) for p in obj["points"]))
    cells = tuple(tuple(sorted(c)) for c in obj["cells"])
    heights = None
    flat = None
    eps = None
    cert = obj.get("certificate")
    if cert:
        if cert.get("layers") is not None:
            heights = HeightFunction(P, tuple(tuple(q_in(x) for x in lvl) for lvl in cert["layers"]))
        if cert.get("heights") is not None:
            flat = tuple(q_in(x) for x in cert["heights"])
        if cert.get("epsilon") is not None:
            eps = q_in(cert["epsilon"])
    S = Subdivision(P, cells, None, heights, eps, dict(obj.get("metadata", {})))
    return S, flat


def triangulation_from_json(obj: dict) -> tuple[Triangulation, tuple | None]:
    S, flat = subdivision_from_json(obj)
    return Triangulation.from_subdivision(S), flat
