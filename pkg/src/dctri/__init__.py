"""Regular unimodular triangulations of matroid base polytopes, integral
generalized permutahedra and matroid independence polytopes, in exact
arithmetic, with an independent verifier."""

from .dc_triangulator import (
    FunctionalSchedule,
    build_height_function,
    make_generic_functional,
    triangulate_base_polytope,
)
from .genperm import (
    SubmodularFunction,
    triangulate_genperm,
    triangulate_independence_polytope,
)
from .lattice_polytope import PointConfiguration, base_polytope, normalized_volume
from .matroid import Matroid, direct_sum, from_bases, graphic, uniform
from .regular_subdivision import Subdivision, Triangulation, induced_subdivision
from .verifier import verify

__all__ = [
    "FunctionalSchedule",
    "Matroid",
    "PointConfiguration",
    "Subdivision",
    "SubmodularFunction",
    "Triangulation",
    "base_polytope",
    "build_height_function",
    "direct_sum",
    "from_bases",
    "graphic",
    "induced_subdivision",
    "make_generic_functional",
    "normalized_volume",
    "triangulate_base_polytope",
    "triangulate_genperm",
    "triangulate_independence_polytope",
    "uniform",
    "verify",
]
