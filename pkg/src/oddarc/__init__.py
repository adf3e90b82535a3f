"""Exact-integer computational engine for odd arc algebras, the
chronological-cobordism TQFT, and the cohomology of real two-row
Springer fibers."""

from .diagrams import (
    CircleDiagram,
    CrossinglessMatching,
    FlatTangle,
    Surgery,
    WeightSequence,
    WeightedMatching,
    arrow,
    compose_tangles,
    enumerate_matchings,
    enumerate_weighted,
    glue,
    matching_from_weights,
    order,
    surgery_sequence,
)
from .zgraded import GradedElement, GradedLinearMap, koszul_tensor, tau
from .tqft import (
    ChronCobordism,
    Event,
    even_apply,
    geometric_map,
    h_star,
    of_apply,
    theta,
    verify_geometric_commutation,
    verify_relations,
)
from .oddcohomology import (
    OddPolynomial,
    cells,
    eps_r_S,
    h_a,
    psi,
    psi_minus,
    quotient,
    springer_cohomology,
    tanisaki_generators,
    verify_h_iso,
    verify_squares,
)
from .arc_algebras import (
    ArcBasisElement,
    BimoduleSpace,
    OddAlgebra,
    SignLedger,
    build_algebra,
    multiply,
    odd_center,
    surgery_map,
)

__version__ = "0.1.0"
