"""Modified K-stability of Q-Fano spherical varieties from combinatorial data.

The verdict compares the weighted barycenter of the moment polytope with 2ρ_P
against the dual of the valuation cone; see the README for the instance
format and the command-line tool.
"""
from .catalog import get_entry, list_entries
from .cones import ValuationConeData, dual_cone, lineality_space, membership
from .dhmeasure import DHDensity, barycenter, moments_exponential, moments_polynomial_exact
from .errors import ConvergenceError, DivergenceError, InputError, InvariantViolation
from .kstab import (
    SphericalDatum,
    Verdict,
    check_kstability,
    classify_degeneration,
    futaki_pairing,
    make_datum,
    solve_soliton,
)
from .polytope import MomentPolytope, contains, from_halfspaces, from_vertices, lattice_points, triangulate
from .quantized import quantized_barycenter, quantized_futaki
from .rootsys import (
    RootSystemData,
    build_root_system,
    derive_phi_p,
    group_compactification_data,
    product_root_system,
    symmetric_space_data,
    two_rho_p,
    weyl_dimension,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DHDensity", "DivergenceError", "InputError", "InvariantViolation",
    "MomentPolytope", "RootSystemData", "SphericalDatum", "ValuationConeData", "Verdict",
    "barycenter", "build_root_system", "check_kstability", "classify_degeneration", "contains",
    "derive_phi_p", "dual_cone", "from_halfspaces", "from_vertices", "futaki_pairing",
    "get_entry", "group_compactification_data", "lattice_points", "lineality_space",
    "list_entries", "make_datum", "membership", "moments_exponential",
    "moments_polynomial_exact", "product_root_system", "quantized_barycenter",
    "quantized_futaki", "solve_soliton", "symmetric_space_data", "triangulate", "two_rho_p",
    "weyl_dimension",
]
