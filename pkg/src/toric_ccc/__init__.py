"""Toric varieties, their conical Lagrangian skeleta, and the coherent-constructible dictionary.

Exact rational arithmetic throughout, except for the T-duality numerics in
``toric_ccc.tduality``.
"""

__version__ = "0.1.0"

from .catalog import CATALOG, F1, NONSMOOTH, P1, P1xP1, P2, RAY, SMOOTH_COMPLETE
from .ccc import (DictionaryEntry, SheafObject, convolve, dictionary, hom_dim, lambda_bar_contains,
                  lambda_pm, lambda_sigma_contains, skeleton_containment)
from .cohomology import CohomologyTable, cech_weight_oracle, cohomology_table, weight_cohomology
from .fan import Cone, Fan, FanError, FanMorphism, check_fan_map, dual_cone, is_complete, is_smooth, orbit_data
from .fanfile import load_fan, parse_fan_file, serialize_fan
from .ktheory import (Character, KClass, ample_basis, fingerprint, fixed_point_weights, relation_class,
                      rewrite_to_window)
from .linebundle import (LatticePolytope, TDivisor, cartier_data, is_ample, is_nef, lattice_points,
                         minkowski_sum, polytope_of, pullback_divisor, strata)

__all__ = [
    "CATALOG", "F1", "NONSMOOTH", "P1", "P1xP1", "P2", "RAY", "SMOOTH_COMPLETE",
    "DictionaryEntry", "SheafObject", "convolve", "dictionary", "hom_dim", "lambda_bar_contains",
    "lambda_pm", "lambda_sigma_contains", "skeleton_containment",
    "CohomologyTable", "cech_weight_oracle", "cohomology_table", "weight_cohomology",
    "Cone", "Fan", "FanError", "FanMorphism", "check_fan_map", "dual_cone", "is_complete", "is_smooth",
    "orbit_data", "load_fan", "parse_fan_file", "serialize_fan",
    "Character", "KClass", "ample_basis", "fingerprint", "fixed_point_weights", "relation_class",
    "rewrite_to_window",
    "LatticePolytope", "TDivisor", "cartier_data", "is_ample", "is_nef", "lattice_points",
    "minkowski_sum", "polytope_of", "pullback_divisor", "strata",
]
