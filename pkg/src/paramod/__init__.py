"""paramod: exact moduli computations for rank-2 parabolic structures on the
five-punctured projective line."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .connection import (
    FlatTriple,
    LogConnection,
    degree_bounds,
    elm_triple,
    gauge_transform,
    solve_connection_space,
    validate_triple,
)
from .exactnum import INF, Mat, Poly, ProjectivePoint, Scalar, interpolate, sc
from .higgslimit import (
    FixedLocusPoint,
    StronglyParabolicHiggs,
    cstar_limit,
    fiber_dimension,
    fixed_component,
    fixedpoint_canonicalize,
    higgs_is_stable,
    special_loci,
    theta_from_connection,
)
from .parastruct import (
    B,
    BPRIME,
    BundleSplitType,
    MarkedConfiguration,
    ParabolicStructure,
    StratumId,
    act,
    classify,
    is_decomposable,
    is_simple,
    orbit_equal,
    quotient_coords,
)
from .spectra import (
    MCBranch,
    SpectrumRank2,
    character_poly,
    elm_spectrum,
    elm_weight,
    mc_spectrum,
    spectrum_predicates,
)
from .stability import (
    WeightVector,
    chamber_classify,
    destabilizing_candidates,
    is_stable,
    no_stable_structure,
    s_value,
    stabilizing_weight,
    weight_is_kostov_generic,
)

__version__ = "0.1.0"

__all__ = [
    "B",
    "BPRIME",
    "BundleSplitType",
    "FixedLocusPoint",
    "FlatTriple",
    "INF",
    "KERNEL_BACKEND",
    "LogConnection",
    "MCBranch",
    "MarkedConfiguration",
    "Mat",
    "ParabolicStructure",
    "Poly",
    "ProjectivePoint",
    "Scalar",
    "SpectrumRank2",
    "StratumId",
    "StronglyParabolicHiggs",
    "WeightVector",
    "__version__",
    "act",
    "chamber_classify",
    "character_poly",
    "classify",
    "cstar_limit",
    "degree_bounds",
    "destabilizing_candidates",
    "elm_spectrum",
    "elm_triple",
    "elm_weight",
    "fiber_dimension",
    "fixed_component",
    "fixedpoint_canonicalize",
    "gauge_transform",
    "higgs_is_stable",
    "interpolate",
    "is_decomposable",
    "is_simple",
    "is_stable",
    "mc_spectrum",
    "no_stable_structure",
    "orbit_equal",
    "quotient_coords",
    "s_value",
    "sc",
    "solve_connection_space",
    "spectrum_predicates",
    "special_loci",
    "stabilizing_weight",
    "theta_from_connection",
    "validate_triple",
    "weight_is_kostov_generic",
]
