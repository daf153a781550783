"""Exact computation with finite-dimensional, weight-truncated L-infinity algebras."""

from .grading import (
    CoalgebraElement,
    Element,
    GradedSpace,
    InputError,
    MultiMap,
    StructureError,
    Word,
    canonicalize_word,
    koszul_sign,
    reduced_coproduct,
    wedge_basis,
)
from .algebra import (
    FiltrationChain,
    LInftyStructure,
    check_relations,
    from_dgla,
    lift_coderivation,
    lower_central_series,
    make_linfty,
    unshuffle_residual,
)
from .morphism import (
    CohomologyReport,
    MorphismComponents,
    check_morphism,
    cohomology,
    compose,
    identity_morphism,
    is_quasi_iso,
    lift_morphism,
)
from .mc import (
    FlatnessError,
    MCElement,
    NonConvergenceError,
    PolyPath,
    gauge_flow,
    mc_element,
    mc_residual,
    twist,
)
from .convolution import (
    ConvolutionAlgebra,
    HomElement,
    build_convolution,
    coalgebra_partitions,
    iterated_coproduct,
    mc_to_morphism,
    morphism_to_mc,
    partial_derivation,
)
from .perturbation import (
    PerturbationRequest,
    differential_correction,
    perturb,
)
from .homotopy import (
    HomotopyElement,
    PathAlgebra,
    PathDegreeOverflow,
    PathElement,
    build_path_algebra,
    check_homotopy,
    gauge_to_homotopy,
    unsplit_residual,
)

__all__ = [
    "CoalgebraElement",
    "CohomologyReport",
    "ConvolutionAlgebra",
    "Element",
    "FiltrationChain",
    "FlatnessError",
    "GradedSpace",
    "HomElement",
    "HomotopyElement",
    "InputError",
    "LInftyStructure",
    "MCElement",
    "MorphismComponents",
    "MultiMap",
    "NonConvergenceError",
    "PathAlgebra",
    "PathDegreeOverflow",
    "PathElement",
    "PerturbationRequest",
    "PolyPath",
    "StructureError",
    "Word",
    "build_convolution",
    "build_path_algebra",
    "canonicalize_word",
    "check_homotopy",
    "check_morphism",
    "check_relations",
    "coalgebra_partitions",
    "cohomology",
    "compose",
    "differential_correction",
    "from_dgla",
    "gauge_flow",
    "gauge_to_homotopy",
    "identity_morphism",
    "is_quasi_iso",
    "iterated_coproduct",
    "koszul_sign",
    "lift_coderivation",
    "lift_morphism",
    "lower_central_series",
    "make_linfty",
    "mc_element",
    "mc_residual",
    "mc_to_morphism",
    "morphism_to_mc",
    "partial_derivation",
    "perturb",
    "reduced_coproduct",
    "twist",
    "unshuffle_residual",
    "unsplit_residual",
    "wedge_basis",
]
