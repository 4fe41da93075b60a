"""quiverdef: exact deformation theory for quiver algebra modules and complexes."""

from .gf import Matrix
from .presentation import AlgebraPresentation, make_presentation, parse_presentation
from .algebra import FiniteDimAlgebra, build_algebra, tensor_algebras, saturation_dimension
from .reps import (
    ModuleMap,
    Representation,
    direct_sum,
    hom_space,
    is_isomorphic,
    make_rep,
    projective,
    simple,
    string_module,
    top_socle,
)
from .homalg import (
    ar_translate,
    ext_dim,
    injective,
    is_self_injective,
    nakayama,
    orbit_probe,
    projective_cover,
    stable_end_dim,
    stable_hom_dim,
    strip_projectives,
    syzygy,
)
from .complexes import (
    BoundedComplex,
    ChainMap,
    complex_tangent,
    cone,
    cohomology,
    derived_ext_dim,
    first_order_quasilift,
    proflat_check,
    resolve_complex,
    shift,
    two_term_analysis,
)
from .deform import (
    TruncatedCoefficientRing,
    TruncatedLift,
    VersalReport,
    brute_force_obstruction_order,
    extend_lift,
    first_order_lifts,
    versal_classify,
)
from .bimodules import (
    Bimodule,
    bimodule_syzygy,
    inverse_bimodule_syzygy,
    regular_bimodule,
    tensor_bimodule_module,
    tensor_bimodules,
    transfer_invariants,
    verify_nice_tilting,
    verify_stable_morita,
)
from .corpus import corpus_get, corpus_list
from .tubes import tube_modules

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
