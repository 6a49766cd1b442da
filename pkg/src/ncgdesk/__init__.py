"""Exact noncommutative geometry over finite-dimensional multi-matrix
algebras: spectral invariants of normal elements, cyclic homology, the
Chern character and its extension to normal elements, and equivariant
Lefschetz numbers.
"""

from .algebra import (
    AlgebraElement,
    BorelSetModel,
    MultiMatrixAlgebra,
    Projection,
    SpectralForm,
    StarHomomorphism,
    apply_hom,
    apply_hom_spectral,
    is_normal,
    spectral_decompose,
    spectral_projection,
)
from .budget import get_budget, set_budget
from .chern import (
    T_cover,
    T_direct,
    chern_projection,
    dyadic_cover,
    eta_cycle,
    generalized_chern,
    verify_eta_vanishes,
)
from .cyclic import (
    HCClass,
    TensorElement,
    cyclic_op,
    face_op,
    hc_class,
    hc_dims,
    hc_space,
    is_boundary,
    trace_map,
)
from .errors import (
    ConsistencyError,
    DomainError,
    NcgError,
    NumericalError,
    ResourceError,
    ValidationError,
)
from .lefschetz import (
    FiniteGroup,
    GAComplex,
    IrrepTable,
    generalized_lefschetz,
    harmonic_modules,
    lefschetz_first,
    lefschetz_second,
    validate_complex,
)
from .ngroup import (
    K0Class,
    K0TensorC,
    N0Class,
    functorial_map,
    h_map,
    n_class,
    n_equiv,
    t_map,
)
from .scalars import Cyclotomic, get_epsilon, set_epsilon

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "BorelSetModel", "MultiMatrixAlgebra", "Projection",
    "SpectralForm", "StarHomomorphism", "apply_hom", "apply_hom_spectral",
    "is_normal", "spectral_decompose", "spectral_projection",
    "get_budget", "set_budget",
    "T_cover", "T_direct", "chern_projection", "dyadic_cover", "eta_cycle",
    "generalized_chern", "verify_eta_vanishes",
    "HCClass", "TensorElement", "cyclic_op", "face_op", "hc_class",
    "hc_dims", "hc_space", "is_boundary", "trace_map",
    "ConsistencyError", "DomainError", "NcgError", "NumericalError",
    "ResourceError", "ValidationError",
    "FiniteGroup", "GAComplex", "IrrepTable", "generalized_lefschetz",
    "harmonic_modules", "lefschetz_first", "lefschetz_second",
    "validate_complex",
    "K0Class", "K0TensorC", "N0Class", "functorial_map", "h_map", "n_class",
    "n_equiv", "t_map",
    "Cyclotomic", "get_epsilon", "set_epsilon",
]
