"""Index of lattice hermitian Wilson-Dirac operators on finite tori."""

from .clifford import CliffordRep, clifford_rep
from .gauge import (
    FluxMatrix,
    GaugeField,
    LatticeGeometry,
    constant_flux_field,
    direct_sum_field,
    estimate_curvature_norm,
    gauge_transform,
    make_geometry,
    perturb_field,
    plaquette,
    tensor_field,
    trivial_field,
    wilson_loop,
)
from .ktheory import (
    BoundReport,
    IndexReport,
    SIGMA,
    SingularOperatorError,
    UnitaryTuple,
    acm_invariant,
    bott_index_tuple,
    clock_shift,
    continuum_index,
    corner_count_degree,
    gauge_tuple,
    lattice_index,
    mass_mode_equivalence,
    symbol_degree,
    verify_gap_bound,
)
from .spectral import (
    Inertia,
    fourier_diagonalize,
    half_signature,
    inertia,
    inertia_bunch_kaufman,
    min_abs_eigenvalue,
)
from .wilson import WilsonOperator, assemble, matvec, symbol, symbol_gap

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CliffordRep",
    "FluxMatrix",
    "GaugeField",
    "IndexReport",
    "Inertia",
    "LatticeGeometry",
    "SIGMA",
    "SingularOperatorError",
    "UnitaryTuple",
    "WilsonOperator",
    "acm_invariant",
    "assemble",
    "bott_index_tuple",
    "clifford_rep",
    "clock_shift",
    "constant_flux_field",
    "continuum_index",
    "corner_count_degree",
    "direct_sum_field",
    "estimate_curvature_norm",
    "fourier_diagonalize",
    "gauge_transform",
    "gauge_tuple",
    "half_signature",
    "inertia",
    "inertia_bunch_kaufman",
    "lattice_index",
    "make_geometry",
    "mass_mode_equivalence",
    "matvec",
    "min_abs_eigenvalue",
    "perturb_field",
    "plaquette",
    "symbol",
    "symbol_degree",
    "symbol_gap",
    "tensor_field",
    "trivial_field",
    "verify_gap_bound",
    "wilson_loop",
]
