"""Numerical laboratory for the 2D Zakharov system."""

__version__ = "0.1.0"

from .blowup import (
    AnsatzSpec,
    ansatz_eval,
    ansatz_norm,
    ansatz_time_derivative,
    blowup_norm_trace,
)
from .counterexamples import (
    BoxSpec,
    CharacteristicField,
    WeightSpec,
    box_norm,
    box_product_norm,
    counterexample_c1,
    counterexample_c2,
    duhamel_lower_bound_1,
    duhamel_lower_bound_2,
    trilinear_I_boxes,
)
from .cutoffs import beta_a_j, beta_j, dyadic_scales, psi, psi_n
from .grids import (
    FrequencyGrid,
    SpaceTimeField,
    SpaceTimeGrid,
    SpatialField,
    conjugate_reflect,
)
from .ground_state import ground_state, radial_ground_state, radial_mass
from .localize import LocalizeReport, localize_map
from .norms import (
    DataTriple,
    NormSpec,
    TimeSeries1D,
    besov_norm_1d,
    bourgain_norm,
    product_norm,
    sobolev_norm,
)
from .projectors import (
    project_angular,
    project_dyadic,
    project_modulation,
    whitney_tiles,
)
from .solver import (
    BlowupDetected,
    SolverConfig,
    SolverState,
    Trajectory,
    duhamel_S,
    duhamel_W,
    free_halfwave,
    free_schrodinger,
    lifespan_bound,
    reconstruct,
    reduce_data,
    rescale_solution,
    solve_nls,
    solve_reduced,
    solve_speed,
)
from .trilinear import (
    SweepResult,
    TileSpec,
    check_bilinear_strichartz,
    check_regime,
    check_trilinear_full,
    fit_exponent,
    make_dyadic_random_field,
    trilinear_I,
    trilinear_I_direct,
)

__all__ = [
    "__version__",
    "psi",
    "psi_n",
    "beta_j",
    "beta_a_j",
    "dyadic_scales",
    "FrequencyGrid",
    "SpaceTimeGrid",
    "SpatialField",
    "SpaceTimeField",
    "conjugate_reflect",
    "NormSpec",
    "TimeSeries1D",
    "DataTriple",
    "sobolev_norm",
    "besov_norm_1d",
    "bourgain_norm",
    "product_norm",
    "project_dyadic",
    "project_modulation",
    "project_angular",
    "whitney_tiles",
    "TileSpec",
    "SweepResult",
    "check_regime",
    "check_bilinear_strichartz",
    "check_trilinear_full",
    "trilinear_I",
    "trilinear_I_direct",
    "make_dyadic_random_field",
    "fit_exponent",
    "BoxSpec",
    "CharacteristicField",
    "WeightSpec",
    "trilinear_I_boxes",
    "box_norm",
    "box_product_norm",
    "counterexample_c1",
    "counterexample_c2",
    "duhamel_lower_bound_1",
    "duhamel_lower_bound_2",
    "LocalizeReport",
    "localize_map",
    "SolverConfig",
    "SolverState",
    "Trajectory",
    "BlowupDetected",
    "reduce_data",
    "reconstruct",
    "free_schrodinger",
    "free_halfwave",
    "duhamel_S",
    "duhamel_W",
    "solve_reduced",
    "solve_nls",
    "solve_speed",
    "rescale_solution",
    "lifespan_bound",
    "ground_state",
    "radial_ground_state",
    "radial_mass",
    "AnsatzSpec",
    "ansatz_eval",
    "ansatz_time_derivative",
    "ansatz_norm",
    "blowup_norm_trace",
]
