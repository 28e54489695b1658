"""Pseudospectral simulation and verification lab for the nonlocal NLS family."""

from .equations import (
    GAUGED_GNDNLS,
    GAUGED_NDNLS,
    GNDNLS,
    NDNLS,
    NNLS,
    EquationSpec,
    energy,
    mass,
    nonlinear_term,
    quintic_coefficient,
    rhs,
    support_leakage,
)
from .evolve import (
    BlowUpError,
    PicardReport,
    Trajectory,
    linear_propagator,
    picard_map,
    picard_solve,
    solve,
    step,
)
from .experiments import (
    ExperimentReport,
    TwoBumpData,
    exp_conservation,
    exp_gauge_equivalence,
    exp_norm_inflation,
    exp_picard_window,
    exp_scaling_global,
    exp_support_invariance,
    make_initial_data,
    third_derivative_field,
)
from .gauge import gauge_forward, gauge_inverse, gauge_modulus_identity, gauge_taylor
from .grid import (
    Band,
    EndpointDecayWarning,
    FrequencyGrid,
    GridMismatchError,
    SpectralField,
    antiderivative_symmetric,
    apply_multiplier,
    dealiased_product,
    derivative,
    forward_transform,
    inverse_transform,
    l2_distance,
    l2_norm,
    nonlocal_conjugate,
    project_band,
    spectral_mass,
    zero_field,
)
from .spaces import (
    DyadicCutoff,
    besov_norm,
    dilate,
    embedding_check,
    esigma_norm,
    hsigma_norm,
    littlewood_paley_blocks,
    scaling_bound_check,
)

__version__ = "0.1.0"
