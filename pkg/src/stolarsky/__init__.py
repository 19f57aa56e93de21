"""Spherical discrepancies, pairwise energies and Stolarsky-type identities on S^d."""

__version__ = "0.1.0"

from .discrepancy import (
    Cap,
    CapFixedT,
    DiscrepancyFamily,
    Hemisphere,
    Slice,
    Wedge,
    cap_discrepancy_sq,
    cap_fixed_t_discrepancy_sq,
    discrepancy_sq,
    hamming_distance,
    hemisphere_discrepancy_sq,
    mc_discrepancy_sq,
    slice_discrepancy_sq,
    wedge_discrepancy_sq,
)
from .energy import (
    EnergyReport,
    continuous_energy_sigma,
    discrete_energy,
    energy_gap,
    measure_energy_extremes,
    vd,
)
from .gegenbauer import (
    GegenbauerExpansion,
    NotPositiveDefiniteError,
    PDVerdict,
    QuadratureError,
    expand_kernel,
    f_discrepancy_sq,
    funk_hecke_residual,
    gegenbauer_poly,
    generalized_stolarsky_gap,
    is_positive_definite,
    lambda_for_dim,
    sqrt_kernel,
)
from .io import FormatError, export_expansion, import_expansion, load_pointset, save_pointset, save_report
from .kernels import (
    EuclideanPow,
    ExpansionKernel,
    GeodesicPow,
    InnerProdPow,
    Kernel,
    SliceSquare,
    WedgeSquare,
    make_kernel,
)
from .montecarlo import MCEstimate
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    check_odd_maximizer_structure,
    maximize_distance_sum,
    symmetry_defect,
    verify_hemisphere_balance,
)
from .sphere import (
    DimensionError,
    PointSet,
    WeightedMeasure,
    cap_intersection_measure,
    cap_measure,
    constant_Cd,
    euclidean_distance,
    fibonacci_points,
    geodesic_distance,
    sample_uniform,
)
