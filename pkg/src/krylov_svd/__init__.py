"""Singular-value tridiagonalization and Krylov spread complexity toolkit."""

from .decomp import (
    LanczosCoefficients,
    TridiagonalSVD,
    lanczos,
    polar_sqrt,
    singular_values,
    thermal_state,
    tridiagonalize_svd,
)
from .ensembles import (
    CLASS_INDICES,
    EnsembleSpec,
    build_nhsyk,
    nhsyk_class,
    realization_rng,
    realize,
    sample_class_2x2,
    sample_ginibre,
    sample_interpolating,
)
from .hermitization import (
    HermitizedPair,
    hermitize,
    hermitized_complexity,
    hermitized_lanczos,
    restricted_equivalence_check,
)
from .krylov import (
    ComplexityCurve,
    complexity,
    complexity_of,
    detect_peak,
    ehrenfest_rate,
    evolve,
    mean_curve,
    plateau,
    time_grid,
)
from .analytic import (
    PeakScanResult,
    find_beta_min,
    kh_d1,
    ks_2x2,
    ks_poisson,
    kummer_1f1,
    peak_scan,
)
from .spectral import (
    BulkProfile,
    DensityProfile,
    SpacingRatios,
    bulk_from_density,
    catalan_half,
    density_from_bulk,
    dedup_kramers,
    fit_bulk,
    moments_to_lanczos,
    pad_coefficients,
    quadrant_law,
    spacing_ratios,
    wigner_dyson,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
