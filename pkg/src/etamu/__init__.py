"""Exact statistics of maximal-ratio combining over independent eta-mu fading.

The combiner output SNR ``Y = sum_l gamma_l`` has a product-form MGF; its
density, distribution and the average bit error rate of binary modulations
are evaluated by numerical contour integration with a-posteriori error
estimates.  A gamma-mixture series and a Monte Carlo simulator provide
independent references.
"""

from .errors import (
    ContourCrossesSingularity,
    ConvergenceFailure,
    DegenerateParameters,
    EtaMuError,
    EvaluationAtBranchPoint,
    InvalidAbscissa,
    InvalidOrder,
    NonIntegerClusterCount,
    NonPositiveShape,
    ParameterOutOfRange,
    PoleAtNonPositiveInteger,
    TruncationBoundNotMet,
    ZeroBase,
)
from .gammasum import GammaSum, gamma_sum_cdf, gamma_sum_pdf
from .inversion import (
    DEFAULT_CONFIG,
    BpskKernel,
    EvalResult,
    InversionConfig,
    Method,
    TransformFn,
    integrate_vertical,
    invert_at,
    invert_scaled_at,
)
from .modulation import CBFSK, CBPSK, DBPSK, NBFSK, PRESETS, ModulationScheme, conditional_ber
from .montecarlo import (
    EmpiricalSummary,
    RngStream,
    empirical_ber,
    sample_branch,
    sample_branch_clusters,
    simulate_mrc,
)
from .params import (
    DerivedConstants,
    FadingBranch,
    FadingFormat,
    MrcChannel,
    convert_format,
    db_to_linear,
    derive_constants,
    linear_to_db,
    validate_branch,
)
from .performance import BerPoint, avg_ber_contour, avg_ber_quadrature, ber_curve, outage
from .specfun import bessel_i, log_gamma, principal_power, upper_incomplete_gamma
from .stats import SnrGrid, cdf_sum, mgf, mgf_transform, moments, pdf_single_closed, pdf_sum

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
