"""Fractal hemodynamics and functional-network distortion toolkit.

Simulates spontaneous neuronal activity on a connectome, filters it into
BOLD signals through per-node fractal hemodynamic response kernels, and
quantifies how the resulting functional networks (Pearson, mutual
information, transfer entropy) and node centralities are distorted,
including the wavelet-scale profile of the distortion and its correction
via nonfractal connectivity.
"""

__version__ = "0.1.0"

from .errors import ConfigError, FractalFcError, NumericalError  # noqa: E402
from .fractal import (  # noqa: E402
    FRAC_TRUNCATION,
    HurstEstimate,
    Series,
    estimate_hurst,
    fgn_autocovariance,
    fracdiff_coefficients,
    fractional_difference,
    fractional_integrate,
    generate_fgn,
    psd_slope,
)
from .wavelets import (  # noqa: E402
    WaveletDecomposition,
    level_band,
    max_modwt_level,
    modwt,
    wavelet_variances,
)
from .network import (  # noqa: E402
    Connectome,
    generate_synthetic_connectome,
    load_connectome,
)
from .simulate import (  # noqa: E402
    SimConfig,
    SystemMatrix,
    TimeSeriesMatrix,
    build_system,
    covariance_to_correlation,
    simulate_neural,
    stationary_covariance,
)
from .hemodynamics import (  # noqa: E402
    HurstProfile,
    RsHrfConfig,
    apply_rshrf,
    build_rshrf_kernel,
    sample_hurst_profile,
)
from .connectivity import (  # noqa: E402
    FcMatrix,
    ScaleCorrelation,
    estimate_fc,
    mutual_information_fc,
    pearson_fc,
    transfer_entropy_fc,
    wavelet_correlation,
    wavelet_correlation_matrices,
)
from .graph_metrics import (  # noqa: E402
    CentralityVector,
    DistortionReport,
    EdgeDistortionReport,
    centrality_distortion,
    compute_centrality,
    edge_distortion,
    eigenvector_centrality,
    strength_centrality,
)
from .experiment import (  # noqa: E402
    ExperimentConfig,
    ScaleProfileResult,
    SweepResult,
    SyntheticConnectomeSpec,
    TrialResult,
    estimate_nonfractal_fc,
    load_config,
    run_scale_profile,
    run_sigma_sweep,
    run_trial,
)
from .outputs import emit_outputs  # noqa: E402
