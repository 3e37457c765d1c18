"""trajkit: arc-length trajectory filtering, alignment and skill extraction.

The central operation is :func:`spatial_sample`, which reparametrizes a
recorded robot trajectory from time to arc length by emitting points a
fixed geometric distance apart along the recorded polyline.  Around it the
package provides DTW-family alignment baselines, barycenter extraction
(Euclidean, DBA, soft-DTW, GMM/GMR), synchrony and approximation metrics,
a synthetic demonstration generator, an experiment harness and a CLI.
"""

from .barycenter import (
    BarycenterResult,
    GmmModel,
    dba,
    euclidean_barycenter,
    fit_gmm,
    gmr,
    soft_dtw_barycenter,
)
from .dataio import (
    DatasetManifest,
    TimingSpec,
    generate_synthetic,
    load_dataset,
    save_dataset,
    shape_polyline,
    synthetic_group,
)
from .dtw import AlignmentPath, DtwResult, dtw, fast_dtw, soft_dtw, warp_to_reference
from .errors import (
    DegeneratePathError,
    InfeasibleBandError,
    InvalidArgumentError,
    ParseError,
    TrajkitError,
    UndefinedMetricError,
)
from .harness import (
    PipelineConfig,
    barycenter_quality,
    benchmark_runtimes,
    evaluate_group,
    gmm_sweep,
    reference_sensitivity,
)
from .metrics import (
    MetricReport,
    analytic_phase,
    cumulative_l2,
    hausdorff,
    rho,
    sn_csd,
    symbolic_entropy,
)
from .model import (
    ArcLengthPath,
    DemonstrationSet,
    Trajectory,
    polyline_length,
    resample_uniform,
)
from .spatial import DeltaSearchReport, optimize_delta, recover_feed_rate, retime, spatial_sample

__version__ = "0.1.0"

__all__ = [
    "AlignmentPath",
    "ArcLengthPath",
    "BarycenterResult",
    "DatasetManifest",
    "DegeneratePathError",
    "DeltaSearchReport",
    "DemonstrationSet",
    "DtwResult",
    "GmmModel",
    "InfeasibleBandError",
    "InvalidArgumentError",
    "MetricReport",
    "ParseError",
    "PipelineConfig",
    "TimingSpec",
    "Trajectory",
    "TrajkitError",
    "UndefinedMetricError",
    "analytic_phase",
    "barycenter_quality",
    "benchmark_runtimes",
    "cumulative_l2",
    "dba",
    "dtw",
    "euclidean_barycenter",
    "evaluate_group",
    "fast_dtw",
    "fit_gmm",
    "generate_synthetic",
    "gmm_sweep",
    "gmr",
    "hausdorff",
    "load_dataset",
    "optimize_delta",
    "polyline_length",
    "recover_feed_rate",
    "reference_sensitivity",
    "resample_uniform",
    "retime",
    "rho",
    "save_dataset",
    "shape_polyline",
    "sn_csd",
    "soft_dtw",
    "soft_dtw_barycenter",
    "spatial_sample",
    "symbolic_entropy",
    "synthetic_group",
    "warp_to_reference",
]
