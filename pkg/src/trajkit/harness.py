"""Evaluation pipelines over demonstration groups.

A :class:`PipelineConfig` selects the parametrization domain (time or
arc length), an optional DTW alignment to a reference demo, and a
barycenter method.  ``evaluate_group`` runs the pipeline and scores the
processed group with the synchrony metrics plus the cumulative l2 error
against the barycenter; ``barycenter_quality`` scores the barycenter
against a known ground-truth polyline; ``reference_sensitivity`` and
``gmm_sweep`` expose the corresponding robustness axes; and
``benchmark_runtimes`` measures alignment-algorithm scaling.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .barycenter import BarycenterResult, dba, euclidean_barycenter, fit_gmm, gmr, soft_dtw_barycenter
from .dtw import dtw, fast_dtw, warp_points_to_reference
from .errors import InvalidArgumentError, UndefinedMetricError
from .metrics import MetricReport, cumulative_l2, hausdorff, rho, sn_csd, symbolic_entropy
from .model import DemonstrationSet, Trajectory, resample_uniform
from .spatial import spatial_sample

DOMAINS = ("time", "arclength")
ALIGNERS = ("none", "dtw-to-reference")
METHODS = ("euc", "dba", "sdtw", "gmr")


@dataclass(frozen=True)
class PipelineConfig:
    """Selector for one evaluation pipeline."""

    domain: str
    aligner: str = "none"
    barycenter_method: str = "euc"
    delta: float | None = None
    g: int | None = None
    reference: int = 0
    resample_length: int = 200
    seed: int = 0
    sdtw_gamma: float = 0.01

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise InvalidArgumentError(f"domain must be one of {DOMAINS}")
        if self.aligner not in ALIGNERS:
            raise InvalidArgumentError(f"aligner must be one of {ALIGNERS}")
        if self.barycenter_method not in METHODS:
            raise InvalidArgumentError(f"barycenter_method must be one of {METHODS}")
        if self.domain == "arclength" and (self.delta is None or self.delta <= 0):
            raise InvalidArgumentError("the arclength domain requires a positive delta")
        if self.barycenter_method == "gmr" and (self.g is None or self.g < 1):
            raise InvalidArgumentError("the gmr method requires a positive G")
        if self.resample_length < 2:
            raise InvalidArgumentError("resample_length must be at least 2")


def process_demos(dset: DemonstrationSet, cfg: PipelineConfig) -> tuple[np.ndarray, list[np.ndarray]]:
    """Domain transform + optional alignment; returns (query grid, sequences).

    Time domain: each demo resampled to ``resample_length`` over its own
    normalized time.  Arc-length domain: each demo filtered at
    ``cfg.delta`` (endpoint kept) and resampled uniformly over normalized
    arc length.  The query grid spans [0, 1] either way.
    """
    m = cfg.resample_length
    u = np.linspace(0.0, 1.0, m)
    seqs = []
    if cfg.domain == "time":
        for demo in dset.demos:
            seqs.append(resample_uniform(demo, m).points)
    else:
        for demo in dset.demos:
            path = spatial_sample(demo, cfg.delta, keep_endpoint=True)
            if path.n_samples < 2:
                raise InvalidArgumentError(
                    "delta is too coarse for this demo; the filtered path has a single sample"
                )
            s_norm = path.s / path.s[-1]
            seqs.append(
                np.column_stack(
                    [np.interp(u, s_norm, path.points[:, j]) for j in range(path.dimension)]
                )
            )
    if cfg.aligner == "dtw-to-reference":
        if not 0 <= cfg.reference < len(seqs):
            raise InvalidArgumentError(f"reference index {cfg.reference} out of range")
        ref = seqs[cfg.reference]
        seqs = [warp_points_to_reference(ref, s) for s in seqs]
    return u, seqs


def compute_barycenter(u: np.ndarray, seqs: list[np.ndarray], cfg: PipelineConfig) -> BarycenterResult:
    method = cfg.barycenter_method
    if method == "euc":
        return euclidean_barycenter(seqs)
    if method == "dba":
        return dba(seqs)
    if method == "sdtw":
        # Consensus quality saturates quickly; cap the descent for throughput.
        return soft_dtw_barycenter(seqs, gamma=cfg.sdtw_gamma, length=len(u), max_iters=12)
    joint = np.vstack([np.column_stack([u, s]) for s in seqs])
    model = fit_gmm(joint, cfg.g, seed=cfg.seed)
    return gmr(model, u)


def _group_metrics(seqs: list[np.ndarray], curve: np.ndarray) -> tuple[float, float, float, float]:
    """Per-dimension synchrony metrics averaged over dimensions, plus summed l2.

    Dimensions where a metric is undefined (all-constant signals) are
    skipped; the metric errors out only if every dimension is undefined.
    """
    dim = seqs[0].shape[1]
    rhos, entropies, sncsds = [], [], []
    for j in range(dim):
        group = np.asarray([s[:, j] for s in seqs])
        entropies.append(symbolic_entropy(group))
        try:
            rhos.append(rho(group))
        except UndefinedMetricError:
            pass
        try:
            sncsds.append(sn_csd(group))
        except UndefinedMetricError:
            pass
    if not rhos or not sncsds:
        raise UndefinedMetricError("synchrony metrics undefined on every dimension")
    l2 = sum(cumulative_l2(s, curve) for s in seqs)
    return (
        float(np.mean(rhos)),
        float(np.mean(entropies)),
        float(np.mean(sncsds)),
        float(l2),
    )


def evaluate_group(dset: DemonstrationSet, cfg: PipelineConfig) -> tuple[MetricReport, BarycenterResult]:
    """Run one pipeline over a group and score it."""
    u, seqs = process_demos(dset, cfg)
    result = compute_barycenter(u, seqs, cfg)
    rho_v, entropy_v, sncsd_v, l2_v = _group_metrics(seqs, result.curve)
    report = MetricReport(
        rho=rho_v,
        entropy=entropy_v,
        sncsd=sncsd_v,
        l2=l2_v,
        domain=cfg.domain,
        method=cfg.barycenter_method,
        group=dset.name,
    )
    return report, result


def barycenter_quality(dset: DemonstrationSet, cfg: PipelineConfig, ground_truth) -> tuple[float, float]:
    """(Hausdorff distance, DTW score) of the pipeline's barycenter vs ground truth.

    Only the barycenter is computed, so this also works for single-demo
    sets where the group synchrony metrics are undefined.
    """
    u, seqs = process_demos(dset, cfg)
    result = compute_barycenter(u, seqs, cfg)
    gt = np.asarray(ground_truth, dtype=float)
    d_h = hausdorff(result.curve, gt)
    d_dtw = dtw(result.curve, gt, compute_path=False).distance
    return d_h, d_dtw


@dataclass(frozen=True)
class QualityRow:
    reference: int
    d_h: float
    d_dtw: float


def reference_sensitivity(dset: DemonstrationSet, cfg: PipelineConfig, ground_truth) -> list[QualityRow]:
    """Barycenter quality for every choice of alignment reference."""
    rows = []
    for ref in range(len(dset.demos)):
        d_h, d_dtw = barycenter_quality(dset, replace(cfg, reference=ref), ground_truth)
        rows.append(QualityRow(reference=ref, d_h=d_h, d_dtw=d_dtw))
    return rows


@dataclass(frozen=True)
class SweepRow:
    g: int
    d_h: float
    d_dtw: float
    feasible: bool


def gmm_sweep(dset: DemonstrationSet, cfg: PipelineConfig, g_values, ground_truth) -> list[SweepRow]:
    """Barycenter quality across GMM component counts; infeasible G values are flagged."""
    if cfg.barycenter_method != "gmr":
        raise InvalidArgumentError("the GMM sweep requires the gmr method")
    rows = []
    for g in g_values:
        try:
            d_h, d_dtw = barycenter_quality(dset, replace(cfg, g=int(g)), ground_truth)
            rows.append(SweepRow(g=int(g), d_h=d_h, d_dtw=d_dtw, feasible=True))
        except InvalidArgumentError:
            rows.append(SweepRow(g=int(g), d_h=float("nan"), d_dtw=float("nan"), feasible=False))
    return rows


# ---------------------------------------------------------------------------
# Runtime benchmarking


@dataclass(frozen=True)
class BenchmarkRow:
    algorithm: str
    complexity: str
    size: int
    median_s: float
    spread_s: float


def _benchmark_signal(size: int, seed: int) -> np.ndarray:
    """Smooth 1-D signal whose total variation scales with its length.

    Mirrors a constant-rate recording of a constant-speed motion: more
    samples cover more path (2e-4 units per sample step).
    """
    rng = np.random.default_rng(seed)
    u = np.linspace(0.0, 1.0, size)
    y = np.zeros(size)
    for mode in range(1, 6):
        y += rng.normal() / mode * np.sin(2.0 * np.pi * mode * u + rng.uniform(0, 2 * np.pi))
    tv = np.abs(np.diff(y)).sum()
    return (y * (2e-4 * size / tv))[:, None]


def _time_call(fn, repeats: int) -> tuple[float, float]:
    fn()  # warm-up, discarded
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    arr = np.sort(np.asarray(samples))
    q1, q3 = np.percentile(arr, [25, 75])
    return float(np.median(arr)), float(q3 - q1)


def benchmark_runtimes(sizes, repeats: int = 20) -> list[BenchmarkRow]:
    """Median wall-clock runtimes of the alignment algorithms per input size.

    Benchmarks exact DTW, band-constrained DTW (band = 10% of the size),
    FastDTW (radius 1) and the spatial filter at two spacings an order of
    magnitude apart.  Runs serially; the warm-up call is discarded and the
    median plus interquartile spread over ``repeats`` runs is reported.
    """
    sizes = [int(s) for s in sizes]
    if sizes != sorted(sizes):
        raise InvalidArgumentError("sizes must be ascending")
    if repeats < 1:
        raise InvalidArgumentError("repeats must be at least 1")
    rows = []
    for size in sizes:
        a = _benchmark_signal(size, seed=101)
        b = _benchmark_signal(size, seed=202)
        traj = Trajectory(np.linspace(0.0, 1.0, size), a)
        band = max(1, round(0.1 * size))
        cases = [
            ("dtw", "O(NM)", lambda: dtw(a, b, compute_path=False)),
            ("cdtw", "O(NW)", lambda: dtw(a, b, window=band, compute_path=False)),
            ("fastdtw", "O(N)", lambda: fast_dtw(a, b, radius=1)),
            ("ss-delta1", "O(KN)", lambda: spatial_sample(traj, 0.001)),
            ("ss-delta2", "O(KN)", lambda: spatial_sample(traj, 0.01)),
        ]
        for name, complexity, fn in cases:
            median, spread = _time_call(fn, repeats)
            rows.append(
                BenchmarkRow(
                    algorithm=name, complexity=complexity, size=size, median_s=median, spread_s=spread
                )
            )
    return rows
