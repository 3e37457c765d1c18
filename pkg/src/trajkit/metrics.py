"""Evaluation metrics: Hausdorff distance, cumulative l2 error and the
multivariate synchrony measures (cluster-phase rho, symbolic entropy,
sum-normalized cross-spectral density).

All metrics are deterministic.  The synchrony measures operate on groups
of equal-length 1-D signals; multivariate trajectories are evaluated per
dimension by the experiment harness and averaged there.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InvalidArgumentError, UndefinedMetricError
from .model import as_points

# Fraction of samples dropped at each edge before phase statistics are
# averaged; the analytic signal is unreliable near the boundaries.
_EDGE_TRIM = 0.05

_CSV_HEADER = "group,domain,method,rho,entropy,sncsd,l2"


@dataclass(frozen=True, eq=False)
class MetricReport:
    """One row of synchrony/approximation metrics for a demonstration group."""

    rho: float
    entropy: float
    sncsd: float
    l2: float
    domain: str
    method: str
    group: str = ""

    def __post_init__(self):
        for name in ("rho", "sncsd"):
            value = getattr(self, name)
            if not -1e-9 <= value <= 1.0 + 1e-9:
                raise InvalidArgumentError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, float(min(max(value, 0.0), 1.0)))
        if self.entropy < 0 or self.l2 < 0:
            raise InvalidArgumentError("entropy and l2 must be non-negative")

    @staticmethod
    def csv_header() -> str:
        return _CSV_HEADER

    def to_csv_row(self) -> str:
        return ",".join(
            [
                self.group,
                self.domain,
                self.method,
                f"{self.rho:.17g}",
                f"{self.entropy:.17g}",
                f"{self.sncsd:.17g}",
                f"{self.l2:.17g}",
            ]
        )


def hausdorff(a, b) -> float:
    """Hausdorff distance between two point sample sets.

    The max over both directions of the farthest nearest-neighbour
    distance, evaluated on the discrete sample sets.
    """
    pa = as_points(a)
    pb = as_points(b)
    if pa.shape[0] == 0 or pb.shape[0] == 0:
        raise InvalidArgumentError("point sets must be non-empty")
    if pa.shape[1] != pb.shape[1]:
        raise InvalidArgumentError("point sets must share the same dimension")
    # Chunk the larger direction so the distance matrix stays bounded.
    chunk = max(1, int(4e7) // max(1, pb.shape[0]))
    d_ab = 0.0
    for lo in range(0, pa.shape[0], chunk):
        block = cdist(pa[lo : lo + chunk], pb)
        d_ab = max(d_ab, float(block.min(axis=1).max()))
        if lo == 0:
            mins_b = block.min(axis=0)
        else:
            mins_b = np.minimum(mins_b, block.min(axis=0))
    d_ba = float(mins_b.max())
    return max(d_ab, d_ba)


def cumulative_l2(a, b) -> float:
    """Sum over samples of the pointwise Euclidean error between two sequences."""
    pa = as_points(a)
    pb = as_points(b)
    if pa.shape != pb.shape:
        raise InvalidArgumentError("sequences must have equal length and dimension")
    return float(np.linalg.norm(pa - pb, axis=1).sum())


def analytic_phase(x) -> tuple[np.ndarray, bool]:
    """Instantaneous phase of a 1-D signal via the frequency-domain Hilbert transform.

    The signal is mean-centered, positive frequencies are doubled, negative
    frequencies zeroed and DC/Nyquist left untouched.  Returns the wrapped
    phase and a degenerate flag; a constant signal has no phase and is
    flagged (phase defined as 0).
    """
    sig = np.asarray(x, dtype=float).reshape(-1)
    if sig.shape[0] < 8:
        raise InvalidArgumentError("phase estimation needs at least 8 samples")
    centered = sig - sig.mean()
    scale = float(np.abs(centered).max())
    if scale == 0.0:
        return np.zeros_like(sig), True
    n = sig.shape[0]
    spectrum = np.fft.fft(centered)
    gain = np.zeros(n)
    gain[0] = 1.0
    if n % 2 == 0:
        gain[n // 2] = 1.0
        gain[1 : n // 2] = 2.0
    else:
        gain[1 : (n + 1) // 2] = 2.0
    analytic = np.fft.ifft(spectrum * gain)
    return np.angle(analytic), False


def _as_signal_group(signals, k_min: int) -> np.ndarray:
    arr = np.asarray(signals, dtype=float)
    if arr.ndim != 2:
        raise InvalidArgumentError("expected k equal-length 1-D signals")
    if arr.shape[0] < k_min:
        raise InvalidArgumentError(f"need at least {k_min} signals")
    return arr


def rho(signals) -> float:
    """Cluster-phase consistency of a group of signals.

    Phases come from the analytic signal; the cluster phase is the argument
    of the mean phasor across signals, and rho is the time-averaged
    resultant of each signal's deviation from its own mean offset.  1 means
    perfectly consistent relative phases.  Constant signals carry no phase
    and are excluded (with a warning); if all are constant the metric is
    undefined.
    """
    arr = _as_signal_group(signals, k_min=2)
    phases = []
    for idx, row in enumerate(arr):
        phase, degenerate = analytic_phase(row)
        if degenerate:
            warnings.warn(f"signal {idx} is constant; excluded from rho", stacklevel=2)
            continue
        phases.append(phase)
    if not phases:
        raise UndefinedMetricError("rho is undefined: all signals are constant")
    theta = np.asarray(phases)
    trim = int(np.ceil(_EDGE_TRIM * theta.shape[1]))
    if theta.shape[1] > 2 * trim:
        theta = theta[:, trim : theta.shape[1] - trim]
    cluster = np.angle(np.exp(1j * theta).mean(axis=0))
    rel = theta - cluster[None, :]
    offsets = np.angle(np.exp(1j * rel).mean(axis=1))
    resultant = np.abs(np.exp(1j * (rel - offsets[:, None])).mean(axis=0))
    return float(resultant.mean())


def symbolic_entropy(signals) -> float:
    """Shannon entropy (bits) of the joint binarized state of a signal group.

    Each signal is binarized about its own mean; the k bits at each time
    step form a word and the entropy of the empirical word distribution is
    returned.  Synchronized, regular groups visit few words.
    """
    arr = _as_signal_group(signals, k_min=1)
    bits = arr > arr.mean(axis=1, keepdims=True)
    weights = 1 << np.arange(arr.shape[0], dtype=np.int64)
    words = (bits.astype(np.int64) * weights[:, None]).sum(axis=0)
    _, counts = np.unique(words, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def sn_csd(signals) -> float:
    """Sum-normalized cross-spectral density of a signal group.

    Signals are mean-centered and the DC bin is excluded.  The ratio of the
    summed squared coherent spectrum to k times the total spectral energy
    is bounded in [0, 1] (Cauchy-Schwarz) and equals 1 iff all spectra are
    identical.
    """
    arr = _as_signal_group(signals, k_min=2)
    centered = arr - arr.mean(axis=1, keepdims=True)
    spectra = np.fft.fft(centered, axis=1)[:, 1:]
    denom = float((np.abs(spectra) ** 2).sum())
    if denom == 0.0:
        raise UndefinedMetricError("snCSD is undefined: all signals are constant")
    numer = float((np.abs(spectra.sum(axis=0)) ** 2).sum())
    return numer / (arr.shape[0] * denom)
