"""Dynamic time warping distances and warping paths.

Exact DTW (optionally constrained to a slope-adjusted Sakoe-Chiba band),
the multiscale FastDTW approximation, the differentiable soft-DTW loss
with its gradient, and alignment of a demonstration group to a chosen
reference.

Local cost is the Euclidean point distance for the exact variants and the
squared Euclidean distance for soft-DTW.  Backtracking breaks ties
deterministically: diagonal, then vertical (advance the first sequence),
then horizontal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InfeasibleBandError, InvalidArgumentError
from .model import DemonstrationSet, Trajectory, as_points

_INF = float("inf")


@dataclass(frozen=True, eq=False)
class AlignmentPath:
    """Monotone, continuous sequence of (i, j) index pairs starting at (0, 0)."""

    pairs: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] < 1:
            raise InvalidArgumentError("an alignment path is a non-empty (L, 2) index array")
        if pairs[0, 0] != 0 or pairs[0, 1] != 0:
            raise InvalidArgumentError("alignment paths start at (0, 0)")
        steps = np.diff(pairs, axis=0)
        ok = (steps >= 0).all() and (steps <= 1).all() and (steps.sum(axis=1) >= 1).all()
        if not ok:
            raise InvalidArgumentError("each path step must advance i, j or both by exactly 1")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)


@dataclass(frozen=True, eq=False)
class DtwResult:
    """Alignment outcome: cumulative distance and, when computed, the path."""

    distance: float
    path: AlignmentPath | None = None


def _as_sequence(x, name: str) -> np.ndarray:
    pts = as_points(x)
    if pts.shape[0] == 0:
        raise InvalidArgumentError(f"{name} must be non-empty")
    return pts


def _band_bounds(n: int, m: int, window: int) -> list[tuple[int, int]]:
    # Slope-adjusted Sakoe-Chiba band: |i - j*n/m| <= window.
    bounds = []
    for i in range(n):
        lo = int(np.ceil((i - window) * m / n))
        hi = int(np.floor((i + window) * m / n))
        bounds.append((max(0, lo), min(m - 1, hi)))
    return bounds


def _dp(
    pa: np.ndarray,
    pb: np.ndarray,
    bounds: list[tuple[int, int]],
    compute_path: bool,
    squared: bool = False,
):
    """Cumulative-cost recursion over the allowed cells; returns (distance, pairs).

    Local costs are computed per row inside the band only, and only banded
    row slices are kept, so runtime and memory are proportional to the
    number of allowed cells.
    """
    n, m = pa.shape[0], pb.shape[0]
    prev_start = 0
    prev_vals = [0.0]
    store = [(0, prev_vals)] if compute_path else None
    for i in range(1, n + 1):
        lo, hi = bounds[i - 1]
        diffs = pb[lo : hi + 1] - pa[i - 1]
        sq = (diffs * diffs).sum(axis=1)
        ci = sq.tolist() if squared else np.sqrt(sq).tolist()
        start = lo + 1
        plen = len(prev_vals)
        vals = []
        left = _INF
        for k in range(len(ci)):
            pidx = start + k - prev_start
            up = prev_vals[pidx] if 0 <= pidx < plen else _INF
            diag = prev_vals[pidx - 1] if 0 < pidx <= plen else _INF
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            left = ci[k] + best
            vals.append(left)
        if compute_path:
            store.append((start, vals))
        prev_start, prev_vals = start, vals
    idx = m - prev_start
    distance = prev_vals[idx] if 0 <= idx < len(prev_vals) else _INF
    if distance == _INF:
        raise InfeasibleBandError("no monotone path fits inside the band")
    if not compute_path:
        return distance, None

    # Backtrack, preferring diagonal, then vertical, then horizontal.
    def cell(i: int, jc: int) -> float:
        row_start, row_vals = store[i]
        k = jc - row_start
        return row_vals[k] if 0 <= k < len(row_vals) else _INF

    i, jc = n, m
    rev = [(i - 1, jc - 1)]
    while (i, jc) != (1, 1):
        diag, vert, horiz = cell(i - 1, jc - 1), cell(i - 1, jc), cell(i, jc - 1)
        best = min(diag, vert, horiz)
        if diag == best:
            i, jc = i - 1, jc - 1
        elif vert == best:
            i = i - 1
        else:
            jc = jc - 1
        rev.append((i - 1, jc - 1))
    rev.reverse()
    return distance, np.asarray(rev, dtype=np.int64)


def dtw(a, b, window: int | None = None, compute_path: bool = True) -> DtwResult:
    """Exact dynamic time warping with Euclidean local cost.

    Parameters
    ----------
    a, b : array-like
        Sequences of points, shape (N, d) and (M, d); 1-D input is treated
        as d=1.
    window : int, optional
        Sakoe-Chiba band half-width.  Cells with ``|i - j*N/M| > window``
        are excluded; a band too narrow to connect the corners raises
        :class:`InfeasibleBandError`.
    compute_path : bool
        Skip backtracking (and the cumulative matrix) when False.
    """
    pa = _as_sequence(a, "a")
    pb = _as_sequence(b, "b")
    if pa.shape[1] != pb.shape[1]:
        raise InvalidArgumentError("sequences must share the same dimension")
    n, m = pa.shape[0], pb.shape[0]
    if window is None:
        bounds = [(0, m - 1)] * n
    else:
        if window < 0:
            raise InvalidArgumentError("window must be non-negative")
        bounds = _band_bounds(n, m, int(window))
    distance, pairs = _dp(pa, pb, bounds, compute_path)
    path = AlignmentPath(pairs) if pairs is not None else None
    return DtwResult(distance=float(distance), path=path)


def dtw_squared(a, b, compute_path: bool = True) -> DtwResult:
    """DTW with squared Euclidean local cost (the objective DBA descends on)."""
    pa = _as_sequence(a, "a")
    pb = _as_sequence(b, "b")
    if pa.shape[1] != pb.shape[1]:
        raise InvalidArgumentError("sequences must share the same dimension")
    bounds = [(0, pb.shape[0] - 1)] * pa.shape[0]
    distance, pairs = _dp(pa, pb, bounds, compute_path, squared=True)
    path = AlignmentPath(pairs) if pairs is not None else None
    return DtwResult(distance=float(distance), path=path)


def _coarsen(pts: np.ndarray) -> np.ndarray:
    n = pts.shape[0]
    half = n // 2
    out = 0.5 * (pts[0 : 2 * half : 2] + pts[1 : 2 * half : 2])
    if n % 2:
        out = np.vstack([out, pts[-1]])
    return out


def _expanded_window(pairs: np.ndarray, n: int, m: int, radius: int) -> list[tuple[int, int]]:
    lo = [m] * n
    hi = [-1] * n
    for ci, cj in pairs:
        for fi in (2 * ci, 2 * ci + 1):
            if fi < n:
                jlo, jhi = 2 * cj, min(2 * cj + 1, m - 1)
                if jlo < lo[fi]:
                    lo[fi] = jlo
                if jhi > hi[fi]:
                    hi[fi] = jhi
    # Rows past the projected path (odd-length carry) reuse the last range.
    for fi in range(n):
        if hi[fi] < 0:
            lo[fi], hi[fi] = lo[fi - 1], hi[fi - 1]
    if radius > 0:
        spread_lo = [0] * n
        spread_hi = [0] * n
        for fi in range(n):
            rlo = max(0, fi - radius)
            rhi = min(n - 1, fi + radius)
            spread_lo[fi] = min(lo[rlo : rhi + 1]) - radius
            spread_hi[fi] = max(hi[rlo : rhi + 1]) + radius
        lo = [max(0, v) for v in spread_lo]
        hi = [min(m - 1, v) for v in spread_hi]
    return list(zip(lo, hi))


def fast_dtw(a, b, radius: int = 1) -> DtwResult:
    """Multiscale approximation of DTW.

    Coarsens both sequences by pairwise averaging until they are shorter
    than ``2 * (radius + 2)``, solves exactly, then refines the projected
    path at each finer level inside a corridor expanded by ``radius``.
    The returned distance is never below the exact DTW distance.
    """
    if radius < 0:
        raise InvalidArgumentError("radius must be non-negative")
    pa = _as_sequence(a, "a")
    pb = _as_sequence(b, "b")
    if pa.shape[1] != pb.shape[1]:
        raise InvalidArgumentError("sequences must share the same dimension")
    return _fast_dtw_rec(pa, pb, int(radius))


def _fast_dtw_rec(pa: np.ndarray, pb: np.ndarray, radius: int) -> DtwResult:
    min_size = 2 * (radius + 2)
    n, m = pa.shape[0], pb.shape[0]
    if n < min_size or m < min_size:
        return dtw(pa, pb)
    coarse = _fast_dtw_rec(_coarsen(pa), _coarsen(pb), radius)
    bounds = _expanded_window(coarse.path.pairs, n, m, radius)
    distance, pairs = _dp(pa, pb, bounds, compute_path=True)
    return DtwResult(distance=float(distance), path=AlignmentPath(pairs))


def _soft_forward(cost: np.ndarray, gamma: float) -> np.ndarray:
    n, m = cost.shape
    r = np.full((n + 1, m + 1), _INF)
    r[0, 0] = 0.0
    for k in range(2, n + m + 1):
        i = np.arange(max(1, k - m), min(n, k - 1) + 1)
        j = k - i
        x = r[i - 1, j - 1]
        y = r[i - 1, j]
        z = r[i, j - 1]
        lowest = np.minimum(np.minimum(x, y), z)
        with np.errstate(invalid="ignore"):
            total = (
                np.exp(-(x - lowest) / gamma)
                + np.exp(-(y - lowest) / gamma)
                + np.exp(-(z - lowest) / gamma)
            )
        r[i, j] = cost[i - 1, j - 1] + lowest - gamma * np.log(total)
    return r


def _soft_backward(cost: np.ndarray, r: np.ndarray, gamma: float) -> np.ndarray:
    n, m = cost.shape
    rp = np.full((n + 2, m + 2), -_INF)
    rp[: n + 1, : m + 1] = r
    rp[n + 1, m + 1] = r[n, m]
    cp = np.zeros((n + 2, m + 2))
    cp[1 : n + 1, 1 : m + 1] = cost
    e = np.zeros((n + 2, m + 2))
    e[n + 1, m + 1] = 1.0
    for k in range(n + m, 1, -1):
        i = np.arange(max(1, k - m), min(n, k - 1) + 1)
        j = k - i
        base = rp[i, j]
        w_vert = np.exp((rp[i + 1, j] - base - cp[i + 1, j]) / gamma)
        w_horiz = np.exp((rp[i, j + 1] - base - cp[i, j + 1]) / gamma)
        w_diag = np.exp((rp[i + 1, j + 1] - base - cp[i + 1, j + 1]) / gamma)
        e[i, j] = e[i + 1, j] * w_vert + e[i, j + 1] * w_horiz + e[i + 1, j + 1] * w_diag
    return e[1 : n + 1, 1 : m + 1]


def soft_dtw(a, b, gamma: float) -> tuple[float, np.ndarray]:
    """Soft-DTW value and its gradient with respect to ``a``.

    Uses squared Euclidean local cost and the smoothed minimum
    ``-gamma * log(sum(exp(-x/gamma)))``; the value approaches
    squared-cost DTW as gamma goes to 0 and may be negative.
    """
    if gamma <= 0:
        raise InvalidArgumentError("gamma must be positive")
    pa = _as_sequence(a, "a")
    pb = _as_sequence(b, "b")
    if pa.shape[1] != pb.shape[1]:
        raise InvalidArgumentError("sequences must share the same dimension")
    cost = cdist(pa, pb, metric="sqeuclidean")
    r = _soft_forward(cost, float(gamma))
    e = _soft_backward(cost, r, float(gamma))
    grad = 2.0 * (pa * e.sum(axis=1)[:, None] - e @ pb)
    return float(r[pa.shape[0], pb.shape[0]]), grad


def warp_points_to_reference(ref_pts: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """DTW-align a sequence onto a reference's index grid.

    Each reference index receives the mean of the points mapped to it by
    the optimal warping path, so the output has the reference's length.
    """
    pairs = dtw(ref_pts, pts).path.pairs
    out = np.zeros((ref_pts.shape[0], pts.shape[1]))
    counts = np.zeros(ref_pts.shape[0])
    np.add.at(out, pairs[:, 0], pts[pairs[:, 1]])
    np.add.at(counts, pairs[:, 0], 1.0)
    return out / counts[:, None]


def warp_to_reference(dset: DemonstrationSet, ref_index: int) -> DemonstrationSet:
    """Align every demonstration of a set onto one member.

    Each demo is DTW-aligned to ``demos[ref_index]`` and reduced to the
    reference's length; the aligned trajectories reuse the reference's
    timestamps.
    """
    if not 0 <= ref_index < len(dset.demos):
        raise InvalidArgumentError(f"reference index {ref_index} out of range")
    ref = dset.demos[ref_index]
    aligned = tuple(
        Trajectory(ref.times, warp_points_to_reference(ref.points, demo.points))
        for demo in dset.demos
    )
    return DemonstrationSet(dset.name, aligned)
