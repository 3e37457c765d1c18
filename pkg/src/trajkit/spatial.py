"""Constant-spatial-period filtering of recorded trajectories.

``spatial_sample`` walks the linear interpolant of a recorded trajectory
and emits points exactly ``delta`` apart along it, together with the
recovered timestamps, turning a time-parametrized recording into an
arc-length-parametrized path.  Because the emission rule is purely
geometric, the output points are independent of the timing law of the
demonstration: pauses, speed ramps and retimings only change the
recovered ``t``, never the geometry.

``optimize_delta`` picks the largest spacing whose sample-set Hausdorff
distance to the recording stays below a target, scanning a doubling
progression and refining by bisection.  ``recover_feed_rate`` and
``retime`` convert between the arc-length representation and timed
trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePathError, InvalidArgumentError
from .metrics import hausdorff
from .model import ArcLengthPath, Trajectory, polyline_length

# Absolute slack for the boundary comparison: a segment end exactly delta
# away is emitted instead of skipped, so uniform grids survive filtering.
_BOUNDARY_ATOL = 1e-12


def spatial_sample(traj: Trajectory, delta: float, keep_endpoint: bool = False) -> ArcLengthPath:
    """Filter a trajectory into samples spaced exactly ``delta`` apart.

    Parameters
    ----------
    traj : Trajectory
        Recorded demonstration.  Repeated points (pauses) are fine.
    delta : float
        Spatial period between consecutive output samples, in the units of
        ``traj.points``.
    keep_endpoint : bool
        Append the final recorded point as an extra sample even though its
        spacing may be shorter than ``delta``.  The appended sample is
        flagged via ``endpoint_appended``.

    Returns
    -------
    ArcLengthPath
        Points on the linear interpolant of ``traj``, with arc length
        ``s[k] = k*delta`` and the interpolated time of each emitted point.
    """
    if delta <= 0:
        raise InvalidArgumentError("delta must be positive")
    pts = traj.points
    times = traj.times
    n, dim = pts.shape
    if not np.any(np.linalg.norm(np.diff(pts, axis=0), axis=1) > 0.0):
        raise DegeneratePathError("trajectory has zero length (all points identical)")

    # Plain-float inner loop: the walk is sequential and dominates runtime.
    p = pts.tolist()
    tt = times.tolist()
    rng_dim = range(dim)

    out_pts = [list(p[0])]
    out_t = [tt[0]]
    yc = list(p[0])
    i = 0
    alpha_floor = 0.0
    delta_sq = delta * delta
    while i < n - 1:
        end = p[i + 1]
        d_end = math.sqrt(sum((end[c] - yc[c]) ** 2 for c in rng_dim))
        if d_end < delta - _BOUNDARY_ATOL:
            i += 1
            alpha_floor = 0.0
            continue
        if d_end <= delta + _BOUNDARY_ATOL:
            # Segment end sits exactly one period away: emit it.
            out_pts.append(list(end))
            out_t.append(tt[i + 1])
            yc = list(end)
            alpha_floor = 1.0
            continue
        start = p[i]
        v = [end[c] - start[c] for c in rng_dim]
        a = sum(vc * vc for vc in v)
        w = [start[c] - yc[c] for c in rng_dim]
        b = 2.0 * sum(wc * vc for wc, vc in zip(w, v))
        cq = sum(wc * wc for wc in w) - delta_sq
        disc = b * b - 4.0 * a * cq
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        roots = sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
        alpha = None
        for r in roots:
            if alpha_floor - 1e-12 <= r <= 1.0 + 1e-12:
                alpha = min(max(r, alpha_floor), 1.0)
                break
        if alpha is None:
            # Unreachable when d_end > delta; guard against fp corner cases.
            i += 1
            alpha_floor = 0.0
            continue
        yc = [start[c] + alpha * v[c] for c in rng_dim]
        out_pts.append(list(yc))
        out_t.append(tt[i] + alpha * (tt[i + 1] - tt[i]))
        alpha_floor = alpha

    k = len(out_pts) - 1
    s = np.arange(k + 1) * float(delta)
    endpoint_appended = False
    if keep_endpoint:
        tail = math.sqrt(sum((p[-1][c] - yc[c]) ** 2 for c in rng_dim))
        if tail > _BOUNDARY_ATOL:
            out_pts.append(list(p[-1]))
            out_t.append(tt[-1])
            s = np.append(s, s[-1] + tail)
            endpoint_appended = True
    return ArcLengthPath(
        delta=float(delta),
        s=s,
        points=np.asarray(out_pts, dtype=float),
        t=np.asarray(out_t, dtype=float),
        endpoint_appended=endpoint_appended,
    )


@dataclass(frozen=True, eq=False)
class DeltaSearchReport:
    """Result of the spacing search.

    ``grid``/``dH`` record the doubling progression that was evaluated;
    ``chosen`` is the largest feasible spacing found (None when even the
    initial spacing violates the target).
    """

    grid: np.ndarray
    dH: np.ndarray
    chosen: float | None
    achieved: float | None
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "grid": [float(v) for v in self.grid],
            "dH": [float(v) for v in self.dH],
            "chosen": None if self.chosen is None else float(self.chosen),
            "achieved": None if self.achieved is None else float(self.achieved),
            "feasible": bool(self.feasible),
        }


def optimize_delta(
    traj: Trajectory,
    dh_star: float,
    dh_tol: float,
    delta1: float,
    max_bisection: int = 64,
) -> DeltaSearchReport:
    """Largest spacing whose Hausdorff distance to the recording stays below a target.

    Evaluates the sample-set Hausdorff distance d_H(delta) between the
    recorded points and the filtered points along the doubling progression
    ``delta1, 2*delta1, 4*delta1, ...`` until the target ``dh_star`` is
    exceeded, then bisects between the last feasible and first infeasible
    spacings until ``dh_star - d_H`` falls within ``(0, dh_tol]`` or the
    iteration cap is hit.  Returns the largest spacing found with
    ``d_H <= dh_star``.
    """
    if not (0 < dh_tol < dh_star):
        raise InvalidArgumentError("need 0 < dh_tol < dh_star")
    if delta1 <= 0:
        raise InvalidArgumentError("delta1 must be positive")
    total = polyline_length(traj)
    if total == 0.0:
        raise DegeneratePathError("trajectory has zero length (all points identical)")

    original = traj.points

    def dh(delta: float) -> float:
        return hausdorff(original, spatial_sample(traj, delta).points)

    grid = [float(delta1)]
    dhs = [dh(delta1)]
    if dhs[0] > dh_star:
        return DeltaSearchReport(
            grid=np.asarray(grid), dH=np.asarray(dhs), chosen=None, achieved=None, feasible=False
        )
    # Doubling scan; capped once the filter degenerates to the start point.
    while dhs[-1] <= dh_star and grid[-1] <= 2.0 * total:
        grid.append(grid[-1] * 2.0)
        dhs.append(dh(grid[-1]))

    if dhs[-1] <= dh_star:
        # Even the coarsest spacing meets the target; nothing to refine.
        return DeltaSearchReport(
            grid=np.asarray(grid),
            dH=np.asarray(dhs),
            chosen=grid[-1],
            achieved=dhs[-1],
            feasible=True,
        )

    lo, achieved = grid[-2], dhs[-2]
    hi = grid[-1]
    chosen = lo
    for _ in range(max_bisection):
        if 0.0 < dh_star - achieved <= dh_tol:
            break
        if hi - lo <= 1e-15 * hi:
            break
        mid = 0.5 * (lo + hi)
        value = dh(mid)
        if value <= dh_star:
            lo, chosen, achieved = mid, mid, value
        else:
            hi = mid
    return DeltaSearchReport(
        grid=np.asarray(grid), dH=np.asarray(dhs), chosen=chosen, achieved=achieved, feasible=True
    )


def recover_feed_rate(path: ArcLengthPath) -> np.ndarray:
    """Per-interval traversal speed along the arc length.

    Returns an (n-1, 2) array of ``(t_mid, s_dot)`` samples where
    ``s_dot = ds / dt`` over each interval of the path.  Because samples
    are one spatial period apart, this is the speed along the curve.
    Intervals with coincident timestamps get an infinite marker.
    """
    if path.n_samples < 2:
        raise InvalidArgumentError("feed-rate recovery needs at least 2 samples")
    dt = np.diff(path.t)
    ds = np.diff(path.s)
    with np.errstate(divide="ignore"):
        s_dot = np.where(dt > 0.0, ds / np.where(dt > 0.0, dt, 1.0), np.inf)
    t_mid = 0.5 * (path.t[:-1] + path.t[1:])
    return np.column_stack([t_mid, s_dot])


def retime(
    path: ArcLengthPath,
    feed=None,
    duration: float | None = None,
    n_samples: int = 200,
) -> Trajectory:
    """Impose a new timing law on an arc-length path.

    ``feed`` may be a positive scalar (constant speed), an (n, 2) array of
    ``(t, s_dot)`` samples such as :func:`recover_feed_rate` returns, or a
    callable ``s_dot(t)`` (which requires ``duration``).  With ``feed``
    omitted, ``duration`` alone imposes a constant speed.  The speed is
    integrated on a uniform time grid (profile arrays are treated as
    piecewise-linear and integrated exactly at their knots) and the path is
    linearly interpolated at the resulting arc-length positions; progress
    saturates at the end of the path.

    Note that a midpoint-sampled profile of a discontinuous timing law
    (hard pauses) cannot be reconstructed exactly from samples alone; pass
    a callable feed when step changes must be reproduced faithfully.
    """
    if path.n_samples < 2:
        raise InvalidArgumentError("retiming needs a path with at least 2 samples")
    if n_samples < 2:
        raise InvalidArgumentError("n_samples must be at least 2")
    s_max = float(path.s[-1])

    t0 = 0.0
    if feed is None:
        if duration is None:
            raise InvalidArgumentError("provide a feed profile or a duration")
        if duration <= 0:
            raise InvalidArgumentError("duration must be positive")
        t_grid = np.linspace(0.0, float(duration), n_samples)
        rate = np.full(n_samples, s_max / float(duration))
    elif np.isscalar(feed):
        if feed <= 0:
            raise InvalidArgumentError("constant feed rate must be positive")
        total = s_max / float(feed) if duration is None else float(duration)
        if total <= 0:
            raise InvalidArgumentError("duration must be positive")
        t_grid = np.linspace(0.0, total, n_samples)
        rate = np.full(n_samples, float(feed))
    elif callable(feed):
        if duration is None:
            raise InvalidArgumentError("a callable feed profile requires a duration")
        if duration <= 0:
            raise InvalidArgumentError("duration must be positive")
        t_grid = np.linspace(0.0, float(duration), n_samples)
        rate = np.asarray([float(feed(t)) for t in t_grid])
    else:
        prof = np.asarray(feed, dtype=float)
        if prof.ndim != 2 or prof.shape[1] != 2 or prof.shape[0] < 2:
            raise InvalidArgumentError("feed profile must be an (n, 2) array of (t, s_dot)")
        if np.any(np.diff(prof[:, 0]) <= 0):
            raise InvalidArgumentError("feed profile times must be strictly increasing")
        t_grid = np.linspace(float(prof[0, 0]), float(prof[-1, 0]), n_samples)
        # Integrate on the union of grid and knot times so the trapezoid
        # rule is exact for the piecewise-linear profile.
        merged = np.union1d(t_grid, prof[:, 0])
        rate_m = np.interp(merged, prof[:, 0], prof[:, 1])
        if np.any(rate_m[np.isfinite(rate_m)] < 0.0):
            raise InvalidArgumentError("feed rate must be non-negative")
        rate_m = np.where(np.isfinite(rate_m), rate_m, 0.0)
        s_merged = np.concatenate(
            [[0.0], np.cumsum(0.5 * (rate_m[:-1] + rate_m[1:]) * np.diff(merged))]
        )
        s_of_t = np.minimum(np.interp(t_grid, merged, s_merged), s_max)
        pts = np.column_stack(
            [np.interp(s_of_t, path.s, path.points[:, j]) for j in range(path.dimension)]
        )
        return Trajectory(t_grid, pts)

    finite = rate[np.isfinite(rate)]
    if finite.size and np.any(finite < 0.0):
        raise InvalidArgumentError("feed rate must be non-negative")
    rate = np.where(np.isfinite(rate), rate, 0.0)

    dt = np.diff(t_grid)
    s_of_t = np.concatenate([[0.0], np.cumsum(0.5 * (rate[:-1] + rate[1:]) * dt)])
    s_of_t = np.minimum(s_of_t, s_max)
    pts = np.column_stack(
        [np.interp(s_of_t, path.s, path.points[:, j]) for j in range(path.dimension)]
    )
    return Trajectory(t_grid, pts)
