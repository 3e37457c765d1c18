"""Core trajectory types and elementary polyline geometry.

A recorded demonstration is a time-stamped sequence of d-dimensional
points (:class:`Trajectory`).  Filtering it at a constant spatial period
yields an :class:`ArcLengthPath`, which carries the arc-length coordinate
``s`` alongside the recovered timestamps.  Groups of demonstrations of the
same underlying path are bundled in a :class:`DemonstrationSet`.

All types are immutable after construction (arrays are made read-only), so
they can be shared freely across workers.  The operations in this module
are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError


def as_points(points) -> np.ndarray:
    """Coerce input to a float (N, d) array; 1-D input becomes (N, 1)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise InvalidArgumentError(f"points must be a 1-D or 2-D array, got ndim={pts.ndim}")
    return pts


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A recorded demonstration: N timestamps with N points of dimension d.

    Timestamps must be strictly increasing; repeated timestamps are
    rejected at construction because they make the timing law ill-defined.
    Repeated *points* are allowed and meaningful: they encode pauses.
    """

    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        points = as_points(self.points)
        if times.shape[0] != points.shape[0]:
            raise InvalidArgumentError(
                f"times ({times.shape[0]}) and points ({points.shape[0]}) lengths differ"
            )
        if times.shape[0] < 2:
            raise InvalidArgumentError("a trajectory needs at least 2 samples")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(points)):
            raise InvalidArgumentError("times and points must be finite")
        if np.any(np.diff(times) <= 0):
            raise InvalidArgumentError("timestamps must be strictly increasing")
        object.__setattr__(self, "times", _freeze(times))
        object.__setattr__(self, "points", _freeze(points))

    @property
    def n_samples(self) -> int:
        return self.times.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])


@dataclass(frozen=True, eq=False)
class ArcLengthPath:
    """Output of the spatial filter: samples spaced exactly ``delta`` apart.

    ``s[k] == k * delta`` and consecutive points are ``delta`` apart (within
    1e-9 relative).  When ``endpoint_appended`` is true the final sample is
    the recorded endpoint, whose spacing may be shorter than ``delta``; it is
    excluded from the spacing invariant and its ``s`` value is the true
    cumulative chord length.
    """

    delta: float
    s: np.ndarray
    points: np.ndarray
    t: np.ndarray
    endpoint_appended: bool = False

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidArgumentError("delta must be positive")
        s = np.asarray(self.s, dtype=float).reshape(-1)
        t = np.asarray(self.t, dtype=float).reshape(-1)
        points = as_points(self.points)
        n = s.shape[0]
        if not (t.shape[0] == n and points.shape[0] == n and n >= 1):
            raise InvalidArgumentError("s, t and points must have equal nonzero length")
        n_regular = n - 1 if self.endpoint_appended else n
        expected = np.arange(n_regular) * self.delta
        if not np.allclose(s[:n_regular], expected, rtol=0.0, atol=1e-12 * max(1.0, self.delta)):
            raise InvalidArgumentError("s must equal k*delta for the regular samples")
        if n_regular >= 2:
            gaps = np.linalg.norm(np.diff(points[:n_regular], axis=0), axis=1)
            if not np.allclose(gaps, self.delta, rtol=1e-9, atol=0.0):
                raise InvalidArgumentError("consecutive samples must be delta apart")
        if np.any(np.diff(t) < 0):
            raise InvalidArgumentError("recovered timestamps must be non-decreasing")
        object.__setattr__(self, "s", _freeze(s))
        object.__setattr__(self, "t", _freeze(t))
        object.__setattr__(self, "points", _freeze(points))

    @property
    def n_samples(self) -> int:
        return self.s.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def arc_length(self) -> float:
        return float(self.s[-1])


@dataclass(frozen=True, eq=False)
class DemonstrationSet:
    """A named group of demonstrations sharing one underlying geometric path."""

    name: str
    demos: tuple = field(default=())

    def __post_init__(self):
        demos = tuple(self.demos)
        if not demos:
            raise InvalidArgumentError("a demonstration set needs at least one demo")
        d = demos[0].dimension
        if any(demo.dimension != d for demo in demos):
            raise InvalidArgumentError("all demonstrations must share the same dimension")
        object.__setattr__(self, "demos", demos)

    @property
    def dimension(self) -> int:
        return self.demos[0].dimension

    def __len__(self) -> int:
        return len(self.demos)


def polyline_length_points(points) -> float:
    """Total chord length of a point sequence."""
    pts = as_points(points)
    if pts.shape[0] < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())


def polyline_length(traj: Trajectory) -> float:
    """Sum of chord lengths between consecutive trajectory points."""
    return polyline_length_points(traj.points)


def resample_points(points, m: int) -> np.ndarray:
    """Resample a point sequence to ``m`` samples, uniform in index parameter."""
    pts = as_points(points)
    if m < 2:
        raise InvalidArgumentError("resample length must be at least 2")
    u_in = np.linspace(0.0, 1.0, pts.shape[0])
    u_out = np.linspace(0.0, 1.0, m)
    out = np.column_stack([np.interp(u_out, u_in, pts[:, j]) for j in range(pts.shape[1])])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def resample_uniform(traj: Trajectory, m: int) -> Trajectory:
    """Linearly resample a trajectory at ``m`` uniformly spaced timestamps.

    The output spans exactly ``[times[0], times[-1]]`` and both endpoints are
    preserved bitwise.
    """
    if m < 2:
        raise InvalidArgumentError("resample length must be at least 2")
    t_out = np.linspace(traj.times[0], traj.times[-1], m)
    t_out[0] = traj.times[0]
    t_out[-1] = traj.times[-1]
    pts = np.column_stack(
        [np.interp(t_out, traj.times, traj.points[:, j]) for j in range(traj.dimension)]
    )
    pts[0] = traj.points[0]
    pts[-1] = traj.points[-1]
    return Trajectory(t_out, pts)
