"""Dataset persistence and a synthetic demonstration generator.

Demonstration sets live on disk as one CSV per demo (header
``t,x0,...,x{d-1}``, LF line endings, 17-significant-digit floats so
values round-trip exactly) plus a JSON manifest
``{name, dimension, demos: [{file, samples, duration}]}``.

The generator reproduces the recording regime the toolkit targets: every
demo of a group traces the same geometric path with identical start and
end points, but under its own timing law with speed ramps and full stops,
so time-domain comparisons are misaligned while the geometry is shared.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ParseError
from .model import DemonstrationSet, Trajectory, as_points

_FLOAT_FMT = "{:.17g}"


@dataclass(frozen=True, eq=False)
class DemoEntry:
    file: str
    samples: int
    duration: float


@dataclass(frozen=True, eq=False)
class DatasetManifest:
    """Index of a demonstration set on disk."""

    name: str
    dimension: int
    demos: tuple

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "demos": [
                {"file": e.file, "samples": e.samples, "duration": e.duration}
                for e in self.demos
            ],
        }


@dataclass(frozen=True, eq=False)
class TimingSpec:
    """A timing law for tracing a geometric path.

    ``base_duration`` is the moving time in seconds; ``pauses`` holds
    (position fraction, duration) full stops strictly inside the path;
    ``speed_ramp`` gives piecewise-linear speed multipliers over the
    moving-time fraction.  ``seed`` only drives the measurement noise.
    """

    base_duration: float
    pauses: tuple = ()
    speed_ramp: tuple = ((0.0, 1.0), (1.0, 1.0))
    seed: int = 0

    def __post_init__(self):
        if self.base_duration <= 0:
            raise InvalidArgumentError("base_duration must be positive")
        pauses = tuple((float(p), float(d)) for p, d in self.pauses)
        for pos, dur in pauses:
            if not 0.0 < pos < 1.0:
                raise InvalidArgumentError("pause positions must lie strictly inside (0, 1)")
            if dur <= 0:
                raise InvalidArgumentError("pause durations must be positive")
        ramp = tuple((float(f), float(v)) for f, v in self.speed_ramp)
        if len(ramp) < 2:
            raise InvalidArgumentError("speed_ramp needs at least 2 control points")
        fracs = [f for f, _ in ramp]
        if fracs != sorted(fracs) or fracs[0] != 0.0 or fracs[-1] != 1.0:
            raise InvalidArgumentError("speed_ramp fractions must rise from 0.0 to 1.0")
        if any(v <= 0 for _, v in ramp):
            raise InvalidArgumentError("speed multipliers must be positive")
        object.__setattr__(self, "pauses", pauses)
        object.__setattr__(self, "speed_ramp", ramp)


# ---------------------------------------------------------------------------
# Shapes


def _bezier_polyline(control: np.ndarray, n: int) -> np.ndarray:
    ctrl = as_points(control)
    degree = ctrl.shape[0] - 1
    if degree < 1:
        raise InvalidArgumentError("a Bezier shape needs at least 2 control points")
    u = np.linspace(0.0, 1.0, n)
    # de Casteljau over the whole parameter grid at once
    layers = np.repeat(ctrl[None, :, :], n, axis=0)
    for _ in range(degree):
        layers = (1.0 - u)[:, None, None] * layers[:, :-1, :] + u[:, None, None] * layers[:, 1:, :]
    return layers[:, 0, :]


def shape_polyline(shape, n: int = 1025) -> np.ndarray:
    """Dense polyline of a named shape or of Bezier control points.

    Shapes: ``"line"`` (unit segment), ``"corner"`` (two unit legs at a
    right angle), ``"sine"`` (one-period sine sweep), or an (P, d) array of
    Bezier control points.
    """
    if isinstance(shape, str):
        name = shape.lower()
        if name == "line":
            u = np.linspace(0.0, 1.0, n)
            return np.column_stack([u, np.zeros(n)])
        if name in ("corner", "l-corner"):
            half = n // 2
            leg1 = np.column_stack([np.linspace(0.0, 1.0, half + 1), np.zeros(half + 1)])
            leg2 = np.column_stack([np.ones(n - half - 1), np.linspace(0.0, 1.0, n - half)[1:]])
            return np.vstack([leg1, leg2])
        if name == "sine":
            u = np.linspace(0.0, 1.0, n)
            return np.column_stack([u, 0.3 * np.sin(2.0 * np.pi * u)])
        raise InvalidArgumentError(f"unknown shape {shape!r}")
    return _bezier_polyline(np.asarray(shape, dtype=float), n)


#: Stand-in shape catalogue for multi-group experiments.
SHAPE_PRESETS = {
    "line": "line",
    "corner": "corner",
    "sine": "sine",
    "arc": np.array([[0.0, 0.0], [0.3, 0.6], [0.7, 0.6], [1.0, 0.0]]),
    "ess": np.array([[0.0, 0.0], [0.6, 0.5], [-0.2, 0.9], [0.5, 1.3]]),
    "hook": np.array([[0.0, 0.0], [0.9, 0.1], [1.0, 0.9], [0.4, 0.8], [0.45, 0.45]]),
    "loop": np.array([[0.0, 0.0], [1.2, 0.8], [-0.4, 0.8], [0.8, 0.0]]),
    "wave": np.array([[0.0, 0.0], [0.25, 0.7], [0.5, -0.4], [0.75, 0.7], [1.0, 0.0]]),
}


def _generator_polyline(shape) -> np.ndarray:
    # The generator traces the shape's natural polyline; piecewise-linear
    # shapes keep their minimal vertex set, curves use the dense polyline.
    if isinstance(shape, str):
        name = shape.lower()
        if name == "line":
            return np.array([[0.0, 0.0], [1.0, 0.0]])
        if name in ("corner", "l-corner"):
            return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    return shape_polyline(shape)


def _cumulative_arclength(poly: np.ndarray) -> np.ndarray:
    gaps = np.linalg.norm(np.diff(poly, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(gaps)])


def _points_at_arclength(poly: np.ndarray, s_cum: np.ndarray, s_values: np.ndarray) -> np.ndarray:
    return np.column_stack(
        [np.interp(s_values, s_cum, poly[:, j]) for j in range(poly.shape[1])]
    )


# ---------------------------------------------------------------------------
# Synthetic generation


def generate_synthetic(
    shape,
    timing: TimingSpec,
    sample_rate: float,
    noise_sigma: float = 0.0,
    include_vertex_samples: bool = True,
) -> Trajectory:
    """Trace a shape under a timing law and sample it in time.

    The speed ramp is integrated over the moving time to get arc-length
    progress, pauses insert flat (zero-speed) intervals, and the shape is
    evaluated at the resulting arc-length positions on a uniform time grid.
    With ``include_vertex_samples`` (the default) the crossing time of every
    shape vertex is added to the grid, so all demos of one shape traverse
    the exact same polyline regardless of their timing laws; only then is
    the geometry of noise-free demos strictly timing-independent.  Isotropic
    Gaussian noise of ``noise_sigma`` is added to the points only.
    Deterministic given ``timing.seed``.
    """
    if sample_rate <= 0:
        raise InvalidArgumentError("sample_rate must be positive")
    poly = _generator_polyline(shape)
    s_cum = _cumulative_arclength(poly)
    total_len = float(s_cum[-1])
    if total_len == 0.0:
        raise InvalidArgumentError("shape has zero length")

    # Arc-length progress over moving time.
    fracs = np.asarray([f for f, _ in timing.speed_ramp])
    speeds = np.asarray([v for _, v in timing.speed_ramp])
    tau = np.linspace(0.0, 1.0, 2048)
    v = np.interp(tau, fracs, speeds)
    progress = np.concatenate([[0.0], np.cumsum(0.5 * (v[:-1] + v[1:]) * np.diff(tau))])
    progress *= total_len / progress[-1]
    progress[-1] = total_len
    t_knots = tau * timing.base_duration
    s_knots = progress

    for pos, dur in sorted(timing.pauses):
        s_pause = pos * total_len
        t_pause = float(np.interp(s_pause, s_knots, t_knots))
        before = t_knots < t_pause - 1e-12
        t_knots = np.concatenate([t_knots[before], [t_pause, t_pause + dur], t_knots[~before] + dur])
        s_knots = np.concatenate([s_knots[before], [s_pause, s_pause], s_knots[~before]])

    total_time = float(t_knots[-1])
    n = int(math.floor(total_time * sample_rate)) + 1
    times = np.arange(n) / sample_rate
    if times[-1] < total_time - 1e-12:
        times = np.append(times, total_time)
    if include_vertex_samples:
        interior = s_cum[(s_cum > 0.0) & (s_cum < total_len)]
        crossing = np.interp(interior, s_knots, t_knots)
        times = np.unique(np.concatenate([times, crossing]))
        times = times[np.concatenate([[True], np.diff(times) > 1e-10])]
    s_t = np.interp(times, t_knots, s_knots)
    pts = _points_at_arclength(poly, s_cum, s_t)
    if noise_sigma > 0:
        rng = np.random.default_rng(timing.seed)
        pts = pts + rng.normal(0.0, noise_sigma, pts.shape)
    return Trajectory(times, pts)


def random_timing_spec(rng: np.random.Generator, base_range=(3.0, 6.0), max_pauses: int = 3) -> TimingSpec:
    """Draw a timing law with random speed ramps and full stops."""
    base = float(rng.uniform(*base_range))
    n_pauses = int(rng.integers(1, max_pauses + 1))
    positions = np.sort(rng.uniform(0.15, 0.85, n_pauses))
    pauses = tuple((float(p), float(rng.uniform(0.5, 2.0))) for p in positions)
    n_ramp = int(rng.integers(3, 6))
    ramp_fracs = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 0.9, n_ramp - 2)), [1.0]])
    ramp = tuple((float(f), float(rng.uniform(0.35, 1.8))) for f in ramp_fracs)
    return TimingSpec(base_duration=base, pauses=pauses, speed_ramp=ramp, seed=int(rng.integers(2**31)))


def synthetic_group(
    shape,
    n_demos: int,
    seed: int = 0,
    sample_rate: float = 50.0,
    noise_sigma: float = 0.0,
    name: str = "group",
) -> DemonstrationSet:
    """A demonstration set: one shape traced under ``n_demos`` random timing laws."""
    rng = np.random.default_rng(seed)
    demos = tuple(
        generate_synthetic(shape, random_timing_spec(rng), sample_rate, noise_sigma)
        for _ in range(n_demos)
    )
    return DemonstrationSet(name, demos)


# ---------------------------------------------------------------------------
# Persistence


def _demo_header(dim: int) -> str:
    return ",".join(["t"] + [f"x{j}" for j in range(dim)])


def write_demo_csv(path, traj: Trajectory) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(_demo_header(traj.dimension) + "\n")
        for t, row in zip(traj.times, traj.points):
            cells = [_FLOAT_FMT.format(t)] + [_FLOAT_FMT.format(v) for v in row]
            fh.write(",".join(cells) + "\n")


def read_demo_csv(path) -> Trajectory:
    """Parse a demo CSV, reporting the offending line on failure."""
    try:
        fh = open(path, "r")
    except OSError as exc:
        raise ParseError(f"cannot open demo file: {exc}", file=str(path)) from exc
    with fh:
        header = fh.readline().rstrip("\n")
        cols = header.split(",")
        if len(cols) < 2 or cols[0] != "t" or cols[1:] != [f"x{j}" for j in range(len(cols) - 1)]:
            raise ParseError(f"bad header {header!r}", file=str(path), line=1)
        width = len(cols)
        times = []
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != width:
                raise ParseError(
                    f"expected {width} columns, found {len(cells)}", file=str(path), line=lineno
                )
            try:
                values = [float(c) for c in cells]
            except ValueError as exc:
                raise ParseError(f"non-numeric value: {exc}", file=str(path), line=lineno) from exc
            if times and values[0] <= times[-1]:
                raise ParseError(
                    f"timestamp {values[0]} does not increase past {times[-1]}",
                    file=str(path),
                    line=lineno,
                )
            times.append(values[0])
            rows.append(values[1:])
        if len(times) < 2:
            raise ParseError("a demo needs at least 2 samples", file=str(path))
    return Trajectory(np.asarray(times), np.asarray(rows))


def save_dataset(dset: DemonstrationSet, directory, overwrite: bool = False) -> str:
    """Write one CSV per demo plus the JSON manifest; returns the manifest path."""
    if not dset.name:
        raise InvalidArgumentError("the demonstration set needs a non-empty name")
    os.makedirs(directory, exist_ok=True)
    manifest_path = os.path.join(directory, f"{dset.name}.json")
    if os.path.exists(manifest_path) and not overwrite:
        raise InvalidArgumentError(f"{manifest_path} exists; pass overwrite=True to replace it")
    entries = []
    for idx, demo in enumerate(dset.demos):
        fname = f"{dset.name}_{idx:02d}.csv"
        fpath = os.path.join(directory, fname)
        if os.path.exists(fpath) and not overwrite:
            raise InvalidArgumentError(f"{fpath} exists; pass overwrite=True to replace it")
        write_demo_csv(fpath, demo)
        entries.append(DemoEntry(file=fname, samples=demo.n_samples, duration=demo.duration))
    manifest = DatasetManifest(name=dset.name, dimension=dset.dimension, demos=tuple(entries))
    with open(manifest_path, "w", newline="\n") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def load_dataset(manifest_path, workers: int = 1) -> DemonstrationSet:
    """Load a demonstration set from its manifest; row order is preserved.

    ``workers`` > 1 parses the demo files on a thread pool (the CLI wires
    this to the TRAJKIT_THREADS environment variable).
    """
    try:
        with open(manifest_path, "r") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot open manifest: {exc}", file=str(manifest_path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", file=str(manifest_path)) from exc
    for key in ("name", "dimension", "demos"):
        if key not in doc:
            raise ParseError(f"manifest missing key {key!r}", file=str(manifest_path))
    base = os.path.dirname(os.path.abspath(manifest_path))
    paths = []
    for entry in doc["demos"]:
        fpath = os.path.join(base, entry["file"])
        if not os.path.exists(fpath):
            raise ParseError("referenced demo file does not exist", file=fpath)
        paths.append(fpath)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            demos = list(pool.map(read_demo_csv, paths))
    else:
        demos = [read_demo_csv(p) for p in paths]
    for fpath, traj in zip(paths, demos):
        if traj.dimension != int(doc["dimension"]):
            raise ParseError(
                f"dimension {traj.dimension} does not match manifest ({doc['dimension']})",
                file=fpath,
            )
    return DemonstrationSet(doc["name"], tuple(demos))
