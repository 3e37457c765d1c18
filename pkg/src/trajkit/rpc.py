"""Machine-facing binding surface: newline-delimited JSON over stdio.

Each request line is ``{"id": ..., "op": <name>, "args": {...}}`` and gets
one response line, either ``{"id", "ok": true, "result": {...}}`` or
``{"id", "ok": false, "error": {"type", "message"}}``.  Floats are emitted
with shortest-round-trip precision, so a binding that parses them as
IEEE-754 doubles reproduces the library's results bit for bit.

This is the surface host-language bindings talk to; no algorithmic logic
lives here.
"""

from __future__ import annotations

import json
import sys

import numpy as np

from . import barycenter as bc
from . import metrics
from .dtw import dtw, fast_dtw, soft_dtw
from .errors import (
    DegeneratePathError,
    InfeasibleBandError,
    InvalidArgumentError,
    ParseError,
    TrajkitError,
    UndefinedMetricError,
)
from .model import Trajectory
from .spatial import optimize_delta, spatial_sample

_ERROR_CODES = [
    (InvalidArgumentError, "invalid-argument"),
    (ParseError, "parse"),
    (DegeneratePathError, "degenerate-path"),
    (InfeasibleBandError, "infeasible-band"),
    (UndefinedMetricError, "undefined-metric"),
]


def _listify(x):
    return np.asarray(x, dtype=float).tolist()


def _op_spatial_sample(args):
    traj = Trajectory(args["times"], args["points"])
    path = spatial_sample(traj, float(args["delta"]), bool(args.get("keep_endpoint", False)))
    return {
        "s": _listify(path.s),
        "t": _listify(path.t),
        "points": _listify(path.points),
        "endpoint_appended": path.endpoint_appended,
    }


def _op_optimize_delta(args):
    traj = Trajectory(args["times"], args["points"])
    report = optimize_delta(
        traj, float(args["dh_star"]), float(args["dh_tol"]), float(args["delta1"])
    )
    return report.to_dict()


def _path_pairs(result):
    return None if result.path is None else result.path.pairs.tolist()


def _op_dtw(args):
    window = args.get("window")
    res = dtw(args["a"], args["b"], window=None if window is None else int(window))
    return {"distance": res.distance, "path": _path_pairs(res)}


def _op_fast_dtw(args):
    res = fast_dtw(args["a"], args["b"], radius=int(args.get("radius", 1)))
    return {"distance": res.distance, "path": _path_pairs(res)}


def _op_soft_dtw(args):
    value, grad = soft_dtw(args["a"], args["b"], float(args["gamma"]))
    return {"value": value, "grad": _listify(grad)}


def _op_euclidean_barycenter(args):
    res = bc.euclidean_barycenter(args["sequences"])
    return {"curve": _listify(res.curve)}


def _op_dba(args):
    res = bc.dba(
        args["sequences"],
        init=args.get("init"),
        max_iters=int(args.get("max_iters", 30)),
    )
    return {"curve": _listify(res.curve)}


def _op_soft_dtw_barycenter(args):
    res = bc.soft_dtw_barycenter(
        args["sequences"],
        gamma=float(args.get("gamma", 1.0)),
        length=None if args.get("length") is None else int(args["length"]),
        max_iters=int(args.get("max_iters", 50)),
    )
    return {"curve": _listify(res.curve)}


def _op_fit_gmm(args):
    model = bc.fit_gmm(args["data"], int(args["g"]), seed=int(args.get("seed", 0)))
    return model.to_dict()


def _op_gmr(args):
    model = bc.GmmModel.from_dict(args["model"])
    res = bc.gmr(model, args["queries"], n_inputs=int(args.get("n_inputs", 1)))
    return {
        "curve": _listify(res.curve),
        "variance": _listify(res.variance),
        "flags": list(res.flags),
    }


def _op_hausdorff(args):
    return {"value": metrics.hausdorff(args["a"], args["b"])}


def _op_cumulative_l2(args):
    return {"value": metrics.cumulative_l2(args["a"], args["b"])}


def _op_rho(args):
    return {"value": metrics.rho(args["signals"])}


def _op_symbolic_entropy(args):
    return {"value": metrics.symbolic_entropy(args["signals"])}


def _op_sn_csd(args):
    return {"value": metrics.sn_csd(args["signals"])}


_OPS = {
    "spatial_sample": _op_spatial_sample,
    "optimize_delta": _op_optimize_delta,
    "dtw": _op_dtw,
    "fast_dtw": _op_fast_dtw,
    "soft_dtw": _op_soft_dtw,
    "euclidean_barycenter": _op_euclidean_barycenter,
    "dba": _op_dba,
    "soft_dtw_barycenter": _op_soft_dtw_barycenter,
    "fit_gmm": _op_fit_gmm,
    "gmr": _op_gmr,
    "hausdorff": _op_hausdorff,
    "cumulative_l2": _op_cumulative_l2,
    "rho": _op_rho,
    "symbolic_entropy": _op_symbolic_entropy,
    "sn_csd": _op_sn_csd,
}


def handle_request(request: dict) -> dict:
    rid = request.get("id")
    try:
        op = request.get("op")
        if op not in _OPS:
            raise InvalidArgumentError(f"unknown op {op!r}")
        result = _OPS[op](request.get("args", {}))
        return {"id": rid, "ok": True, "result": result}
    except TrajkitError as exc:
        code = "internal"
        for cls, name in _ERROR_CODES:
            if isinstance(exc, cls):
                code = name
                break
        return {"id": rid, "ok": False, "error": {"type": code, "message": str(exc)}}
    except (KeyError, TypeError, ValueError) as exc:
        return {
            "id": rid,
            "ok": False,
            "error": {"type": "invalid-argument", "message": f"{type(exc).__name__}: {exc}"},
        }


def serve(stream_in=None, stream_out=None) -> int:
    """Serve newline-delimited JSON requests until EOF."""
    stream_in = stream_in if stream_in is not None else sys.stdin
    stream_out = stream_out if stream_out is not None else sys.stdout
    for line in stream_in:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            response = {"id": None, "ok": False, "error": {"type": "parse", "message": str(exc)}}
        else:
            response = handle_request(request)
        stream_out.write(json.dumps(response) + "\n")
        stream_out.flush()
    return 0
