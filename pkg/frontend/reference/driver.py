"""Parity oracle: computes each request directly through the core's Python API.

Reads the same line-delimited JSON requests the bindings send and answers
with the primary implementation's results, so tests can compare the
binding path against direct invocation.
"""

import json
import sys
import warnings

import numpy as np

import trajkit as tk
from trajkit.barycenter import GmmModel, dba, euclidean_barycenter, fit_gmm, gmr, soft_dtw_barycenter
from trajkit.errors import TrajkitError
from trajkit.model import Trajectory

warnings.simplefilter("ignore")


def _lst(x):
    return np.asarray(x, dtype=float).tolist()


def compute(op, args):
    if op == "spatial_sample":
        path = tk.spatial_sample(
            Trajectory(args["times"], args["points"]), args["delta"], args.get("keep_endpoint", False)
        )
        return {
            "s": _lst(path.s),
            "t": _lst(path.t),
            "points": _lst(path.points),
            "endpoint_appended": path.endpoint_appended,
        }
    if op == "optimize_delta":
        report = tk.optimize_delta(
            Trajectory(args["times"], args["points"]), args["dh_star"], args["dh_tol"], args["delta1"]
        )
        return report.to_dict()
    if op == "dtw":
        res = tk.dtw(args["a"], args["b"], window=args.get("window"))
        return {"distance": res.distance, "path": res.path.pairs.tolist()}
    if op == "fast_dtw":
        res = tk.fast_dtw(args["a"], args["b"], radius=args.get("radius", 1))
        return {"distance": res.distance, "path": res.path.pairs.tolist()}
    if op == "soft_dtw":
        value, grad = tk.soft_dtw(args["a"], args["b"], args["gamma"])
        return {"value": value, "grad": _lst(grad)}
    if op == "euclidean_barycenter":
        return {"curve": _lst(euclidean_barycenter(args["sequences"]).curve)}
    if op == "dba":
        res = dba(args["sequences"], init=args.get("init"), max_iters=args.get("max_iters", 30))
        return {"curve": _lst(res.curve)}
    if op == "soft_dtw_barycenter":
        res = soft_dtw_barycenter(
            args["sequences"],
            gamma=args.get("gamma", 1.0),
            length=args.get("length"),
            max_iters=args.get("max_iters", 50),
        )
        return {"curve": _lst(res.curve)}
    if op == "fit_gmm":
        return fit_gmm(args["data"], args["g"], seed=args.get("seed", 0)).to_dict()
    if op == "gmr":
        res = gmr(GmmModel.from_dict(args["model"]), args["queries"], n_inputs=args.get("n_inputs", 1))
        return {"curve": _lst(res.curve), "variance": _lst(res.variance), "flags": list(res.flags)}
    if op == "hausdorff":
        return {"value": tk.hausdorff(args["a"], args["b"])}
    if op == "cumulative_l2":
        return {"value": tk.cumulative_l2(args["a"], args["b"])}
    if op == "rho":
        return {"value": tk.rho(args["signals"])}
    if op == "symbolic_entropy":
        return {"value": tk.symbolic_entropy(args["signals"])}
    if op == "sn_csd":
        return {"value": tk.sn_csd(args["signals"])}
    raise ValueError(f"unknown op {op!r}")


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        try:
            result = compute(request["op"], request.get("args", {}))
            response = {"id": request.get("id"), "ok": True, "result": result}
        except TrajkitError as exc:
            response = {
                "id": request.get("id"),
                "ok": False,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            }
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
