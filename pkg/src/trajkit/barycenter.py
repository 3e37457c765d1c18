"""Consensus ("barycenter") extraction from aligned demonstration sets.

Four averaging families: the pointwise Euclidean mean, DTW barycenter
averaging (iterative alignment + mean update), a soft-DTW barycenter by
gradient descent, and Gaussian mixture regression over joint
(input, output) samples.  All methods are deterministic given their seed.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .dtw import dtw_squared, soft_dtw
from .errors import InvalidArgumentError
from .model import as_points, resample_points

_COV_REG = 1e-6
_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class BarycenterResult:
    """A consensus sequence, optionally with per-point conditional covariance."""

    curve: np.ndarray
    variance: np.ndarray | None
    method: str
    flags: tuple = ()

    def __post_init__(self):
        curve = as_points(self.curve)
        if curve.shape[0] < 1:
            raise InvalidArgumentError("a barycenter needs at least 1 point")
        curve.setflags(write=False)
        object.__setattr__(self, "curve", curve)
        if self.variance is not None:
            var = np.asarray(self.variance, dtype=float)
            var.setflags(write=False)
            object.__setattr__(self, "variance", var)
        object.__setattr__(self, "flags", tuple(self.flags))


@dataclass(frozen=True, eq=False)
class GmmModel:
    """Gaussian mixture over the joint (input, output) space."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        means = np.asarray(self.means, dtype=float)
        covs = np.asarray(self.covariances, dtype=float)
        g = weights.shape[0]
        if means.shape[0] != g or covs.shape[0] != g:
            raise InvalidArgumentError("weights, means, covariances must agree on G")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise InvalidArgumentError("weights must be non-negative and sum to 1")
        for cov in covs:
            try:
                np.linalg.cholesky(cov)
            except np.linalg.LinAlgError:
                raise InvalidArgumentError("covariances must be symmetric positive-definite")
        for arr in (weights, means, covs):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covariances", covs)

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "degenerate": self.degenerate,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "GmmModel":
        return cls(
            weights=np.asarray(doc["weights"], dtype=float),
            means=np.asarray(doc["means"], dtype=float),
            covariances=np.asarray(doc["covariances"], dtype=float),
            degenerate=bool(doc.get("degenerate", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "GmmModel":
        return cls.from_dict(json.loads(text))


def _as_equal_length_set(seqs) -> list[np.ndarray]:
    if len(seqs) == 0:
        raise InvalidArgumentError("need at least one sequence")
    arrs = [as_points(s) for s in seqs]
    shape = arrs[0].shape
    if any(a.shape != shape for a in arrs):
        raise InvalidArgumentError("sequences must share length and dimension; align or resample first")
    return arrs


def euclidean_barycenter(seqs) -> BarycenterResult:
    """Pointwise arithmetic mean of equal-length sequences."""
    arrs = _as_equal_length_set(seqs)
    return BarycenterResult(curve=np.mean(arrs, axis=0), variance=None, method="euc")


def _medoid_index(arrs: list[np.ndarray]) -> int:
    if len(arrs) == 1:
        return 0
    totals = np.zeros(len(arrs))
    for i in range(len(arrs)):
        for j in range(i + 1, len(arrs)):
            d = dtw_squared(arrs[i], arrs[j], compute_path=False).distance
            totals[i] += d
            totals[j] += d
    return int(np.argmin(totals))


def dba(seqs, init=None, max_iters: int = 30) -> BarycenterResult:
    """DTW barycenter averaging.

    Starts from ``init`` (default: the medoid of the set) and repeatedly
    replaces every barycenter point with the mean of all member points the
    warping paths map onto it.  Alignment and objective use squared
    Euclidean local cost, for which the mean update is the exact minimizer
    given fixed alignments, so the summed distance never increases; stops
    on a relative improvement below 1e-9 or after ``max_iters``.
    """
    arrs = [as_points(s) for s in seqs]
    if not arrs:
        raise InvalidArgumentError("need at least one sequence")
    dim = arrs[0].shape[1]
    if any(a.shape[1] != dim for a in arrs):
        raise InvalidArgumentError("sequences must share the same dimension")
    center = as_points(init) if init is not None else arrs[_medoid_index(arrs)].copy()

    def objective(c):
        return sum(dtw_squared(c, a, compute_path=False).distance for a in arrs)

    best = objective(center)
    for _ in range(max_iters):
        sums = np.zeros_like(center)
        counts = np.zeros(center.shape[0])
        for a in arrs:
            pairs = dtw_squared(center, a).path.pairs
            np.add.at(sums, pairs[:, 0], a[pairs[:, 1]])
            np.add.at(counts, pairs[:, 0], 1.0)
        candidate = sums / counts[:, None]
        value = objective(candidate)
        if value >= best * (1.0 - 1e-9):
            if value < best:
                center, best = candidate, value
            break
        center, best = candidate, value
    return BarycenterResult(curve=center, variance=None, method="dba")


def soft_dtw_barycenter(
    seqs,
    gamma: float = 1.0,
    length: int | None = None,
    max_iters: int = 50,
    step_rule: str = "backtracking",
) -> BarycenterResult:
    """Soft-DTW barycenter by gradient descent with a backtracking line search.

    Minimizes the summed soft-DTW loss to all members, starting from the
    Euclidean mean of the members resampled to ``length`` (default: the
    first member's length).  The objective never increases; the best
    iterate is returned.
    """
    if gamma <= 0:
        raise InvalidArgumentError("gamma must be positive")
    if step_rule != "backtracking":
        raise InvalidArgumentError(f"unsupported step rule: {step_rule!r}")
    arrs = [as_points(s) for s in seqs]
    if not arrs:
        raise InvalidArgumentError("need at least one sequence")
    dim = arrs[0].shape[1]
    if any(a.shape[1] != dim for a in arrs):
        raise InvalidArgumentError("sequences must share the same dimension")
    m = int(length) if length is not None else arrs[0].shape[0]
    if m < 2:
        raise InvalidArgumentError("barycenter length must be at least 2")
    center = np.mean([resample_points(a, m) for a in arrs], axis=0)

    def value_and_grad(c):
        total = 0.0
        grad = np.zeros_like(c)
        for a in arrs:
            v, g = soft_dtw(c, a, gamma)
            total += v
            grad += g
        return total, grad

    best_val, grad = value_and_grad(center)
    best = center
    step = 1.0
    for _ in range(max_iters):
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0:
            break
        improved = False
        for _ in range(20):
            candidate = center - step * grad
            val = sum(soft_dtw(candidate, a, gamma)[0] for a in arrs)
            if val < best_val:
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        center = candidate
        rel_gain = (best_val - val) / max(abs(best_val), 1e-12)
        best_val = val
        best = center
        if rel_gain < 1e-7:
            break
        step *= 1.5
        _, grad = value_and_grad(center)
    return BarycenterResult(curve=best, variance=None, method="sdtw")


def _log_gaussian_pdf(x: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    chol = cholesky(cov, lower=True)
    sol = solve_triangular(chol, (x - mean).T, lower=True)
    log_det = np.log(np.diag(chol)).sum()
    return -0.5 * (sol**2).sum(axis=0) - log_det - 0.5 * x.shape[1] * _LOG_2PI


def _kmeanspp_centers(data: np.ndarray, g: int, rng: np.random.Generator) -> np.ndarray:
    centers = [data[rng.integers(data.shape[0])]]
    for _ in range(1, g):
        d2 = np.min(
            [((data - c) ** 2).sum(axis=1) for c in centers],
            axis=0,
        )
        total = d2.sum()
        if total == 0.0:
            centers.append(data[rng.integers(data.shape[0])])
            continue
        centers.append(data[rng.choice(data.shape[0], p=d2 / total)])
    return np.asarray(centers)


def fit_gmm(data, g: int, seed: int = 0, max_iters: int = 200, return_history: bool = False):
    """Fit a Gaussian mixture to joint samples by EM.

    Initialization is seeded k-means++; every M-step adds a 1e-6 identity
    regularizer to each covariance.  Converges when the log-likelihood
    improves by less than 1e-8 relative, and is deterministic given the
    seed.  All-identical data yields a single-point mixture flagged as
    degenerate.  With ``return_history`` the per-iteration log-likelihood
    trace is returned alongside the model.
    """
    samples = as_points(data)
    n, dim = samples.shape
    if g < 1:
        raise InvalidArgumentError("G must be at least 1")
    if n < g * (dim + 1):
        raise InvalidArgumentError(
            f"need at least G*(dim+1) = {g * (dim + 1)} samples to fit G={g}, got {n}"
        )
    if np.allclose(samples, samples[0], rtol=0.0, atol=0.0):
        warnings.warn("all samples identical; returning a degenerate single-point mixture")
        weights = np.ones(g) / g
        means = np.repeat(samples[:1], g, axis=0)
        covs = np.repeat(_COV_REG * np.eye(dim)[None], g, axis=0)
        model = GmmModel(weights=weights, means=means, covariances=covs, degenerate=True)
        return (model, np.asarray([])) if return_history else model

    rng = np.random.default_rng(seed)
    centers = _kmeanspp_centers(samples, g, rng)
    labels = np.argmin(
        ((samples[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2), axis=1
    )
    weights = np.zeros(g)
    means = np.zeros((g, dim))
    covs = np.zeros((g, dim, dim))
    for comp in range(g):
        members = samples[labels == comp]
        if members.shape[0] == 0:
            members = samples
        weights[comp] = members.shape[0]
        means[comp] = members.mean(axis=0)
        diff = members - means[comp]
        covs[comp] = diff.T @ diff / members.shape[0] + _COV_REG * np.eye(dim)
    weights /= weights.sum()

    history = []
    prev_ll = -np.inf
    for _ in range(max_iters):
        log_resp = np.column_stack(
            [
                np.log(max(weights[comp], 1e-300))
                + _log_gaussian_pdf(samples, means[comp], covs[comp])
                for comp in range(g)
            ]
        )
        log_norm = _logsumexp_rows(log_resp)
        ll = float(log_norm.sum())
        history.append(ll)
        resp = np.exp(log_resp - log_norm[:, None])
        nk = resp.sum(axis=0)
        for comp in range(g):
            if nk[comp] <= 1e-10:
                continue  # dead component: keep parameters, weight decays to ~0
            means[comp] = resp[:, comp] @ samples / nk[comp]
            diff = samples - means[comp]
            cov = (resp[:, comp : comp + 1] * diff).T @ diff / nk[comp]
            covs[comp] = 0.5 * (cov + cov.T) + _COV_REG * np.eye(dim)
        weights = nk / nk.sum()
        if np.isfinite(prev_ll) and ll - prev_ll < 1e-8 * abs(prev_ll):
            break
        prev_ll = ll
    model = GmmModel(weights=weights, means=means, covariances=covs)
    return (model, np.asarray(history)) if return_history else model


def _logsumexp_rows(a: np.ndarray) -> np.ndarray:
    peak = a.max(axis=1)
    return peak + np.log(np.exp(a - peak[:, None]).sum(axis=1))


def gmr(model: GmmModel, queries, n_inputs: int = 1) -> BarycenterResult:
    """Gaussian mixture regression: conditional mean and covariance per query.

    The first ``n_inputs`` coordinates of the joint space are the regression
    input.  Responsibilities come from each component's input marginal; the
    output is the responsibility-weighted mix of per-component affine
    predictions, with the mixture law-of-total-variance conditional
    covariance in ``variance``.  If every responsibility underflows the
    nearest component (by input Mahalanobis distance) takes over and the
    result is flagged.
    """
    q = np.asarray(queries, dtype=float)
    if q.ndim == 1:
        q = q[:, None]
    if q.shape[1] != n_inputs:
        raise InvalidArgumentError(f"queries must have {n_inputs} columns")
    joint_dim = model.means.shape[1]
    if not 1 <= n_inputs < joint_dim:
        raise InvalidArgumentError("n_inputs must leave at least one output dimension")
    p = n_inputs
    g = model.n_components
    out_dim = joint_dim - p

    gains = []
    cond_covs = []
    for comp in range(g):
        cov = model.covariances[comp]
        sii = cov[:p, :p]
        soi = cov[p:, :p]
        gain = soi @ np.linalg.inv(sii)
        gains.append(gain)
        cond_covs.append(cov[p:, p:] - gain @ soi.T)

    log_resp = np.column_stack(
        [
            np.log(model.weights[comp])
            + _log_gaussian_pdf(q, model.means[comp, :p], model.covariances[comp][:p, :p])
            for comp in range(g)
        ]
    )
    flags = []
    peak = log_resp.max(axis=1)
    dead = ~np.isfinite(peak)
    if np.any(dead):
        flags.append("nearest-component-fallback")
        # Fall back to the closest input mean (Mahalanobis) for dead queries.
        maha = np.column_stack(
            [
                (
                    np.linalg.solve(
                        model.covariances[comp][:p, :p], (q - model.means[comp, :p]).T
                    ).T
                    * (q - model.means[comp, :p])
                ).sum(axis=1)
                for comp in range(g)
            ]
        )
        nearest = np.argmin(maha, axis=1)
        log_resp[dead] = -np.inf
        log_resp[dead, nearest[dead]] = 0.0
        peak = log_resp.max(axis=1)
    resp = np.exp(log_resp - peak[:, None])
    resp /= resp.sum(axis=1, keepdims=True)

    comp_means = np.stack(
        [
            model.means[comp, p:] + (q - model.means[comp, :p]) @ gains[comp].T
            for comp in range(g)
        ],
        axis=1,
    )  # (Q, G, out_dim)
    mean = (resp[:, :, None] * comp_means).sum(axis=1)
    second = np.zeros((q.shape[0], out_dim, out_dim))
    for comp in range(g):
        dev = comp_means[:, comp, :]
        second += resp[:, comp, None, None] * (
            cond_covs[comp][None] + dev[:, :, None] * dev[:, None, :]
        )
    variance = second - mean[:, :, None] * mean[:, None, :]
    return BarycenterResult(curve=mean, variance=variance, method="gmr", flags=tuple(flags))
