/**
 * Thin typed bindings to the trajectory-processing core.
 *
 * Every function delegates to the core over its stdio JSON interface; no
 * algorithmic logic lives here and no call mutates its input arrays.
 * Results are numerically identical to the core's own outputs.
 */

import { defaultClient, closeDefaultClient, TrajkitClient } from "./client.js";
import type {
    BarycenterOutcome,
    DeltaSearchReport,
    DtwOutcome,
    GmmModelDoc,
    GmrOutcome,
    PointRows,
    SoftDtwOutcome,
    SpatialSampleResult,
} from "./types.js";

export { TrajkitClient, defaultClient, closeDefaultClient } from "./client.js";
export * from "./types.js";

type Seq = number[] | PointRows;

interface RawSpatialSample {
    s: number[];
    t: number[];
    points: PointRows;
    endpoint_appended: boolean;
}

interface RawDtw {
    distance: number;
    path: Array<[number, number]> | null;
}

/** Filter a recording into samples spaced exactly `delta` apart along it. */
export async function spatialSample(
    times: number[],
    points: Seq,
    delta: number,
    keepEndpoint = false,
    client?: TrajkitClient,
): Promise<SpatialSampleResult> {
    const raw = await (client ?? defaultClient()).request<RawSpatialSample>("spatial_sample", {
        times,
        points,
        delta,
        keep_endpoint: keepEndpoint,
    });
    return { s: raw.s, t: raw.t, points: raw.points, endpointAppended: raw.endpoint_appended };
}

/** Search the largest spacing whose Hausdorff distance stays below a target. */
export function optimizeDelta(
    times: number[],
    points: Seq,
    dhStar: number,
    dhTol: number,
    delta1: number,
    client?: TrajkitClient,
): Promise<DeltaSearchReport> {
    return (client ?? defaultClient()).request<DeltaSearchReport>("optimize_delta", {
        times,
        points,
        dh_star: dhStar,
        dh_tol: dhTol,
        delta1,
    });
}

/** Exact dynamic time warping (optionally band-constrained). */
export function dtw(a: Seq, b: Seq, window?: number, client?: TrajkitClient): Promise<DtwOutcome> {
    return (client ?? defaultClient()).request<RawDtw>("dtw", {
        a,
        b,
        window: window ?? null,
    });
}

/** Multiscale approximate DTW; the distance is never below the exact one. */
export function fastDtw(a: Seq, b: Seq, radius = 1, client?: TrajkitClient): Promise<DtwOutcome> {
    return (client ?? defaultClient()).request<RawDtw>("fast_dtw", { a, b, radius });
}

/** Soft-DTW value and the gradient with respect to the first sequence. */
export function softDtw(a: Seq, b: Seq, gamma: number, client?: TrajkitClient): Promise<SoftDtwOutcome> {
    return (client ?? defaultClient()).request<SoftDtwOutcome>("soft_dtw", { a, b, gamma });
}

/** Pointwise mean of equal-length sequences. */
export function euclideanBarycenter(sequences: Seq[], client?: TrajkitClient): Promise<BarycenterOutcome> {
    return (client ?? defaultClient()).request<BarycenterOutcome>("euclidean_barycenter", { sequences });
}

/** DTW barycenter averaging. */
export function dba(
    sequences: Seq[],
    options: { init?: Seq; maxIters?: number } = {},
    client?: TrajkitClient,
): Promise<BarycenterOutcome> {
    return (client ?? defaultClient()).request<BarycenterOutcome>("dba", {
        sequences,
        init: options.init ?? null,
        max_iters: options.maxIters ?? 30,
    });
}

/** Soft-DTW barycenter by gradient descent. */
export function softDtwBarycenter(
    sequences: Seq[],
    options: { gamma?: number; length?: number; maxIters?: number } = {},
    client?: TrajkitClient,
): Promise<BarycenterOutcome> {
    return (client ?? defaultClient()).request<BarycenterOutcome>("soft_dtw_barycenter", {
        sequences,
        gamma: options.gamma ?? 1.0,
        length: options.length ?? null,
        max_iters: options.maxIters ?? 50,
    });
}

/** Fit a Gaussian mixture to joint samples (seeded, deterministic). */
export function fitGmm(data: PointRows, g: number, seed = 0, client?: TrajkitClient): Promise<GmmModelDoc> {
    return (client ?? defaultClient()).request<GmmModelDoc>("fit_gmm", { data, g, seed });
}

/** Gaussian mixture regression at the given query inputs. */
export function gmr(
    model: GmmModelDoc,
    queries: number[] | PointRows,
    nInputs = 1,
    client?: TrajkitClient,
): Promise<GmrOutcome> {
    return (client ?? defaultClient()).request<GmrOutcome>("gmr", {
        model,
        queries,
        n_inputs: nInputs,
    });
}

/** Hausdorff distance between two point sample sets. */
export async function hausdorff(a: Seq, b: Seq, client?: TrajkitClient): Promise<number> {
    const raw = await (client ?? defaultClient()).request<{ value: number }>("hausdorff", { a, b });
    return raw.value;
}

/** Summed pointwise Euclidean error between two equal-length sequences. */
export async function cumulativeL2(a: Seq, b: Seq, client?: TrajkitClient): Promise<number> {
    const raw = await (client ?? defaultClient()).request<{ value: number }>("cumulative_l2", { a, b });
    return raw.value;
}

/** Cluster-phase consistency of a group of equal-length signals. */
export async function rho(signals: number[][], client?: TrajkitClient): Promise<number> {
    const raw = await (client ?? defaultClient()).request<{ value: number }>("rho", { signals });
    return raw.value;
}

/** Shannon entropy (bits) of the group's joint binarized state. */
export async function symbolicEntropy(signals: number[][], client?: TrajkitClient): Promise<number> {
    const raw = await (client ?? defaultClient()).request<{ value: number }>("symbolic_entropy", {
        signals,
    });
    return raw.value;
}

/** Sum-normalized cross-spectral density of a group of signals. */
export async function snCsd(signals: number[][], client?: TrajkitClient): Promise<number> {
    const raw = await (client ?? defaultClient()).request<{ value: number }>("sn_csd", { signals });
    return raw.value;
}
