/** Wire-level shapes exchanged with the trajectory-processing core. */

export type Vector = number[];
export type PointRows = number[][];

export interface SpatialSampleResult {
    /** Arc-length coordinate of each sample (k * delta for regular samples). */
    s: number[];
    /** Recovered timestamp of each sample. */
    t: number[];
    /** Sample positions, one row per sample. */
    points: PointRows;
    /** True when the recorded endpoint was appended with irregular spacing. */
    endpointAppended: boolean;
}

export interface DeltaSearchReport {
    /** The doubling progression of spacings that was evaluated. */
    grid: number[];
    /** Hausdorff distance of each progression entry. */
    dH: number[];
    /** Largest feasible spacing found, or null when infeasible. */
    chosen: number | null;
    /** Hausdorff distance achieved at the chosen spacing. */
    achieved: number | null;
    feasible: boolean;
}

export interface DtwOutcome {
    distance: number;
    /** Monotone (i, j) index pairs; null when not computed. */
    path: Array<[number, number]> | null;
}

export interface SoftDtwOutcome {
    value: number;
    /** Gradient of the value with respect to the first sequence's points. */
    grad: PointRows;
}

export interface BarycenterOutcome {
    curve: PointRows;
}

export interface GmrOutcome {
    curve: PointRows;
    /** Per-query conditional covariance matrices. */
    variance: number[][][];
    flags: string[];
}

export interface GmmModelDoc {
    weights: number[];
    means: PointRows;
    /** Row-major covariance matrix per component. */
    covariances: number[][][];
    degenerate: boolean;
}

export type ErrorKind =
    | "invalid-argument"
    | "parse"
    | "degenerate-path"
    | "infeasible-band"
    | "undefined-metric"
    | "internal";

/** Error raised when the core rejects a request; mirrors its error taxonomy. */
export class TrajkitError extends Error {
    readonly kind: ErrorKind;

    constructor(kind: ErrorKind, message: string) {
        super(message);
        this.name = "TrajkitError";
        this.kind = kind;
    }
}
