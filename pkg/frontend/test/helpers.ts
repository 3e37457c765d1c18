/** Shared test utilities: seeded PRNG, case generators, deep numeric compare. */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface } from "node:readline";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { Readable, Writable } from "node:stream";

/** Deterministic 32-bit PRNG so both ends of a parity case see identical inputs. */
export function mulberry32(seed: number): () => number {
    let state = seed >>> 0;
    return () => {
        state = (state + 0x6d2b79f5) >>> 0;
        let t = state;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

export function randInt(rand: () => number, lo: number, hi: number): number {
    return lo + Math.floor(rand() * (hi - lo + 1));
}

export function randMatrix(rand: () => number, rows: number, cols: number): number[][] {
    return Array.from({ length: rows }, () =>
        Array.from({ length: cols }, () => 4 * rand() - 2),
    );
}

export function increasingTimes(rand: () => number, n: number): number[] {
    const times: number[] = [0];
    for (let i = 1; i < n; i++) {
        times.push(times[i - 1] + 0.05 + rand());
    }
    return times;
}

/** Polyline length of a point-row matrix. */
export function pathLength(points: number[][]): number {
    let total = 0;
    for (let i = 1; i < points.length; i++) {
        let sq = 0;
        for (let c = 0; c < points[i].length; c++) {
            sq += (points[i][c] - points[i - 1][c]) ** 2;
        }
        total += Math.sqrt(sq);
    }
    return total;
}

/** Recursively compare nested numbers/arrays/objects within a tolerance. */
export function maxDeviation(a: unknown, b: unknown): number {
    if (typeof a === "number" && typeof b === "number") {
        if (Number.isNaN(a) && Number.isNaN(b)) return 0;
        return Math.abs(a - b);
    }
    if (typeof a === "boolean" || typeof b === "boolean" || a === null || b === null) {
        return Object.is(a, b) ? 0 : Infinity;
    }
    if (typeof a === "string" && typeof b === "string") {
        return a === b ? 0 : Infinity;
    }
    if (Array.isArray(a) && Array.isArray(b)) {
        if (a.length !== b.length) return Infinity;
        let worst = 0;
        for (let i = 0; i < a.length; i++) {
            worst = Math.max(worst, maxDeviation(a[i], b[i]));
        }
        return worst;
    }
    if (typeof a === "object" && typeof b === "object" && a !== null && b !== null) {
        const ka = Object.keys(a).sort();
        const kb = Object.keys(b).sort();
        if (ka.join() !== kb.join()) return Infinity;
        let worst = 0;
        for (const key of ka) {
            worst = Math.max(
                worst,
                maxDeviation((a as Record<string, unknown>)[key], (b as Record<string, unknown>)[key]),
            );
        }
        return worst;
    }
    return Infinity;
}

interface Pending {
    resolve: (value: { ok: boolean; result?: unknown; error?: unknown }) => void;
}

/** Runs the primary implementation directly (the parity oracle). */
export class ReferenceDriver {
    private proc: ChildProcessByStdio<Writable, Readable, null>;
    private pending = new Map<number, Pending>();
    private nextId = 1;

    constructor() {
        // compiled location is dist/test/, so the driver sits two levels up
        const here = dirname(fileURLToPath(import.meta.url));
        const script = join(here, "..", "..", "reference", "driver.py");
        this.proc = spawn("python3", [script], { stdio: ["pipe", "pipe", "inherit"] });
        const lines = createInterface({ input: this.proc.stdout });
        lines.on("line", (line) => {
            const response = JSON.parse(line);
            const entry = this.pending.get(response.id);
            if (entry) {
                this.pending.delete(response.id);
                entry.resolve(response);
            }
        });
    }

    compute(op: string, args: object): Promise<{ ok: boolean; result?: unknown; error?: unknown }> {
        const id = this.nextId++;
        return new Promise((resolve) => {
            this.pending.set(id, { resolve });
            this.proc.stdin.write(JSON.stringify({ id, op, args }) + "\n");
        });
    }

    close(): void {
        this.proc.stdin.end();
    }
}
