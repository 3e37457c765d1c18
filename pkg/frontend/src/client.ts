/**
 * Line-delimited JSON client for the trajectory-processing core.
 *
 * One core process is spawned lazily and shared; each request gets a fresh
 * id and resolves when the matching response line arrives, so concurrent
 * calls are safe.  Floats travel as shortest-round-trip JSON numbers, which
 * both runtimes read back bit-exactly as IEEE-754 doubles.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { TrajkitError, type ErrorKind } from "./types.js";

interface Pending {
    resolve: (value: unknown) => void;
    reject: (err: Error) => void;
}

export interface ClientOptions {
    /** Command launching the core's rpc mode; defaults to `python3 -m trajkit rpc`. */
    command?: string[];
}

export class TrajkitClient {
    private proc: ChildProcessByStdio<Writable, Readable, null>;
    private pending = new Map<number, Pending>();
    private nextId = 1;
    private closed = false;

    constructor(options: ClientOptions = {}) {
        const command =
            options.command ??
            (process.env.TRAJKIT_RPC ? process.env.TRAJKIT_RPC.split(" ") : null) ??
            ["python3", "-m", "trajkit", "rpc"];
        this.proc = spawn(command[0], command.slice(1), {
            stdio: ["pipe", "pipe", "inherit"],
        });
        const lines = createInterface({ input: this.proc.stdout });
        lines.on("line", (line) => this.dispatch(line));
        this.proc.on("exit", (code) => {
            this.closed = true;
            const err = new TrajkitError("internal", `core process exited with code ${code}`);
            for (const entry of this.pending.values()) {
                entry.reject(err);
            }
            this.pending.clear();
        });
    }

    private dispatch(line: string): void {
        let response: {
            id: number;
            ok: boolean;
            result?: unknown;
            error?: { type: ErrorKind; message: string };
        };
        try {
            response = JSON.parse(line);
        } catch {
            return; // stray non-JSON output; responses are matched by id
        }
        const entry = this.pending.get(response.id);
        if (!entry) {
            return;
        }
        this.pending.delete(response.id);
        if (response.ok) {
            entry.resolve(response.result);
        } else {
            const error = response.error ?? { type: "internal" as ErrorKind, message: "unknown" };
            entry.reject(new TrajkitError(error.type, error.message));
        }
    }

    request<T>(op: string, args: object): Promise<T> {
        if (this.closed) {
            return Promise.reject(new TrajkitError("internal", "client is closed"));
        }
        const id = this.nextId++;
        const payload = JSON.stringify({ id, op, args });
        return new Promise<T>((resolve, reject) => {
            this.pending.set(id, { resolve: resolve as (v: unknown) => void, reject });
            this.proc.stdin.write(payload + "\n");
        });
    }

    close(): void {
        if (!this.closed) {
            this.closed = true;
            this.proc.stdin.end();
        }
    }
}

let shared: TrajkitClient | null = null;

/** The lazily created client shared by the module-level binding functions. */
export function defaultClient(): TrajkitClient {
    if (shared === null) {
        shared = new TrajkitClient();
    }
    return shared;
}

/** Shut down the shared core process (tests call this in teardown). */
export function closeDefaultClient(): void {
    if (shared !== null) {
        shared.close();
        shared = null;
    }
}
