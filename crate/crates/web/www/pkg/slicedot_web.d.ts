/* tslint:disable */
/* eslint-disable */

/**
 * Free-support barycenter points and loss trace.
 */
export class FreeRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly loss: Float64Array;
    readonly points: Float64Array;
}

/**
 * Kernel density estimates of both inputs and their Radon barycenter on
 * a grid of `n_theta` rings with `n_phi` points each.
 */
export class RadonRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly barycenter: Float64Array;
    readonly first: Float64Array;
    readonly n_phi: number;
    readonly n_theta: number;
    readonly second: Float64Array;
}

export function distances(a: Float64Array, b: Float64Array, slices: number, seed: number): Float64Array;

export function freeBarycenter(a: Float64Array, b: Float64Array, t: number, n: number, iterations: number, slices: number, tau: number, seed: number): FreeRun;

export function radonBarycenter(a: Float64Array, b: Float64Array, t: number, degree: number, kappa: number): RadonRun;

export function sample(shape: string, n: number, seed: number, tilt: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_freerun_free: (a: number, b: number) => void;
    readonly __wbg_radonrun_free: (a: number, b: number) => void;
    readonly distances: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly freeBarycenter: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
    readonly freerun_loss: (a: number) => [number, number];
    readonly freerun_points: (a: number) => [number, number];
    readonly radonBarycenter: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly radonrun_barycenter: (a: number) => [number, number];
    readonly radonrun_first: (a: number) => [number, number];
    readonly radonrun_n_phi: (a: number) => number;
    readonly radonrun_n_theta: (a: number) => number;
    readonly radonrun_second: (a: number) => [number, number];
    readonly sample: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
