/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_freerun_free: (a: number, b: number) => void;
export const __wbg_radonrun_free: (a: number, b: number) => void;
export const distances: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const freeBarycenter: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
export const freerun_loss: (a: number) => [number, number];
export const freerun_points: (a: number) => [number, number];
export const radonBarycenter: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const radonrun_barycenter: (a: number) => [number, number];
export const radonrun_first: (a: number) => [number, number];
export const radonrun_n_phi: (a: number) => number;
export const radonrun_n_theta: (a: number) => number;
export const radonrun_second: (a: number) => [number, number];
export const sample: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
