/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const analyze_pair: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number];
export const cluster_demo: (a: number, b: number, c: bigint) => [number, number];
export const grade_judgment: (a: number, b: number) => [number, number];
export const toy_corpus: (a: number, b: bigint) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
