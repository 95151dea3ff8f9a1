/* tslint:disable */
/* eslint-disable */

/**
 * Train language models and a lexicon on the given corpus, then extract
 * the sixteen features for one sentence pair.
 */
export function analyze_pair(src_corpus: string, tgt_corpus: string, source: string, target: string, order: number, threshold: number): string;

/**
 * Train on four Gaussian clusters and report held-out accuracy and the
 * confusion matrix.
 */
export function cluster_demo(separation: number, per_class: number, seed: bigint): string;

/**
 * Score and grade for ten parameter scores, each 0 to 4.
 */
export function grade_judgment(params: Uint8Array): string;

/**
 * Seeded toy parallel corpus, one sentence per line on each side.
 */
export function toy_corpus(pairs: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze_pair: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number];
    readonly cluster_demo: (a: number, b: number, c: bigint) => [number, number];
    readonly grade_judgment: (a: number, b: number) => [number, number];
    readonly toy_corpus: (a: number, b: bigint) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
