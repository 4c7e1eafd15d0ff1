/* tslint:disable */
/* eslint-disable */

/**
 * Cycle status and invariants, plus the Gram matrix of `L`.
 */
export function cycle_invariants(matrix: string, p: number, epsilon: string, raw: boolean): string;

/**
 * Jordan blocks of the Gram matrix.
 */
export function jordan_report(matrix: string, p: number, epsilon: string): string;

/**
 * Vertex lattices of `L` by type, with the Hasse diagram as Graphviz text.
 */
export function vertex_census(matrix: string, p: number, epsilon: string, raw: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cycle_invariants: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly jordan_report: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly vertex_census: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
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
