/* tslint:disable */
/* eslint-disable */

/**
 * Runs the full pipeline on pasted netlist text.
 */
export function extract(text: string): string;

/**
 * Reduction matrix and XOR cost for a descending exponent list like `"4,1,0"`.
 */
export function reduction_table(poly: string): string;

/**
 * Generates a multiplier for `poly`, optionally obfuscates it (`seed < 0`
 * skips that), and extracts the polynomial back.
 */
export function round_trip(poly: string, share: boolean, seed: number, budget: number): string;

export function sample_netlist(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly extract: (a: number, b: number) => [number, number, number, number];
    readonly reduction_table: (a: number, b: number) => [number, number, number, number];
    readonly round_trip: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly sample_netlist: () => [number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
