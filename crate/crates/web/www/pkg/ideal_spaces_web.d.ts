/* tslint:disable */
/* eslint-disable */

/**
 * `{"point": "sqrt2" | "p/q", "center": "p/q", "exponent": n, "fuel": n}`.
 * Semidecides whether the ball `<center, 2^-exponent>` belongs to the ideal
 * of the point, and reports the exact answer alongside.
 */
export function ballMembership(input: string): string;

/**
 * `{"ideal": <ideal spec>, "count": n, "fuel": n}`. Lists elements in
 * discovery order with the stage each first appeared.
 */
export function enumerateIdeal(input: string): string;

/**
 * `{"preset": name}` or `{"size": n, "pairs": [[a, b], ...]}` with
 * `n <= 5`. Returns the transitive closure, all ideals, closed sets and
 * saturated compacts, the images under `f_L` and `f_U`, and the outcome of
 * the exhaustive check.
 */
export function explorePoset(input: string): string;

/**
 * Names accepted by `explorePoset` as `preset`.
 */
export function posetPresets(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly ballMembership: (a: number, b: number) => [number, number];
    readonly enumerateIdeal: (a: number, b: number) => [number, number];
    readonly explorePoset: (a: number, b: number) => [number, number];
    readonly posetPresets: () => [number, number];
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
