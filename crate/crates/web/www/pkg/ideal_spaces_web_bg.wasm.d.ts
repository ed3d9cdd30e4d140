/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const ballMembership: (a: number, b: number) => [number, number];
export const enumerateIdeal: (a: number, b: number) => [number, number];
export const explorePoset: (a: number, b: number) => [number, number];
export const posetPresets: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
