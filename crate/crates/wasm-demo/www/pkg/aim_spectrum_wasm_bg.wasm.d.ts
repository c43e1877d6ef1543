/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const delta_scan: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const potential_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const solve_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
