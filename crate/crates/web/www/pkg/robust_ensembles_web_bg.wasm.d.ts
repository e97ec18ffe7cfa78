/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_optimum_alpha: (a: number) => number;
export const __wbg_get_optimum_beta: (a: number) => number;
export const __wbg_get_optimum_gamma: (a: number) => number;
export const __wbg_get_optimum_on_boundary: (a: number) => number;
export const __wbg_get_optimum_tau: (a: number) => number;
export const __wbg_get_optimum_tau_coherent: (a: number) => number;
export const __wbg_optimum_free: (a: number, b: number) => void;
export const __wbg_set_optimum_alpha: (a: number, b: number) => void;
export const __wbg_set_optimum_beta: (a: number, b: number) => void;
export const __wbg_set_optimum_gamma: (a: number, b: number) => void;
export const __wbg_set_optimum_on_boundary: (a: number, b: number) => void;
export const __wbg_set_optimum_tau: (a: number, b: number) => void;
export const __wbg_set_optimum_tau_coherent: (a: number, b: number) => void;
export const contourSvg: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const ellipseSvg: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const optimize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const survivalSvg: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
