/* tslint:disable */
/* eslint-disable */

/**
 * The most robust ensemble, as shown in the page's result table.
 */
export class Optimum {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    alpha: number;
    beta: number;
    gamma: number;
    on_boundary: boolean;
    /**
     * NaN when the coherent ensemble never reaches the threshold.
     */
    tau_coherent: number;
    tau: number;
}

export function contourSvg(chi: number, nu: number, lambda: number, purity: boolean, gamma_points: number, beta_points: number): string;

export function ellipseSvg(chi: number, nu: number, beta: number, gamma: number, t_end: number): string;

export function optimize(chi: number, nu: number, lambda: number, constrained: boolean, purity: boolean): Optimum;

export function survivalSvg(chi: number, nu: number, lambda: number, beta: number, gamma: number, purity: boolean, t_max: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_optimum_alpha: (a: number) => number;
    readonly __wbg_get_optimum_beta: (a: number) => number;
    readonly __wbg_get_optimum_gamma: (a: number) => number;
    readonly __wbg_get_optimum_on_boundary: (a: number) => number;
    readonly __wbg_get_optimum_tau: (a: number) => number;
    readonly __wbg_get_optimum_tau_coherent: (a: number) => number;
    readonly __wbg_optimum_free: (a: number, b: number) => void;
    readonly __wbg_set_optimum_alpha: (a: number, b: number) => void;
    readonly __wbg_set_optimum_beta: (a: number, b: number) => void;
    readonly __wbg_set_optimum_gamma: (a: number, b: number) => void;
    readonly __wbg_set_optimum_on_boundary: (a: number, b: number) => void;
    readonly __wbg_set_optimum_tau: (a: number, b: number) => void;
    readonly __wbg_set_optimum_tau_coherent: (a: number, b: number) => void;
    readonly contourSvg: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly ellipseSvg: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly optimize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly survivalSvg: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
