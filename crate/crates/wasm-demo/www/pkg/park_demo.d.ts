/* tslint:disable */
/* eslint-disable */

/**
 * Strategy values on the three-lot demo network for chosen probabilities.
 */
export class LotChoice {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    best_patient(): number;
    /**
     * Cycling lots 2 and 3 as one cluster.
     */
    cluster(): number;
    /**
     * First lot of the optimal (value iteration) policy.
     */
    mdp_first(): number;
    mdp_time(): number;
    /**
     * Patient expected time for lots 1..=3.
     */
    patient(): Float64Array;
}

/**
 * One walk with its hold-last estimate, sampled once per minute.
 */
export class WalkView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    estimate(): Float64Array;
    mae(): number;
    /**
     * Minutes at which a connected user reported.
     */
    observed_at(): Float64Array;
    truth(): Float64Array;
}

export function cascade_curve(p1: number, max_n: number, samples: bigint, seed: bigint): Float64Array;

/**
 * Interval error constant of a linear trend, for the page's readout.
 */
export function linear_error(slope_per_min: number, lambda: number, adoption: number): number;

export function lot_choice(p1: number, p2: number, p3: number): LotChoice;

export function observe_walk(start: number, minutes: number, lambda: number, adoption: number, seed: bigint): WalkView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_lotchoice_free: (a: number, b: number) => void;
    readonly __wbg_walkview_free: (a: number, b: number) => void;
    readonly cascade_curve: (a: number, b: number, c: bigint, d: bigint) => [number, number, number, number];
    readonly linear_error: (a: number, b: number, c: number) => number;
    readonly lot_choice: (a: number, b: number, c: number) => [number, number, number];
    readonly lotchoice_best_patient: (a: number) => number;
    readonly lotchoice_cluster: (a: number) => number;
    readonly lotchoice_mdp_first: (a: number) => number;
    readonly lotchoice_mdp_time: (a: number) => number;
    readonly lotchoice_patient: (a: number) => [number, number];
    readonly observe_walk: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly walkview_estimate: (a: number) => [number, number];
    readonly walkview_mae: (a: number) => number;
    readonly walkview_observed_at: (a: number) => [number, number];
    readonly walkview_truth: (a: number) => [number, number];
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
