/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_lotchoice_free: (a: number, b: number) => void;
export const __wbg_walkview_free: (a: number, b: number) => void;
export const cascade_curve: (a: number, b: number, c: bigint, d: bigint) => [number, number, number, number];
export const linear_error: (a: number, b: number, c: number) => number;
export const lot_choice: (a: number, b: number, c: number) => [number, number, number];
export const lotchoice_best_patient: (a: number) => number;
export const lotchoice_cluster: (a: number) => number;
export const lotchoice_mdp_first: (a: number) => number;
export const lotchoice_mdp_time: (a: number) => number;
export const lotchoice_patient: (a: number) => [number, number];
export const observe_walk: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const walkview_estimate: (a: number) => [number, number];
export const walkview_mae: (a: number) => number;
export const walkview_observed_at: (a: number) => [number, number];
export const walkview_truth: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
