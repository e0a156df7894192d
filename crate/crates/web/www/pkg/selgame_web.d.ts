/* tslint:disable */
/* eslint-disable */

/**
 * The pieces of each fusion generation as hull intervals.
 */
export function fusion_pieces(_function: string, generations: number): string;

/**
 * Values and exact oscillation on `[0,1]` at the odd dyadics of depth `depth`
 * and at the midpoints between them (which are not dyadic).
 */
export function oscillation_profile(_function: string, depth: number): string;

/**
 * Plays a built-in preset; the reply lists Player I's points with their values,
 * Player II's sets as hull intervals, and the certificate.
 */
export function play_preset(name: string, seed: number, horizon: number): string;

export function preset_names(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly fusion_pieces: (a: number, b: number, c: number) => [number, number];
    readonly oscillation_profile: (a: number, b: number, c: number) => [number, number];
    readonly play_preset: (a: number, b: number, c: number, d: number) => [number, number];
    readonly preset_names: () => [number, number];
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
