/* tslint:disable */
/* eslint-disable */

/**
 * A single scene the page can edit, segment and inspect.
 */
export class SceneView {
    free(): void;
    [Symbol.dispose](): void;
    height(): number;
    mask_pixels(): number;
    constructor();
    /**
     * Picked color as `[r, g, b]`.
     */
    pick(): Uint8Array;
    /**
     * Picks the threshold color from the full-light pixel under (x, y).
     */
    pick_at(x: number, y: number): void;
    /**
     * `[left, right, top, bottom, center_x, center_y, contour_length]`, or empty when nothing was found.
     */
    region(): Float64Array;
    /**
     * RGBA pixels with matched pixels tinted and the located box outlined.
     */
    rgba(): Uint8Array;
    /**
     * Sets illumination in [0, 1] and re-renders.
     */
    set_illumination(level: number): void;
    /**
     * `"chroma"` or `"rgb"`.
     */
    set_mode(mode: string): void;
    /**
     * Moves the first shape (the tracked object).
     */
    set_object(kind: string, az: number, el: number, size: number): void;
    width(): number;
}

/**
 * Runs a step-tracking scenario.
 *
 * Returns `[settling_time (NaN if never), overshoot_pct, lost_frames, t0, ex0, ey0, t1, ex1, ey1, ...]`.
 */
export function simulate_tracking(az: number, el: number, ts: number, po: number, pan_tau: number, tilt_tau: number, duration: number): Float64Array;

/**
 * Object pixels retained relative to full light, as `[level, chroma, rgb]` triples.
 */
export function sweep(levels: Float64Array): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_sceneview_free: (a: number, b: number) => void;
    readonly sceneview_height: (a: number) => number;
    readonly sceneview_mask_pixels: (a: number) => number;
    readonly sceneview_new: () => number;
    readonly sceneview_pick: (a: number) => [number, number];
    readonly sceneview_pick_at: (a: number, b: number, c: number) => [number, number];
    readonly sceneview_region: (a: number) => [number, number];
    readonly sceneview_rgba: (a: number) => [number, number];
    readonly sceneview_set_illumination: (a: number, b: number) => [number, number];
    readonly sceneview_set_mode: (a: number, b: number, c: number) => [number, number];
    readonly sceneview_set_object: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly sceneview_width: (a: number) => number;
    readonly simulate_tracking: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly sweep: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
