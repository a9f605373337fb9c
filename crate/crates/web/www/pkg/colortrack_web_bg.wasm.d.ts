/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_sceneview_free: (a: number, b: number) => void;
export const sceneview_height: (a: number) => number;
export const sceneview_mask_pixels: (a: number) => number;
export const sceneview_new: () => number;
export const sceneview_pick: (a: number) => [number, number];
export const sceneview_pick_at: (a: number, b: number, c: number) => [number, number];
export const sceneview_region: (a: number) => [number, number];
export const sceneview_rgba: (a: number) => [number, number];
export const sceneview_set_illumination: (a: number, b: number) => [number, number];
export const sceneview_set_mode: (a: number, b: number, c: number) => [number, number];
export const sceneview_set_object: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const sceneview_width: (a: number) => number;
export const simulate_tracking: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const sweep: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
