/* tslint:disable */
/* eslint-disable */

export class HotSeat {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `kind` is `fold`, `check`, `call`, `bet` or `raise`.
     */
    act(kind: string, amount?: number | null): string;
    /**
     * `winner` is `0`, `1` or `chop`.
     */
    declare(winner: string): string;
    constructor(stack: number, sb: number, bb: number, physical: boolean, seed: number);
    nextHand(): string;
    view(): string;
}

export function compare(board: string, a: string, b: string): string;

export function evaluate(cards: string): string;

export function explore(street: string, stack_bb: number, sb: number, bb: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_hotseat_free: (a: number, b: number) => void;
    readonly compare: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly evaluate: (a: number, b: number) => [number, number, number, number];
    readonly explore: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly hotseat_act: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly hotseat_declare: (a: number, b: number, c: number) => [number, number, number, number];
    readonly hotseat_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly hotseat_nextHand: (a: number) => [number, number, number, number];
    readonly hotseat_view: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
