// Pure view-state logic: presets, client-side validation mirroring the
// server's limits, and reducers for the board. No DOM and no rule
// simulation here — the rendered state is always the last server response.

import type {
  ApiError,
  Bound,
  HintResponse,
  HistoryEntry,
  SessionView,
} from "./api.js";

export const MAX_PILES = 8;
export const MAX_PILE = 16383;

export interface GameConfig {
  piles: number[];
  bound: Bound | null;
  dynamic: 1 | 2;
  humanFirst: boolean;
  hintsEnabled: boolean;
}

export interface Preset {
  name: string;
  piles: number[];
  bound: Bound | null;
  dynamic: 1 | 2;
  humanFirst: boolean;
}

export const PRESETS: readonly Preset[] = [
  { name: "Three piles", piles: [3, 4, 10], bound: "inf", dynamic: 2, humanFirst: true },
  { name: "Classic n=20", piles: [20], bound: 19, dynamic: 2, humanFirst: true },
  { name: "Table 1 duel", piles: [5, 6], bound: "inf", dynamic: 2, humanFirst: true },
  { name: "Bound-2 sprint", piles: [10], bound: 2, dynamic: 2, humanFirst: false },
];

export const DEFAULT_PRESET = PRESETS[0];

export function maxTake(bound: Bound, pile: number): number {
  return bound === "inf" ? pile : Math.min(bound, pile);
}

export function formatBound(bound: Bound | null): string {
  return bound === "inf" || bound === null ? "∞" : String(bound);
}

export function parseBound(text: string): Bound | null {
  const t = text.trim().toLowerCase();
  if (t === "" || t === "inf" || t === "infinity" || t === "∞") {
    return "inf";
  }
  const n = Number(t);
  if (!Number.isInteger(n)) {
    return null;
  }
  return n;
}

// Mirrors the server's create-session checks so most mistakes are caught
// before a request is sent; the server remains the authority.
export function validateConfig(config: GameConfig): string[] {
  const problems: string[] = [];
  if (config.piles.length < 1 || config.piles.length > MAX_PILES) {
    problems.push(`between 1 and ${MAX_PILES} piles`);
  }
  if (config.piles.some((v) => !Number.isInteger(v) || v < 0 || v > MAX_PILE)) {
    problems.push(`pile sizes must be whole numbers within 0..${MAX_PILE}`);
  } else if (config.piles.length >= 1 && !config.piles.some((v) => v > 0)) {
    problems.push("at least one pile must be nonempty");
  }
  if (config.bound === null) {
    problems.push("bound must be a whole number or ∞");
  } else if (config.bound !== "inf" && config.bound < 1) {
    problems.push("bound must be at least 1 or ∞");
  }
  return problems;
}

export interface ViewState {
  session: SessionView | null;
  selectedPile: number | null;
  pendingTake: number;
  busy: boolean;
  error: string | null;
  hint: HintResponse | null;
}

export function initialState(): ViewState {
  return {
    session: null,
    selectedPile: null,
    pendingTake: 1,
    busy: false,
    error: null,
    hint: null,
  };
}

export function canInteract(state: ViewState): boolean {
  return (
    state.session !== null &&
    state.session.status === "in-progress" &&
    !state.busy
  );
}

// A fresh server response replaces everything the board shows.
export function withSession(state: ViewState, session: SessionView): ViewState {
  return {
    ...state,
    session,
    selectedPile: null,
    pendingTake: 1,
    error: null,
    hint: null,
  };
}

export function selectPile(state: ViewState, index: number): ViewState {
  if (!canInteract(state) || state.session === null) {
    return state;
  }
  const pile = state.session.piles[index];
  if (pile === undefined || pile <= 0) {
    return state;
  }
  if (state.selectedPile === index) {
    return state;
  }
  return { ...state, selectedPile: index, pendingTake: 1 };
}

export function setTake(state: ViewState, take: number): ViewState {
  if (state.session === null || state.selectedPile === null) {
    return state;
  }
  const pile = state.session.piles[state.selectedPile] ?? 0;
  const limit = maxTake(state.session.bound, pile);
  const clamped = Math.max(1, Math.min(limit, Math.floor(take)));
  return { ...state, pendingTake: clamped };
}

export function withHint(state: ViewState, hint: HintResponse): ViewState {
  if (hint.hint === null) {
    return { ...state, hint, error: null };
  }
  // Highlight the suggestion: select its pile and preset the slider.
  return {
    ...state,
    hint,
    error: null,
    selectedPile: hint.hint.pile_index,
    pendingTake: hint.hint.take,
  };
}

interface IllegalMoveDetail {
  max_take?: number;
}

// Inline error text; for rejected moves the legal range is always included.
export function describeError(err: unknown): string {
  if (err instanceof Error && err.name === "ApiError") {
    const api = err as ApiError;
    const detail = api.body.detail as IllegalMoveDetail | null;
    if (
      api.code === "illegal_move" &&
      detail !== null &&
      typeof detail === "object" &&
      typeof detail.max_take === "number"
    ) {
      const range =
        detail.max_take < 1
          ? "no legal take from this pile"
          : `legal take: 1–${detail.max_take}`;
      return `${api.message} (${range})`;
    }
    return api.message;
  }
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}

export function describeEntry(entry: HistoryEntry): string {
  const who = entry.actor === "engine" ? "Engine" : "You";
  return (
    `${who} took ${entry.take} from pile ${entry.pile_index + 1} ` +
    `(${entry.pile_before} → ${entry.pile_before - entry.take}), ` +
    `bound now ${formatBound(entry.bound_after)}`
  );
}

export function bannerText(session: SessionView): string | null {
  if (session.winner === "engine") {
    return "Engine wins";
  }
  if (session.winner === "human") {
    return "You win";
  }
  return null;
}
