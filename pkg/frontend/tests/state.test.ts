import { describe, expect, it } from "vitest";
import { ApiError, type SessionView } from "../src/api.js";
import {
  DEFAULT_PRESET,
  MAX_PILE,
  MAX_PILES,
  PRESETS,
  bannerText,
  canInteract,
  describeEntry,
  describeError,
  formatBound,
  initialState,
  maxTake,
  parseBound,
  selectPile,
  setTake,
  validateConfig,
  withHint,
  withSession,
  type GameConfig,
} from "../src/state.js";

function session(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: "abc123",
    piles: [3, 4, 10],
    bound: "inf",
    dynamic: 2,
    human_first: true,
    hints_enabled: true,
    status: "in-progress",
    winner: null,
    turn: "human",
    history: [],
    ...overrides,
  };
}

function config(overrides: Partial<GameConfig> = {}): GameConfig {
  return {
    piles: [3, 4, 10],
    bound: "inf",
    dynamic: 2,
    humanFirst: true,
    hintsEnabled: true,
    ...overrides,
  };
}

describe("maxTake", () => {
  it("is the pile size when the bound is infinite", () => {
    expect(maxTake("inf", 10)).toBe(10);
  });

  it("is the bound when the bound is smaller", () => {
    expect(maxTake(4, 8)).toBe(4);
  });

  it("is the pile when the pile is smaller", () => {
    expect(maxTake(9, 2)).toBe(2);
  });

  it("is zero for an empty pile", () => {
    expect(maxTake(5, 0)).toBe(0);
  });
});

describe("bound parsing and formatting", () => {
  it("formats the infinite bound as the infinity sign", () => {
    expect(formatBound("inf")).toBe("∞");
    expect(formatBound(19)).toBe("19");
    expect(formatBound(null)).toBe("∞");
  });

  it("accepts numbers, inf spellings, and the sign itself", () => {
    expect(parseBound("7")).toBe(7);
    expect(parseBound(" inf ")).toBe("inf");
    expect(parseBound("Infinity")).toBe("inf");
    expect(parseBound("∞")).toBe("inf");
    expect(parseBound("")).toBe("inf");
  });

  it("rejects non-integers", () => {
    expect(parseBound("2.5")).toBeNull();
    expect(parseBound("banana")).toBeNull();
  });
});

describe("presets", () => {
  it("defaults to three piles 3,4,10 with no bound", () => {
    expect(DEFAULT_PRESET.piles).toEqual([3, 4, 10]);
    expect(DEFAULT_PRESET.bound).toBe("inf");
    expect(DEFAULT_PRESET.dynamic).toBe(2);
  });

  it("includes the classic single pile of 20 with bound 19", () => {
    const classic = PRESETS.find((p) => p.name === "Classic n=20");
    expect(classic?.piles).toEqual([20]);
    expect(classic?.bound).toBe(19);
  });

  it("includes the two-pile duel 5,6 with no bound", () => {
    const duel = PRESETS.find((p) => p.name === "Table 1 duel");
    expect(duel?.piles).toEqual([5, 6]);
    expect(duel?.bound).toBe("inf");
  });

  it("includes the engine-first single pile of 10 with bound 2", () => {
    const sprint = PRESETS.find((p) => p.name === "Bound-2 sprint");
    expect(sprint?.piles).toEqual([10]);
    expect(sprint?.bound).toBe(2);
    expect(sprint?.humanFirst).toBe(false);
  });

  it("every preset passes client-side validation", () => {
    for (const preset of PRESETS) {
      const cfg = config({
        piles: preset.piles,
        bound: preset.bound,
        dynamic: preset.dynamic,
        humanFirst: preset.humanFirst,
      });
      expect(validateConfig(cfg)).toEqual([]);
    }
  });
});

describe("validateConfig", () => {
  it("accepts a plain game", () => {
    expect(validateConfig(config())).toEqual([]);
  });

  it("rejects zero piles and too many piles", () => {
    expect(validateConfig(config({ piles: [] }))).not.toEqual([]);
    const many = config({ piles: Array(MAX_PILES + 1).fill(1) });
    expect(validateConfig(many).join(" ")).toContain(`${MAX_PILES}`);
  });

  it("rejects oversized, negative, and fractional piles", () => {
    expect(validateConfig(config({ piles: [MAX_PILE + 1] }))).not.toEqual([]);
    expect(validateConfig(config({ piles: [-1] }))).not.toEqual([]);
    expect(validateConfig(config({ piles: [2.5] }))).not.toEqual([]);
    expect(validateConfig(config({ piles: [NaN] }))).not.toEqual([]);
    expect(validateConfig(config({ piles: [MAX_PILE] }))).toEqual([]);
  });

  it("rejects the all-empty position", () => {
    expect(validateConfig(config({ piles: [0, 0] }))).not.toEqual([]);
  });

  it("rejects bad bounds and accepts the infinite bound", () => {
    expect(validateConfig(config({ bound: 0 }))).not.toEqual([]);
    expect(validateConfig(config({ bound: null }))).not.toEqual([]);
    expect(validateConfig(config({ bound: "inf" }))).toEqual([]);
    expect(validateConfig(config({ bound: 1 }))).toEqual([]);
  });
});

describe("view-state reducers", () => {
  it("starts with no session and nothing selected", () => {
    const s = initialState();
    expect(s.session).toBeNull();
    expect(s.selectedPile).toBeNull();
    expect(canInteract(s)).toBe(false);
  });

  it("replaces the board with each server response and clears selection", () => {
    let s = withSession(initialState(), session());
    s = selectPile(s, 2);
    expect(s.selectedPile).toBe(2);
    s = { ...s, error: "old", hint: { hint: null, outcome: "P" } };
    const next = session({ piles: [3, 4, 7], bound: 6 });
    s = withSession(s, next);
    expect(s.session).toBe(next);
    expect(s.selectedPile).toBeNull();
    expect(s.error).toBeNull();
    expect(s.hint).toBeNull();
  });

  it("only selects nonempty piles while the game is live", () => {
    let s = withSession(initialState(), session({ piles: [0, 5] }));
    expect(selectPile(s, 0).selectedPile).toBeNull();
    expect(selectPile(s, 1).selectedPile).toBe(1);
    expect(selectPile(s, 7).selectedPile).toBeNull();
    const done = withSession(
      initialState(),
      session({ status: "engine-won", winner: "engine", turn: null }),
    );
    expect(selectPile(done, 1).selectedPile).toBeNull();
    expect(selectPile({ ...s, busy: true }, 1).selectedPile).toBeNull();
  });

  it("clamps the pending take to min(bound, pile)", () => {
    let s = withSession(initialState(), session({ piles: [8], bound: 4 }));
    s = selectPile(s, 0);
    expect(setTake(s, 9).pendingTake).toBe(4);
    expect(setTake(s, 0).pendingTake).toBe(1);
    expect(setTake(s, 3).pendingTake).toBe(3);
    const unbounded = selectPile(
      withSession(initialState(), session({ piles: [8], bound: "inf" })),
      0,
    );
    expect(setTake(unbounded, 99).pendingTake).toBe(8);
  });

  it("applying a hint selects its pile and presets the take", () => {
    const base = withSession(initialState(), session({ piles: [10], bound: 2 }));
    const s = withHint(base, { hint: { pile_index: 0, take: 2 }, outcome: "N" });
    expect(s.selectedPile).toBe(0);
    expect(s.pendingTake).toBe(2);
    const lost = withHint(base, { hint: null, outcome: "P" });
    expect(lost.hint?.outcome).toBe("P");
    expect(lost.selectedPile).toBeNull();
  });
});

describe("describeError", () => {
  it("appends the legal range to a rejected move", () => {
    const err = new ApiError(400, {
      code: "illegal_move",
      message: "take must be between 1 and 4",
      detail: { pile_index: 0, pile: 8, bound: 4, max_take: 4 },
    });
    const text = describeError(err);
    expect(text).toContain("between 1 and 4");
    expect(text).toContain("legal take: 1–4");
  });

  it("explains an empty pile instead of a 1–0 range", () => {
    const err = new ApiError(400, {
      code: "illegal_move",
      message: "take must be between 1 and 0",
      detail: { pile_index: 1, pile: 0, bound: 4, max_take: 0 },
    });
    expect(describeError(err)).toContain("no legal take");
  });

  it("passes other server messages through", () => {
    const err = new ApiError(409, {
      code: "game_over",
      message: "session already finished: engine-won",
      detail: null,
    });
    expect(describeError(err)).toBe("session already finished: engine-won");
    expect(describeError(new Error("network down"))).toBe("network down");
  });
});

describe("presentation helpers", () => {
  it("describes a history entry with actor, take, pile, and new bound", () => {
    const text = describeEntry({
      actor: "engine",
      pile_index: 0,
      pile_before: 10,
      take: 2,
      piles_after: [8],
      bound_after: 4,
    });
    expect(text).toContain("Engine");
    expect(text).toContain("took 2");
    expect(text).toContain("pile 1");
    expect(text).toContain("10 → 8");
    expect(text).toContain("bound now 4");
  });

  it("names the winner in the banner", () => {
    expect(
      bannerText(session({ status: "engine-won", winner: "engine", turn: null })),
    ).toBe("Engine wins");
    expect(
      bannerText(session({ status: "human-won", winner: "human", turn: null })),
    ).toBe("You win");
    expect(bannerText(session())).toBeNull();
  });
});
