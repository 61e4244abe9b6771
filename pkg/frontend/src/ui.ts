// Board and setup form. The controller owns a ViewState, talks to the
// service through EngineApi, and re-renders from scratch after every
// response, so what is on screen is always the last server-returned
// session. At most one request is in flight; inputs are disabled while
// it runs. The take slider is clamped to min(bound, pile), and any
// rejection the server still produces is rendered inline, never dropped.

import type { CreateRequest, EngineApi } from "./api.js";
import {
  DEFAULT_PRESET,
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
  type Preset,
  type ViewState,
} from "./state.js";

const MAX_STONES_DRAWN = 20;

export class GameController {
  private state: ViewState = initialState();
  private readonly root: HTMLElement;
  private readonly api: EngineApi;

  constructor(root: HTMLElement, api: EngineApi) {
    this.root = root;
    this.api = api;
  }

  getState(): ViewState {
    return this.state;
  }

  init(): void {
    this.root.innerHTML = `
      <section id="setup">
        <h2>New game</h2>
        <div id="presets"></div>
        <label>Variant
          <select id="variant">
            <option value="2">bound doubles (take ≤ bound, next bound = 2 × take)</option>
            <option value="1">bound repeats (take ≤ bound, next bound = take)</option>
          </select>
        </label>
        <div id="pile-editor">
          <span>Piles</span>
          <div id="piles"></div>
          <button id="add-pile" type="button">+ pile</button>
        </div>
        <label>Take bound <input id="bound" type="text" size="6"> (number or ∞)</label>
        <label>First move
          <select id="first">
            <option value="human">me</option>
            <option value="engine">engine</option>
          </select>
        </label>
        <label><input id="hints" type="checkbox" checked> enable hints</label>
        <ul id="setup-problems"></ul>
        <button id="start" type="button">Start game</button>
      </section>
      <div id="error-box" role="alert" hidden></div>
      <section id="board" hidden>
        <div id="banner" hidden></div>
        <div id="status-line"></div>
        <div id="piles-view"></div>
        <div id="move-controls" hidden>
          <label>Take <input id="take-slider" type="range" min="1" step="1"></label>
          <span id="take-value"></span>
          <button id="confirm" type="button">Take stones</button>
        </div>
        <div id="hint-row" hidden>
          <button id="hint-btn" type="button">Hint</button>
          <span id="hint-text"></span>
        </div>
        <h3>Moves</h3>
        <ol id="history"></ol>
      </section>
    `;
    this.renderPresets();
    this.setPileInputs(DEFAULT_PRESET.piles);
    this.applyPreset(DEFAULT_PRESET);
    this.bindSetupEvents();
    this.bindBoardEvents();
    this.render();
  }

  // ----- setup form ---------------------------------------------------

  private el<T extends HTMLElement>(id: string): T {
    const node = this.root.querySelector(`#${id}`);
    if (node === null) {
      throw new Error(`missing element #${id}`);
    }
    return node as T;
  }

  private renderPresets(): void {
    const holder = this.el<HTMLDivElement>("presets");
    holder.innerHTML = "";
    for (const preset of PRESETS) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.className = "preset-btn";
      btn.dataset.name = preset.name;
      btn.textContent = preset.name;
      btn.addEventListener("click", () => this.applyPreset(preset));
      holder.appendChild(btn);
    }
  }

  private setPileInputs(piles: number[]): void {
    const holder = this.el<HTMLDivElement>("piles");
    holder.innerHTML = "";
    for (const value of piles) {
      this.appendPileInput(value);
    }
    this.refreshPileButtons();
  }

  private appendPileInput(value: number): void {
    const holder = this.el<HTMLDivElement>("piles");
    const row = document.createElement("span");
    row.className = "pile-row";
    const input = document.createElement("input");
    input.type = "number";
    input.className = "pile-input";
    input.min = "0";
    input.value = String(value);
    input.addEventListener("input", () => this.renderSetupProblems());
    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "remove-pile";
    remove.textContent = "×";
    remove.addEventListener("click", () => {
      row.remove();
      this.refreshPileButtons();
      this.renderSetupProblems();
    });
    row.appendChild(input);
    row.appendChild(remove);
    holder.appendChild(row);
  }

  private refreshPileButtons(): void {
    const rows = this.root.querySelectorAll(".pile-row");
    rows.forEach((row) => {
      const btn = row.querySelector<HTMLButtonElement>(".remove-pile");
      if (btn !== null) {
        btn.disabled = rows.length <= 1;
      }
    });
    this.el<HTMLButtonElement>("add-pile").disabled = rows.length >= MAX_PILES;
  }

  private bindSetupEvents(): void {
    this.el<HTMLButtonElement>("add-pile").addEventListener("click", () => {
      this.appendPileInput(1);
      this.refreshPileButtons();
      this.renderSetupProblems();
    });
    this.el<HTMLInputElement>("bound").addEventListener("input", () =>
      this.renderSetupProblems(),
    );
    this.el<HTMLButtonElement>("start").addEventListener("click", () => {
      void this.createGame(this.readConfig());
    });
  }

  applyPreset(preset: Preset): void {
    this.el<HTMLSelectElement>("variant").value = String(preset.dynamic);
    this.setPileInputs(preset.piles);
    this.el<HTMLInputElement>("bound").value = formatBound(preset.bound);
    this.el<HTMLSelectElement>("first").value = preset.humanFirst
      ? "human"
      : "engine";
    this.renderSetupProblems();
  }

  readConfig(): GameConfig {
    const piles = Array.from(
      this.root.querySelectorAll<HTMLInputElement>(".pile-input"),
      (input) => Number(input.value),
    );
    return {
      piles,
      bound: parseBound(this.el<HTMLInputElement>("bound").value),
      dynamic:
        this.el<HTMLSelectElement>("variant").value === "1" ? 1 : 2,
      humanFirst: this.el<HTMLSelectElement>("first").value === "human",
      hintsEnabled: this.el<HTMLInputElement>("hints").checked,
    };
  }

  private renderSetupProblems(): string[] {
    const problems = validateConfig(this.readConfig());
    const list = this.el<HTMLUListElement>("setup-problems");
    list.innerHTML = "";
    for (const problem of problems) {
      const li = document.createElement("li");
      li.textContent = problem;
      list.appendChild(li);
    }
    this.el<HTMLButtonElement>("start").disabled =
      problems.length > 0 || this.state.busy;
    return problems;
  }

  // ----- actions --------------------------------------------------------

  async createGame(config: GameConfig): Promise<void> {
    if (this.state.busy) {
      return;
    }
    const problems = validateConfig(config);
    if (problems.length > 0) {
      this.renderSetupProblems();
      return;
    }
    await this.withBusy(async () => {
      const request: CreateRequest = {
        piles: config.piles,
        bound: config.bound,
        dynamic: config.dynamic,
        human_first: config.humanFirst,
        hints_enabled: config.hintsEnabled,
      };
      const session = await this.api.createSession(request);
      this.state = withSession(this.state, session);
    });
  }

  selectPile(index: number): void {
    this.state = selectPile(this.state, index);
    this.render();
  }

  setTake(take: number): void {
    this.state = setTake(this.state, take);
    this.render();
  }

  // Posts the pair verbatim; the server is the rules authority, so a
  // stale or tampered value comes back as illegal_move and is shown.
  async confirmMove(pileIndex: number, take: number): Promise<void> {
    const session = this.state.session;
    if (this.state.busy || session === null) {
      return;
    }
    await this.withBusy(async () => {
      const next = await this.api.move(session.id, pileIndex, take);
      this.state = withSession(this.state, next);
    });
  }

  async requestHint(): Promise<void> {
    const session = this.state.session;
    if (this.state.busy || session === null) {
      return;
    }
    await this.withBusy(async () => {
      const hint = await this.api.hint(session.id);
      this.state = withHint(this.state, hint);
    });
  }

  private async withBusy(action: () => Promise<void>): Promise<void> {
    this.state = { ...this.state, busy: true, error: null };
    this.render();
    try {
      await action();
    } catch (err) {
      this.state = { ...this.state, error: describeError(err) };
    } finally {
      this.state = { ...this.state, busy: false };
      this.render();
    }
  }

  // ----- board rendering -------------------------------------------------

  private bindBoardEvents(): void {
    this.el<HTMLDivElement>("piles-view").addEventListener("click", (ev) => {
      const target = ev.target as HTMLElement | null;
      const pileEl = target?.closest<HTMLElement>(".pile");
      if (pileEl?.dataset.index !== undefined && canInteract(this.state)) {
        this.selectPile(Number(pileEl.dataset.index));
      }
    });
    const slider = this.el<HTMLInputElement>("take-slider");
    slider.addEventListener("input", () => {
      this.setTake(Number(slider.value));
    });
    this.el<HTMLButtonElement>("confirm").addEventListener("click", () => {
      if (this.state.selectedPile !== null) {
        void this.confirmMove(this.state.selectedPile, this.state.pendingTake);
      }
    });
    this.el<HTMLButtonElement>("hint-btn").addEventListener("click", () => {
      void this.requestHint();
    });
  }

  private render(): void {
    const { state } = this;
    const errorBox = this.el<HTMLDivElement>("error-box");
    errorBox.hidden = state.error === null;
    errorBox.textContent = state.error ?? "";

    this.renderSetupProblems();

    const board = this.el<HTMLElement>("board");
    const session = state.session;
    board.hidden = session === null;
    if (session === null) {
      return;
    }

    const banner = this.el<HTMLDivElement>("banner");
    const text = bannerText(session);
    banner.hidden = text === null;
    banner.textContent = text ?? "";

    const interactive = canInteract(state);
    const statusLine = this.el<HTMLDivElement>("status-line");
    const boundLabel = `Take bound: ${formatBound(session.bound)}`;
    const rule =
      session.dynamic === 2
        ? "next bound = 2 × take"
        : "next bound = take";
    const turn =
      session.status === "in-progress"
        ? state.busy
          ? "waiting for the engine…"
          : "your turn"
        : "game over";
    statusLine.textContent = `${boundLabel} (${rule}) — ${turn}`;

    this.renderPilesView(session.piles, interactive);
    this.renderMoveControls(interactive);
    this.renderHintRow(session.hints_enabled, interactive);
    this.renderHistory();
  }

  private renderPilesView(piles: number[], interactive: boolean): void {
    const view = this.el<HTMLDivElement>("piles-view");
    view.innerHTML = "";
    const suggested = this.state.hint?.hint?.pile_index ?? null;
    piles.forEach((pile, index) => {
      const el = document.createElement("div");
      el.className = "pile";
      el.dataset.index = String(index);
      if (index === this.state.selectedPile) {
        el.classList.add("selected");
      }
      if (index === suggested) {
        el.classList.add("hint-suggested");
      }
      if (!interactive || pile === 0) {
        el.classList.add("disabled");
      }
      const stones = document.createElement("div");
      stones.className = "stones";
      for (let i = 0; i < Math.min(pile, MAX_STONES_DRAWN); i += 1) {
        const stone = document.createElement("span");
        stone.className = "stone";
        stone.textContent = "●";
        stones.appendChild(stone);
      }
      if (pile > MAX_STONES_DRAWN) {
        const more = document.createElement("span");
        more.className = "stone-more";
        more.textContent = `+${pile - MAX_STONES_DRAWN}`;
        stones.appendChild(more);
      }
      const count = document.createElement("div");
      count.className = "pile-count";
      count.textContent = String(pile);
      el.appendChild(stones);
      el.appendChild(count);
      view.appendChild(el);
    });
  }

  private renderMoveControls(interactive: boolean): void {
    const controls = this.el<HTMLDivElement>("move-controls");
    const { session, selectedPile, pendingTake } = this.state;
    const show =
      interactive && session !== null && selectedPile !== null;
    controls.hidden = !show;
    if (!show || session === null || selectedPile === null) {
      return;
    }
    const pile = session.piles[selectedPile] ?? 0;
    const limit = maxTake(session.bound, pile);
    const slider = this.el<HTMLInputElement>("take-slider");
    slider.max = String(limit);
    slider.value = String(pendingTake);
    slider.disabled = !interactive;
    this.el<HTMLSpanElement>("take-value").textContent =
      `${pendingTake} of ${limit}`;
    this.el<HTMLButtonElement>("confirm").disabled = !interactive;
  }

  private renderHintRow(enabled: boolean, interactive: boolean): void {
    const row = this.el<HTMLDivElement>("hint-row");
    row.hidden = !enabled;
    if (!enabled) {
      return;
    }
    this.el<HTMLButtonElement>("hint-btn").disabled = !interactive;
    const textEl = this.el<HTMLSpanElement>("hint-text");
    const hint = this.state.hint;
    if (hint === null) {
      textEl.textContent = "";
    } else if (hint.hint === null) {
      textEl.textContent =
        "No winning take from here — with perfect play this position is lost.";
    } else {
      textEl.textContent =
        `Hint: take ${hint.hint.take} from pile ${hint.hint.pile_index + 1}.`;
    }
  }

  private renderHistory(): void {
    const list = this.el<HTMLOListElement>("history");
    list.innerHTML = "";
    for (const entry of this.state.session?.history ?? []) {
      const li = document.createElement("li");
      li.textContent = describeEntry(entry);
      list.appendChild(li);
    }
  }
}
