import { Api, ApiError } from "./api";
import { drawExtract } from "./mapCanvas";
import type { NpcView, SessionView } from "./types";

type Screen = "map" | "location" | "dialog" | "accuse";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function mapCanvas(className: string, width: number, height: number): HTMLCanvasElement {
  const canvas = el("canvas", className);
  canvas.width = width;
  canvas.height = height;
  return canvas;
}

function portraitTooltip(npc: NpcView): string {
  if (!npc.portrait) return npc.entity;
  const pct = Math.round(npc.portrait.confidence * 100);
  return `${npc.entity}\n${npc.portrait.caption} — image confidence ${pct}%`;
}

/**
 * One play session, one tab. Every screen renders the latest service view
 * verbatim; all legality decisions (travel, collect, accusation verdicts)
 * come back from the API, never from local logic.
 */
export class PlayApp {
  private view: SessionView | null = null;
  private screen: Screen = "map";
  private dialogNpc: string | null = null;
  private transcript: string[] = [];
  private lastObservation = "";
  private rejectionNotice = "";
  private busy = false;

  constructor(
    private root: HTMLElement,
    private api: Api,
    private sessionId: string,
  ) {}

  async start(): Promise<void> {
    const response = await this.api.getSession(this.sessionId);
    this.view = response.view;
    this.render();
  }

  /** Send one action; on success adopt the returned view, on error banner it. */
  private async act(kind: string, target: string, payload?: string[]): Promise<void> {
    if (this.busy || !this.view) return;
    this.busy = true;
    this.render();
    try {
      const response = await this.api.act(this.sessionId, kind, target, payload);
      this.view = response.view;
      this.lastObservation = response.observation;
      this.rejectionNotice = response.verdict === "rejected" ? response.observation : "";
      if (kind === "talk" && target === this.dialogNpc) {
        this.transcript.push(response.observation);
      }
      this.clearBanner();
    } catch (error) {
      if (error instanceof ApiError) {
        this.showBanner(`${error.body.code}: ${error.body.message}`);
      } else {
        this.showBanner(String(error));
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  private goto(screen: Screen): void {
    this.screen = screen;
    if (screen !== "dialog") {
      this.dialogNpc = null;
      this.transcript = [];
    }
    this.render();
  }

  private openDialog(npc: string): void {
    this.dialogNpc = npc;
    this.transcript = [];
    this.screen = "dialog";
    this.render();
  }

  // ---- Banner (non-blocking API error surface) ----

  private showBanner(message: string): void {
    const banner = this.root.querySelector(".banner");
    if (banner) {
      banner.textContent = message;
      banner.classList.add("visible");
    }
  }

  private clearBanner(): void {
    const banner = this.root.querySelector(".banner");
    if (banner) {
      banner.textContent = "";
      banner.classList.remove("visible");
    }
  }

  // ---- Rendering ----

  private render(): void {
    if (!this.view) return;
    const view = this.view;
    const previousBanner = this.root.querySelector(".banner")?.textContent ?? "";

    this.root.replaceChildren();
    this.root.append(this.renderHeader(view));

    const banner = el("div", "banner");
    if (previousBanner) {
      banner.textContent = previousBanner;
      banner.classList.add("visible");
    }
    this.root.append(banner);

    const main = el("main", "screen-host");
    if (view.status !== "in-progress") {
      main.append(this.renderVerdictScreen(view));
    } else {
      switch (this.screen) {
        case "map":
          main.append(this.renderMapScreen(view));
          break;
        case "location":
          main.append(this.renderLocationScreen(view));
          break;
        case "dialog":
          main.append(this.renderDialogScreen(view));
          break;
        case "accuse":
          main.append(this.renderAccuseScreen(view));
          break;
      }
    }
    this.root.append(main, this.renderTray(view));

    if (this.lastObservation) {
      this.root.append(el("footer", "observation", this.lastObservation));
    }
  }

  private renderHeader(view: SessionView): HTMLElement {
    const header = el("header", "case-header");
    const title = el("h1", "", `The case of ${view.victim.label}`);
    title.title = view.victim.entity;
    header.append(title);
    header.append(el("span", "mode-tag", view.mode));
    header.append(el("span", `status-tag status-${view.status}`, view.status));

    const nav = el("nav", "screen-nav");
    for (const screen of ["map", "location", "accuse"] as Screen[]) {
      const button = el("button", this.screen === screen ? "active" : "", screen);
      button.dataset.nav = screen;
      button.disabled = this.busy;
      button.addEventListener("click", () => this.goto(screen));
      nav.append(button);
    }
    header.append(nav);
    return header;
  }

  private renderMapScreen(view: SessionView): HTMLElement {
    const screen = el("section", "screen screen-map");
    screen.append(el("h2", "", "Travel"));
    const board = el("div", "location-board");
    for (const location of view.locations) {
      const classes = [
        "location-card",
        location.unlocked ? "unlocked" : "locked",
        location.current ? "current" : "",
        location.visited ? "visited" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const card = el("div", classes);
      card.dataset.entity = location.entity;
      card.title = location.entity;

      const thumb = mapCanvas("map-thumb", 160, 120);
      drawExtract(thumb, location.map);
      card.append(thumb, el("div", "location-name", location.label));

      if (!location.unlocked) {
        card.append(el("div", "location-lock", "locked"));
      } else if (location.current) {
        card.append(el("div", "location-here", "you are here"));
      } else {
        const go = el("button", "travel-button", "travel");
        go.dataset.travel = location.entity;
        go.disabled = this.busy;
        go.addEventListener("click", () => void this.act("travel", location.entity));
        card.append(go);
      }
      board.append(card);
    }
    screen.append(board);
    return screen;
  }

  private renderLocationScreen(view: SessionView): HTMLElement {
    const screen = el("section", "screen screen-location");
    const here = view.location;
    const heading = el("h2", "", here.label);
    heading.title = here.entity;
    screen.append(heading);

    const current = view.locations.find((candidate) => candidate.current);
    const canvas = mapCanvas("location-map", 480, 300);
    drawExtract(canvas, current?.map ?? null);
    screen.append(canvas);

    const npcs = el("div", "npc-row");
    for (const npc of here.npcs) {
      npcs.append(this.renderNpcCard(npc, true));
    }
    screen.append(npcs);

    const pile = el("div", "collectible-row");
    for (const collectible of here.collectibles) {
      const card = el("div", `collectible collectible-${collectible.kind}`);
      card.title = collectible.id;
      card.append(el("span", "", `${collectible.label} (${collectible.kind})`));
      const take = el("button", "collect-button", "collect");
      take.dataset.collect = collectible.id;
      take.disabled = this.busy;
      take.addEventListener("click", () => void this.act("collect", collectible.id));
      card.append(take);
      pile.append(card);
    }
    screen.append(pile);
    return screen;
  }

  private renderNpcCard(npc: NpcView, clickable: boolean): HTMLElement {
    const card = el("div", "npc-card");
    card.dataset.entity = npc.entity;
    card.title = portraitTooltip(npc);

    if (npc.portrait) {
      const figure = el("div", "portrait");
      const image = el("img");
      image.src = npc.portrait.url;
      image.alt = npc.portrait.caption;
      figure.append(image);
      if (npc.portrait.flagged) {
        const badge = el(
          "span",
          "badge flagged",
          "⚠ image may not match this person",
        );
        badge.title = `caption "${npc.portrait.caption}" poorly matches "${npc.label}"`;
        figure.append(badge);
      }
      card.append(figure);
    }

    card.append(el("div", "npc-name", npc.label));
    if (clickable) {
      const talk = el("button", "talk-button", "talk");
      talk.dataset.talk = npc.entity;
      talk.disabled = this.busy;
      talk.addEventListener("click", () => this.openDialog(npc.entity));
      card.append(talk);
    }
    return card;
  }

  private renderDialogScreen(view: SessionView): HTMLElement {
    const screen = el("section", "screen screen-dialog");
    const npc = view.location.npcs.find((candidate) => candidate.entity === this.dialogNpc);
    if (!npc) {
      screen.append(el("p", "", "Nobody to talk to."));
      return screen;
    }
    screen.append(el("h2", "", npc.label));
    screen.append(this.renderNpcCard(npc, false));

    const transcript = el("div", "transcript");
    for (const line of this.transcript) {
      transcript.append(el("p", "dialog-line", line));
    }
    screen.append(transcript);

    const ask = el("button", "ask-button", "Ask about the case");
    ask.dataset.ask = npc.entity;
    ask.disabled = this.busy;
    ask.addEventListener("click", () => void this.act("talk", npc.entity));
    screen.append(ask);

    const back = el("button", "back-button", "back");
    back.dataset.back = "location";
    back.addEventListener("click", () => this.goto("location"));
    screen.append(back);
    return screen;
  }

  private renderAccuseScreen(view: SessionView): HTMLElement {
    const screen = el("section", "screen screen-accuse");
    screen.append(el("h2", "", "Make an accusation"));

    if (this.rejectionNotice) {
      screen.append(el("div", "verdict-notice", this.rejectionNotice));
    }

    const grid = el("div", "suspect-grid");
    for (const suspect of view.suspects) {
      const label = el("label", "suspect-card");
      label.title = suspect.entity;
      const radio = el("input");
      radio.type = "radio";
      radio.name = "suspect";
      radio.value = suspect.entity;
      radio.dataset.suspect = suspect.entity;
      label.append(radio, el("span", "", suspect.label));
      grid.append(label);
    }
    screen.append(grid);

    const trayText = new Map(view.tray.map((item) => [item.id, item.text]));
    const evidenceBox = el("div", "evidence-picker");
    evidenceBox.append(el("h3", "", "Present evidence"));
    for (const id of view.evidence.collected) {
      const label = el("label", "evidence-option");
      label.title = id;
      const checkbox = el("input");
      checkbox.type = "checkbox";
      checkbox.value = id;
      checkbox.dataset.evidence = id;
      label.append(checkbox, el("span", "", trayText.get(id) ?? id));
      evidenceBox.append(label);
    }
    screen.append(evidenceBox);

    const submit = el("button", "accuse-button", "Accuse");
    submit.dataset.accuse = "";
    submit.disabled = this.busy;
    submit.addEventListener("click", () => {
      const chosen = screen.querySelector<HTMLInputElement>("input[name=suspect]:checked");
      if (!chosen) return;
      const presented = [
        ...screen.querySelectorAll<HTMLInputElement>("input[data-evidence]:checked"),
      ].map((input) => input.value);
      void this.act("accuse", chosen.value, presented);
    });
    screen.append(submit);
    return screen;
  }

  private renderVerdictScreen(view: SessionView): HTMLElement {
    const won = view.status === "won";
    const screen = el("section", `screen ${won ? "screen-victory" : "screen-loss"}`);
    screen.append(el("h2", "", won ? "Case closed" : "Case lost"));
    if (this.lastObservation) {
      screen.append(el("p", "verdict-text", this.lastObservation));
    }
    return screen;
  }

  private renderTray(view: SessionView): HTMLElement {
    const tray = el("aside", "tray");
    tray.append(
      el(
        "h3",
        "tray-count",
        `Clues (${view.tray.length}) — evidence ${view.evidence.collected.length}/${view.evidence.required.length}`,
      ),
    );
    for (const item of view.tray) {
      const entry = el("div", "tray-item", item.text || item.id);
      entry.title = item.id;
      tray.append(entry);
    }
    return tray;
  }
}
