/** Cockpit entry point: one WebSocket, one canvas, direct DOM.
 *
 * Inbound snapshots land in the view model and are coalesced to
 * animation frames; outbound messages are built in protocol.ts. On drop
 * the socket reconnects with exponential backoff and re-learns limits
 * from the next snapshot.
 */

import { ReconnectBackoff } from "./backoff.js";
import {
  Finger,
  encode,
  jointCommand,
  parseServerMessage,
  plateCommand,
  playStart,
  playStop,
  sourceCommand,
  stateRequest,
  thumbModeCommand,
} from "./protocol.js";
import { drawHand } from "./render.js";
import { CockpitViewModel, SliderSpec } from "./viewmodel.js";

const CANVAS_W = 560;
const CANVAS_H = 420;

function serviceUrl(): string {
  const params = new URLSearchParams(window.location.search);
  const override = params.get("ws");
  if (override) return override;
  const host = window.location.hostname || "127.0.0.1";
  return `ws://${host}:8765`;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

class Cockpit {
  private vm = new CockpitViewModel();
  private backoff = new ReconnectBackoff();
  private socket: WebSocket | null = null;
  private frameQueued = false;
  private draggingSlider: string | null = null;

  private banner = el("div", "banner", "connecting…");
  private errorLine = el("div", "error-line", "");
  private canvas = el("canvas");
  private sliderBox = el("div", "sliders");
  private sliderInputs = new Map<string, HTMLInputElement>();
  private sliderValueLabels = new Map<string, HTMLSpanElement>();
  private modeButtons = new Map<string, HTMLButtonElement>();
  private sourceButtons: HTMLButtonElement[] = [];
  private playButton = el("button", "", "play");
  private stopButton = el("button", "", "stop");
  private playbackStatus = el("span", "playback-status", "idle");
  private csvInput = el("textarea") as HTMLTextAreaElement;
  private tendonTable = el("table", "tendons");

  mount(root: HTMLElement): void {
    this.canvas.width = CANVAS_W;
    this.canvas.height = CANVAS_H;

    const left = el("div", "pane");
    left.append(this.banner, this.canvas, this.errorLine);

    const modeRow = el("div", "row");
    modeRow.append(el("span", "label", "thumb mode"));
    for (const mode of ["L", "M", "R"] as const) {
      const button = el("button", "", mode);
      button.addEventListener("click", () => this.send(thumbModeCommand(mode)));
      this.modeButtons.set(mode, button);
      modeRow.append(button);
    }

    const sourceRow = el("div", "row");
    sourceRow.append(el("span", "label", "source"));
    for (const source of ["idle", "teleop"] as const) {
      const button = el("button", "", source);
      button.addEventListener("click", () => this.send(sourceCommand(source)));
      this.sourceButtons.push(button);
      sourceRow.append(button);
    }

    const playRow = el("div", "row");
    this.csvInput.rows = 3;
    this.csvInput.placeholder = "paste a trajectory CSV here";
    this.playButton.addEventListener("click", () => {
      const csv = this.csvInput.value.trim();
      if (csv) this.send(playStart(csv + "\n"));
    });
    this.stopButton.addEventListener("click", () => this.send(playStop()));
    playRow.append(this.playButton, this.stopButton, this.playbackStatus);

    const right = el("div", "pane");
    right.append(modeRow, sourceRow, this.sliderBox, playRow, this.csvInput, this.tendonTable);

    const layout = el("div", "layout");
    layout.append(left, right);
    root.append(layout);

    this.connect();
  }

  private connect(): void {
    this.vm.setStatus("connecting");
    this.refreshChrome();
    const socket = new WebSocket(serviceUrl());
    this.socket = socket;

    socket.addEventListener("open", () => {
      this.backoff.reset();
      this.vm.resetForReconnect();
      this.vm.setStatus("open");
      socket.send(encode(stateRequest()));
      this.refreshChrome();
    });

    socket.addEventListener("message", (event) => {
      const msg = parseServerMessage(String(event.data));
      if (msg === null) return;
      if (msg.type === "err") {
        this.errorLine.textContent = `${msg.error}: ${msg.detail}`;
        return;
      }
      if (this.vm.applySnapshot(msg)) this.queueFrame();
    });

    socket.addEventListener("close", () => {
      if (this.socket !== socket) return;
      this.socket = null;
      this.vm.setStatus("closed");
      this.refreshChrome();
      window.setTimeout(() => this.connect(), this.backoff.nextDelayMs());
    });

    socket.addEventListener("error", () => socket.close());
  }

  private send(msg: object): void {
    if (this.socket !== null && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(encode(msg));
    }
  }

  private queueFrame(): void {
    if (this.frameQueued) return;
    this.frameQueued = true;
    window.requestAnimationFrame(() => {
      this.frameQueued = false;
      this.renderSnapshot();
    });
  }

  private ensureSliders(specs: SliderSpec[]): void {
    if (this.sliderInputs.size === specs.length) return;
    this.sliderBox.textContent = "";
    this.sliderInputs.clear();
    this.sliderValueLabels.clear();
    for (const spec of specs) {
      const row = el("div", "slider-row");
      const input = el("input") as HTMLInputElement;
      input.type = "range";
      input.step = "0.5";
      const value = el("span", "value");
      input.addEventListener("pointerdown", () => (this.draggingSlider = spec.id));
      input.addEventListener("pointerup", () => (this.draggingSlider = null));
      input.addEventListener("input", () => {
        value.textContent = `${input.value}°`;
        this.sendSliderTarget(spec, Number(input.value));
      });
      this.sliderInputs.set(spec.id, input);
      this.sliderValueLabels.set(spec.id, value);
      row.append(el("span", "label", spec.label), input, value);
      this.sliderBox.append(row);
    }
  }

  private sendSliderTarget(spec: SliderSpec, valueDeg: number): void {
    if (spec.kind === "plate") {
      this.send(plateCommand(valueDeg));
    } else if (spec.finger !== null) {
      const finger = spec.finger as Finger;
      this.send(
        spec.kind === "theta1"
          ? jointCommand(finger, { theta1_deg: valueDeg })
          : jointCommand(finger, { theta2_deg: valueDeg }),
      );
    }
  }

  private renderSnapshot(): void {
    const snap = this.vm.snapshot;
    if (snap === null) return;

    const specs = this.vm.sliderSpecs();
    this.ensureSliders(specs);
    for (const spec of specs) {
      const input = this.sliderInputs.get(spec.id);
      const label = this.sliderValueLabels.get(spec.id);
      if (!input || !label) continue;
      input.min = String(spec.min);
      input.max = String(spec.max);
      if (this.draggingSlider !== spec.id) {
        input.value = String(spec.value);
        label.textContent = `${spec.value.toFixed(1)}°`;
      }
    }

    for (const [mode, button] of this.modeButtons) {
      button.classList.toggle("active", snap.thumb_mode === mode);
    }
    this.playbackStatus.textContent = snap.playback.active
      ? `playing ${snap.playback.name ?? ""}`
      : `source: ${snap.source}`;

    this.tendonTable.textContent = "";
    for (const row of this.vm.tendonReadouts()) {
      const tr = el("tr");
      const sign = row.millimeters >= 0 ? "+" : "";
      tr.append(
        el("td", "", row.label),
        el("td", "num", `${sign}${row.millimeters.toFixed(2)} mm`),
      );
      this.tendonTable.append(tr);
    }

    const ctx = this.canvas.getContext("2d");
    if (ctx) drawHand(ctx, snap.fk, CANVAS_W, CANVAS_H);
    this.refreshChrome();
  }

  private refreshChrome(): void {
    this.banner.textContent = this.vm.statusBanner();
    this.banner.className = `banner ${this.vm.status}`;
    const enabled = this.vm.controlsEnabled();
    for (const input of this.sliderInputs.values()) input.disabled = !enabled;
    for (const button of this.modeButtons.values()) button.disabled = !enabled;
    for (const button of this.sourceButtons) button.disabled = !enabled;
    this.playButton.disabled = !enabled;
    this.stopButton.disabled = !enabled;
  }
}

const root = document.getElementById("app");
if (root) new Cockpit().mount(root);
