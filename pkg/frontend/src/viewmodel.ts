/** UI state between the socket and the DOM.
 *
 * Holds the latest snapshot and nothing else: every rendered pose comes
 * straight from the service, and slider ranges are copied from the
 * limits the service reports, never hard-coded. Stale snapshots (seq
 * not increasing) are dropped so reconnect races cannot roll the view
 * backwards.
 */

import { FINGERS, Finger, StateMessage, ThumbModeLabel } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface SliderSpec {
  id: string;
  label: string;
  kind: "theta1" | "theta2" | "plate";
  finger: Finger | null;
  min: number;
  max: number;
  value: number;
}

export interface TendonReadout {
  label: string;
  millimeters: number;
}

export class CockpitViewModel {
  snapshot: StateMessage | null = null;
  status: ConnectionStatus = "connecting";
  private lastSeq = -1;

  /** Accept a snapshot unless it is older than what we already show. */
  applySnapshot(msg: StateMessage): boolean {
    if (msg.seq <= this.lastSeq) return false;
    this.lastSeq = msg.seq;
    this.snapshot = msg;
    return true;
  }

  /** Forget the seq watermark; a restarted service starts counting over. */
  resetForReconnect(): void {
    this.lastSeq = -1;
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
  }

  controlsEnabled(): boolean {
    return this.status === "open" && this.snapshot !== null;
  }

  /** One spec per commandable axis: 2 per finger plus the plate, ranges
   * mirroring the limits block of the latest snapshot. Empty until the
   * first snapshot arrives. */
  sliderSpecs(): SliderSpec[] {
    const snap = this.snapshot;
    if (snap === null) return [];
    const specs: SliderSpec[] = [];
    const j1 = snap.limits["theta1_deg"];
    const j2 = snap.limits["theta2_deg"];
    const plate = snap.limits["plate_deg"];
    if (!j1 || !j2 || !plate) return [];
    for (const finger of FINGERS) {
      const angles = snap.joints[finger];
      if (!angles) continue;
      specs.push({
        id: `${finger}-theta1`,
        label: `${finger} j1`,
        kind: "theta1",
        finger,
        min: j1[0],
        max: j1[1],
        value: angles.theta1_deg,
      });
      specs.push({
        id: `${finger}-theta2`,
        label: `${finger} j2+j3`,
        kind: "theta2",
        finger,
        min: j2[0],
        max: j2[1],
        value: angles.theta2_deg,
      });
    }
    specs.push({
      id: "plate",
      label: "thumb plate",
      kind: "plate",
      finger: null,
      min: plate[0],
      max: plate[1],
      value: snap.plate_deg,
    });
    return specs;
  }

  thumbMode(): ThumbModeLabel | null {
    return this.snapshot === null ? null : this.snapshot.thumb_mode;
  }

  /** Flexor/extensor excursions in millimeters, one row per finger plus
   * the two plate wires. */
  tendonReadouts(): TendonReadout[] {
    const snap = this.snapshot;
    if (snap === null) return [];
    const rows: TendonReadout[] = [];
    for (const finger of FINGERS) {
      const deltas = snap.tendons[finger];
      if (!deltas) continue;
      for (const joint of ["joint1", "joint2", "joint3"]) {
        const meters = deltas[joint];
        if (meters === undefined) continue;
        rows.push({ label: `${finger} ${joint}`, millimeters: meters * 1000 });
      }
    }
    rows.push({ label: "plate left", millimeters: snap.plate_tendons.left * 1000 });
    rows.push({ label: "plate right", millimeters: snap.plate_tendons.right * 1000 });
    return rows;
  }

  statusBanner(): string {
    switch (this.status) {
      case "open":
        return this.snapshot === null ? "connected, waiting for state" : "live";
      case "connecting":
        return "connecting…";
      case "closed":
        return "disconnected, retrying…";
    }
  }
}
