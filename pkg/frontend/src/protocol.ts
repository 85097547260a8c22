/** Wire schema for the control service: line-delimited JSON, version 1.
 *
 * Angles cross the wire in degrees, tendon lengths in meters. The server
 * pushes `state` snapshots and replies `err` to bad input; the client
 * sends `state` requests, `cmd` joint targets, `mode` switches, and
 * `play` transport controls.
 */

export const PROTOCOL_VERSION = 1;

export const FINGERS = ["thumb", "index", "middle", "ring", "pinkie"] as const;
export type Finger = (typeof FINGERS)[number];

export type ThumbModeLabel = "L" | "M" | "R";
export type SourceLabel = "idle" | "manual" | "teleop" | "playback";

export interface JointAngles {
  theta1_deg: number;
  theta2_deg: number;
}

export interface StateMessage {
  v: 1;
  type: "state";
  seq: number;
  t: number;
  source: SourceLabel;
  thumb_mode: ThumbModeLabel;
  joints: Record<string, JointAngles>;
  plate_deg: number;
  tendons: Record<string, Record<string, number>>;
  plate_tendons: { left: number; right: number };
  motors: number[];
  fk: Record<string, number[][]>;
  limits: Record<string, [number, number]>;
  playback: { active: boolean; name: string | null };
}

export interface ErrMessage {
  v: 1;
  type: "err";
  error: string;
  detail: string;
}

export type ServerMessage = StateMessage | ErrMessage;

function isRecord(x: unknown): x is Record<string, unknown> {
  return typeof x === "object" && x !== null && !Array.isArray(x);
}

function isFinite2(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function isLimitPair(x: unknown): x is [number, number] {
  return Array.isArray(x) && x.length === 2 && isFinite2(x[0]) && isFinite2(x[1]);
}

function isJointAngles(x: unknown): x is JointAngles {
  return isRecord(x) && isFinite2(x["theta1_deg"]) && isFinite2(x["theta2_deg"]);
}

/** Parse one server line. Returns null for anything that is not a
 * well-formed v1 message; the caller drops it and keeps the socket. */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (!isRecord(raw) || raw["v"] !== PROTOCOL_VERSION) return null;

  if (raw["type"] === "err") {
    if (typeof raw["error"] !== "string") return null;
    return {
      v: 1,
      type: "err",
      error: raw["error"],
      detail: typeof raw["detail"] === "string" ? raw["detail"] : "",
    };
  }

  if (raw["type"] !== "state") return null;
  const joints = raw["joints"];
  const limits = raw["limits"];
  const fk = raw["fk"];
  const playback = raw["playback"];
  if (!isFinite2(raw["seq"]) || !isFinite2(raw["plate_deg"])) return null;
  if (!isRecord(joints) || !isRecord(limits) || !isRecord(fk)) return null;
  if (!Array.isArray(raw["motors"])) return null;
  for (const finger of FINGERS) {
    if (!isJointAngles(joints[finger])) return null;
    if (!Array.isArray(fk[finger])) return null;
  }
  for (const key of ["theta1_deg", "theta2_deg", "plate_deg"]) {
    if (!isLimitPair(limits[key])) return null;
  }
  if (!isRecord(playback) || typeof playback["active"] !== "boolean") return null;

  return raw as unknown as StateMessage;
}

// -- client -> server builders ----------------------------------------------

export interface JointTarget {
  theta1_deg?: number;
  theta2_deg?: number;
}

export function stateRequest(): object {
  return { v: PROTOCOL_VERSION, type: "state" };
}

export function jointCommand(finger: Finger, target: JointTarget): object {
  const msg: Record<string, unknown> = { v: PROTOCOL_VERSION, type: "cmd", finger };
  if (target.theta1_deg !== undefined) msg["theta1_deg"] = target.theta1_deg;
  if (target.theta2_deg !== undefined) msg["theta2_deg"] = target.theta2_deg;
  return msg;
}

export function plateCommand(plateDeg: number): object {
  return { v: PROTOCOL_VERSION, type: "cmd", plate_deg: plateDeg };
}

export function thumbModeCommand(mode: ThumbModeLabel): object {
  return { v: PROTOCOL_VERSION, type: "mode", thumb: mode };
}

export function sourceCommand(source: SourceLabel): object {
  return { v: PROTOCOL_VERSION, type: "mode", source };
}

export function playStart(csv: string, realtime = true): object {
  return { v: PROTOCOL_VERSION, type: "play", action: "start", csv, realtime };
}

export function playStop(): object {
  return { v: PROTOCOL_VERSION, type: "play", action: "stop" };
}

export function encode(msg: object): string {
  return JSON.stringify(msg);
}
