import { FINGERS, JointAngles, StateMessage } from "../src/protocol.js";

/** A plausible service snapshot; override fields per test. */
export function makeState(overrides: Partial<StateMessage> = {}): StateMessage {
  const joints: Record<string, JointAngles> = {};
  const tendons: Record<string, Record<string, number>> = {};
  const fk: Record<string, number[][]> = {};
  for (const finger of FINGERS) {
    joints[finger] = { theta1_deg: -45, theta2_deg: 0 };
    tendons[finger] = { joint1: 0, joint2: 0, joint3: 0 };
    fk[finger] = [
      [0, 0, 0],
      [0.01, 0.02, 0],
      [0.02, 0.04, 0],
      [0.03, 0.06, 0],
      [0.04, 0.08, 0],
    ];
  }
  return {
    v: 1,
    type: "state",
    seq: 1,
    t: 1000.0,
    source: "idle",
    thumb_mode: "M",
    joints,
    plate_deg: 0,
    tendons,
    plate_tendons: { left: 0, right: 0 },
    motors: new Array(11).fill(0),
    fk,
    limits: {
      theta1_deg: [-45, 90],
      theta2_deg: [0, 90],
      plate_deg: [-65, 65],
    },
    playback: { active: false, name: null },
    ...overrides,
  };
}
