"""Synthetic teleoperation demo: drive the hand from generated landmarks.

Builds a stream of synthetic hand-landmark frames (fingers curling in a
sine pattern while the thumb sweeps from the index side to the pinkie
side), retargets them, and prints the resulting joint targets and thumb
mode. With --url it streams the frames to a running control service as a
landmarks producer instead, e.g.:

    python scripts/teleop_sim.py --url ws://127.0.0.1:8765 --seconds 5
"""

import argparse
import asyncio
import json
import math
import time

import numpy as np

from rotograb import DEG, LandmarkFrame, Retargeter, default_geometry, default_profile
from rotograb.teleop import DIGIT_BASE, frame_to_json


def synth_frame(t: float, curl: float, thumb_sweep: float) -> LandmarkFrame:
    """One synthetic frame.

    curl in [0, 1] bends the fingers; thumb_sweep in [-1, 1] moves the
    thumb tip from the index side (-1) to the pinkie side (+1).
    """
    pts = np.zeros((21, 3))
    pts[0] = (0.5, 0.8, 0.0)
    xs = {"thumb": 0.30, "index": 0.38, "middle": 0.46, "ring": 0.54, "pinkie": 0.62}
    seg = 0.06
    for finger, base in DIGIT_BASE.items():
        x = xs[finger]
        bend = curl * (math.pi / 2) / 3.0  # spread the curl over 3 joints
        angle = math.pi / 2  # pointing up in image coords (y decreases)
        px, py = x, 0.5
        pts[base] = (px, py, 0.0)
        for k in range(1, 4):
            angle -= bend
            px += seg * math.cos(angle) * (1 if finger != "thumb" else 0.8)
            py -= seg * math.sin(angle)
            pts[base + k] = (px, py, 0.0)
    # overwrite the thumb tip with the sweep position
    pts[4] = (0.46 + 0.25 * thumb_sweep, 0.62, 0.0)
    return LandmarkFrame(timestamp=t, points=pts, confidence=1.0)


def frames(seconds: float, rate: float):
    n = int(seconds * rate)
    for i in range(n):
        t = i / rate
        curl = 0.5 + 0.5 * math.sin(2 * math.pi * 0.5 * t)
        sweep = math.sin(2 * math.pi * 0.2 * t)
        yield synth_frame(t, curl, sweep)


def run_local(seconds: float, rate: float) -> None:
    geometry = default_geometry()
    retargeter = Retargeter(geometry=geometry, profile=default_profile(geometry))
    for frame in frames(seconds, rate):
        result = retargeter.ingest(frame)
        state = result.state
        print(
            f"t={frame.timestamp:5.2f} mode={result.mode.value} "
            f"plate={state.plate_theta / DEG:6.1f} deg "
            f"index=({state.theta1[1] / DEG:5.1f}, {state.theta2[1] / DEG:5.1f}) deg"
        )


async def run_remote(url: str, seconds: float, rate: float) -> None:
    from websockets.asyncio.client import connect

    async with connect(url) as ws:
        await ws.recv()  # initial snapshot
        period = 1.0 / rate
        start = time.monotonic()
        for i, frame in enumerate(frames(seconds, rate)):
            payload = json.loads(frame_to_json(frame))
            payload.update({"v": 1, "type": "landmarks"})
            await ws.send(json.dumps(payload))
            # drain any state broadcasts without blocking the schedule
            while True:
                try:
                    msg = json.loads(await asyncio.wait_for(ws.recv(), timeout=0.001))
                except asyncio.TimeoutError:
                    break
                if msg.get("type") == "err":
                    raise SystemExit(f"service error: {msg}")
            await asyncio.sleep(max(0.0, start + (i + 1) * period - time.monotonic()))
    print(f"streamed {int(seconds * rate)} frames to {url}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seconds", type=float, default=3.0)
    parser.add_argument("--rate", type=float, default=30.0)
    parser.add_argument("--url", default=None, help="stream to a service instead")
    args = parser.parse_args()
    if args.url:
        asyncio.run(run_remote(args.url, args.seconds, args.rate))
    else:
        run_local(args.seconds, args.rate)


if __name__ == "__main__":
    main()
