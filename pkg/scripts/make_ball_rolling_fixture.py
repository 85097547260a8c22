"""Generate the ball-rolling trajectory fixture.

A traveling-wave curl across the four fingers with the thumb opposing in
the middle plate position: each finger flexes slightly after its neighbor,
which rolls an object resting on the fingertips. 100 samples at 50 Hz,
everything comfortably inside the joint limits.
"""

import argparse
import math
from pathlib import Path

from rotograb import DEG, Trajectory, JointState, default_geometry, save_trajectory
from rotograb.policy import validate_trajectory_fixture

RATE_HZ = 50.0
SAMPLES = 100
WAVE_HZ = 1.0


def build() -> Trajectory:
    samples = []
    for i in range(SAMPLES):
        t = i / RATE_HZ
        phase = 2.0 * math.pi * WAVE_HZ * t
        theta1 = [20.0 + 10.0 * math.sin(phase + math.pi)]
        theta2 = [40.0 + 25.0 * math.sin(phase + math.pi)]
        for k in range(4):  # index..pinkie, each lagging the previous
            lag = phase - k * math.pi / 3.0
            theta1.append(25.0 + 15.0 * math.sin(lag))
            theta2.append(45.0 + 35.0 * math.sin(lag))
        state = JointState(
            theta1=tuple(v * DEG for v in theta1),
            theta2=tuple(v * DEG for v in theta2),
            plate_theta=0.0,
        )
        samples.append((t, state))
    return Trajectory(
        samples=tuple(samples),
        name="ball_rolling",
        source="scripted rolling gait",
        nominal_rate=RATE_HZ,
        extra_metadata={"note": "traveling-wave finger curl, thumb opposing"},
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "fixtures" / "ball_rolling.csv"),
    )
    args = parser.parse_args()
    traj = build()
    report = validate_trajectory_fixture(traj, default_geometry())
    if not report.ok:
        raise SystemExit(f"generated fixture fails validation: {report.failures[:3]}")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_trajectory(traj, out)
    print(f"wrote {report.sample_count} samples to {out}")


if __name__ == "__main__":
    main()
