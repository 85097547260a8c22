"""Reward shaping for in-hand ball rotation, plus trajectory fixture checks.

The reward targets the hand spinning an object about the world x axis
inside a velocity band: full reward anywhere in the band, linear falloff
to zero outside it. Flipping direction_sign reverses the rewarded spin
direction without touching the band.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actuation import joint_to_motor
from .errors import ConfigError
from .geometry import HandGeometry
from .trajectory import TRAJECTORY_HEADER, Trajectory

JOINT_COLUMNS = tuple(TRAJECTORY_HEADER.split(",")[1:])


@dataclass(frozen=True)
class RewardSpec:
    """band: closed [lo, hi] interval of rewarded signed angular velocity
    (rad/s); falloff_width: distance outside the band over which the reward
    decays linearly from 1 to 0; direction_sign: +1 or -1."""

    band: tuple[float, float] = (1.0, 3.0)
    falloff_width: float = 1.0
    direction_sign: int = 1

    def __post_init__(self) -> None:
        lo, hi = self.band
        if not (lo < hi):
            raise ConfigError("reward band must have lo < hi")
        if not (self.falloff_width > 0.0):
            raise ConfigError("falloff width must be positive")
        if self.direction_sign not in (-1, 1):
            raise ConfigError("direction sign must be +1 or -1")


def rotation_reward(omega_x: float, spec: RewardSpec = RewardSpec()) -> float:
    """Reward in [0, 1] for angular velocity omega_x about the x axis.

    With s = direction_sign: 1 when s*omega_x lies in the closed band,
    otherwise max(0, 1 - distance_to_band / falloff_width). Continuous and
    piecewise linear in omega_x.
    """
    lo, hi = spec.band
    v = spec.direction_sign * omega_x
    if v < lo:
        distance = lo - v
    elif v > hi:
        distance = v - hi
    else:
        return 1.0
    return max(0.0, 1.0 - distance / spec.falloff_width)


@dataclass(frozen=True)
class FixtureReport:
    """Validation outcome for a trajectory fixture.

    failures lists (sample_index, message); joint_ranges maps each joint
    column name to its (min, max) over the trajectory, radians. An empty
    trajectory passes with zero samples and empty ranges.
    """

    ok: bool
    sample_count: int
    failures: tuple[tuple[int, str], ...] = ()
    joint_ranges: dict[str, tuple[float, float]] = field(default_factory=dict)


def validate_trajectory_fixture(traj: Trajectory, geometry: HandGeometry) -> FixtureReport:
    """Check a trajectory is playable: times strictly increase, every sample
    is inside the joint limits, and every sample converts to motor commands.
    Never raises; problems land in the report."""
    failures: list[tuple[int, str]] = []
    mins = [float("inf")] * len(JOINT_COLUMNS)
    maxs = [float("-inf")] * len(JOINT_COLUMNS)
    prev_t = float("-inf")
    for i, (t, state) in enumerate(traj.samples):
        if t <= prev_t:
            failures.append((i, f"time {t} not after previous {prev_t}"))
        prev_t = t
        vec = state.as_vector()
        for j, v in enumerate(vec):
            mins[j] = min(mins[j], v)
            maxs[j] = max(maxs[j], v)
        try:
            state.validate(geometry)
        except Exception as exc:
            failures.append((i, str(exc)))
            continue
        try:
            joint_to_motor(state, geometry, timestamp=t)
        except Exception as exc:
            failures.append((i, f"motor conversion failed: {exc}"))
    ranges = (
        {name: (mins[j], maxs[j]) for j, name in enumerate(JOINT_COLUMNS)}
        if traj.samples
        else {}
    )
    return FixtureReport(
        ok=not failures,
        sample_count=len(traj.samples),
        failures=tuple(failures),
        joint_ranges=ranges,
    )
