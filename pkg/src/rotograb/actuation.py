"""Joint targets to motor rotations, the mock servo bus, and feedforward
trajectory playback.

Motor layout: eleven servos on the wrist. Motors 2f and 2f+1 drive finger f
(order thumb, index, middle, ring, pinkie): the even motor actuates joint 1,
the odd motor the coupled joints 2-3. Motor 10 rotates the plate.

Each motor carries a flexor spool and an extensor spool. For the coupled
group the single extensor tendon spans joints 2 and 3, so its length changes
twice as much as the joint-2 flexor; winding it on a spool of twice the
radius keeps both spools at the same rotation, which is why one rotation
number per motor suffices.

Playback schedules each sample against the start instant (never against the
previous sample), so timing error stays bounded instead of accumulating.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BusBusy, LimitViolation
from .geometry import FINGERS, JOINT23_CALIBRATION, HandGeometry, JointState
from .finger import finger_tendon_deltas, tendon_delta
from .thumb import plate_tendon_delta
from .trajectory import Trajectory

MOTOR_COUNT = 11
PLATE_MOTOR = 10


def motor_index(finger: str, joint: str) -> int:
    """Motor id for a finger's 'j1' or 'j23' drive."""
    base = 2 * FINGERS.index(finger)
    return base if joint == "j1" else base + 1


@dataclass(frozen=True)
class MotorCommand:
    motor_id: int
    rotation: float  # spool rotation from calibration, rad
    timestamp: float = 0.0

    def __post_init__(self):
        if not 0 <= self.motor_id < MOTOR_COUNT:
            raise ValueError(f"motor_id {self.motor_id} out of range 0..{MOTOR_COUNT - 1}")
        if not math.isfinite(self.rotation):
            raise ValueError("rotation must be finite")


def joint_to_motor(
    state: JointState, geometry: HandGeometry, timestamp: float = 0.0
) -> list[MotorCommand]:
    """Map a JointState to the eleven motor rotations.

    Per finger: motor A = joint-1 delta / joint-1 spool radius; motor B =
    joint-2 flexor delta magnitude / flexor spool radius (the doubled-radius
    extensor spool then matches by construction). Motor 10 = right plate
    delta / plate spool radius. Deterministic and pure.
    """
    state.validate(geometry)
    commands: list[MotorCommand] = []
    for f in FINGERS:
        theta1, theta2 = state.finger_angles(f)
        deltas = finger_tendon_deltas(geometry, theta1, theta2)
        commands.append(
            MotorCommand(
                motor_index(f, "j1"),
                deltas["joint1"] / geometry.spool_radius_j1,
                timestamp,
            )
        )
        commands.append(
            MotorCommand(
                motor_index(f, "j23"),
                deltas["joint2"] / geometry.spool_radius_j23_flexor,
                timestamp,
            )
        )
    _, right = plate_tendon_delta(state.plate_theta, geometry)
    commands.append(MotorCommand(PLATE_MOTOR, right / geometry.plate_spool_radius, timestamp))
    return commands


def coupled_extensor_delta(geometry: HandGeometry, theta2: float) -> float:
    """Length change of the combined joint-2/3 extensor tendon: twice the
    single-joint delta, because the one tendon crosses both coupled joints."""
    d2 = tendon_delta(
        theta2, JOINT23_CALIBRATION, geometry.joint_radius, geometry.joint23_limits
    )
    return 2.0 * d2


def coupled_spool_rotations(geometry: HandGeometry, theta2: float) -> tuple[float, float]:
    """(flexor spool rotation, extensor spool rotation) for the coupled
    drive; equal by the 2:1 radius design."""
    d2 = tendon_delta(
        theta2, JOINT23_CALIBRATION, geometry.joint_radius, geometry.joint23_limits
    )
    return (
        d2 / geometry.spool_radius_j23_flexor,
        coupled_extensor_delta(geometry, theta2) / geometry.spool_radius_j23_extensor,
    )


# ---------------------------------------------------------------------------
# Mock servo bus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogEntry:
    t: float  # bus receive time, seconds (bus clock)
    motor_id: int
    rotation: float


class MockServoBus:
    """In-memory servo bus: records every command with its receive time.

    Single-writer: a session token from :meth:`acquire` is required to send;
    a second acquire while one is live raises BusBusy. Reads (log queries)
    are safe at any time.
    """

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._epoch = clock()
        self._lock = threading.Lock()
        self._owner: str | None = None
        self._log: list[LogEntry] = []

    def acquire(self, owner: str) -> str:
        with self._lock:
            if self._owner is not None and self._owner != owner:
                raise BusBusy(f"bus held by {self._owner!r}")
            self._owner = owner
            return owner

    def release(self, owner: str) -> None:
        with self._lock:
            if self._owner == owner:
                self._owner = None

    @property
    def owner(self) -> str | None:
        return self._owner

    def send(self, command: MotorCommand, owner: str) -> None:
        with self._lock:
            if self._owner != owner:
                raise BusBusy(f"owner {owner!r} does not hold the bus ({self._owner!r} does)")
            self._log.append(
                LogEntry(self._clock() - self._epoch, command.motor_id, command.rotation)
            )

    def send_all(self, commands, owner: str) -> None:
        for c in commands:
            self.send(c, owner)

    @property
    def log(self) -> list[LogEntry]:
        with self._lock:
            return list(self._log)

    def log_for_motor(self, motor_id: int) -> list[LogEntry]:
        return [e for e in self.log if e.motor_id == motor_id]

    def clear(self) -> None:
        with self._lock:
            self._log.clear()


def save_command_log(entries, path) -> None:
    """Line-delimited records ``t,motor_id,rotation_rad``; floats written
    with repr so the file round-trips byte-identically."""
    lines = [f"{e.t!r},{e.motor_id},{e.rotation!r}" for e in entries]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def load_command_log(path) -> list[LogEntry]:
    entries = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        t, motor_id, rotation = line.split(",")
        entries.append(LogEntry(float(t), int(motor_id), float(rotation)))
    return entries


# ---------------------------------------------------------------------------
# Feedforward playback
# ---------------------------------------------------------------------------


@dataclass
class PlaybackReport:
    samples_commanded: int
    duration: float
    mean_abs_schedule_deviation: float  # |actual - scheduled| per sample, s
    max_abs_schedule_deviation: float
    mean_period_deviation: float  # |actual period - scheduled period|, s
    joint_min: dict = field(default_factory=dict)
    joint_max: dict = field(default_factory=dict)
    realtime: bool = True


def _sleep_until(deadline: float, should_stop=None) -> bool:
    # coarse sleep, then a short spin: keeps scheduling error well under a
    # ms. Sleeps in bounded chunks so a stop request interrupts promptly.
    # Returns False when interrupted.
    while True:
        if should_stop is not None and should_stop():
            return False
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return True
        if remaining > 0.002:
            time.sleep(min(remaining - 0.002, 0.05))
        else:
            pass  # spin


def play_trajectory(
    traj: Trajectory,
    bus: MockServoBus,
    geometry: HandGeometry,
    rate_scale: float = 1.0,
    realtime: bool = True,
    owner: str = "playback",
    on_sample=None,
    should_stop=None,
) -> PlaybackReport:
    """Replay a trajectory on the bus in a feedforward manner.

    ``rate_scale`` > 1 plays faster (sample times divided by it). Samples
    are validated before anything is emitted; an out-of-limit sample aborts
    with its index. ``realtime=False`` skips the waiting (for analysis) and
    reports zero timing deviation.
    """
    if rate_scale <= 0:
        raise ValueError("rate_scale must be positive")
    for i, (_, state) in enumerate(traj.samples):
        try:
            state.validate(geometry)
        except LimitViolation as exc:
            raise LimitViolation(f"sample {i}: {exc}") from exc

    bus.acquire(owner)
    try:
        if not traj.samples:
            return PlaybackReport(0, 0.0, 0.0, 0.0, 0.0, realtime=realtime)
        t0 = traj.samples[0][0]
        scheduled = [(t - t0) / rate_scale for t, _ in traj.samples]
        start = time.monotonic()
        actual: list[float] = []
        for i, ((_, state), due) in enumerate(zip(traj.samples, scheduled)):
            if should_stop is not None and should_stop():
                break
            if realtime and not _sleep_until(start + due, should_stop):
                break
            now = time.monotonic() - start
            commands = joint_to_motor(state, geometry, timestamp=now if realtime else due)
            bus.send_all(commands, owner)
            actual.append(now if realtime else due)
            if on_sample is not None:
                on_sample(i, state)
    finally:
        bus.release(owner)

    n = len(actual)
    planned = scheduled[:n]
    dev = [abs(a - s) for a, s in zip(actual, planned)]
    period_dev = [
        abs((a2 - a1) - (s2 - s1))
        for (a1, a2), (s1, s2) in zip(
            zip(actual, actual[1:]), zip(planned, planned[1:])
        )
    ]
    vectors = [s.as_vector() for _, s in traj.samples[:n]]
    names = [f"{f}_j{j}" for f in FINGERS for j in (1, 2)] + ["plate"]
    joint_min = {nm: min(v[i] for v in vectors) for i, nm in enumerate(names)} if vectors else {}
    joint_max = {nm: max(v[i] for v in vectors) for i, nm in enumerate(names)} if vectors else {}
    return PlaybackReport(
        samples_commanded=n,
        duration=actual[-1] if actual else 0.0,
        mean_abs_schedule_deviation=sum(dev) / n if n else 0.0,
        max_abs_schedule_deviation=max(dev) if dev else 0.0,
        mean_period_deviation=sum(period_dev) / len(period_dev) if period_dev else 0.0,
        joint_min=joint_min,
        joint_max=joint_max,
        realtime=realtime,
    )
