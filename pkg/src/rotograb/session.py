"""Shared hand-state session: one writer, many readers, consistent snapshots.

A HandSession owns the authoritative JointState plus everything derived
from it. Writers (manual commands, a landmark stream, or a trajectory
playback) must first acquire the session for their source; only transitions
through Idle are allowed, so a teleop stream can never be interrupted by a
playback request without an explicit release. Readers take immutable
snapshots; every derived quantity in a snapshot (tendon deltas, motor
rotations, fingertip positions) is computed from the same JointState under
the lock, so a snapshot can never mix two states.

The sequence number increments on every committed change and never on
reads, which lets clients detect staleness and order updates.
"""

from __future__ import annotations

import enum
import threading
import time
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .actuation import MockServoBus, MotorCommand, PlaybackReport, joint_to_motor, play_trajectory
from .errors import BusBusy, TrajectoryError
from .finger import finger_tendon_deltas, hand_fk
from .geometry import DEG, FINGERS, HandGeometry, JointState, check_finger
from .policy import validate_trajectory_fixture
from .teleop import LandmarkFrame, Retargeter, RetargetProfile, RetargetResult, default_profile
from .thumb import ThumbMode, plate_tendon_delta, preset_angle
from .trajectory import Trajectory


class Source(enum.Enum):
    """Who is allowed to move the hand right now."""

    IDLE = "idle"
    MANUAL = "manual"
    TELEOP = "teleop"
    PLAYBACK = "playback"


@dataclass(frozen=True)
class Snapshot:
    """Immutable, self-consistent view of the session at one instant."""

    seq: int
    timestamp: float
    source: Source
    thumb_mode: ThumbMode
    state: JointState
    tendons: dict[str, dict[str, float]]
    plate_tendons: tuple[float, float]
    motors: tuple[MotorCommand, ...]
    fk: dict[str, np.ndarray]
    limits: dict[str, tuple[float, float]]
    playback_active: bool
    playback_name: str | None

    def to_wire(self) -> dict:
        """JSON-ready dict; angles in degrees, lengths in meters."""
        joints = {
            finger: {
                "theta1_deg": self.state.theta1[i] / DEG,
                "theta2_deg": self.state.theta2[i] / DEG,
            }
            for i, finger in enumerate(FINGERS)
        }
        return {
            "v": 1,
            "type": "state",
            "seq": self.seq,
            "t": self.timestamp,
            "source": self.source.value,
            "thumb_mode": self.thumb_mode.value,
            "joints": joints,
            "plate_deg": self.state.plate_theta / DEG,
            "tendons": self.tendons,
            "plate_tendons": {
                "left": self.plate_tendons[0],
                "right": self.plate_tendons[1],
            },
            "motors": [c.rotation for c in self.motors],
            "fk": {f: p.tolist() for f, p in self.fk.items()},
            "limits": {
                name: [lo / DEG, hi / DEG] for name, (lo, hi) in self.limits.items()
            },
            "playback": {
                "active": self.playback_active,
                "name": self.playback_name,
            },
        }


class HandSession:
    """Thread-safe session holding the hand state and the mock motor bus.

    All mutators require the caller to have acquired the matching source
    with an owner token; tokens are plain strings (a connection id, a test
    name). Mutators return the snapshot they produced so a writer observes
    a strictly increasing sequence.
    """

    def __init__(
        self,
        geometry: HandGeometry,
        profile: RetargetProfile | None = None,
        clock: Callable[[], float] = time.monotonic,
    ) -> None:
        self.geometry = geometry
        self.profile = profile if profile is not None else default_profile(geometry)
        self.bus = MockServoBus(clock=clock)
        self._lock = threading.RLock()
        self._state = JointState.calibration()
        self._thumb_mode = ThumbMode.MIDDLE
        self._source = Source.IDLE
        self._owner: str | None = None
        self._seq = 0
        self._retargeter: Retargeter | None = None
        self._playback_thread: threading.Thread | None = None
        self._playback_stop = threading.Event()
        self._playback_name: str | None = None
        self.last_playback: PlaybackReport | None = None
        self.last_playback_error: str | None = None

    # -- reading ---------------------------------------------------------

    @property
    def seq(self) -> int:
        with self._lock:
            return self._seq

    @property
    def source(self) -> Source:
        with self._lock:
            return self._source

    @property
    def owner(self) -> str | None:
        with self._lock:
            return self._owner

    def snapshot(self) -> Snapshot:
        g = self.geometry
        with self._lock:
            state = self._state
            seq = self._seq
            source = self._source
            mode = self._thumb_mode
            playback_active = self._playback_thread is not None and self._playback_thread.is_alive()
            playback_name = self._playback_name if playback_active else None
        tendons = {
            finger: finger_tendon_deltas(g, state.theta1[i], state.theta2[i])
            for i, finger in enumerate(FINGERS)
        }
        return Snapshot(
            seq=seq,
            timestamp=time.time(),
            source=source,
            thumb_mode=mode,
            state=state,
            tendons=tendons,
            plate_tendons=plate_tendon_delta(state.plate_theta, g),
            motors=joint_to_motor(state, g),
            fk=hand_fk(g, state),
            limits={
                "theta1_deg": g.joint1_limits,
                "theta2_deg": g.joint23_limits,
                "plate_deg": g.plate_limits,
            },
            playback_active=playback_active,
            playback_name=playback_name,
        )

    # -- arbitration -----------------------------------------------------

    def acquire(self, source: Source, owner: str) -> None:
        """Claim the writer slot for `source`.

        Re-acquiring the slot you already hold is a no-op. Any other
        combination while the session is non-idle is rejected, including
        the same owner asking for a different source: sources only change
        through Idle.
        """
        if source is Source.IDLE:
            raise ValueError("acquire needs a non-idle source; use release")
        with self._lock:
            if self._source is Source.IDLE:
                self._source = source
                self._owner = owner
                self._bump()
                return
            if self._source is source and self._owner == owner:
                return
            raise BusBusy(
                f"session is {self._source.value}, owned by {self._owner!r}"
            )

    def release(self, owner: str) -> bool:
        """Give up the writer slot. True if this owner held it."""
        stop_playback = False
        with self._lock:
            if self._owner != owner:
                return False
            if self._source is Source.PLAYBACK:
                stop_playback = True
        if stop_playback:
            self._halt_playback()
        with self._lock:
            if self._owner != owner:
                return False
            self._source = Source.IDLE
            self._owner = None
            self._retargeter = None
            self._bump()
            return True

    def _require(self, source: Source, owner: str) -> None:
        if self._source is not source or self._owner != owner:
            raise BusBusy(
                f"operation needs the {source.value} slot; "
                f"session is {self._source.value}, owned by {self._owner!r}"
            )

    def _bump(self) -> None:
        self._seq += 1

    # -- manual ----------------------------------------------------------

    def apply_manual(
        self,
        owner: str,
        joints: Mapping[str, tuple[float | None, float | None]] | None = None,
        plate_theta: float | None = None,
    ) -> Snapshot:
        """Merge a partial joint command onto the current state.

        joints maps finger name to (theta1, theta2), either of which may be
        None to leave that joint alone. Angles are radians and must lie
        inside the limits; out-of-range commands are rejected whole (no
        partial application).
        """
        with self._lock:
            self._require(Source.MANUAL, owner)
            state = self._state
            if joints:
                for finger, (t1, t2) in joints.items():
                    check_finger(finger)
                    cur1, cur2 = state.finger_angles(finger)
                    state = state.with_finger(
                        finger,
                        cur1 if t1 is None else t1,
                        cur2 if t2 is None else t2,
                    )
            if plate_theta is not None:
                state = state.with_plate(plate_theta)
            state.validate(self.geometry)  # reject before committing
            self._state = state
            self._bump()
        return self.snapshot()

    def set_thumb_mode(self, owner: str, mode: ThumbMode) -> Snapshot:
        """Snap the plate to the preset angle for a left/middle/right mode."""
        with self._lock:
            self._require(Source.MANUAL, owner)
            self._state = self._state.with_plate(preset_angle(mode, self.geometry))
            self._thumb_mode = mode
            self._bump()
        return self.snapshot()

    def reset_to_calibration(self, owner: str) -> Snapshot:
        with self._lock:
            self._require(Source.MANUAL, owner)
            self._state = JointState.calibration()
            self._thumb_mode = ThumbMode.MIDDLE
            self._bump()
        return self.snapshot()

    # -- teleop ----------------------------------------------------------

    def ingest_landmarks(self, owner: str, frame: LandmarkFrame) -> RetargetResult:
        """Feed one landmark frame through the retargeting pipeline.

        Frames arrive latest-wins: the caller should drop backlog rather
        than queue it; stale timestamps are ignored by the retargeter.
        """
        with self._lock:
            self._require(Source.TELEOP, owner)
            if self._retargeter is None:
                self._retargeter = Retargeter(
                    geometry=self.geometry,
                    profile=self.profile,
                    state=self._state,
                    mode=self._thumb_mode,
                )
            result = self._retargeter.ingest(frame)
            if result.accepted:
                self._state = result.state
                self._thumb_mode = result.mode
                self._bump()
            return result

    # -- playback --------------------------------------------------------

    def start_playback(
        self,
        owner: str,
        traj: Trajectory,
        rate_scale: float = 1.0,
        realtime: bool = True,
        name: str | None = None,
    ) -> None:
        """Validate then replay a trajectory on the mock bus in a thread.

        The session tracks each sample as it plays, so snapshots follow the
        motion. On completion (or failure) the playback slot is released
        automatically and the report lands in last_playback.
        """
        report = validate_trajectory_fixture(traj, self.geometry)
        if not report.ok:
            idx, msg = report.failures[0]
            raise TrajectoryError(f"fixture invalid at sample {idx}: {msg}")
        with self._lock:
            self._require(Source.PLAYBACK, owner)
            if self._playback_thread is not None and self._playback_thread.is_alive():
                raise BusBusy("playback already running")
            self._playback_stop.clear()
            self._playback_name = name if name is not None else traj.name
            self.last_playback = None
            self.last_playback_error = None
            thread = threading.Thread(
                target=self._playback_main,
                args=(owner, traj, rate_scale, realtime),
                name="rotograb-playback",
                daemon=True,
            )
            self._playback_thread = thread
            self._bump()
        thread.start()

    def _playback_main(
        self, owner: str, traj: Trajectory, rate_scale: float, realtime: bool
    ) -> None:
        def on_sample(index: int, state: JointState) -> None:
            if self._playback_stop.is_set():
                return  # a stop raced the final sample; drop it
            with self._lock:
                self._state = state
                self._bump()

        try:
            report = play_trajectory(
                traj,
                self.bus,
                self.geometry,
                rate_scale=rate_scale,
                realtime=realtime,
                owner=owner,
                on_sample=on_sample,
                should_stop=self._playback_stop.is_set,
            )
            with self._lock:
                self.last_playback = report
        except Exception as exc:
            with self._lock:
                self.last_playback_error = str(exc)
        finally:
            self.release(owner)

    def _halt_playback(self) -> None:
        self._playback_stop.set()
        thread = self._playback_thread
        if thread is not None and thread is not threading.current_thread():
            thread.join(timeout=5.0)
        with self._lock:
            self._playback_thread = None
            self._playback_name = None

    def stop_playback(self, owner: str) -> None:
        with self._lock:
            self._require(Source.PLAYBACK, owner)
        self._halt_playback()
        self.release(owner)

    @property
    def playback_active(self) -> bool:
        with self._lock:
            return self._playback_thread is not None and self._playback_thread.is_alive()

    # -- teardown ----------------------------------------------------------

    def shutdown(self) -> None:
        """Halt playback and force the session back to idle (service exit)."""
        self._halt_playback()
        with self._lock:
            if self._source is not Source.IDLE:
                self._source = Source.IDLE
                self._owner = None
                self._retargeter = None
                self._bump()
