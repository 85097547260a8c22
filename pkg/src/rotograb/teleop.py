"""Retargeting of streamed human-hand landmarks onto the 11 robot joints.

Frames follow the standard 21-point hand-landmark layout: wrist at index 0,
then four landmarks per digit in thumb/index/middle/ring/pinkie order, each
digit base-to-tip. Coordinates are normalized image coordinates (x, y in
[0, 1]-ish, z a relative depth); all processing here uses differences of
landmarks only, so the pipeline is invariant under uniform scaling and
translation of the whole frame.

Pipeline per frame: interior-angle extraction -> per-joint affine map ->
clamp -> exponential smoothing against the previous joint state. The thumb
plate is driven by a discrete left/middle/right mode detector with a
hysteresis band (optionally by a continuous mapping of the same signal).

Mode detection uses the signed lateral offset of the thumb tip from the
palm midline (wrist to the midpoint of the index-base/pinkie-base segment),
normalized by palm width. The sign comes from the image-plane cross
product, which flips under mirroring; a plain projection would not, and the
detector must swap left/right when the camera mirrors the hand.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, FrameError
from .geometry import FINGERS, HandGeometry, JointState
from .thumb import ThumbMode, preset_angle

LANDMARK_COUNT = 21
WRIST = 0
# First landmark of each digit; the digit occupies four consecutive slots.
DIGIT_BASE = {"thumb": 1, "index": 5, "middle": 9, "ring": 13, "pinkie": 17}
INDEX_BASE = 5
PINKIE_BASE = 17
THUMB_TIP = 4

# Segments shorter than this (in normalized image units) cannot define an
# angle or an axis reliably.
_DEGENERATE = 1e-9


@dataclass(frozen=True)
class LandmarkFrame:
    """One tracked hand observation.

    timestamp: seconds (producer clock); confidence in [0, 1]; points is a
    (21, 3) float array.
    """

    timestamp: float
    points: np.ndarray
    confidence: float

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.shape != (LANDMARK_COUNT, 3):
            raise FrameError(f"expected {LANDMARK_COUNT} 3-D points, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise FrameError("landmark coordinates must be finite")
        if not math.isfinite(self.timestamp):
            raise FrameError("timestamp must be finite")
        if not (0.0 <= self.confidence <= 1.0):
            raise FrameError(f"confidence {self.confidence} outside [0, 1]")
        object.__setattr__(self, "points", pts)

    def mirrored(self) -> "LandmarkFrame":
        """The same frame as seen by a horizontally mirroring camera."""
        pts = self.points.copy()
        pts[:, 0] = -pts[:, 0]
        return replace(self, points=pts)


def frame_to_json(frame: LandmarkFrame) -> str:
    """One-line JSON record: {"t": ..., "conf": ..., "pts": [[x,y,z]*21]}."""
    return json.dumps(
        {
            "t": frame.timestamp,
            "conf": frame.confidence,
            "pts": [[float(c) for c in p] for p in frame.points],
        },
        separators=(",", ":"),
    )


def frame_from_json(line: str) -> LandmarkFrame:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FrameError(f"bad landmark record: {exc}") from None
    if not isinstance(obj, dict):
        raise FrameError("landmark record must be a JSON object")
    try:
        t = float(obj["t"])
        conf = float(obj["conf"])
        pts = obj["pts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameError(f"landmark record missing/invalid field: {exc}") from None
    return LandmarkFrame(timestamp=t, points=np.asarray(pts, dtype=float), confidence=conf)


def interior_angle(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Angle at vertex b of the polyline a-b-c, in [0, pi].

    Zero-length segments leave the angle undefined and reject the frame.
    """
    u = np.asarray(a, dtype=float) - b
    v = np.asarray(c, dtype=float) - b
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < _DEGENERATE or nv < _DEGENERATE:
        raise FrameError("degenerate landmark segment")
    cosang = float(np.dot(u, v)) / (nu * nv)
    return math.acos(min(1.0, max(-1.0, cosang)))


def _flexion_at(frame: LandmarkFrame, i: int, j: int, k: int) -> float:
    """Flexion at landmark j: 0 when i-j-k are collinear (straight)."""
    return math.pi - interior_angle(frame.points[i], frame.points[j], frame.points[k])


def digit_flexion(frame: LandmarkFrame, finger: str) -> tuple[float, float]:
    """(proximal, distal) flexion for one digit, radians.

    Proximal is the flexion at the digit's first joint (wrist-base-next);
    distal averages the two outer joints, matching the robot's coupled
    distal pair.
    """
    b = DIGIT_BASE[finger]
    proximal = _flexion_at(frame, WRIST, b, b + 1)
    distal = 0.5 * (_flexion_at(frame, b, b + 1, b + 2) + _flexion_at(frame, b + 1, b + 2, b + 3))
    return proximal, distal


def extract_human_angles(frame: LandmarkFrame) -> dict[str, tuple[float, float]]:
    """Per-digit (proximal, distal) flexion angles for all five digits."""
    return {finger: digit_flexion(frame, finger) for finger in FINGERS}


def palm_width(frame: LandmarkFrame) -> float:
    """Distance between the index and pinkie base knuckles (x-y plane)."""
    d = frame.points[PINKIE_BASE, :2] - frame.points[INDEX_BASE, :2]
    return float(np.linalg.norm(d))


def thumb_lateral_offset(frame: LandmarkFrame) -> float:
    """Signed, dimensionless left/right position of the thumb tip.

    Measured in the image plane as the cross product of the palm midline
    (wrist -> midpoint of the index/pinkie bases) with the wrist->thumb-tip
    vector, normalized by midline length and palm width. Negative means the
    thumb sits on the index side. The cross product is what makes a
    mirrored frame change sign.
    """
    p = frame.points[:, :2]
    mid = 0.5 * (p[INDEX_BASE] + p[PINKIE_BASE])
    axis = mid - p[WRIST]
    tip = p[THUMB_TIP] - p[WRIST]
    width = palm_width(frame)
    axis_len = float(np.linalg.norm(axis))
    if width < _DEGENERATE or axis_len < _DEGENERATE:
        raise FrameError("degenerate palm geometry")
    cross = float(axis[0] * tip[1] - axis[1] * tip[0])
    return cross / (axis_len * width)


def detect_thumb_mode(
    frame: LandmarkFrame,
    previous: ThumbMode,
    enter: float = 0.15,
    release: float = 0.075,
    confidence_threshold: float = 0.5,
) -> ThumbMode:
    """Classify the shown thumb position as left/middle/right.

    Hysteresis: from middle, a side is taken only when |offset| exceeds
    `enter`; a side is held until |offset| falls below `release`. Offsets
    between the two thresholds never change the mode. Low-confidence or
    geometrically degenerate frames keep the previous mode.
    """
    if not (0.0 <= release < enter):
        raise ConfigError("require 0 <= release < enter")
    if frame.confidence < confidence_threshold:
        return previous
    try:
        offset = thumb_lateral_offset(frame)
    except FrameError:
        return previous
    # Index side (negative offset) is the right-hand configuration.
    if offset <= -enter:
        return ThumbMode.RIGHT
    if offset >= enter:
        return ThumbMode.LEFT
    if abs(offset) < release:
        return ThumbMode.MIDDLE
    return previous


@dataclass(frozen=True)
class JointMap:
    """How one robot joint reads the human hand.

    triples: one or more (a, b, c) landmark index triples; the joint input
    is the mean flexion at vertex b over the triples. input_range maps
    affinely onto output_range, then clamps.
    """

    triples: tuple[tuple[int, int, int], ...]
    input_range: tuple[float, float]
    output_range: tuple[float, float]

    def __post_init__(self) -> None:
        if not self.triples:
            raise ConfigError("joint map needs at least one landmark triple")
        for t in self.triples:
            if len(t) != 3 or any(not (0 <= i < LANDMARK_COUNT) for i in t):
                raise ConfigError(f"bad landmark triple {t!r}")
        lo, hi = self.input_range
        if not (lo < hi):
            raise ConfigError("input range must be non-empty")

    def measure(self, frame: LandmarkFrame) -> float:
        return float(
            np.mean([_flexion_at(frame, a, b, c) for a, b, c in self.triples])
        )

    def apply(self, value: float) -> tuple[float, float]:
        """(mapped value, clamped flag): affine map then clamp to output."""
        lo, hi = self.input_range
        olo, ohi = self.output_range
        mapped = olo + (value - lo) * (ohi - olo) / (hi - lo)
        low, high = (olo, ohi) if olo <= ohi else (ohi, olo)
        clamped = min(high, max(low, mapped))
        return clamped, clamped != mapped


@dataclass(frozen=True)
class RetargetProfile:
    """Tuning for the whole hand: per-joint maps plus smoothing and the
    thumb-mode thresholds. alpha = 1 disables smoothing."""

    theta1: dict[str, JointMap]
    theta2: dict[str, JointMap]
    alpha: float = 0.35
    confidence_threshold: float = 0.5
    mode_enter: float = 0.15
    mode_release: float = 0.075
    continuous_plate: bool = False
    plate_input_range: tuple[float, float] = (-0.35, 0.35)

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise ConfigError("alpha must be in (0, 1]")
        if not (0.0 <= self.mode_release < self.mode_enter):
            raise ConfigError("require 0 <= mode_release < mode_enter")
        if not (0.0 <= self.confidence_threshold <= 1.0):
            raise ConfigError("confidence threshold must be in [0, 1]")
        for table in (self.theta1, self.theta2):
            missing = [f for f in FINGERS if f not in table]
            if missing:
                raise ConfigError(f"profile missing fingers: {missing}")
        lo, hi = self.plate_input_range
        if not (lo < hi):
            raise ConfigError("plate input range must be non-empty")

    def validate(self, geometry: HandGeometry) -> None:
        """Check every output range sits inside the joint limits."""
        for finger in FINGERS:
            for table, limits in (
                (self.theta1, geometry.joint1_limits),
                (self.theta2, geometry.joint23_limits),
            ):
                olo, ohi = table[finger].output_range
                low, high = min(olo, ohi), max(olo, ohi)
                if low < limits[0] - 1e-12 or high > limits[1] + 1e-12:
                    raise ConfigError(
                        f"{finger} output range [{low}, {high}] exceeds limits {limits}"
                    )


def default_profile(geometry: HandGeometry) -> RetargetProfile:
    """Full-range maps: human flexion [0, pi/2] onto each joint's limits."""
    human = (0.0, math.pi / 2.0)
    theta1 = {}
    theta2 = {}
    for finger in FINGERS:
        b = DIGIT_BASE[finger]
        theta1[finger] = JointMap(
            triples=((WRIST, b, b + 1),),
            input_range=human,
            output_range=geometry.joint1_limits,
        )
        theta2[finger] = JointMap(
            triples=((b, b + 1, b + 2), (b + 1, b + 2, b + 3)),
            input_range=human,
            output_range=geometry.joint23_limits,
        )
    profile = RetargetProfile(theta1=theta1, theta2=theta2)
    profile.validate(geometry)
    return profile


@dataclass(frozen=True)
class RetargetResult:
    """Outcome of one frame: the (always limit-valid) new joint state, the
    thumb mode, and bookkeeping flags. accepted=False means the frame was
    unusable (low confidence, degenerate, or stale) and state is the
    previous state unchanged."""

    state: JointState
    mode: ThumbMode
    accepted: bool
    clamped: bool = False
    offset: float | None = None


def _smooth(previous: float, target: float, alpha: float) -> float:
    return previous + alpha * (target - previous)


def retarget(
    frame: LandmarkFrame,
    profile: RetargetProfile,
    previous: JointState,
    previous_mode: ThumbMode,
    geometry: HandGeometry,
) -> RetargetResult:
    """Map one frame to a new joint state.

    Never raises for a well-formed frame and never emits a state outside
    the joint limits: any degenerate landmark geometry rejects the frame
    (previous state returned), and the smoothed result is clamped against
    the geometry as a final guard.
    """
    if frame.confidence < profile.confidence_threshold:
        return RetargetResult(state=previous, mode=previous_mode, accepted=False)

    mode = detect_thumb_mode(
        frame,
        previous_mode,
        enter=profile.mode_enter,
        release=profile.mode_release,
        confidence_threshold=profile.confidence_threshold,
    )
    try:
        offset = thumb_lateral_offset(frame)
    except FrameError:
        offset = None

    theta1 = []
    theta2 = []
    clamped = False
    try:
        for finger in FINGERS:
            m1 = profile.theta1[finger]
            m2 = profile.theta2[finger]
            t1, c1 = m1.apply(m1.measure(frame))
            t2, c2 = m2.apply(m2.measure(frame))
            theta1.append(t1)
            theta2.append(t2)
            clamped = clamped or c1 or c2
    except FrameError:
        return RetargetResult(
            state=previous, mode=previous_mode, accepted=False, offset=offset
        )

    if profile.continuous_plate and offset is not None:
        lo, hi = profile.plate_input_range
        plo, phi = geometry.plate_limits
        # Negative offset = right-hand configuration = positive plate angle.
        plate_map = JointMap(
            triples=((0, 1, 2),), input_range=(lo, hi), output_range=(phi, plo)
        )
        plate_target, pc = plate_map.apply(offset)
        clamped = clamped or pc
    else:
        plate_target = preset_angle(mode, geometry)

    a = profile.alpha
    new = JointState.clamped(
        geometry,
        theta1=tuple(
            _smooth(p, t, a) for p, t in zip(previous.theta1, theta1)
        ),
        theta2=tuple(
            _smooth(p, t, a) for p, t in zip(previous.theta2, theta2)
        ),
        plate_theta=_smooth(previous.plate_theta, plate_target, a),
    )
    return RetargetResult(
        state=new, mode=mode, accepted=True, clamped=clamped, offset=offset
    )


@dataclass
class Retargeter:
    """Stateful per-session wrapper: holds the evolving joint state, the
    thumb mode, and the last accepted timestamp. Frames older than the
    last accepted one are dropped (latest-frame-wins streams may reorder
    on reconnect)."""

    geometry: HandGeometry
    profile: RetargetProfile
    state: JointState | None = None
    mode: ThumbMode = ThumbMode.MIDDLE
    last_timestamp: float = float("-inf")

    def __post_init__(self) -> None:
        self.profile.validate(self.geometry)
        if self.state is None:
            self.state = JointState.calibration()

    def ingest(self, frame: LandmarkFrame) -> RetargetResult:
        if frame.timestamp < self.last_timestamp:
            return RetargetResult(state=self.state, mode=self.mode, accepted=False)
        result = retarget(frame, self.profile, self.state, self.mode, self.geometry)
        if result.accepted:
            self.last_timestamp = frame.timestamp
            self.state = result.state
            self.mode = result.mode
        return result
