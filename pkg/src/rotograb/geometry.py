"""Parametric hand model: geometry, joint state, configuration I/O.

Internal units are SI (meters, radians). Configuration files speak
millimeters and degrees; conversion happens only at the file boundary.

Coordinate conventions (PALM FRAME):
  origin : palm center = plate pivot
  +y     : toward the four finger bases ("forward")
  +z     : palm normal
  +x     : palm width axis, index side positive

The palm frame is tilted by ``palm_tilt`` about the world x axis; the world
z axis is the actuation-tower axis. A finger's mount is a base position plus
a yaw about the palm normal; its sagittal plane contains the yawed forward
direction and the palm normal, with the straight finger elevated by
``base_mount_angle`` above the palm plane. The thumb mount is expressed in
the PLATE frame, which rotates about the palm normal by the plate angle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, LimitViolation, UnknownFingerError

DEG = math.pi / 180.0

FINGERS = ("thumb", "index", "middle", "ring", "pinkie")

#: Calibration angles: tendon deltas are zero here.
JOINT1_CALIBRATION = -45.0 * DEG
JOINT23_CALIBRATION = 0.0
PLATE_CALIBRATION = 0.0


@dataclass(frozen=True)
class FingerMount:
    """Base placement of one finger: position (m) and yaw about the palm
    normal (rad). The thumb's mount is given in the plate frame."""

    position: tuple[float, float, float]
    yaw: float


def _default_mounts(palm_width: float, palm_length: float) -> dict[str, FingerMount]:
    # Four bases evenly across the palm width (bin centers), splayed
    # symmetrically so mirrored fingers stay mirror images.
    xs = [palm_width * f for f in (0.375, 0.125, -0.125, -0.375)]
    splays = [-12.0 * DEG, -4.0 * DEG, 4.0 * DEG, 12.0 * DEG]
    y = palm_length / 2.0
    mounts = {
        name: FingerMount((x, y, 0.0), 90.0 * DEG + s)
        for name, x, s in zip(("index", "middle", "ring", "pinkie"), xs, splays)
    }
    mounts["thumb"] = FingerMount((0.0, -0.025, 0.0), -90.0 * DEG)
    return mounts


@dataclass(frozen=True)
class HandGeometry:
    """Immutable parametric description of the hand. Shareable across threads."""

    joint_radius: float = 0.006
    link_lengths: tuple[float, float, float] = (0.028, 0.024, 0.008)
    finger_length: float = 0.096
    base_mount_angle: float = 45.0 * DEG
    palm_tilt: float = 10.0 * DEG
    palm_width: float = 0.094
    palm_length: float = 0.083
    r_palm: float = 0.045
    r_plate: float = 0.020
    gamma: float = 15.0 * DEG
    plate_limits: tuple[float, float] = (-65.0 * DEG, 65.0 * DEG)
    joint1_limits: tuple[float, float] = (-45.0 * DEG, 90.0 * DEG)
    joint23_limits: tuple[float, float] = (0.0, 90.0 * DEG)
    spool_radius_j1: float = 0.005
    spool_radius_j23_flexor: float = 0.005
    spool_radius_j23_extensor: float = 0.010
    plate_spool_radius: float = 0.005
    mounts: Mapping[str, FingerMount] = field(default_factory=dict)

    def __post_init__(self):
        if not self.mounts:
            object.__setattr__(
                self, "mounts", _default_mounts(self.palm_width, self.palm_length)
            )
        _validate(self)

    def limits_for(self, joint: str) -> tuple[float, float]:
        if joint == "j1":
            return self.joint1_limits
        if joint in ("j2", "j23"):
            return self.joint23_limits
        if joint == "plate":
            return self.plate_limits
        raise ValueError(f"unknown joint {joint!r}")


def _check(cond: bool, fieldname: str, constraint: str) -> None:
    if not cond:
        raise ConfigError(f"{fieldname}: {constraint}")


def _validate(g: HandGeometry) -> None:
    _check(g.joint_radius > 0, "joint_radius", "must be > 0")
    _check(all(l > 0 for l in g.link_lengths), "link_lengths", "must all be > 0")
    _check(len(g.link_lengths) == 3, "link_lengths", "must have 3 entries")
    _check(g.r_palm > g.r_plate > 0, "r_palm/r_plate", "must satisfy r_palm > r_plate > 0")
    _check(
        abs(g.spool_radius_j23_extensor - 2.0 * g.spool_radius_j23_flexor) == 0.0,
        "spool_radius_j23_extensor",
        "spool ratio violated: extensor spool must be exactly 2x the flexor spool",
    )
    kinematic = 3 * 2.0 * g.joint_radius + sum(g.link_lengths)
    _check(
        abs(kinematic - g.finger_length) <= 1e-9,
        "finger_length",
        f"3*2r + link lengths = {kinematic:.6g} m must equal finger_length "
        f"{g.finger_length:.6g} m",
    )
    for name, lim, cal in (
        ("joint1_limits", g.joint1_limits, JOINT1_CALIBRATION),
        ("joint23_limits", g.joint23_limits, JOINT23_CALIBRATION),
        ("plate_limits", g.plate_limits, PLATE_CALIBRATION),
    ):
        _check(lim[0] < lim[1], name, "interval must be non-empty")
        _check(lim[0] <= cal <= lim[1], name, "must contain the calibration angle")
    _check(set(g.mounts) == set(FINGERS), "mounts", "must define all five fingers")


def check_finger(finger: str) -> str:
    if finger not in FINGERS:
        raise UnknownFingerError(f"unknown finger {finger!r}; expected one of {FINGERS}")
    return finger


def clamp(value: float, limits: tuple[float, float]) -> float:
    return min(max(value, limits[0]), limits[1])


def in_limits(value: float, limits: tuple[float, float], tol: float = 1e-12) -> bool:
    return limits[0] - tol <= value <= limits[1] + tol


def require_in_limits(value: float, limits: tuple[float, float], what: str) -> float:
    if not in_limits(value, limits):
        raise LimitViolation(
            f"{what} = {value / DEG:.4f} deg outside "
            f"[{limits[0] / DEG:.4f}, {limits[1] / DEG:.4f}] deg"
        )
    return value


# ---------------------------------------------------------------------------
# Joint state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointState:
    """The 11 actuated degrees of freedom: (theta1, theta2) per finger plus
    the plate angle. Joint 3 is mechanically coupled to joint 2 and is never
    stored; read it via :meth:`theta3`."""

    theta1: tuple[float, float, float, float, float]
    theta2: tuple[float, float, float, float, float]
    plate_theta: float = 0.0

    @classmethod
    def calibration(cls) -> "JointState":
        return cls((JOINT1_CALIBRATION,) * 5, (JOINT23_CALIBRATION,) * 5, PLATE_CALIBRATION)

    @classmethod
    def strict(
        cls,
        geometry: HandGeometry,
        theta1: Iterable[float],
        theta2: Iterable[float],
        plate_theta: float = 0.0,
    ) -> "JointState":
        """Construct and validate; raises LimitViolation on any out-of-limit
        angle (the default behavior per the strict-mode design)."""
        state = cls(tuple(theta1), tuple(theta2), plate_theta)
        state.validate(geometry)
        return state

    @classmethod
    def clamped(
        cls,
        geometry: HandGeometry,
        theta1: Iterable[float],
        theta2: Iterable[float],
        plate_theta: float = 0.0,
    ) -> "JointState":
        """Construct, saturating every angle at its mechanical stop."""
        t1 = tuple(clamp(t, geometry.joint1_limits) for t in theta1)
        t2 = tuple(clamp(t, geometry.joint23_limits) for t in theta2)
        return cls(t1, t2, clamp(plate_theta, geometry.plate_limits))

    def theta3(self, finger: str) -> float:
        """Coupled joint: flexes simultaneously with joint 2."""
        return self.theta2[FINGERS.index(check_finger(finger))]

    def finger_angles(self, finger: str) -> tuple[float, float]:
        i = FINGERS.index(check_finger(finger))
        return self.theta1[i], self.theta2[i]

    def validate(self, geometry: HandGeometry) -> "JointState":
        if len(self.theta1) != 5 or len(self.theta2) != 5:
            raise LimitViolation("JointState needs 5 theta1 and 5 theta2 entries")
        for f, t in zip(FINGERS, self.theta1):
            require_in_limits(t, geometry.joint1_limits, f"{f} theta1")
        for f, t in zip(FINGERS, self.theta2):
            require_in_limits(t, geometry.joint23_limits, f"{f} theta2")
        require_in_limits(self.plate_theta, geometry.plate_limits, "plate_theta")
        return self

    def is_valid(self, geometry: HandGeometry) -> bool:
        try:
            self.validate(geometry)
            return True
        except LimitViolation:
            return False

    def with_finger(self, finger: str, theta1=None, theta2=None) -> "JointState":
        i = FINGERS.index(check_finger(finger))
        t1 = list(self.theta1)
        t2 = list(self.theta2)
        if theta1 is not None:
            t1[i] = float(theta1)
        if theta2 is not None:
            t2[i] = float(theta2)
        return replace(self, theta1=tuple(t1), theta2=tuple(t2))

    def with_plate(self, plate_theta: float) -> "JointState":
        return replace(self, plate_theta=float(plate_theta))

    def as_vector(self) -> tuple[float, ...]:
        """The 11 scalars in CSV column order: (j1, j2) per finger, plate last."""
        out: list[float] = []
        for t1, t2 in zip(self.theta1, self.theta2):
            out.extend((t1, t2))
        out.append(self.plate_theta)
        return tuple(out)

    @classmethod
    def from_vector(cls, values: Iterable[float]) -> "JointState":
        vals = [float(v) for v in values]
        if len(vals) != 11:
            raise ValueError(f"expected 11 values, got {len(vals)}")
        return cls(tuple(vals[0:10:2]), tuple(vals[1:10:2]), vals[10])


# ---------------------------------------------------------------------------
# Configuration files (JSON; millimeters and degrees at the boundary)
# ---------------------------------------------------------------------------

_MM = 1e-3

_SCALAR_KEYS = {
    # config key -> (attribute, scale to SI)
    "joint_radius_mm": ("joint_radius", _MM),
    "finger_length_mm": ("finger_length", _MM),
    "base_mount_angle_deg": ("base_mount_angle", DEG),
    "palm_tilt_deg": ("palm_tilt", DEG),
    "palm_width_mm": ("palm_width", _MM),
    "palm_length_mm": ("palm_length", _MM),
    "r_palm_mm": ("r_palm", _MM),
    "r_plate_mm": ("r_plate", _MM),
    "gamma_deg": ("gamma", DEG),
    "spool_radius_j1_mm": ("spool_radius_j1", _MM),
    "spool_radius_j23_flexor_mm": ("spool_radius_j23_flexor", _MM),
    "spool_radius_j23_extensor_mm": ("spool_radius_j23_extensor", _MM),
    "plate_spool_radius_mm": ("plate_spool_radius", _MM),
}

_PAIR_KEYS = {
    "plate_limits_deg": ("plate_limits", DEG),
    "joint1_limits_deg": ("joint1_limits", DEG),
    "joint23_limits_deg": ("joint23_limits", DEG),
}


def geometry_from_config(config: Mapping) -> HandGeometry:
    """Build a validated HandGeometry from a parsed config mapping.

    Unknown keys are rejected (they are usually typos); missing keys take
    the built-in defaults.
    """
    kwargs: dict = {}
    known = set(_SCALAR_KEYS) | set(_PAIR_KEYS) | {"link_lengths_mm", "finger_mounts"}
    for key in config:
        if key not in known:
            raise ConfigError(f"{key}: unknown configuration key")
    for key, (attr, scale) in _SCALAR_KEYS.items():
        if key in config:
            try:
                kwargs[attr] = float(config[key]) * scale
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: not a number ({config[key]!r})") from exc
    for key, (attr, scale) in _PAIR_KEYS.items():
        if key in config:
            pair = config[key]
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigError(f"{key}: expected [low, high]")
            kwargs[attr] = (float(pair[0]) * scale, float(pair[1]) * scale)
    if "link_lengths_mm" in config:
        lengths = config["link_lengths_mm"]
        if not isinstance(lengths, (list, tuple)) or len(lengths) != 3:
            raise ConfigError("link_lengths_mm: expected 3 entries")
        kwargs["link_lengths"] = tuple(float(v) * _MM for v in lengths)
    if "finger_mounts" in config:
        mounts_cfg = config["finger_mounts"]
        mounts: dict[str, FingerMount] = {}
        for name, m in mounts_cfg.items():
            check_finger(name)
            pos = m.get("position_mm")
            if not isinstance(pos, (list, tuple)) or len(pos) != 3:
                raise ConfigError(f"finger_mounts.{name}.position_mm: expected 3 entries")
            mounts[name] = FingerMount(
                tuple(float(v) * _MM for v in pos), float(m.get("yaw_deg", 90.0)) * DEG
            )
        kwargs["mounts"] = mounts
    return HandGeometry(**kwargs)


def geometry_to_config(g: HandGeometry) -> dict:
    config: dict = {}
    for key, (attr, scale) in _SCALAR_KEYS.items():
        config[key] = getattr(g, attr) / scale
    for key, (attr, scale) in _PAIR_KEYS.items():
        lo, hi = getattr(g, attr)
        config[key] = [lo / scale, hi / scale]
    config["link_lengths_mm"] = [v / _MM for v in g.link_lengths]
    config["finger_mounts"] = {
        name: {
            "position_mm": [v / _MM for v in m.position],
            "yaw_deg": m.yaw / DEG,
        }
        for name, m in g.mounts.items()
    }
    return config


def load_geometry(path) -> HandGeometry:
    """Load and validate a geometry configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return geometry_from_config(config)


def save_geometry(g: HandGeometry, path) -> None:
    Path(path).write_text(json.dumps(geometry_to_config(g), indent=2) + "\n")


def default_geometry() -> HandGeometry:
    """The built-in parameter set: 9.6 cm fingers, 9.4 cm palm, 45 deg base
    mount, 10 deg palm tilt, plate range +/-65 deg, 2:1 coupled spools."""
    return HandGeometry()
