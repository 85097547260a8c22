"""Plate-rotation tendon kinematics and the thumb decoupling guarantee.

The thumb sits on a plate pivoting about the palm center. Two antagonistic
tendons pull the plate left and right; with anchor radii r_palm and r_plate
and fixed offset gamma, the cosine theorem gives the rotation tendon length

    l_rot(theta) = sqrt(r_palm^2 + r_plate^2
                        - 2 r_palm r_plate cos(pi/2 - (theta + gamma)))

calibrated at theta = 0 (the middle, opposing pose). By symmetry the left
tendon lengthens exactly as much as the right one shortens.

The thumb's own flexor/extensor tendons are routed through the plate's
rotation axis, so the plate angle never changes their lengths: thumb
flexion/extension and plate rotation are fully decoupled.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .geometry import (
    DEG,
    PLATE_CALIBRATION,
    HandGeometry,
    clamp,
    require_in_limits,
)
from .finger import finger_tendon_deltas


class ThumbMode(enum.Enum):
    """Named plate configurations, from the perspective of the right hand."""

    LEFT = "L"
    MIDDLE = "M"
    RIGHT = "R"


def preset_angle(mode: ThumbMode, geometry: HandGeometry) -> float:
    """Preset plate pose per mode: the two range endpoints and the middle
    (opposing) pose at zero."""
    lo, hi = geometry.plate_limits
    return {ThumbMode.LEFT: lo, ThumbMode.MIDDLE: 0.0, ThumbMode.RIGHT: hi}[mode]


def classify_mode(theta: float, geometry: HandGeometry) -> ThumbMode:
    """Nearest preset pose. Total over the plate range and idempotent."""
    return min(
        (ThumbMode.LEFT, ThumbMode.MIDDLE, ThumbMode.RIGHT),
        key=lambda m: abs(theta - preset_angle(m, geometry)),
    )


@dataclass(frozen=True)
class PlateState:
    """Plate angle plus its mode label. ``from_angle`` labels with the
    nearest preset; construct directly to keep a free angle with an explicit
    mode."""

    theta: float
    mode: ThumbMode

    @classmethod
    def from_angle(cls, theta: float, geometry: HandGeometry) -> "PlateState":
        require_in_limits(theta, geometry.plate_limits, "plate theta")
        return cls(theta, classify_mode(theta, geometry))

    @classmethod
    def from_mode(cls, mode: ThumbMode, geometry: HandGeometry) -> "PlateState":
        return cls(preset_angle(mode, geometry), mode)


def plate_tendon_length(
    theta: float, geometry: HandGeometry, strict: bool = True
) -> float:
    """Rotation tendon length at plate angle theta (cosine theorem)."""
    if strict:
        require_in_limits(theta, geometry.plate_limits, "plate theta")
    rp, rq = geometry.r_palm, geometry.r_plate
    angle = math.pi / 2.0 - (theta + geometry.gamma)
    return math.sqrt(rp * rp + rq * rq - 2.0 * rp * rq * math.cos(angle))


def plate_tendon_delta(
    theta: float, geometry: HandGeometry, strict: bool = True
) -> tuple[float, float]:
    """(left_delta, right_delta) from the calibration pose theta0 = 0.

    right = l_rot(theta) - l_rot(0); left = -right by the symmetric routing.
    """
    right = plate_tendon_length(theta, geometry, strict) - plate_tendon_length(
        PLATE_CALIBRATION, geometry, strict=False
    )
    return -right, right


def thumb_tendon_deltas(
    geometry: HandGeometry,
    theta1: float,
    theta2: float,
    plate_theta: float = 0.0,
    strict: bool = True,
) -> dict[str, float]:
    """Thumb flexor/extensor deltas under a given plate angle.

    The plate angle is accepted (and range-checked) but cannot influence the
    result: the through-axis routing keeps the palm-to-finger path length
    constant for every plate pose.
    """
    if strict:
        require_in_limits(plate_theta, geometry.plate_limits, "plate theta")
    else:
        plate_theta = clamp(plate_theta, geometry.plate_limits)
    return finger_tendon_deltas(geometry, theta1, theta2, strict=strict)


def thumb_decoupling_check(
    plate_theta_a: float,
    plate_theta_b: float,
    theta1: float,
    theta2: float,
    geometry: HandGeometry,
) -> bool:
    """True iff the thumb's tendon deltas are identical under both plate
    angles. Always true in this model; the check exists so integration
    layers can assert the guarantee."""
    a = thumb_tendon_deltas(geometry, theta1, theta2, plate_theta_a)
    b = thumb_tendon_deltas(geometry, theta1, theta2, plate_theta_b)
    return all(a[k] == b[k] for k in a)


def plate_angle_range_deg(geometry: HandGeometry) -> tuple[float, float]:
    lo, hi = geometry.plate_limits
    return lo / DEG, hi / DEG
