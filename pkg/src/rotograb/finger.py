"""Closed-form tendon kinematics and forward kinematics for one finger.

A rolling-contact joint of circle radius r splits its motion into two equal
rotations of theta/2: a virtual one about the fixed center O and a real one
about the moving center O', with |O O'| = 2r at every angle. The extensor
tendon runs between the diameter extremities P (fixed link) and P' (moving
link); its vector in the fixed-link frame is

    l(theta) = [ r sin(theta) + 2r cos(theta/2),
                 r (1 - cos(theta)) + 2r sin(theta/2) ]

Deltas are measured from the calibration angle (-45 deg for joint 1, 0 for
the coupled joints 2-3); a positive delta lengthens the extensor and
shortens the flexor by the same amount. Because the upper joints' tendons
are routed through the lower joints' rotation centers, each joint's delta
depends only on its own angle.

2D finger-plane convention: x along the straight finger, y on the flexion
side; positive theta = flexion.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import RangeError
from .geometry import (
    DEG,
    FINGERS,
    JOINT1_CALIBRATION,
    JOINT23_CALIBRATION,
    HandGeometry,
    JointState,
    check_finger,
    clamp,
    require_in_limits,
)


def tendon_vector(theta: float, r: float, limits: tuple[float, float] | None = None) -> np.ndarray:
    """Extensor tendon vector P -> P' in the fixed-link frame.

    ``limits``, when given, enforces the joint's range (strict mode).
    """
    if limits is not None:
        require_in_limits(theta, limits, "theta")
    half = theta / 2.0
    return np.array(
        [
            r * math.sin(theta) + 2.0 * r * math.cos(half),
            r * (1.0 - math.cos(theta)) + 2.0 * r * math.sin(half),
        ]
    )


def tendon_length(theta: float, r: float) -> float:
    return float(np.linalg.norm(tendon_vector(theta, r)))


def tendon_delta(
    theta: float,
    theta_init: float,
    r: float,
    limits: tuple[float, float] | None = None,
) -> float:
    """Signed change in extensor length from the calibration angle.

    Positive = extensor lengthens (finger flexing); the flexor changes by
    the negative of this value. Strictly increasing in theta.
    """
    if limits is not None:
        require_in_limits(theta, limits, "theta")
        require_in_limits(theta_init, limits, "theta_init")
    return tendon_length(theta, r) - tendon_length(theta_init, r)


def joint_transform(theta: float, r: float) -> np.ndarray:
    """Moving-link frame relative to the fixed-link frame, as a 3x3
    homogeneous 2D transform: Rot(theta/2) * Trans(2r, 0) * Rot(theta/2).

    Net rotation theta; net translation 2r (cos(theta/2), sin(theta/2)) -
    the center distance stays 2r at every angle.
    """
    half = theta / 2.0
    c, s = math.cos(theta), math.sin(theta)
    tx = 2.0 * r * math.cos(half)
    ty = 2.0 * r * math.sin(half)
    return np.array([[c, -s, tx], [s, c, ty], [0.0, 0.0, 1.0]])


def _link_transform(length: float) -> np.ndarray:
    return np.array([[1.0, 0.0, length], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


def finger_chain_2d(geometry: HandGeometry, theta1: float, theta2: float) -> np.ndarray:
    """Five chain points in the finger's sagittal plane: base (= joint 1
    fixed center), the three rolling-contact points, and the fingertip."""
    r = geometry.joint_radius
    points = [np.array([0.0, 0.0])]
    t = np.eye(3)
    for theta, link in zip((theta1, theta2, theta2), geometry.link_lengths):
        half = theta / 2.0
        # contact point: midpoint of O -> O', at radius r along the half angle
        contact = t @ np.array([r * math.cos(half), r * math.sin(half), 1.0])
        points.append(contact[:2])
        t = t @ joint_transform(theta, r) @ _link_transform(link)
    points.append((t @ np.array([0.0, 0.0, 1.0]))[:2])
    return np.array(points)


def _mount_frame(geometry: HandGeometry, finger: str, plate_theta: float):
    """Palm-frame origin and in-plane basis (e1 along the straight finger,
    e2 on the flexion side) for one finger's sagittal plane."""
    mount = geometry.mounts[finger]
    yaw = mount.yaw + (plate_theta if finger == "thumb" else 0.0)
    cy, sy = math.cos(yaw), math.sin(yaw)
    base = np.array(mount.position)
    if finger == "thumb":
        cp, sp = math.cos(plate_theta), math.sin(plate_theta)
        base = np.array(
            [cp * base[0] - sp * base[1], sp * base[0] + cp * base[1], base[2]]
        )
    fwd = np.array([cy, sy, 0.0])
    up = np.array([0.0, 0.0, 1.0])
    ce, se = math.cos(geometry.base_mount_angle), math.sin(geometry.base_mount_angle)
    e1 = ce * fwd + se * up
    e2 = -se * fwd + ce * up
    return base, e1, e2


def _palm_to_world(geometry: HandGeometry, points: np.ndarray) -> np.ndarray:
    ct, st = math.cos(geometry.palm_tilt), math.sin(geometry.palm_tilt)
    rx = np.array([[1.0, 0.0, 0.0], [0.0, ct, -st], [0.0, st, ct]])
    return points @ rx.T


def finger_fk(
    geometry: HandGeometry,
    finger: str,
    theta1: float,
    theta2: float,
    plate_theta: float = 0.0,
    strict: bool = True,
) -> np.ndarray:
    """World-frame chain points (5, 3): base, three joint contact points,
    fingertip. Joint 3 follows joint 2 (coupled); the plate angle moves only
    the thumb.

    With all angles zero the chain is straight and spans the configured
    finger length (0.096 m by default).
    """
    check_finger(finger)
    if strict:
        require_in_limits(theta1, geometry.joint1_limits, f"{finger} theta1")
        require_in_limits(theta2, geometry.joint23_limits, f"{finger} theta2")
        require_in_limits(plate_theta, geometry.plate_limits, "plate_theta")
    else:
        theta1 = clamp(theta1, geometry.joint1_limits)
        theta2 = clamp(theta2, geometry.joint23_limits)
        plate_theta = clamp(plate_theta, geometry.plate_limits)
    chain = finger_chain_2d(geometry, theta1, theta2)
    base, e1, e2 = _mount_frame(geometry, finger, plate_theta)
    palm_points = base[None, :] + chain[:, 0:1] * e1[None, :] + chain[:, 1:2] * e2[None, :]
    return _palm_to_world(geometry, palm_points)


def hand_fk(geometry: HandGeometry, state: JointState) -> dict[str, np.ndarray]:
    """Chain points for all five fingers of a JointState."""
    return {
        f: finger_fk(geometry, f, *state.finger_angles(f), state.plate_theta, strict=False)
        for f in FINGERS
    }


def invert_tendon_delta(
    delta: float,
    theta_init: float,
    r: float,
    limits: tuple[float, float],
    tol: float = 1e-10,
) -> float:
    """Angle whose tendon delta equals ``delta``, by bisection on the
    strictly monotone delta map over ``limits``.

    Raises RangeError when the delta is outside the achievable interval.
    """
    lo, hi = limits
    d_lo = tendon_delta(lo, theta_init, r)
    d_hi = tendon_delta(hi, theta_init, r)
    if not (d_lo - 1e-15 <= delta <= d_hi + 1e-15):
        raise RangeError(
            f"delta {delta:.9g} m outside achievable range "
            f"[{d_lo:.9g}, {d_hi:.9g}] m for limits "
            f"[{lo / DEG:.4g}, {hi / DEG:.4g}] deg"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if tendon_delta(mid, theta_init, r) < delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def finger_tendon_deltas(
    geometry: HandGeometry, theta1: float, theta2: float, strict: bool = True
) -> dict[str, float]:
    """Extensor-side deltas for the three joints of one finger, keyed
    'joint1'/'joint2'/'joint3'. Flexor deltas are the negatives. Joint 2's
    value depends on theta2 only: the routing through the lower rotation
    centers decouples it from theta1 entirely."""
    limits1 = geometry.joint1_limits if strict else None
    limits2 = geometry.joint23_limits if strict else None
    r = geometry.joint_radius
    d1 = tendon_delta(theta1, JOINT1_CALIBRATION, r, limits1)
    d2 = tendon_delta(theta2, JOINT23_CALIBRATION, r, limits2)
    return {"joint1": d1, "joint2": d2, "joint3": d2}


def joint1_calibration() -> float:
    return JOINT1_CALIBRATION


def joint23_calibration() -> float:
    return JOINT23_CALIBRATION
