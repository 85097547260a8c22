"""Synthetic landmark-frame builders shared across the test suite.

Frames use normalized image coordinates (x right, y down). The canonical
hand points its fingers up (decreasing y) with the wrist below the
knuckle row, index on the left of the image and pinkie on the right.
"""

import math

import numpy as np

from rotograb.teleop import DIGIT_BASE, LandmarkFrame

WRIST_POS = (0.5, 0.8)
BASE_X = {"thumb": 0.30, "index": 0.38, "middle": 0.46, "ring": 0.54, "pinkie": 0.62}
BASE_Y = 0.5
SEG = 0.06


def flat_hand(thumb_tip=None, t=0.0, conf=1.0) -> LandmarkFrame:
    """All digits straight up; optionally place the thumb tip explicitly."""
    pts = np.zeros((21, 3))
    pts[0] = (*WRIST_POS, 0.0)
    for finger, base in DIGIT_BASE.items():
        x = BASE_X[finger]
        for k in range(4):
            pts[base + k] = (x, BASE_Y - SEG * k, 0.0)
    if thumb_tip is not None:
        pts[4] = (thumb_tip[0], thumb_tip[1], 0.0)
    return LandmarkFrame(timestamp=t, points=pts, confidence=conf)


def collinear_digit_hand(t=0.0, conf=1.0) -> LandmarkFrame:
    """Every digit collinear with the wrist: flexion exactly zero
    everywhere (proximal included)."""
    pts = np.zeros((21, 3))
    pts[0] = (*WRIST_POS, 0.0)
    for finger, base in DIGIT_BASE.items():
        # ray from the wrist through this digit's base, extended per segment
        bx, by = BASE_X[finger], BASE_Y
        direction = np.array([bx - WRIST_POS[0], by - WRIST_POS[1]])
        direction = direction / np.linalg.norm(direction)
        for k in range(4):
            p = np.array([bx, by]) + SEG * k * direction
            pts[base + k] = (p[0], p[1], 0.0)
    return LandmarkFrame(timestamp=t, points=pts, confidence=conf)


def bent_proximal_hand(finger: str, angle: float, t=0.0, conf=1.0) -> LandmarkFrame:
    """One digit straight from the wrist except a bend of `angle` at its
    first knuckle; the rest of the hand is collinear."""
    frame = collinear_digit_hand(t=t, conf=conf)
    pts = frame.points.copy()
    base = DIGIT_BASE[finger]
    bx, by = BASE_X[finger], BASE_Y
    inbound = np.array([bx - WRIST_POS[0], by - WRIST_POS[1]])
    inbound = inbound / np.linalg.norm(inbound)
    c, s = math.cos(-angle), math.sin(-angle)
    outbound = np.array([c * inbound[0] - s * inbound[1], s * inbound[0] + c * inbound[1]])
    for k in range(1, 4):
        p = np.array([bx, by]) + SEG * k * outbound
        pts[base + k] = (p[0], p[1], 0.0)
    return LandmarkFrame(timestamp=t, points=pts, confidence=conf)


def random_hand(rng: np.random.Generator, t=0.0, conf=1.0) -> LandmarkFrame:
    """Landmarks drawn well apart (no degenerate segments): a plausible but
    randomly bent hand."""
    pts = np.zeros((21, 3))
    pts[0] = (*WRIST_POS, 0.0)
    for finger, base in DIGIT_BASE.items():
        x = BASE_X[finger]
        angle = math.pi / 2
        px, py = x, BASE_Y
        pts[base] = (px, py, rng.uniform(-0.05, 0.05))
        for k in range(1, 4):
            angle -= rng.uniform(0.0, math.pi / 3)
            px += SEG * math.cos(angle)
            py -= SEG * math.sin(angle)
            pts[base + k] = (px, py, rng.uniform(-0.05, 0.05))
    return LandmarkFrame(timestamp=t, points=pts, confidence=conf)


def adversarial_frame(rng: np.random.Generator, t=0.0) -> LandmarkFrame:
    """Anything-goes frames: coincident points, huge coordinates, zero palm
    width; only finiteness is guaranteed."""
    kind = rng.integers(0, 4)
    if kind == 0:
        pts = rng.uniform(-10.0, 10.0, size=(21, 3))
    elif kind == 1:
        pts = np.zeros((21, 3))  # everything coincident
    elif kind == 2:
        pts = rng.uniform(0.0, 1.0, size=(21, 3))
        pts[rng.integers(0, 21)] = pts[rng.integers(0, 21)]  # duplicates
    else:
        pts = rng.normal(0.0, 1e6, size=(21, 3))  # absurd scale
    return LandmarkFrame(timestamp=t, points=pts, confidence=float(rng.uniform(0, 1)))
