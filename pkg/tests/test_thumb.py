"""Plate-rotation tendon kinematics and the thumb decoupling guarantee.

The cosine-theorem triangle construction in tests/oracles.py is the
independent reference for the rotation tendon length.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import plate_tendon_length_triangle
from rotograb import (
    LimitViolation,
    PlateState,
    ThumbMode,
    classify_mode,
    plate_tendon_delta,
    plate_tendon_length,
    preset_angle,
    thumb_decoupling_check,
    thumb_tendon_deltas,
)
from rotograb.thumb import plate_angle_range_deg

DEG = math.pi / 180.0

plate_angles = st.floats(min_value=-65.0 * DEG, max_value=65.0 * DEG)
theta1_angles = st.floats(min_value=-45.0 * DEG, max_value=90.0 * DEG)
theta2_angles = st.floats(min_value=0.0, max_value=90.0 * DEG)


def test_plate_length_reference_values(geometry):
    assert plate_tendon_length(0.0, geometry) == pytest.approx(
        0.04426201214151321, abs=1e-15
    )
    assert plate_tendon_length(65.0 * DEG, geometry) == pytest.approx(
        0.025541065846554356, abs=1e-15
    )
    assert plate_tendon_length(-65.0 * DEG, geometry) == pytest.approx(
        0.061675602936770386, abs=1e-15
    )


def test_plate_delta_reference_values(geometry):
    left, right = plate_tendon_delta(65.0 * DEG, geometry)
    assert right == pytest.approx(-0.01872094629495885, abs=1e-15)
    assert left == pytest.approx(0.01872094629495885, abs=1e-15)
    left, right = plate_tendon_delta(-65.0 * DEG, geometry)
    assert right == pytest.approx(0.01741359079525718, abs=1e-15)
    assert left == pytest.approx(-0.01741359079525718, abs=1e-15)


def test_calibration_pose_has_zero_deltas(geometry):
    left, right = plate_tendon_delta(0.0, geometry)
    assert left == 0.0
    assert right == 0.0


@given(theta=plate_angles)
def test_plate_length_matches_triangle_oracle(theta, geometry):
    assert plate_tendon_length(theta, geometry) == pytest.approx(
        plate_tendon_length_triangle(theta, geometry.r_palm, geometry.r_plate, geometry.gamma),
        abs=1e-12,
    )


@given(theta=plate_angles)
def test_left_right_antisymmetry(theta, geometry):
    left, right = plate_tendon_delta(theta, geometry)
    assert left == pytest.approx(-right, abs=1e-12)


def test_rotation_tendon_monotone_over_range(geometry):
    lo, hi = geometry.plate_limits
    thetas = [lo + (hi - lo) * i / 200.0 for i in range(201)]
    lengths = [plate_tendon_length(t, geometry) for t in thetas]
    assert all(a > b for a, b in zip(lengths, lengths[1:]))


def test_plate_length_strict_mode(geometry):
    with pytest.raises(LimitViolation):
        plate_tendon_length(80.0 * DEG, geometry)
    assert math.isfinite(plate_tendon_length(80.0 * DEG, geometry, strict=False))


@given(pa=plate_angles, pb=plate_angles, t1=theta1_angles, t2=theta2_angles)
@settings(max_examples=100)
def test_thumb_flexion_decoupled_from_plate(pa, pb, t1, t2, geometry):
    assert thumb_decoupling_check(pa, pb, t1, t2, geometry)


def test_thumb_deltas_identical_across_plate_grid(geometry):
    lo, hi = geometry.plate_limits
    reference = thumb_tendon_deltas(geometry, 20.0 * DEG, 40.0 * DEG, 0.0)
    for i in range(21):
        plate = lo + (hi - lo) * i / 20.0
        assert thumb_tendon_deltas(geometry, 20.0 * DEG, 40.0 * DEG, plate) == reference


def test_thumb_deltas_check_plate_range(geometry):
    with pytest.raises(LimitViolation):
        thumb_tendon_deltas(geometry, 0.0, 0.0, plate_theta=90.0 * DEG)


def test_preset_angles(geometry):
    lo, hi = geometry.plate_limits
    assert preset_angle(ThumbMode.LEFT, geometry) == lo
    assert preset_angle(ThumbMode.MIDDLE, geometry) == 0.0
    assert preset_angle(ThumbMode.RIGHT, geometry) == hi
    assert plate_angle_range_deg(geometry) == pytest.approx((-65.0, 65.0))


def test_classify_mode_nearest_preset(geometry):
    assert classify_mode(-60.0 * DEG, geometry) is ThumbMode.LEFT
    assert classify_mode(-5.0 * DEG, geometry) is ThumbMode.MIDDLE
    assert classify_mode(5.0 * DEG, geometry) is ThumbMode.MIDDLE
    assert classify_mode(60.0 * DEG, geometry) is ThumbMode.RIGHT


@given(mode=st.sampled_from(ThumbMode))
def test_classify_mode_fixes_presets(mode, geometry):
    assert classify_mode(preset_angle(mode, geometry), geometry) is mode


@given(theta=plate_angles)
def test_classify_mode_total(theta, geometry):
    assert classify_mode(theta, geometry) in ThumbMode


def test_plate_state(geometry):
    st_mid = PlateState.from_mode(ThumbMode.MIDDLE, geometry)
    assert st_mid.theta == 0.0
    st_near = PlateState.from_angle(50.0 * DEG, geometry)
    assert st_near.mode is ThumbMode.RIGHT
    with pytest.raises(LimitViolation):
        PlateState.from_angle(90.0 * DEG, geometry)


def test_mode_wire_labels():
    assert ThumbMode.LEFT.value == "L"
    assert ThumbMode.MIDDLE.value == "M"
    assert ThumbMode.RIGHT.value == "R"
