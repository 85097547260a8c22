"""Top-level acceptance checks.

Each test is one headline guarantee of the package, checked at full
advertised tolerance; conftest prints a PASS/FAIL line per test. The
whole module runs against the library alone (no frontend, no network
beyond loopback).
"""

import math
import threading
import time

import numpy as np
import pytest

from oracles import monte_carlo_hull_area, tendon_vector_geometric
from rotograb import (
    BusBusy,
    HandSession,
    JointState,
    MockServoBus,
    RewardSpec,
    Retargeter,
    Source,
    ThumbMode,
    coupled_extensor_delta,
    coupled_spool_rotations,
    default_geometry,
    default_profile,
    finger_tendon_deltas,
    hand_fk,
    invert_tendon_delta,
    joint_to_motor,
    load_trajectory,
    plate_tendon_delta,
    play_trajectory,
    projected_area,
    rotation_reward,
    tendon_delta,
    tendon_vector,
    thumb_decoupling_check,
    workspace_report,
)
from rotograb.geometry import FINGERS, JOINT1_CALIBRATION, JOINT23_CALIBRATION
from synth import adversarial_frame, flat_hand

DEG = math.pi / 180.0
GEOMETRY = default_geometry()


def hand_with_offset(offset, t=0.0):
    """Flat hand whose thumb tip sits at the given normalized lateral
    offset (negative = index side)."""
    return flat_hand(thumb_tip=(0.5 + 0.24 * offset, 0.6), t=t)


def test_tendon_vector_matches_geometric_construction():
    r = GEOMETRY.joint_radius
    start = time.perf_counter()
    for theta in np.linspace(-45.0 * DEG, 90.0 * DEG, 10_000):
        ours = tendon_vector(theta, r)
        ref = tendon_vector_geometric(theta, r)
        assert abs(ours[0] - ref[0]) <= 1e-12
        assert abs(ours[1] - ref[1]) <= 1e-12
    assert time.perf_counter() - start < 1.0


def test_tendon_deltas_vanish_at_rest_pose():
    r = GEOMETRY.joint_radius
    assert tendon_delta(JOINT1_CALIBRATION, JOINT1_CALIBRATION, r) == 0.0
    assert tendon_delta(JOINT23_CALIBRATION, JOINT23_CALIBRATION, r) == 0.0


def test_tendon_inversion_round_trip():
    rng = np.random.default_rng(314)
    r = GEOMETRY.joint_radius
    for _ in range(500):
        theta = rng.uniform(*GEOMETRY.joint1_limits)
        delta = tendon_delta(theta, JOINT1_CALIBRATION, r)
        back = invert_tendon_delta(delta, JOINT1_CALIBRATION, r, GEOMETRY.joint1_limits)
        assert abs(back - theta) < 1e-6
    for _ in range(500):
        theta = rng.uniform(*GEOMETRY.joint23_limits)
        delta = tendon_delta(theta, JOINT23_CALIBRATION, r)
        back = invert_tendon_delta(delta, JOINT23_CALIBRATION, r, GEOMETRY.joint23_limits)
        assert abs(back - theta) < 1e-6


def test_plate_tendon_deltas_cancel_exactly():
    for theta in np.linspace(-65.0 * DEG, 65.0 * DEG, 2_001):
        left, right = plate_tendon_delta(float(theta), GEOMETRY)
        assert abs(left + right) <= 1e-12


def test_joint_flexion_decoupled_from_other_axes():
    # the shared joint-2/3 drive must not feel joint 1 at all
    theta2_grid = np.linspace(*GEOMETRY.joint23_limits, 25)
    theta1_grid = np.linspace(*GEOMETRY.joint1_limits, 25)
    for theta2 in theta2_grid:
        reference = finger_tendon_deltas(GEOMETRY, float(theta1_grid[0]), float(theta2))
        for theta1 in theta1_grid[1:]:
            probe = finger_tendon_deltas(GEOMETRY, float(theta1), float(theta2))
            assert probe["joint2"] == reference["joint2"]
            assert probe["joint3"] == reference["joint3"]
    # and the thumb's own tendons must not feel the plate
    rng = np.random.default_rng(5)
    plates = np.linspace(*GEOMETRY.plate_limits, 100)
    flexions = [
        (rng.uniform(*GEOMETRY.joint1_limits), rng.uniform(*GEOMETRY.joint23_limits))
        for _ in range(100)
    ]
    for plate in plates:
        for theta1, theta2 in flexions:
            assert thumb_decoupling_check(float(plate), 0.0, theta1, theta2, GEOMETRY)


def test_coupled_extensor_doubles_flexor_travel():
    rng = np.random.default_rng(99)
    for _ in range(200):
        theta2 = rng.uniform(*GEOMETRY.joint23_limits)
        single = tendon_delta(theta2, JOINT23_CALIBRATION, GEOMETRY.joint_radius)
        assert coupled_extensor_delta(GEOMETRY, theta2) == 2.0 * single
        flexor_rot, extensor_rot = coupled_spool_rotations(GEOMETRY, theta2)
        assert flexor_rot == extensor_rot


def test_straight_finger_spans_design_length():
    points = hand_fk(GEOMETRY, JointState((0.0,) * 5, (0.0,) * 5, 0.0))
    for finger in FINGERS:
        chain = points[finger]
        span = float(np.linalg.norm(chain[-1] - chain[0]))
        assert abs(span - 0.096) <= 1e-9, finger


def test_thumb_workspace_dominates_fingers():
    start = time.perf_counter()
    report, _ = workspace_report(GEOMETRY, resolution=25)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    assert not any(report.degenerate.values())
    for finger in ("index", "middle", "ring", "pinkie"):
        assert report.areas["thumb"] > report.areas[finger], finger


def test_hull_area_matches_monte_carlo():
    for k in range(10):
        rng = np.random.default_rng(2024 + k)
        pts = rng.standard_normal((int(rng.integers(10, 40)), 2))
        ours = projected_area(pts)
        assert not ours.degenerate
        ref = monte_carlo_hull_area(pts, n_samples=600_000, seed=k)
        assert ours.area == pytest.approx(ref, rel=0.01)


def test_reward_band_breakpoints():
    spec = RewardSpec()
    assert rotation_reward(1.0, spec) == 1.0
    assert rotation_reward(3.0, spec) == 1.0
    assert rotation_reward(2.0, spec) == 1.0
    assert rotation_reward(0.0, spec) == 0.0
    assert rotation_reward(4.0, spec) == 0.0
    assert rotation_reward(0.5, spec) == pytest.approx(0.5)
    assert rotation_reward(3.5, spec) == pytest.approx(0.5)
    assert rotation_reward(0.75, spec) == pytest.approx(0.75)
    assert rotation_reward(3.25, spec) == pytest.approx(0.75)
    assert rotation_reward(-1.0, spec) == 0.0
    assert rotation_reward(5.0, spec) == 0.0


def test_retargeting_never_exceeds_joint_limits():
    rt = Retargeter(geometry=GEOMETRY, profile=default_profile(GEOMETRY))
    rng = np.random.default_rng(11)
    for i in range(10_000):
        frame = adversarial_frame(rng, t=i * 0.01)
        result = rt.ingest(frame)
        result.state.validate(GEOMETRY)  # raises if any joint left its range


def test_thumb_mode_stable_under_band_interior_noise():
    profile = default_profile(GEOMETRY)
    rng = np.random.default_rng(21)

    # once engaged, noise between the release and enter radii cannot
    # shake the mode loose
    rt = Retargeter(geometry=GEOMETRY, profile=profile)
    rt.ingest(hand_with_offset(-0.5, t=0.0))
    assert rt.mode is ThumbMode.RIGHT
    for i in range(200):
        offset = rng.uniform(-0.14, -0.08)
        rt.ingest(hand_with_offset(offset, t=1.0 + i))
        assert rt.mode is ThumbMode.RIGHT

    # and from neutral, sub-threshold noise on either side never engages
    rt = Retargeter(geometry=GEOMETRY, profile=profile)
    assert rt.mode is ThumbMode.MIDDLE
    for i in range(200):
        offset = rng.uniform(-0.14, 0.14)
        rt.ingest(hand_with_offset(offset, t=float(i)))
        assert rt.mode is ThumbMode.MIDDLE


def test_snapshot_stream_consistent_under_concurrency():
    session = HandSession(GEOMETRY)
    session.acquire(Source.MANUAL, "writer")
    errors = []
    committed = []

    def writer():
        try:
            for i in range(300):
                snap = session.apply_manual(
                    "writer",
                    joints={"index": (None, (i % 90) * DEG)},
                    plate_theta=((i % 130) - 65) * DEG,
                )
                committed.append(snap.seq)
        except Exception as exc:  # pragma: no cover - failure reporting
            errors.append(exc)

    def reader():
        try:
            last = -1
            for _ in range(1000):
                snap = session.snapshot()
                assert snap.seq >= last
                last = snap.seq
                snap.state.validate(GEOMETRY)
                expected = joint_to_motor(snap.state, GEOMETRY)
                assert [c.rotation for c in snap.motors] == [
                    c.rotation for c in expected
                ]
        except Exception as exc:  # pragma: no cover - failure reporting
            errors.append(exc)

    readers = [threading.Thread(target=reader) for _ in range(3)]
    for t in readers:
        t.start()
    writer_thread = threading.Thread(target=writer)
    writer_thread.start()
    writer_thread.join(timeout=30)
    for t in readers:
        t.join(timeout=30)
    assert not errors
    assert len(committed) == 300
    assert all(b > a for a, b in zip(committed, committed[1:]))
    session.release("writer")


def test_second_writer_is_rejected():
    session = HandSession(GEOMETRY)
    session.acquire(Source.MANUAL, "first")
    with pytest.raises(BusBusy):
        session.acquire(Source.MANUAL, "second")
    with pytest.raises(BusBusy):
        session.apply_manual("second", joints={"index": (None, 0.3)})
    # the holder keeps working
    session.apply_manual("first", joints={"index": (None, 0.3)})
    session.release("first")
    session.acquire(Source.MANUAL, "second")
    session.release("second")


def test_playback_period_tracks_schedule(ball_rolling_path):
    traj = load_trajectory(ball_rolling_path)
    assert len(traj) == 100
    nominal_period = traj.samples[1][0] - traj.samples[0][0]
    assert nominal_period == pytest.approx(0.02)
    report = play_trajectory(traj, MockServoBus(), GEOMETRY, realtime=True)
    assert report.samples_commanded == 100
    assert report.mean_period_deviation < 0.05 * nominal_period
