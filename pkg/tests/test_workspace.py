"""Workspace sampling and projected-area measurement.

The O(n^3) brute-force hull and the Monte-Carlo membership estimate in
tests/oracles.py are the independent references for the hull area.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import brute_hull_area, monte_carlo_hull_area
from rotograb import (
    FINGERS,
    UnknownFingerError,
    WorkspaceCloud,
    cloud_area,
    cloud_from_csv,
    cloud_to_csv,
    finger_fk,
    projected_area,
    sample_workspace,
    workspace_report,
)

DEG = math.pi / 180.0


def test_grid_shapes(geometry):
    cloud = sample_workspace(geometry, "index", resolution=7)
    assert cloud.samples.shape == (49, 6)
    assert cloud.plate_angles == (0.0,)
    assert cloud.points.shape == (49, 3)
    assert cloud.projection.shape == (49, 2)


def test_thumb_sweeps_the_plate(geometry):
    cloud = sample_workspace(geometry, "thumb", resolution=5)
    assert cloud.samples.shape == (125, 6)
    plates = sorted(set(cloud.samples[:, 0]))
    assert plates[0] == pytest.approx(geometry.plate_limits[0])
    assert plates[-1] == pytest.approx(geometry.plate_limits[1])
    assert len(plates) == 5


def test_samples_match_forward_kinematics(geometry):
    cloud = sample_workspace(geometry, "middle", resolution=4)
    for row in cloud.samples[:8]:
        plate, t1, t2 = row[0], row[1], row[2]
        tip = finger_fk(geometry, "middle", t1, t2, plate)[-1]
        assert row[3:6] == pytest.approx(tip, abs=1e-12)


def test_samples_cover_the_joint_limits(geometry):
    cloud = sample_workspace(geometry, "ring", resolution=6)
    assert cloud.samples[:, 1].min() == pytest.approx(geometry.joint1_limits[0])
    assert cloud.samples[:, 1].max() == pytest.approx(geometry.joint1_limits[1])
    assert cloud.samples[:, 2].min() == pytest.approx(geometry.joint23_limits[0])
    assert cloud.samples[:, 2].max() == pytest.approx(geometry.joint23_limits[1])


def test_sampling_input_validation(geometry):
    with pytest.raises(UnknownFingerError):
        sample_workspace(geometry, "toe")
    with pytest.raises(ValueError):
        sample_workspace(geometry, "index", resolution=1)
    with pytest.raises(ValueError):
        sample_workspace(geometry, "index", plate_angles=(2.0,))


def test_square_area():
    square = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 1.0]])
    result = projected_area(square)
    assert not result.degenerate
    assert result.area == pytest.approx(4.0, abs=1e-12)
    assert len(result.hull) == 4  # interior point excluded


@given(
    pts=arrays(
        float,
        st.tuples(st.integers(min_value=3, max_value=40), st.just(2)),
        elements=st.floats(min_value=-1.0, max_value=1.0, width=32),
    )
)
@settings(max_examples=60, deadline=None)
def test_hull_area_matches_brute_force(pts):
    ours = projected_area(pts)
    reference = brute_hull_area(pts)
    assert ours.area == pytest.approx(reference, abs=1e-9)


def test_hull_area_matches_monte_carlo(geometry):
    cloud = sample_workspace(geometry, "index", resolution=12)
    exact = cloud_area(cloud).area
    estimate = monte_carlo_hull_area(cloud.projection, n_samples=200_000, seed=7)
    assert estimate == pytest.approx(exact, rel=0.03)


def test_degenerate_projections():
    too_few = projected_area(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert too_few.degenerate and too_few.area == 0.0
    collinear = projected_area(np.array([[float(i), 2.0 * i] for i in range(10)]))
    assert collinear.degenerate and collinear.area == 0.0
    repeated = projected_area(np.zeros((5, 2)))
    assert repeated.degenerate and repeated.area == 0.0


def test_report_thumb_dominates(geometry):
    report, clouds = workspace_report(geometry, resolution=9)
    assert set(report.areas) == set(FINGERS)
    assert not any(report.degenerate.values())
    ranked = report.ranked()
    assert ranked[0][0] == "thumb"
    others = [area for finger, area in report.areas.items() if finger != "thumb"]
    assert report.areas["thumb"] > 3.0 * max(others)
    assert all(area > 0.0 for area in report.areas.values())
    # ranked() sorts by area, largest first
    values = [area for _, area in ranked]
    assert values == sorted(values, reverse=True)
    assert set(clouds) == set(FINGERS)


def test_mirrored_fingers_have_equal_areas(geometry):
    report, _ = workspace_report(geometry, resolution=9)
    assert report.areas["index"] == pytest.approx(report.areas["pinkie"], rel=1e-9)
    assert report.areas["middle"] == pytest.approx(report.areas["ring"], rel=1e-9)


def test_csv_round_trip(geometry):
    cloud = sample_workspace(geometry, "pinkie", resolution=4)
    text = cloud_to_csv(cloud)
    assert text.splitlines()[0] == "finger,plate_deg,theta1_deg,theta2_deg,x,y,z"
    back = cloud_from_csv(text)
    assert back.finger == "pinkie"
    assert back.samples.shape == cloud.samples.shape
    # degrees at 6 decimals, meters at 9 decimals
    assert back.samples[:, 0:3] == pytest.approx(cloud.samples[:, 0:3], abs=1e-6 * DEG)
    assert back.samples[:, 3:6] == pytest.approx(cloud.samples[:, 3:6], abs=1e-9)


def test_csv_rejects_garbage():
    with pytest.raises(ValueError, match="header"):
        cloud_from_csv("a,b\n1,2\n")
    with pytest.raises(ValueError, match="no data rows"):
        cloud_from_csv("finger,plate_deg,theta1_deg,theta2_deg,x,y,z\n")
    good = "finger,plate_deg,theta1_deg,theta2_deg,x,y,z\n"
    with pytest.raises(ValueError, match="mixed fingers"):
        cloud_from_csv(good + "index,0,0,0,0,0,0\nring,0,0,0,0,0,0\n")


def test_cloud_shape_validation():
    with pytest.raises(ValueError):
        WorkspaceCloud("index", 2, (0.0,), np.zeros((4, 5)))
