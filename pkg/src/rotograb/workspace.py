"""Fingertip workspace sampling and projected-area measurement.

A workspace cloud is the set of fingertip positions swept over a grid of
joint angles. Fingers are sampled at a fixed plate angle; the thumb's
reachable set is the union over a sweep of plate angles, since the rotating
plate carries the whole thumb with it.

Areas are measured on the x-y projection (top view, world frame) of the
convex hull of the cloud. A cloud whose projection is degenerate (fewer
than 3 distinct points, or collinear) has zero area and is flagged rather
than treated as an error.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import UnknownFingerError
from .finger import finger_fk
from .geometry import DEG, FINGERS, HandGeometry, check_finger

CSV_HEADER = "finger,plate_deg,theta1_deg,theta2_deg,x,y,z"


@dataclass(frozen=True)
class WorkspaceCloud:
    """Sampled fingertip positions for one finger.

    rows: (n, 6) array with columns matching CSV_HEADER minus the finger
    name: plate angle, theta1, theta2 (all radians here), then x, y, z in
    meters. Kept flat so the cloud round-trips through CSV without loss
    of which sample produced which point.
    """

    finger: str
    resolution: int
    plate_angles: tuple[float, ...]
    samples: np.ndarray  # (n, 6): plate, theta1, theta2, x, y, z

    def __post_init__(self) -> None:
        check_finger(self.finger)
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 6:
            raise ValueError("samples must be an (n, 6) array")
        object.__setattr__(self, "samples", arr)

    @property
    def points(self) -> np.ndarray:
        """(n, 3) fingertip positions in the world frame, meters."""
        return self.samples[:, 3:6]

    @property
    def projection(self) -> np.ndarray:
        """(n, 2) top-view (x, y) projection of the fingertip positions."""
        return self.samples[:, 3:5]


def _grid(limits: tuple[float, float], resolution: int) -> np.ndarray:
    lo, hi = limits
    return np.linspace(lo, hi, resolution)


def sample_workspace(
    geometry: HandGeometry,
    finger: str,
    resolution: int = 25,
    plate_angles: tuple[float, ...] | None = None,
) -> WorkspaceCloud:
    """Sweep the finger's joint grid and collect fingertip positions.

    resolution is the number of samples per joint axis. For non-thumb
    fingers the plate angle is irrelevant and a single 0.0 entry is used
    unless the caller overrides it. For the thumb the default sweep covers
    the full plate range at the same resolution.
    """
    check_finger(finger)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if plate_angles is None:
        if finger == "thumb":
            plate_angles = tuple(_grid(geometry.plate_limits, resolution))
        else:
            plate_angles = (0.0,)
    else:
        plate_angles = tuple(float(p) for p in plate_angles)
        lo, hi = geometry.plate_limits
        for p in plate_angles:
            if p < lo - 1e-12 or p > hi + 1e-12:
                raise ValueError(f"plate angle {p} outside limits [{lo}, {hi}]")

    t1 = _grid(geometry.joint1_limits, resolution)
    t2 = _grid(geometry.joint23_limits, resolution)
    rows = np.empty((len(plate_angles) * resolution * resolution, 6))
    i = 0
    for plate in plate_angles:
        for a in t1:
            for b in t2:
                tip = finger_fk(geometry, finger, a, b, plate)[-1]
                rows[i, 0] = plate
                rows[i, 1] = a
                rows[i, 2] = b
                rows[i, 3:6] = tip
                i += 1
    return WorkspaceCloud(
        finger=finger,
        resolution=resolution,
        plate_angles=tuple(plate_angles),
        samples=rows,
    )


@dataclass(frozen=True)
class HullArea:
    """Projected-area result: area in m^2, degeneracy flag, and hull
    vertices (counterclockwise (k, 2) array; empty when degenerate)."""

    area: float
    degenerate: bool
    hull: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))


def projected_area(points_2d: np.ndarray) -> HullArea:
    """Convex-hull area of a 2-D point set.

    Degenerate inputs (under 3 points, or all points collinear) report
    area 0.0 with the flag set instead of raising.
    """
    pts = np.asarray(points_2d, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected an (n, 2) array")
    if len(pts) < 3:
        return HullArea(area=0.0, degenerate=True)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return HullArea(area=0.0, degenerate=True)
    # For 2-D inputs, ConvexHull.volume is the enclosed area.
    return HullArea(
        area=float(hull.volume),
        degenerate=False,
        hull=pts[hull.vertices],
    )


def cloud_area(cloud: WorkspaceCloud) -> HullArea:
    return projected_area(cloud.projection)


@dataclass(frozen=True)
class WorkspaceReport:
    """Per-finger projected areas (m^2) plus the resolution used."""

    resolution: int
    areas: dict[str, float]
    degenerate: dict[str, bool]

    def ranked(self) -> list[tuple[str, float]]:
        return sorted(self.areas.items(), key=lambda kv: kv[1], reverse=True)


def workspace_report(
    geometry: HandGeometry, resolution: int = 25
) -> tuple[WorkspaceReport, dict[str, WorkspaceCloud]]:
    """Sample every finger and measure projected areas.

    Returns the report plus the raw clouds so callers can export them.
    """
    clouds: dict[str, WorkspaceCloud] = {}
    areas: dict[str, float] = {}
    degenerate: dict[str, bool] = {}
    for finger in FINGERS:
        cloud = sample_workspace(geometry, finger, resolution=resolution)
        result = cloud_area(cloud)
        clouds[finger] = cloud
        areas[finger] = result.area
        degenerate[finger] = result.degenerate
    report = WorkspaceReport(resolution=resolution, areas=areas, degenerate=degenerate)
    return report, clouds


def cloud_to_csv(cloud: WorkspaceCloud) -> str:
    """Serialize a cloud with angles in degrees and positions in meters."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in cloud.samples:
        writer.writerow(
            [
                cloud.finger,
                f"{row[0] / DEG:.6f}",
                f"{row[1] / DEG:.6f}",
                f"{row[2] / DEG:.6f}",
                f"{row[3]:.9f}",
                f"{row[4]:.9f}",
                f"{row[5]:.9f}",
            ]
        )
    return buf.getvalue()


def cloud_from_csv(text: str) -> WorkspaceCloud:
    """Inverse of cloud_to_csv. The finger column must be uniform."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty workspace CSV") from None
    if header != CSV_HEADER.split(","):
        raise ValueError(f"unexpected workspace CSV header: {header!r}")
    finger: str | None = None
    rows: list[list[float]] = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != 7:
            raise ValueError(f"line {lineno}: expected 7 fields, got {len(rec)}")
        if finger is None:
            finger = rec[0]
        elif rec[0] != finger:
            raise ValueError(f"line {lineno}: mixed fingers in one cloud")
        plate, t1, t2 = (float(rec[i]) * DEG for i in (1, 2, 3))
        x, y, z = (float(rec[i]) for i in (4, 5, 6))
        rows.append([plate, t1, t2, x, y, z])
    if finger is None or not rows:
        raise ValueError("workspace CSV has no data rows")
    if finger not in FINGERS:
        raise UnknownFingerError(f"unknown finger {finger!r}")
    arr = np.array(rows)
    plates = tuple(sorted(set(arr[:, 0])))
    # Resolution is not recoverable exactly; infer per-axis sample count.
    n_t1 = len(set(np.round(arr[:, 1], 12)))
    return WorkspaceCloud(
        finger=finger, resolution=max(n_t1, 2), plate_angles=plates, samples=arr
    )
