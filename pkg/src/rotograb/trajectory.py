"""Joint-angle trajectories and their CSV file format.

File format: optional ``# key: value`` metadata comment lines, then the
header

    t,thumb_j1,thumb_j2,index_j1,index_j2,middle_j1,middle_j2,ring_j1,ring_j2,pinkie_j1,pinkie_j2,plate

with time in seconds and angles in degrees. Timestamps must be strictly
increasing. Recognized metadata keys: name, source, nominal_rate (Hz);
other keys are kept verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import TrajectoryError
from .geometry import DEG, FINGERS, JointState

TRAJECTORY_HEADER = "t," + ",".join(f"{f}_j{j}" for f in FINGERS for j in (1, 2)) + ",plate"


@dataclass(frozen=True)
class Trajectory:
    """Ordered (time, JointState) samples with provenance metadata."""

    samples: tuple[tuple[float, JointState], ...]
    name: str = ""
    source: str = ""
    nominal_rate: float | None = None
    extra_metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        times = [t for t, _ in self.samples]
        for a, b in zip(times, times[1:]):
            if not b > a:
                raise TrajectoryError(
                    f"timestamps must be strictly increasing (got {a} then {b})"
                )

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        if len(self.samples) < 2:
            return 0.0
        return self.samples[-1][0] - self.samples[0][0]

    @classmethod
    def from_states(
        cls,
        times: Iterable[float],
        states: Iterable[JointState],
        **metadata,
    ) -> "Trajectory":
        return cls(tuple(zip([float(t) for t in times], states)), **metadata)


def _parse_metadata(lines: list[str]) -> dict:
    meta: dict = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if ":" in body:
            key, _, value = body.partition(":")
            meta[key.strip()] = value.strip()
    return meta


def parse_trajectory(text: str, origin: str = "<string>") -> Trajectory:
    """Parse trajectory CSV text; rejects bad headers, bad numbers, and
    non-monotone time. `origin` names the source in error messages."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = [ln for ln in lines if not ln.startswith("#")]
    if not rows or rows[0].strip() != TRAJECTORY_HEADER:
        raise TrajectoryError(
            f"{origin}: first non-comment line must be the header {TRAJECTORY_HEADER!r}"
        )
    meta = _parse_metadata(comments)
    samples: list[tuple[float, JointState]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        parts = row.split(",")
        if len(parts) != 12:
            raise TrajectoryError(f"{origin}:{lineno}: expected 12 fields, got {len(parts)}")
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise TrajectoryError(f"{origin}:{lineno}: bad number: {exc}") from exc
        if not all(math.isfinite(v) for v in values):
            raise TrajectoryError(f"{origin}:{lineno}: non-finite value")
        state = JointState.from_vector([v * DEG for v in values[1:]])
        samples.append((values[0], state))
    rate = meta.pop("nominal_rate", None)
    try:
        nominal_rate = float(rate) if rate is not None else None
    except ValueError as exc:
        raise TrajectoryError(f"{origin}: nominal_rate: bad number {rate!r}") from exc
    return Trajectory(
        tuple(samples),
        name=meta.pop("name", ""),
        source=meta.pop("source", ""),
        nominal_rate=nominal_rate,
        extra_metadata=meta,
    )


def load_trajectory(path) -> Trajectory:
    """Read and parse a trajectory CSV file."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise TrajectoryError(f"cannot read {path}: {exc}") from exc
    return parse_trajectory(raw, origin=str(path))


def save_trajectory(traj: Trajectory, path) -> None:
    lines: list[str] = []
    if traj.name:
        lines.append(f"# name: {traj.name}")
    if traj.source:
        lines.append(f"# source: {traj.source}")
    if traj.nominal_rate is not None:
        lines.append(f"# nominal_rate: {traj.nominal_rate:g}")
    for key, value in traj.extra_metadata.items():
        lines.append(f"# {key}: {value}")
    lines.append(TRAJECTORY_HEADER)
    for t, state in traj.samples:
        angles = ",".join(f"{v / DEG:.6f}" for v in state.as_vector())
        lines.append(f"{t:.6f},{angles}")
    Path(path).write_text("\n".join(lines) + "\n")
