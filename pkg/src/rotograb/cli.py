"""Command-line front end.

Boundary conventions: angles in degrees, lengths in millimeters; internals
are radians and meters. Output is deterministic: fixed row order, fixed
column order, C-locale float formatting, so identical invocations produce
byte-identical bytes.

Exit codes: 0 success, 2 usage error, 3 domain error (bad values, limit
violations, failed validation), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .actuation import save_command_log
from .errors import RotograbError
from .finger import finger_fk, finger_tendon_deltas, invert_tendon_delta
from .geometry import (
    DEG,
    FINGERS,
    JOINT1_CALIBRATION,
    JOINT23_CALIBRATION,
    HandGeometry,
    default_geometry,
    load_geometry,
)
from .policy import RewardSpec, rotation_reward, validate_trajectory_fixture
from .thumb import plate_tendon_delta
from .trajectory import load_trajectory
from .workspace import cloud_to_csv, workspace_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

POINT_NAMES = ("base", "contact1", "contact2", "contact3", "tip")


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _emit_rows(rows: list[tuple], header: tuple[str, ...], fmt: str) -> None:
    """rows of (str | float) cells; floats formatted deterministically."""
    if fmt == "json":
        obj = [
            {k: (v if isinstance(v, str) else float(v)) for k, v in zip(header, row)}
            for row in rows
        ]
        print(json.dumps(obj, sort_keys=True))
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])
    sys.stdout.write(buf.getvalue())


def _load_geometry(args) -> HandGeometry:
    if args.config is None:
        return default_geometry()
    path = Path(args.config)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return load_geometry(path)


def _require_file(path_str: str) -> Path:
    path = Path(path_str)
    if not path.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    return path


# -- subcommands -----------------------------------------------------------


def _cmd_fk(args) -> int:
    g = _load_geometry(args)
    points = finger_fk(
        g, args.finger, args.theta1 * DEG, args.theta2 * DEG, args.plate * DEG
    )
    rows = [
        (name, p[0] * 1000.0, p[1] * 1000.0, p[2] * 1000.0)
        for name, p in zip(POINT_NAMES, points)
    ]
    _emit_rows(rows, ("point", "x_mm", "y_mm", "z_mm"), args.format)
    return EXIT_OK


def _cmd_tendon(args) -> int:
    g = _load_geometry(args)
    deltas = finger_tendon_deltas(g, args.theta1 * DEG, args.theta2 * DEG)
    rows = [
        ("joint1_delta_mm", deltas["joint1"] * 1000.0),
        ("joint2_delta_mm", deltas["joint2"] * 1000.0),
        ("joint3_delta_mm", deltas["joint3"] * 1000.0),
        ("motor_j1_deg", deltas["joint1"] / g.spool_radius_j1 / DEG),
        ("motor_j23_deg", deltas["joint2"] / g.spool_radius_j23_flexor / DEG),
    ]
    if args.plate is not None:
        left, right = plate_tendon_delta(args.plate * DEG, g)
        rows += [
            ("plate_left_delta_mm", left * 1000.0),
            ("plate_right_delta_mm", right * 1000.0),
            ("motor_plate_deg", right / g.plate_spool_radius / DEG),
        ]
    _emit_rows(rows, ("quantity", "value"), args.format)
    return EXIT_OK


def _cmd_invert(args) -> int:
    g = _load_geometry(args)
    if args.joint == 1:
        theta_init, limits = JOINT1_CALIBRATION, g.joint1_limits
    else:
        theta_init, limits = JOINT23_CALIBRATION, g.joint23_limits
    theta = invert_tendon_delta(args.delta_mm / 1000.0, theta_init, g.joint_radius, limits)
    _emit_rows([("theta_deg", theta / DEG)], ("quantity", "value"), args.format)
    return EXIT_OK


def _cmd_workspace(args) -> int:
    g = _load_geometry(args)
    report, clouds = workspace_report(g, resolution=args.resolution)
    rows = [
        (finger, report.areas[finger] * 1e6, str(report.degenerate[finger]).lower())
        for finger in FINGERS
    ]
    _emit_rows(rows, ("finger", "area_mm2", "degenerate"), args.format)
    if args.export_dir is not None:
        out = Path(args.export_dir)
        out.mkdir(parents=True, exist_ok=True)
        for finger, cloud in clouds.items():
            (out / f"workspace_{finger}.csv").write_text(cloud_to_csv(cloud))
    return EXIT_OK


def _cmd_play(args) -> int:
    from .actuation import MockServoBus, play_trajectory

    g = _load_geometry(args)
    traj = load_trajectory(_require_file(args.trajectory))
    bus = MockServoBus()
    report = play_trajectory(
        traj, bus, g, rate_scale=args.rate_scale, realtime=not args.no_realtime
    )
    if args.log is not None:
        save_command_log(bus.log, args.log)
    rows = [
        ("samples", float(report.samples_commanded)),
        ("duration_s", report.duration),
        ("mean_abs_schedule_deviation_s", report.mean_abs_schedule_deviation),
        ("max_abs_schedule_deviation_s", report.max_abs_schedule_deviation),
        ("mean_period_deviation_s", report.mean_period_deviation),
    ]
    _emit_rows(rows, ("quantity", "value"), args.format)
    return EXIT_OK


def _cmd_reward(args) -> int:
    spec = RewardSpec(
        band=(args.lo, args.hi), falloff_width=args.falloff, direction_sign=args.sign
    )
    value = rotation_reward(args.omega, spec)
    _emit_rows([("reward", value)], ("quantity", "value"), args.format)
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .service import serve

    g = _load_geometry(args)
    serve(
        g,
        host=args.host,
        ws_port=args.ws_port,
        tcp_port=args.tcp_port,
        tick_hz=args.tick,
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    g = _load_geometry(args)
    traj = load_trajectory(_require_file(args.trajectory))
    report = validate_trajectory_fixture(traj, g)
    rows: list[tuple] = [
        ("ok", str(report.ok).lower(), ""),
        ("samples", _fmt(report.sample_count), ""),
    ]
    for name, (lo, hi) in report.joint_ranges.items():
        rows.append((f"range_{name}_deg", lo / DEG, hi / DEG))
    for index, message in report.failures:
        rows.append(("failure", _fmt(index), message))
    _emit_rows(rows, ("quantity", "value", "detail"), args.format)
    return EXIT_OK if report.ok else EXIT_DOMAIN


# -- argument parsing ------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotograb",
        description="Tendon-driven hand toolkit: kinematics, workspace, "
        "playback, retargeting service.",
    )
    parser.add_argument(
        "--config", default=None, help="geometry config JSON (default: built-in)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("fk", help="joint angles to finger chain positions")
    p.add_argument("--finger", required=True, choices=FINGERS)
    p.add_argument("--theta1", type=float, required=True, help="joint 1 angle, deg")
    p.add_argument("--theta2", type=float, required=True, help="joints 2-3 angle, deg")
    p.add_argument("--plate", type=float, default=0.0, help="plate angle, deg")
    add_format(p)
    p.set_defaults(func=_cmd_fk)

    p = sub.add_parser("tendon", help="joint angles to tendon deltas and motor rotations")
    p.add_argument("--finger", required=True, choices=FINGERS)
    p.add_argument("--theta1", type=float, required=True, help="joint 1 angle, deg")
    p.add_argument("--theta2", type=float, required=True, help="joints 2-3 angle, deg")
    p.add_argument(
        "--plate",
        type=float,
        default=None,
        help="also report plate tendon deltas at this angle, deg",
    )
    add_format(p)
    p.set_defaults(func=_cmd_tendon)

    p = sub.add_parser("invert", help="tendon delta back to the joint angle")
    p.add_argument("--joint", type=int, choices=(1, 2), required=True)
    p.add_argument("--delta-mm", type=float, required=True, help="extensor delta, mm")
    add_format(p)
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("workspace", help="projected fingertip workspace areas")
    p.add_argument("--resolution", type=int, default=25, help="grid points per joint axis")
    p.add_argument("--export-dir", default=None, help="write per-finger cloud CSVs here")
    add_format(p)
    p.set_defaults(func=_cmd_workspace)

    p = sub.add_parser("play", help="replay a trajectory CSV on the mock bus")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--rate-scale", type=float, default=1.0)
    p.add_argument("--no-realtime", action="store_true", help="skip the waiting")
    p.add_argument("--log", default=None, help="write the motor command log here")
    add_format(p)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("reward", help="rotation reward for an angular velocity")
    p.add_argument("--omega", type=float, required=True, help="angular velocity, rad/s")
    p.add_argument("--lo", type=float, default=1.0)
    p.add_argument("--hi", type=float, default=3.0)
    p.add_argument("--falloff", type=float, default=1.0)
    p.add_argument("--sign", type=int, choices=(-1, 1), default=1)
    add_format(p)
    p.set_defaults(func=_cmd_reward)

    p = sub.add_parser("serve", help="run the control service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ws-port", type=int, default=None, help="WebSocket port")
    p.add_argument("--tcp-port", type=int, default=None, help="plain TCP port")
    p.add_argument("--tick", type=float, default=30.0, help="state broadcast rate, Hz")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("validate", help="check a trajectory fixture is playable")
    p.add_argument("--trajectory", required=True)
    add_format(p)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (RotograbError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
