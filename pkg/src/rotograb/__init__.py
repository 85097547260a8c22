"""Rotograb: kinematics, actuation, and teleoperation toolkit for a
tendon-driven five-finger hand with a rotating thumb.

The hand has eleven degrees of freedom: two flexion joints per finger
(the distal pair of each finger is mechanically coupled, so one angle
describes both) and one thumb base plate rotation. All joints are
rolling-contact joints driven by tendon pairs on motor spools.
"""

from .actuation import (
    MOTOR_COUNT,
    PLATE_MOTOR,
    LogEntry,
    MockServoBus,
    MotorCommand,
    PlaybackReport,
    coupled_extensor_delta,
    coupled_spool_rotations,
    joint_to_motor,
    load_command_log,
    motor_index,
    play_trajectory,
    save_command_log,
)
from .errors import (
    BusBusy,
    ConfigError,
    FrameError,
    LimitViolation,
    RangeError,
    RotograbError,
    TrajectoryError,
    UnknownFingerError,
)
from .finger import (
    finger_chain_2d,
    finger_fk,
    finger_tendon_deltas,
    hand_fk,
    invert_tendon_delta,
    joint_transform,
    tendon_delta,
    tendon_length,
    tendon_vector,
)
from .geometry import (
    DEG,
    FINGERS,
    JOINT1_CALIBRATION,
    JOINT23_CALIBRATION,
    PLATE_CALIBRATION,
    FingerMount,
    HandGeometry,
    JointState,
    default_geometry,
    geometry_from_config,
    geometry_to_config,
    load_geometry,
    save_geometry,
)
from .policy import FixtureReport, RewardSpec, rotation_reward, validate_trajectory_fixture
from .session import HandSession, Snapshot, Source
from .teleop import (
    LandmarkFrame,
    JointMap,
    Retargeter,
    RetargetProfile,
    RetargetResult,
    default_profile,
    detect_thumb_mode,
    digit_flexion,
    extract_human_angles,
    frame_from_json,
    frame_to_json,
    palm_width,
    retarget,
    thumb_lateral_offset,
)
from .thumb import (
    PlateState,
    ThumbMode,
    classify_mode,
    plate_tendon_delta,
    plate_tendon_length,
    preset_angle,
    thumb_decoupling_check,
    thumb_tendon_deltas,
)
from .trajectory import (
    TRAJECTORY_HEADER,
    Trajectory,
    load_trajectory,
    parse_trajectory,
    save_trajectory,
)
from .workspace import (
    HullArea,
    WorkspaceCloud,
    WorkspaceReport,
    cloud_area,
    cloud_from_csv,
    cloud_to_csv,
    projected_area,
    sample_workspace,
    workspace_report,
)

__version__ = "0.1.0"

__all__ = [
    "BusBusy",
    "ConfigError",
    "DEG",
    "FINGERS",
    "FingerMount",
    "FixtureReport",
    "FrameError",
    "HandGeometry",
    "HandSession",
    "HullArea",
    "JOINT1_CALIBRATION",
    "JOINT23_CALIBRATION",
    "JointMap",
    "JointState",
    "LandmarkFrame",
    "LimitViolation",
    "LogEntry",
    "MOTOR_COUNT",
    "MockServoBus",
    "MotorCommand",
    "PLATE_CALIBRATION",
    "PLATE_MOTOR",
    "PlaybackReport",
    "PlateState",
    "RangeError",
    "Retargeter",
    "RetargetProfile",
    "RetargetResult",
    "RewardSpec",
    "RotograbError",
    "Snapshot",
    "Source",
    "ThumbMode",
    "TRAJECTORY_HEADER",
    "Trajectory",
    "TrajectoryError",
    "UnknownFingerError",
    "WorkspaceCloud",
    "WorkspaceReport",
    "classify_mode",
    "cloud_area",
    "cloud_from_csv",
    "cloud_to_csv",
    "coupled_extensor_delta",
    "coupled_spool_rotations",
    "default_geometry",
    "default_profile",
    "detect_thumb_mode",
    "digit_flexion",
    "extract_human_angles",
    "finger_chain_2d",
    "finger_fk",
    "finger_tendon_deltas",
    "frame_from_json",
    "frame_to_json",
    "geometry_from_config",
    "geometry_to_config",
    "hand_fk",
    "invert_tendon_delta",
    "joint_to_motor",
    "joint_transform",
    "load_command_log",
    "load_geometry",
    "load_trajectory",
    "motor_index",
    "palm_width",
    "parse_trajectory",
    "plate_tendon_delta",
    "plate_tendon_length",
    "play_trajectory",
    "preset_angle",
    "projected_area",
    "retarget",
    "rotation_reward",
    "sample_workspace",
    "save_command_log",
    "save_geometry",
    "save_trajectory",
    "tendon_delta",
    "tendon_length",
    "tendon_vector",
    "thumb_decoupling_check",
    "thumb_lateral_offset",
    "thumb_tendon_deltas",
    "validate_trajectory_fixture",
    "workspace_report",
]
