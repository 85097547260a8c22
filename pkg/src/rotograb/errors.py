"""Exception types shared across the package."""


class RotograbError(Exception):
    """Base class for all domain errors."""


class ConfigError(RotograbError):
    """Configuration file failed to parse or violated a geometry invariant."""


class LimitViolation(RotograbError):
    """An angle fell outside its joint's limit interval (strict mode)."""


class RangeError(RotograbError):
    """A requested tendon delta lies outside the achievable interval."""


class UnknownFingerError(RotograbError):
    """Finger id is not one of thumb/index/middle/ring/pinkie."""


class TrajectoryError(RotograbError):
    """Trajectory file malformed: bad header, bad field, or non-monotone time."""


class FrameError(RotograbError):
    """Landmark frame rejected (wrong point count, non-finite, degenerate)."""


class BusBusy(RotograbError):
    """The servo bus is held by another session."""
