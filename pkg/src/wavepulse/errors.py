"""Exception types shared across the engine."""


class WavePulseError(Exception):
    """Base class for all engine errors."""


class ScheduleError(WavePulseError):
    """Malformed or invalid schedule document."""


class FilenameError(WavePulseError):
    """Chunk filename does not match the naming convention."""


class ConfigError(WavePulseError):
    """Invalid engine or module configuration."""


class SegmentError(WavePulseError):
    """Malformed or invalid transcript segment document."""


class ClientError(WavePulseError):
    """A model client call failed after exhausting its retry budget."""


class StreamError(WavePulseError):
    """Stream transport failure (disconnect, bad content type)."""


class VectorIndexError(WavePulseError):
    """Vector index contract violation (dimension mismatch, zero vector)."""
