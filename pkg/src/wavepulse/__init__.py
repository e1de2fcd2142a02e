"""WavePulse: record web radio, build rich transcripts, run content analytics."""

__version__ = "0.1.0"
