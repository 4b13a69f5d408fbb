"""Learning sparse-reward navigation policies from observation-only videos."""

__version__ = "0.1.0"
