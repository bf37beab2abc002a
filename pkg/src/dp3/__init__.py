"""High-precision machinery for a degenerate Painleve III transcendent."""

__version__ = "0.1.0"
