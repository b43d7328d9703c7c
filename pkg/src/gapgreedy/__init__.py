"""Greedy-approximation constants for bases indexed by gap sequences, on finite truncations."""

__version__ = "0.1.0"
