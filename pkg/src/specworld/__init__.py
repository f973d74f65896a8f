"""Simulate program generators against specifications of possible worlds,
decide maturity, and synthesize translations between generator outputs."""

__version__ = "0.1.0"
