"""Atomic Zitterbewegung in tripod-scheme gauge fields: simulator and analytic oracles."""

__version__ = "0.1.0"
