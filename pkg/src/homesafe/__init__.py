"""Bounded explicit-state safety checker for smart-home automation systems.

The package parses declarative smart apps, computes which event handlers can
interact, exhaustively explores external-event sequences under a sequential
cascade semantics (optionally injecting device/communication failures),
evaluates safety properties, and attributes violations to malicious apps, bad
apps, or misconfiguration.
"""

__version__ = "0.1.0"
