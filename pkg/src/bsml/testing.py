"""Observation functions for tests, specifications and tracers.

Nothing under ``bsml`` other than the CLI tracer imports this module.
Parallel programs must go through ``proj``/``put`` instead.
"""

from .core import ParVector

__all__ = ["get", "values"]


def get(v: ParVector, i):
    """Value held by processor ``i`` of ``v``."""
    return v._values[v.machine.proc_id(i)]


def values(v: ParVector) -> list:
    """All components of ``v`` in processor order."""
    return list(v._values)
