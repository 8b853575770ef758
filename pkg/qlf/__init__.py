"""
Quantum invariants of torus links and their modular companions.

This package computes Kashaev's invariant of the torus links T(2,2m) at roots
of unity, verifies the underlying q-series identity and its q-difference
recurrences with an exact truncated-series engine, evaluates Eichler integrals
of weight-3/2 theta series at rational points, and measures asymptotic
expansions numerically. A command-line front end emits reproducible reports.
"""

__version__ = "0.1.0"
__author__ = "AA Moonshine"
__email__ = ""

from . import core
from . import backends
from . import invariants
from . import identities
from . import modular
from . import asymptotics

__all__ = ["core", "backends", "invariants", "identities", "modular", "asymptotics"]
