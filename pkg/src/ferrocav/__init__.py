"""Hysteretic magneto-electric media coupled to Maxwell's equations.

The package has two halves: a zero-dimensional point model of branched,
rate-independent hysteresis (:mod:`ferrocav.point_model`) and a 3-D Yee
finite-difference simulation of a PEC cavity containing a rigidly
rotating hysteretic cylinder (:mod:`ferrocav.grid`,
:mod:`ferrocav.medium`, :mod:`ferrocav.cavity`).  The command line entry
point lives in :mod:`ferrocav.cli`.
"""

__version__ = "0.1.0"

from .constants import CONSTANTS, PhysicalConstants

__all__ = ["CONSTANTS", "PhysicalConstants", "__version__"]
