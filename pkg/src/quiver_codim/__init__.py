"""Codimension and component counts of rank loci in equioriented type-A quiver representations.

The main entry point is :func:`components`, which returns the codimension C
of the top-dimensional irreducible components of the locus of matrix tuples
whose full product has rank r, and their number theta.
"""

from .components import METHODS, components
from .dln_analysis import dln_report, fiber_codim, rlcm, rlct
from .errors import (
    InvalidInputError,
    MethodDisagreementError,
    QuiverCodimError,
    ResourceCapError,
    TruncationError,
)
from .qip_lattice import closest_simplex_points, codim_closed_form, theta_closed_form
from .qseries import QSeries, q_series_bruteforce, q_series_closed
from .quiver_core import (
    ComponentReport,
    DimensionVector,
    KostantPartition,
    RankPattern,
    enumerate_components,
    enumerate_kostant_partitions,
    orbit_codim,
    top_components_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "METHODS", "ComponentReport", "DimensionVector", "InvalidInputError", "KostantPartition",
    "MethodDisagreementError", "QSeries", "QuiverCodimError", "RankPattern", "ResourceCapError",
    "TruncationError", "closest_simplex_points", "codim_closed_form", "components", "dln_report",
    "enumerate_components", "enumerate_kostant_partitions", "fiber_codim", "orbit_codim",
    "q_series_bruteforce", "q_series_closed", "rlcm", "rlct", "theta_closed_form",
    "top_components_bruteforce",
]
