"""Exact law checking for the Giry monad on countable discrete spaces.

Submodules: ``measure`` (distributions, join, pushforward), ``scvx`` (super
convex spaces and affine maps), ``algebras`` (barycenter algebras),
``stdspace`` (partition refinement), ``amplitudes`` (l2 variant),
``suites`` and ``cli``.
"""

from .errors import GiryError
from .measure import CarrierDist, CountableDist, GeometricTail, convex_combine, dirac, ev, join, min_support, pushforward

__version__ = "0.1.0"

__all__ = [
    "CarrierDist",
    "CountableDist",
    "GeometricTail",
    "GiryError",
    "convex_combine",
    "dirac",
    "ev",
    "join",
    "min_support",
    "pushforward",
]
