"""orbifloer: potential functions and non-displaceable fibers of toric orbifolds.

From a labeled moment polytope this package computes twisted sectors, basic
holomorphic disc data, leading-order potential functions with bulk terms,
leading term equations, and certified regions of non-displaceable Lagrangian
torus fibers.  All combinatorial and polyhedral work is exact (Fraction
arithmetic); floating point enters only in root finding and verdicts record
the residuals they were certified at.
"""

__version__ = "0.1.0"

from .errors import OrbifloerError  # noqa: F401
