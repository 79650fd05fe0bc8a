"""conreach: reachability certification for discrete-time linear systems
with polyhedral convex output constraints."""

from conreach.exactla import RatMatrix, Subspace
from conreach.polyhedra import Polyhedron
from conreach.geomctrl import Sigma
from conreach.setmaps import ConstrainedMap, EigenCertificate
from conreach.decide import analyze, classify, oracle_compare, validate

__version__ = "0.1.0"

__all__ = [
    "RatMatrix",
    "Subspace",
    "Polyhedron",
    "Sigma",
    "ConstrainedMap",
    "EigenCertificate",
    "analyze",
    "classify",
    "oracle_compare",
    "validate",
    "__version__",
]
