"""crossed_kuperberg package initializer.

Re-exports the entry points most scripts need: fields, crossed modules,
diagram builders, labelings and the invariant engine.
"""

from crossed_kuperberg.diagram import HeegaardDiagram, build_lens, build_poincare, build_s3, connected_sum
from crossed_kuperberg.errors import CrossedKuperbergError, Report
from crossed_kuperberg.hopfxc import HopfChiCoalgebra, builtin_group_algebra, builtin_kp4, compute_integrals
from crossed_kuperberg.invariant import InvariantEngine, compute_invariant, kuperberg
from crossed_kuperberg.labeling import ChiLabeling, enumerate_labelings, orbit_classes
from crossed_kuperberg.scalar import FieldDescriptor, Scalar
from crossed_kuperberg.xmod import CrossedModule, FiniteGroup, z4_to_z2

__version__ = "0.1.0"

__all__ = [
    "ChiLabeling",
    "CrossedKuperbergError",
    "CrossedModule",
    "FieldDescriptor",
    "FiniteGroup",
    "HeegaardDiagram",
    "HopfChiCoalgebra",
    "InvariantEngine",
    "Report",
    "Scalar",
    "build_lens",
    "build_poincare",
    "build_s3",
    "builtin_group_algebra",
    "builtin_kp4",
    "compute_integrals",
    "compute_invariant",
    "connected_sum",
    "enumerate_labelings",
    "kuperberg",
    "orbit_classes",
    "z4_to_z2",
]
