"""Tree-stacked triangle groups at desk scale.

Two sides of one construction: exhaustive finite-quotient experiments on
the truncated tree groups, and an inductive build of discrete matrix
representations with finite, margin-reporting certificates.
"""

from kleintree.words import Word, Presentation, reduce_word
from kleintree.finite_groups import FiniteGroup, catalog_groups
from kleintree.homs import Homomorphism, enumerate_homs
from kleintree.moebius import MoebiusMap, GeneralizedCircle, OrientedDisk
from kleintree.builder import RepTable, CertificateParams, build

__all__ = [
    "Word",
    "Presentation",
    "reduce_word",
    "FiniteGroup",
    "catalog_groups",
    "Homomorphism",
    "enumerate_homs",
    "MoebiusMap",
    "GeneralizedCircle",
    "OrientedDisk",
    "RepTable",
    "CertificateParams",
    "build",
]
