"""Colored n-equals partition lattices, spaces of 0-cycles and their densities."""

from .colored_partitions import ColoredSet, NEqualsPartition, enumerate_partitions, has_top, join, refines
from .errors import InvalidInputError, NoTopElementError, ResourceLimitError, ZeroCyclesError
from .poset import BoundedPoset, partition_lattice
from .series import ManifoldData, TruncatedSeries

__all__ = [
    "BoundedPoset",
    "ColoredSet",
    "InvalidInputError",
    "ManifoldData",
    "NEqualsPartition",
    "NoTopElementError",
    "ResourceLimitError",
    "TruncatedSeries",
    "ZeroCyclesError",
    "enumerate_partitions",
    "has_top",
    "join",
    "partition_lattice",
    "refines",
]

__version__ = "0.1.0"
