"""Small worked topologies used by the demos and tests."""

from __future__ import annotations

from .geometry import Disk, GeomSensor, Scene
from .model import StaticModel


def nested_model() -> StaticModel:
    """Four sensors: a, b, c pairwise overlapping with a common zone, d inside c only."""
    return StaticModel.from_zones(
        [["a"], ["a", "b"], ["a", "c"], ["a", "b", "c"], ["b"], ["b", "c"], ["c"], ["c", "d"]]
    )


def nested_scene() -> Scene:
    """Disks realising :func:`nested_model`."""
    return Scene(
        (
            GeomSensor("a", Disk(0.0, 0.0, 1.5)),
            GeomSensor("b", Disk(1.1, -1.5, 1.5)),
            GeomSensor("c", Disk(2.2, 0.0, 1.875)),
            GeomSensor("d", Disk(3.3, 0.5, 0.6)),
        )
    )


def ambiguous_model() -> StaticModel:
    """a's range is exactly the union of the ranges of b and c.

    Removing a, or removing b and then c, both leave an irreducible model.
    """
    return StaticModel.from_zones([["a", "b"], ["a", "b", "c"], ["a", "c"]])


_TRIPLE = (
    GeomSensor("s1", Disk(0.0, 0.0, 1.5)),
    GeomSensor("s2", Disk(-0.75, -1.1, 1.5)),
    GeomSensor("s3", Disk(0.75, -1.1, 1.5)),
)


def clustered_scene() -> Scene:
    """Three overlapping disks, three targets all in the common zone."""
    return Scene(_TRIPLE, targets=((0.0, -0.6), (0.2, -0.8), (-0.2, -0.8)))


def spread_scene() -> Scene:
    """Same disks, three targets in the part covered only by each disk."""
    targets = (
        (0.0, 1.2), (0.2, 1.1), (-0.2, 1.1),
        (-1.6, -1.8), (-1.4, -2.0), (-1.8, -1.6),
        (1.6, -1.8), (1.4, -2.0), (1.8, -1.6),
    )
    return Scene(_TRIPLE, targets=targets)
