"""
From disks to zones
===================

A scene of disks and convex polygons is turned into its zone model by
sampling candidate points (deep points, crossings, boundary offsets and a
grid) and keeping the distinct coverage signatures.
"""

import warnings

from senstopo import ConvexPolygon, Disk, GeomSensor, Scene, extract_topology
from senstopo.geometry import TangencyWarning, verify_resolution
from senstopo.samples import nested_scene

m = extract_topology(nested_scene())
for z in m.sorted_zones():
    print("zone", sorted(z))
print("stable under a finer grid:", verify_resolution(nested_scene())["stable"])

mixed = Scene(
    (
        GeomSensor("disk", Disk(0, 0, 1.2)),
        GeomSensor("box", ConvexPolygon(((0.5, -0.5), (2.5, -0.5), (2.5, 0.5), (0.5, 0.5)))),
    )
)
print("mixed scene:", [sorted(z) for z in extract_topology(mixed).sorted_zones()])

# two disks that just touch: the result depends on how the contact point
# is resolved, so a warning is raised
touching = Scene((GeomSensor("a", Disk(0, 0, 1)), GeomSensor("b", Disk(2, 0, 1))))
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", TangencyWarning)
    extract_topology(touching)
print("warnings:", [str(w.message) for w in caught])
