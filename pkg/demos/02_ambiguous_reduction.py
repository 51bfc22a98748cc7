"""
Two ways to drop redundant sensors
==================================

Sensor a covers exactly what b and c cover together.  Removing a leaves
{b, c}; removing b and then c leaves {a}.  Both results are irreducible,
and they give different sums of readings.
"""

from senstopo import enumerate_irreducibles, estimate, reduce_destructive, reduce_marking
from senstopo.samples import ambiguous_model
from senstopo.scan import make_policy, preferring, reduction_steps

m = ambiguous_model()
print("model:", m)

for name in ("lexicographic-first", "smallest-range-first"):
    steps = [s for s, _ in reduction_steps(m, make_policy(name))]
    print(f"{name}: removes {steps}, keeps {sorted(reduce_destructive(m, make_policy(name)).sensors)}")

print("prefer b, c:", sorted(reduce_destructive(m, preferring("bc")).sensors))

# the marking variant keeps the zones and labels sensors instead
marked = reduce_marking(m)
print("marking: N =", sorted(marked.necessary), "U =", sorted(marked.unnecessary))

counts = {"a": 5, "b": 2, "c": 4}
for r in enumerate_irreducibles(m):
    e = estimate(counts, r)
    print(f"irreducible {sorted(r.sensors)}: sum={e.sum} m={e.m} bounds=[{e.lower}, {e.upper}]")
