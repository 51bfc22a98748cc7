"""
Topologies that change over time
================================

Worlds carry a zone model each and transitions say which world can follow
which.  A pair of sensors may only change its relation along the
qualitative-change graph: disjoint <-> overlap <-> inside/contains <-> equal.
"""

from senstopo import DynamicModel, check_state, classify, parse, validate_axioms
from senstopo.model import StaticModel

DJ = StaticModel.from_zones([["a"], ["b"]])
OV = StaticModel.from_zones([["a"], ["b"], ["a", "b"]])
IN = StaticModel.from_zones([["b"], ["a", "b"]])
EQ = StaticModel.from_zones([["a", "b"]])

worlds = {"w0": DJ, "w1": OV, "w2": IN, "w3": EQ}
edges = [("w0", "w1"), ("w1", "w2"), ("w2", "w3"), ("w3", "w2"), ("w2", "w1"), ("w1", "w0")]
d = DynamicModel.build(worlds, edges).checked()

for w, m in worlds.items():
    print(w, classify(m, "a", "b").value)
print("violations:", validate_axioms(d))

# jump straight from disjoint to equal
bad = DynamicModel.build(worlds, [("w0", "w3")] + edges[1:]).checked()
for v in validate_axioms(bad):
    print("violation:", v.as_dict())

for text in [
    "A X (~subset(a,b) & ~subset(b,a))",
    "E F rangeeq(a,b)",
    "A F rangeeq(a,b)",
    "E (F rangeeq(a,b) & G ~DJ(a,b))",
]:
    v = check_state(d, "w0", parse(text))
    print(f"w0 |= {text}: {v.holds} via {', '.join(v.engines)}")
