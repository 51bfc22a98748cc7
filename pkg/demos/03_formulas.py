"""
Asking questions of a topology
==============================

Formulas are parsed from text, sort-checked and evaluated over a finite
model.  Sugar such as subset or DJ expands into the small core language.
"""

from senstopo import desugar, parse, to_text, valid
from senstopo.samples import nested_model

m = nested_model()

questions = [
    "forall z : z in sense(d) -> z in sense(c)",
    "exists z : z in sense(c) & ~(z in sense(d))",
    "subset(d, c)",
    "DJ(a, d)",
    "OVL(a, b)",
    "forall s : ~RED(s)",
    "O[3]",
    "O[4]",
]
for text in questions:
    print(f"{valid(m, parse(text))!s:5}  {text}")

f = parse("DJ(a, d)")
print()
print("DJ(a, d) in core form:")
print(" ", to_text(desugar(f)))
