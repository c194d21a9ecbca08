"""Flashlight search emits independent sets in lexicographic order with small delay.

Run: python demos/lex_order_and_delay.py
"""

from enumkern.flashlight import enum_is_lex
from enumkern.graph import cycle_graph
from enumkern.harness import disjoint_edges, profile_delay
from enumkern.instance import format_solution

g = cycle_graph(6)
print("independent sets of size >= 2 in C6, in order:")
for s in enum_is_lex(g, 2):
    print(" ", format_solution(s))

print("\nm disjoint edges, t = m: 2^m outputs, delay measured in steps")
print(f"{'m':>3} {'outputs':>8} {'max delay':>10}")
for m in range(4, 13, 2):
    rep = profile_delay(enum_is_lex(disjoint_edges(m).graph, m))
    print(f"{m:>3} {rep.outputs:>8} {rep.max_delay:>10}")
