"""Vertex cover by solution size: compress a graph, then stream every cover back.

Run: python demos/vc_kernel_walkthrough.py
"""

from enumkern.brute import brute_sol
from enumkern.framework import run_pd_kernel, verify_partition
from enumkern.graph import Graph
from enumkern.instance import EnumInstance, format_solution
from enumkern.kernels import VCSizeKernel

# a star with five leaves, plus one separate edge
g = Graph(range(1, 9), [(1, v) for v in range(2, 7)] + [(7, 8)])
inst = EnumInstance(g, "vc", k=3)
kernel = VCSizeKernel()

comp = kernel.compress(inst)
print(f"original: n={g.n} m={g.m} k={inst.k}")
print(f"kernel:   n={comp.compressed.graph.n} m={comp.compressed.graph.m} k={comp.compressed.k}")
for e in comp.log:
    print("  rule", e.rule)

print("\nall vertex covers of size <= 3, streamed through the kernel:")
for s in run_pd_kernel(kernel, inst):
    print(" ", format_solution(s))

rep = verify_partition(inst, kernel)
print(f"\nbrute force finds {len(brute_sol(inst))}; partition check ok={rep.ok}, "
      f"{rep.accepted} of {rep.compressed_solutions} compressed solutions accepted")
