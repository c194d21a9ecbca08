"""Independent set with a structured modulator: forest, treedepth and bridgedepth.

Each kernel is compared against brute force on a few seeded instances. For the
treedepth kernel the compressed instance is the final gadget graph, which is
larger than the input at this toy scale.

Run: python demos/modulator_kernels.py
"""

from enumkern.brute import brute_sol
from enumkern.framework import run_pd_kernel
from enumkern.harness import GenSpec, generate
from enumkern.kernels import make_kernel

for param, model in (("fvs", "fvs"), ("td", "td"), ("bd", "bd")):
    print(f"-- {param} --")
    for seed in range(4):
        inst = generate(GenSpec(model, n=10, mod_size=3, c=2, density=0.35, seed=seed))
        kernel = make_kernel(param, inst.c)
        comp = kernel.compress(inst)
        got = sorted(run_pd_kernel(kernel, inst), key=sorted)
        want = brute_sol(inst)
        print(f"seed {seed}: n={inst.graph.n} |X|={len(inst.modulator)} t={inst.t} "
              f"-> kernel n={comp.compressed.graph.n}, {len(got)} solutions, matches brute force: {got == want}")
