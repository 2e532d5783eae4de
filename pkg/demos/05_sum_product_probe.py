"""Probing max{|A+A|, |AA|} / |A|^{5/4} across structured families.

An AP has a small sumset, a GP or multiplicative subgroup a small product
set, and a random set neither — yet the ratio stays bounded away from zero
for all of them, over all four operator combinations. A short simulated
annealing run then tries (and fails) to push the ratio much lower.
"""

from sumprod import (ElemSet, GroundField, local_search_min_ratio,
                     main_theorem_probe, sum_product_ratio)

A = ElemSet(GroundField.char0(), range(1, 9))
print(f"spot check {{1..8}}: ratio = {sum_product_ratio(A):.6f} "
      f"(= 30 / 8^1.25)")

print("\nsweep over AP/GP/random/subgroup, sizes 16..256:")
res = main_theorem_probe(sizes=(16, 32, 64, 128, 256), seed=5)
for cell in res["cells"]:
    if cell["status"] != "ok":
        continue
    print(f"  {cell['family']:8s} n={cell['n']:4d}  "
          f"min ratio over 4 combos = {cell['min']:.3f}")
print(f"overall min = {res['min_ratio']:.3f}  "
      f"(floor {res['floor']}) -> {'pass' if res['pass'] else 'fail'}")

print("\nannealing 400 swap moves from AP(16) in F_1009:")
seed = ElemSet(GroundField.prime(1009), range(1, 17))
state = local_search_min_ratio(seed, 400, rng_seed=11)
print(f"  start ratio {sum_product_ratio(seed):.4f} -> "
      f"best found {state.best_ratio:.4f}")
print("  best set:", sorted(state.best))
