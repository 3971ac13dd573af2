"""Seeded simulation of the chain, tree classification, and the coupled
auxiliary construction.

Every trajectory i is driven by its own substream (seed, i), so estimates
are reproducible and independent of threading.
"""

import math

from fragchain import (FragTree, RateSpec, atom_probability, aux_consistent,
                       batch_tree_counts, classify_tree, coupled_construction,
                       enumerate_atoms, enumerate_fragmentation_trees,
                       estimate_tree_prob, estimate_tree_prob_coupled,
                       marginal_internal_law, sample_aux, simulate_discrete,
                       slot_order, support_atoms, tree_prob_discrete)

rates = RateSpec("discrete", {1: 0.1, 2: 0.05, 3: 0.2, 4: 0.1, 5: 0.15})
SEED = 1729

print("-- one trajectory, step by step --")
traj = simulate_discrete(rates, 8, seed=SEED, index=0)
for t in range(9):
    print(f"t={t}: removed {sorted(traj.removed_at(t))}")
tree = classify_tree(traj, 8)
print("matched removal-order tree: root", tree.root,
      "left", {k: v for k, v in tree.left.items() if v is not None},
      "right", {k: v for k, v in tree.right.items() if v is not None})

print("\n-- Monte Carlo against the exact tree probability --")
target = FragTree(5, 3, {}, {3: 4})  # break 3 first, then 4 to its right
t = 5
exact = tree_prob_discrete(target, rates, t)
est, se = estimate_tree_prob(target, rates, t, 40000, seed=SEED)
print(f"exact {exact:.5f}  estimate {est:.5f} +- {se:.5f}"
      f"  z = {(est - exact) / se:+.2f}")

counts = batch_tree_counts(rates, t, 20000, seed=SEED)
print("a single classified batch covers every (state, tree) pair:",
      sum(counts.values()), "trajectories in", len(counts), "bins")

print("\n-- the auxiliary slot family of the target tree --")
print("slots:", slot_order(target))
atoms = enumerate_atoms(target)
support = support_atoms(target, rates)
print(f"{len(atoms)} structural joint states, {len(support)} with positive "
      "probability (a both-sides break next to an empty side is dead)")
total = math.fsum(atom_probability(target, rates, a) for a in atoms)
print(f"atom probabilities sum to {total:.15f}")
law = marginal_internal_law(target, rates, 3)
print("marginal law of the root slot:", {k: round(v, 4) for k, v in law.items()})

ok = all(aux_consistent(target, sample_aux(target, rates, seed=SEED, index=i))
         for i in range(2000))
print("consistency law on 2000 samples:", ok)

print("\n-- coupled construction --")
print("drive the chain with fresh slot samples; any sample incompatible")
print("with the target tree aborts the trajectory at that step")
n_fail_step1 = 0
hits = 0
N = 40000
for i in range(N):
    tr, failure = coupled_construction(target, rates, t, seed=SEED, index=i)
    if failure == 1:
        n_fail_step1 += 1
    if failure is None and tr.removed_at(t) == frozenset(target.G):
        hits += 1
p2 = hits / N
se2 = math.sqrt(p2 * (1 - p2) / N)
print(f"fraction failing immediately: {n_fail_step1 / N:.4f}")
print(f"coupled estimate {p2:.5f} +- {se2:.5f}  (exact {exact:.5f})")

est2, se_c = estimate_tree_prob_coupled(target, rates, t, N, seed=SEED)
assert est2 == p2
z = (est - est2) / math.sqrt(se ** 2 + se_c ** 2)
print(f"direct and coupled estimators agree: z = {z:+.2f}")
print("done")
