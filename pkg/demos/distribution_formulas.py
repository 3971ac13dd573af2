"""Fragmentation distributions for a chain of n links, two ways each.

The state of the chain is the set G of removed links. Each closed-form
route below is checked against a matrix oracle built straight from the
one-step definition of the process.
"""

import io
import math
from fractions import Fraction

from fragchain import (RateSpec, catalan, dist_continuous, dist_discrete,
                       dist_discrete_all, dist_discrete_endpoints,
                       enumerate_fragmentation_trees, fragments_of,
                       generator_matrix_dist, lambda_value, random_rates,
                       transition_matrix_dist, tree_prob_continuous,
                       tree_prob_discrete, check_transition_spectrum)
from fragchain.serialize import dist_to_csv

n = 5
rates = RateSpec("discrete", {1: 0.1, 2: 0.05, 3: 0.2, 4: 0.1, 5: 0.15})
print(f"discrete chain on links 1..{n}, per-step break rates",
      {a: rates.rho(a) for a in range(1, n + 1)})

print("\n-- fragments and no-change probabilities --")
for G in ([], [3], [2, 4]):
    frags = fragments_of(G, n)
    lam = lambda_value(rates, G)
    print(f"G={G!r:8} fragments={[list(f) for f in frags]!r:28} lambda={lam:.4f}")

print("\n-- fragmentation trees --")
G = [2, 3, 5]
trees = enumerate_fragmentation_trees(G, n)
print(f"removal orders of G={G} compatible with the chain:",
      len(trees), "=", f"C_{len(G)} =", catalan(len(G)))
t = 4
total = math.fsum(tree_prob_discrete(tr, rates, t) for tr in trees)
print(f"tree probabilities at t={t} sum to the state probability:")
print(f"  {total:.12f} == {dist_discrete(G, rates, t):.12f}")

print("\n-- full distribution against the transition-matrix oracle --")
table = dist_discrete_all(rates, t)
oracle = transition_matrix_dist(rates, t)
worst = max(abs(table[g] - oracle[g]) for g, _ in table.items())
print(f"t={t}: max |formula - matrix| over all {2 ** n} states = {worst:.2e}")
print(f"normalization: sum = {table.total():.15f}")

rep = check_transition_spectrum(rates)
print("one-step matrix is triangular:", rep["triangular"],
      "with the no-change factors on the diagonal:", rep["diagonal_exact"])

print("\n-- exact rational arithmetic --")
xrates = RateSpec("discrete", {a: Fraction(1, 4 + a) for a in range(1, 4)})
p = dist_discrete([2], xrates, 3)
q = transition_matrix_dist(xrates, 3)[(2,)]
print(f"n=3, t=3, G={{2}}: {p} (matrix route gives {q})")
assert p == q

print("\n-- endpoint shortcut --")
for G in ([], [1], [5], [1, 5]):
    a = dist_discrete_endpoints(G, rates, t)
    b = dist_discrete(G, rates, t)
    print(f"G={G!r:8} endpoint route {a:.12f}  tree route {b:.12f}")
    assert abs(a - b) < 1e-12

print("\n-- continuous time --")
import random
crates = random_rates(4, random.Random(11), mode="continuous")
tc = 0.9
gen = generator_matrix_dist(crates, tc)
worst = 0.0
for gm in range(16):
    G = [a + 1 for a in range(4) if gm >> a & 1]
    closed = dist_continuous(G, crates, tc)
    tsum = math.fsum(tree_prob_continuous(tr, crates, tc)
                     for tr in enumerate_fragmentation_trees(G, 4))
    worst = max(worst, abs(closed - gen[tuple(G)]), abs(closed - tsum))
print(f"closed form vs generator exponential vs tree sum: max |err| = {worst:.2e}")

print("\n-- a table you can save --")
buf = io.StringIO()
dist_to_csv(dist_discrete_all(rates, 2), buf)
print("\n".join(buf.getvalue().splitlines()[:5]))
print("...")
print("done")
