"""A tour of the pruning order on a small rooted tree.

Edges are named by their upper (child-side) vertex. Cutting an edge set H
leaves a stump: the component of the root. The pruning order compares edge
sets by "K was cut first, H continued cutting inside what was left", and
its Mobius function has a two-line closed form that we check against the
defining recursion.
"""

from fragchain import (RootedTree, down_set, enumerate_stump_cut_sets,
                       hasse_edges, interval, is_stump_cut_set, minimal_edges,
                       mobius, mobius_inversion_check, mobius_recursive,
                       product_factorization, stump_cut_set, stump_set)

# root 0 with children 1 and 2; vertex 1 has children 3 and 4
tree = RootedTree(0, [(0, 1), (0, 2), (1, 3), (1, 4)])
print("tree: root 0, edges named by upper ends:", sorted(tree.vertices[1:]))

print("\n-- stumps and cut sets --")
for H in ([], [1], [3, 4], [1, 2], [3, 2]):
    R = stump_set(tree, H)
    M = minimal_edges(tree, H)
    print(f"cut H={H!r:12} stump={sorted(R)!r:15} minimal edges={sorted(M)}")
    # the boundary of the stump recovers exactly the minimal cuts
    assert stump_cut_set(tree, R) == M

cuts = enumerate_stump_cut_sets(tree)
print("\nall stump cut sets (= the antichains of the edge order):")
print([sorted(c) for c in cuts])
assert all(is_stump_cut_set(tree, c) for c in cuts)

print("\n-- the order itself --")
print("H <= K means: K cut first, then H kept cutting in the stump of K.")
members = interval(tree, [3, 4, 1], [])
print("interval from {3,4,1} up to the empty set:", [sorted(m) for m in members])
factors = product_factorization(tree, [3, 2])
print("the interval below {3,2} factorizes over its minimal cuts:",
      [sorted(f) for f in factors])

pairs = hasse_edges(tree)
print(f"Hasse diagram: {2 ** tree.n_edges} elements, {len(pairs)} cover pairs")

print("\n-- Mobius function --")
print("closed form: (-1)^(|H|-|K|) when H-K is an antichain, else 0")
for H, K in (([3, 4], []), ([3, 2], []), ([3, 4, 1], []), ([3], []), ([1], [])):
    closed = mobius(tree, H, K)
    rec = mobius_recursive(tree, H, K)
    assert closed.value == rec
    print(f"mu({H!r:10}, {K!r}) = {closed.value}")

# inversion round trip: g(H) = sum of f over [H, K] determines f
f = {frozenset(h): (7 * len(h) + 3) % 5 - 2 for h in down_set(tree, [])}
orig, rec = mobius_inversion_check(tree, f, [])
print("\ninversion recovers f at the bottom element:", orig, "==", rec)
assert orig == rec
print("done")
