# Dandelions are planted by hand; skewed neighborhoods grow wild.  A server
# core is "skewed" for a set of dispatchers when those dispatchers reach the
# core but are otherwise nearly strangers to each other, which is exactly the
# geometry that funnels overflow into the core.  This script measures how
# large such structures get in two random families as the graph grows.
#
# The interesting part: in sparse Erdos-Renyi graphs the per-node chance of
# being a usable funnel plateaus (degree-1 neighbors thin out as the mean
# degree passes 1), yet the maximum over n nodes keeps growing, extreme-value
# style.  Size records come from the tail, not the typical node.
import numpy as np

from skewnet import (
    SkewParams,
    er_network,
    find_skewed_core,
    random_bipartite,
    skewed_neighborhood,
    to_bipartite,
)


def max_skew(g, params):
    return max(len(skewed_neighborhood(g, u, params))
               for u in range(g.n_servers))


print("sparse random bipartite graphs (mean degree 2):")
params = SkewParams(3, 0.5, 1.0)
for n in (100, 1000, 10000):
    sizes = [max_skew(random_bipartite(n, 2.0, seed=s), params)
             for s in range(40)]
    print(f"  n={n:<6} median max skew {np.median(sizes):4.1f}  "
          f"(seed spread {min(sizes)}..{max(sizes)})")

print("\nErdos-Renyi contact graphs, p = loglog(n) / (2(n-1)):")
params = SkewParams(2, 0.5, 1.0)
for n in (1000, 10000):
    sizes = [max_skew(to_bipartite(er_network(n, seed=s)), params)
             for s in range(40)]
    print(f"  n={n:<6} median max skew {np.median(sizes):4.1f}  "
          f"(seed spread {min(sizes)}..{max(sizes)})")

# A skewed core is what the coupling pipeline needs as input; show one found
# from a cold start in a single sample.
g = random_bipartite(2000, 2.0, seed=7)
params = SkewParams(3, 0.5, 1.0)
best = max(range(g.n_servers),
           key=lambda u: len(skewed_neighborhood(g, u, params)))
centers, dispatchers = find_skewed_core(g, best, params)
print(f"\nexample core grown from server {best} in a n=2000 sample: "
      f"{len(centers)} centers, {len(dispatchers)} pairwise-disjoint dispatchers")
print("Feed those into the reduction pipeline and the coupled run bounds the")
print("original system below by a dandelion of that width.")
