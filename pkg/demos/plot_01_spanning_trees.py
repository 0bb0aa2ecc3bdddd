"""
Spanning trees three ways
=========================

Kirchhoff's determinant, the Laplacian spectrum and plain subset
enumeration all count the same trees.
"""

import math

import numpy as np

from euler_census import (
    brute_force_spanning_trees,
    complete_graph,
    eigenvalues_symmetric,
    laplacian,
    spanning_tree_count_exact,
)
from euler_census.graph import make_rng, random_even_graph

# A small even graph from the seeded generator
g = random_even_graph(7, 0.6, seed=2)
print(f"n={g.n}, m={g.m}, degrees={g.degrees.tolist()}")

# Exact integer count from a Bareiss determinant of the reduced Laplacian
t = spanning_tree_count_exact(g)

# The same number from the nonzero eigenvalues: t = prod(lambda_2..n) / n
ev = eigenvalues_symmetric(laplacian(g).Q)
t_spec = math.exp(np.sum(np.log(ev[1:])) - math.log(g.n))

# And by checking every (n-1)-edge subset
t_brute = brute_force_spanning_trees(g)
print(f"determinant {t}, spectrum {t_spec:.6f}, enumeration {t_brute}")

# Cayley's formula falls out for complete graphs
for n in range(2, 10):
    print(n, spanning_tree_count_exact(complete_graph(n)), n ** (n - 2))
