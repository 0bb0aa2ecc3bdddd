"""
Asymptotic estimate against exact counts
========================================

Compare the closed-form estimate of ln EC(G) with a full depth-first count
on small complete graphs, a cycle and a random even graph.
"""

import math

from euler_census import (
    complete_graph,
    count_eulerian_circuits,
    cycle_graph,
    format_log_count,
    ln_ec_estimate,
    random_even_graph,
)

graphs = {
    "K3": complete_graph(3),
    "K5": complete_graph(5),
    "C6": cycle_graph(6),
    "even n=8": random_even_graph(8, 0.6, seed=3),
}

for name, g in graphs.items():
    est = ln_ec_estimate(g)
    exact = count_eulerian_circuits(g)
    delta = math.exp(math.log(exact.count) - est.ln_ec) - 1
    print(
        f"{name:9s} exact {exact.count:>8d}  estimate {format_log_count(est.ln_ec)}"
        f"  relative error {delta:+.4f}  ({exact.nodes_explored} search nodes)"
    )

# The estimate is a sum of readable pieces
for key, value in ln_ec_estimate(complete_graph(5)).components.items():
    print(f"  {key:14s} {value:+.6f}")

# Large graphs stay in log space, far past float range
big = complete_graph(401)
print("K401:", format_log_count(ln_ec_estimate(big).ln_ec))
