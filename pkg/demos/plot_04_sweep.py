"""
Sweeping a family
=================

A comparison table over random even graphs, the same rows the command
line ``sweep`` writes as CSV.
"""

from euler_census.harness import rows_to_csv, sweep

# a small node budget keeps this quick; the n=11 row records the skip instead
rows = sweep(
    "random-even", [8, 9, 10, 11], p=0.6, seed=40,
    methods=("formula", "exact"), node_budget=5_000_000,
)
print(rows_to_csv(rows))

# delta_scaled = |delta| n^(1/2 - eps) is the quantity the error bound controls
for row in rows:
    if row["delta"] is not None:
        print(f"{row['graph_id']:28s} delta {row['delta']:+.4f}  scaled {row['delta_scaled']:.4f}")
