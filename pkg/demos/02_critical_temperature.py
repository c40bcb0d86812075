"""Where the partition function stops converging.

Summing exp(-beta * weight) over the whole monoid converges only for beta
above a critical value: minus the log of the smallest root of the clique
polynomial.  The root is located by exact integer sign tests, so "the
critical value is zero" is an exact statement, not a small float.
"""

import math

from qlo import (
    ThermoContext,
    beta_critical_limsup_estimate,
    clique_roots_in_unit_interval,
    partition_function,
    preset_graph,
)

for name in ("free:2", "free:3", "abelian:2", "path:3", "cycle:5"):
    ctx = ThermoContext(preset_graph(name), tol=1e-12)
    cap = ctx.lemma_bound
    print(f"{name:10s} beta_c = {ctx.beta_c:.12f}   (a-priori cap {cap:.4f})")

print()
ctx = ThermoContext(preset_graph("path:3"))
report = clique_roots_in_unit_interval(ctx, 1e-10)
print("path:3 clique-polynomial roots in (0, 1]:")
for root in report.roots:
    exact = "exact" if root.is_exact else "isolated"
    print(f"    {root.value:.12f}  multiplicity {root.multiplicity}  ({exact})")
print("roots strictly between the smallest root and 1:", len(report.subcritical))

print("\npartition function of path:3 above beta_c = log 2:")
for beta in (0.8, 1.0, 1.5, 2.5):
    closed = partition_function(ctx, beta)
    trunc = partition_function(ctx, beta, "truncated", cutoff=14)
    print(f"    beta = {beta}: closed {closed:.9f}, truncated(14) {trunc:.9f}")

print("\ngrowth-rate estimate for free:2 (approaches log 2 from above):")
free2 = ThermoContext(preset_graph("free:2"))
for cutoff in (10, 15, 20):
    est = beta_critical_limsup_estimate(free2, cutoff)
    print(f"    cutoff {cutoff}: {est:.6f}   (log 2 = {math.log(2):.6f})")
