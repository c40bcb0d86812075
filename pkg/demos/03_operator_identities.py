"""Operator identities on the truncated regular representation.

A basis vector for every element of weight <= W, a shift operator for every
monoid element, and two families of identities that hold exactly at every
truncation: the covariance relation for range projections, and the vacuum
projection written as both a product and an alternating clique sum.
"""

import itertools

from qlo import (
    build_rep,
    enumerate_up_to,
    join,
    left_op,
    nica_check,
    preset_graph,
    range_projection,
    vacuum_projection,
    wick,
)
from qlo.monoid import INFINITY

graph = preset_graph("path:3")
rep = build_rep(graph, 4)
print(f"basis of weight <= 4: {rep.dim} elements")

a, b, c = (graph.gen(s) for s in "abc")
print("\nleast upper bounds drive the covariance relation:")
for p, q in [(a, b), (a, c), (b, c)]:
    bound = join(p, q)
    shown = bound.serialize() if bound is not INFINITY else "none"
    print(
        f"    join({p.serialize()}, {q.serialize()}) = {shown};"
        f"  projection identity holds: {nica_check(rep, p, q)}"
    )

print("\nWick reordering of a starred product:")
for p, q in [(a, b), (a, c)]:
    pieces = wick(p, q)
    if pieces is None:
        print(f"    {p.serialize()}* {q.serialize()} collapses to zero")
    else:
        x, y = pieces
        print(
            f"    {p.serialize()}* {q.serialize()} becomes "
            f"{x.serialize()} {y.serialize()}*"
        )

pool = [t for t in enumerate_up_to(graph, 3) if t.length <= 3]
ok = sum(
    nica_check(rep, p, q) for p, q in itertools.product(pool, repeat=2)
)
print(f"\ncovariance relation over all pairs of short elements: {ok}/{len(pool)**2}")

vac = vacuum_projection(rep)  # verifies product form == clique sum internally
print("vacuum projection is the rank-one matrix at the identity:", vac.entries)

ell = left_op(rep, a)
print("shift by 'a' is a partial isometry:", (ell.adjoint() @ ell).entries == {
    (i, i): 1
    for i, x in enumerate(rep.basis)
    if (a.weight + x.weight) <= rep.cutoff
})
