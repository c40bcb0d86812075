"""Equilibrium values: symbolic identities and controlled numerics.

The normalized trace against exp(-beta * H) picks out diagonal monomials:
its value on a shift pair (p, q) is exp(-beta * w(p)) when p = q and zero
otherwise.  The twisted-trace condition that characterizes equilibrium is
checked two ways: exactly (comparing rational exponents, no beta involved)
and numerically on a truncation (residuals controlled by an exact tail
bound).  As beta grows, everything collapses onto the vacuum state.
"""

import itertools
import random

from qlo import (
    ThermoContext,
    build_rep,
    enumerate_up_to,
    fock_state_value,
    gibbs_numeric,
    gibbs_value,
    kms_identity_check,
    kms_numeric_check,
    partition_function,
    preset_graph,
    tail_mass,
    vacuum_projection,
)

graph = preset_graph("path:3")
ctx = ThermoContext(graph)
beta = 2.0

print("symbolic equilibrium values (exponents are exact rationals):")
p = graph.trace("ab")
print(f"    on ({p.serialize()}, {p.serialize()}): exponent {gibbs_value(p, p).exponent}")
print(f"    on ({p.serialize()}, a): zero -> {gibbs_value(p, graph.gen('a')).is_zero()}")

pool = [t for t in enumerate_up_to(graph, 2) if t.length <= 2]
holds = sum(
    kms_identity_check(*quad).holds
    for quad in itertools.product(pool, repeat=4)
)
print(f"\ntwisted-trace identity over all short quadruples: {holds}/{len(pool)**4}")

print("\nnumeric cross-check on a weight-10 truncation at beta = 2:")
rep = build_rep(graph, 10)
rng = random.Random(0)
for _ in range(3):
    p1, q1, p2, q2 = (rng.choice(pool) for _ in range(4))
    report = kms_numeric_check(rep, (p1, q1), (p2, q2), beta)
    print(
        f"    residual {report.residual:.3e} <= tail bound {report.bound:.3e}"
    )

print("\nvacuum expectation against the closed partition function:")
for cutoff in (6, 8, 10):
    repc = build_rep(graph, cutoff)
    value = gibbs_numeric(repc, vacuum_projection(repc), beta)
    z = partition_function(ctx, beta)
    print(
        f"    cutoff {cutoff}: psi(vacuum) * Z = {value * z:.9f}"
        f"  (tail bound {tail_mass(ctx, beta, cutoff):.2e})"
    )

print("\nhigh-beta limit collapses onto the vacuum state:")
a = graph.gen("a")
for b in (5.0, 10.0, 20.0):
    print(
        f"    beta {b:5.1f}: equilibrium value {gibbs_value(a, a).value_at(b):.2e},"
        f" vacuum value {fock_state_value(a, a).value_at(b):.1f}"
    )
