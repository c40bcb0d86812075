"""Truncated representation: operator identities, Gibbs numerics, tail bounds."""

import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest

from qlo import (
    ComputationError,
    MismatchedGraphError,
    SparseOperator,
    ThermoContext,
    build_rep,
    density,
    divides,
    dynamics_factor,
    enumerate_up_to,
    evolution_unitary,
    gibbs_numeric,
    gibbs_value,
    kms_numeric_check,
    left_op,
    left_quotient,
    multiply,
    nica_check,
    normalize,
    partition_function,
    range_projection,
    tail_mass,
    vacuum_projection,
)
from conftest import (
    make_abelian2,
    make_free2,
    make_free3,
    make_path3,
    make_weighted_abelian2,
    random_graph,
)


# -- sparse operators -----------------------------------------------------------


def test_sparse_operator_basics():
    eye = SparseOperator.identity(3)
    assert eye @ eye == eye
    a = SparseOperator(2, {(0, 1): 2 + 1j})
    assert a.adjoint().entries == {(1, 0): 2 - 1j}
    assert a.adjoint().adjoint() == a
    assert (a - a).is_zero()
    assert SparseOperator.diagonal([1, 2, 3]).trace() == 6
    with pytest.raises(ValueError):
        SparseOperator(2, {(0, 5): 1})


def test_sparse_matmul_matches_dense():
    rng = random.Random(5)
    for _ in range(20):
        dim = 4
        a_entries = {
            (rng.randrange(dim), rng.randrange(dim)): rng.randint(-3, 3)
            for _ in range(6)
        }
        b_entries = {
            (rng.randrange(dim), rng.randrange(dim)): rng.randint(-3, 3)
            for _ in range(6)
        }
        a = SparseOperator(dim, a_entries)
        b = SparseOperator(dim, b_entries)
        dense = [[0] * dim for _ in range(dim)]
        for (r, k), va in a.entries.items():
            for (k2, c), vb in b.entries.items():
                if k == k2:
                    dense[r][c] += va * vb
        product = a @ b
        for r in range(dim):
            for c in range(dim):
                assert product.entries.get((r, c), 0) == dense[r][c]


# -- representation building -------------------------------------------------------


def test_build_rep_dimensions():
    assert build_rep(make_free2(), 2).dim == 7
    assert build_rep(make_path3(), 2).dim == 11
    assert build_rep(make_free3(), 0).dim == 1


def test_basis_starts_at_identity_and_is_downward_closed():
    rep = build_rep(random_graph(5, seed=59), 3)
    assert rep.basis[0].is_identity()
    keys = set(rep.index)
    for x in rep.basis:
        for s in x.blocks[0] if x.blocks else ():
            keys_parent = left_quotient(rep.graph.gen(s), x).key
            assert keys_parent in keys


# -- left translations ----------------------------------------------------------


def test_left_op_examples():
    g = make_free2()
    rep = build_rep(g, 1)
    assert left_op(rep, g.identity()) == SparseOperator.identity(rep.dim)
    la = left_op(rep, g.gen("a"))
    idx = {t.serialize(): i for i, t in enumerate(rep.basis)}
    assert la.entries == {(idx["a"], idx["e"]): 1}  # a, b overflow the cutoff


def test_left_op_is_partial_isometry():
    g = make_path3()
    rep = build_rep(g, 4)
    for word in ("a", "ab", "ca", "bb"):
        p = normalize(g, word)
        ell = left_op(rep, p)
        prod = ell.adjoint() @ ell
        # L*L is the diagonal projection onto the columns that survived
        survivors = {
            i
            for i, x in enumerate(rep.basis)
            if multiply(p, x).weight <= rep.cutoff
        }
        assert prod == SparseOperator(
            rep.dim, {(i, i): 1 for i in survivors}
        )


def test_adjoint_is_combinatorial_backward_map():
    g = make_abelian2()
    rep = build_rep(g, 3)
    for word in ("a", "ab", "ba", "aab"):
        p = normalize(g, word)
        backward = {}
        for col, x in enumerate(rep.basis):
            if divides(p, x):
                backward[(rep.index_of(left_quotient(p, x)), col)] = 1
        assert left_op(rep, p).adjoint() == SparseOperator(rep.dim, backward)


def test_left_op_semigroup_property_on_surviving_columns():
    g = random_graph(4, seed=61)
    rep = build_rep(g, 4)
    pool = enumerate_up_to(g, 2)
    rng = random.Random(3)
    for _ in range(25):
        p, q = rng.choice(pool), rng.choice(pool)
        pq = multiply(p, q)
        composed = left_op(rep, p) @ left_op(rep, q)
        direct = left_op(rep, pq)
        for col, x in enumerate(rep.basis):
            if multiply(pq, x).weight <= rep.cutoff and multiply(q, x).weight <= rep.cutoff:
                assert composed.entries.get(
                    (rep.index_of(multiply(pq, x)), col)
                ) == direct.entries.get((rep.index_of(multiply(pq, x)), col))


def test_range_projection_examples():
    g = make_free2()
    rep = build_rep(g, 2)
    assert range_projection(rep, g.identity()) == SparseOperator.identity(rep.dim)
    pa = range_projection(rep, g.gen("a"))
    marked = {rep.basis[i].serialize() for (i, _) in pa.entries}
    assert marked == {"a", "a|a", "a|b"}
    heavy = normalize(g, "aab")
    assert range_projection(rep, heavy).is_zero()


def test_left_op_times_adjoint_is_range_projection():
    for make in (make_free2, make_abelian2, make_path3):
        g = make()
        rep = build_rep(g, 3)
        for x in enumerate_up_to(g, 2):
            ell = left_op(rep, x)
            assert ell @ ell.adjoint() == range_projection(rep, x)


# -- covariance and vacuum identities -----------------------------------------------


def test_nica_check_examples():
    g = make_path3()
    rep = build_rep(g, 3)
    assert nica_check(rep, g.gen("a"), g.gen("c"))  # both sides zero
    g2 = make_abelian2()
    rep2 = build_rep(g2, 3)
    assert nica_check(rep2, g2.gen("a"), g2.gen("b"))
    assert nica_check(rep, normalize(g, "ab"), g.identity())


def test_nica_check_exhaustive_small():
    for make in (make_free2, make_abelian2, make_path3):
        g = make()
        rep = build_rep(g, 4)
        pool = [t for t in enumerate_up_to(g, 3) if t.length <= 3]
        for p, q in itertools.product(pool, repeat=2):
            assert nica_check(rep, p, q), (p, q)


def test_vacuum_projection_all_graphs():
    for make in (make_free2, make_abelian2, make_path3, make_weighted_abelian2):
        g = make()
        for cutoff in (2, 4):
            rep = build_rep(g, cutoff)
            vac = vacuum_projection(rep)
            assert vac == SparseOperator(rep.dim, {(0, 0): 1})


# -- density, unitaries, Gibbs numerics ----------------------------------------------


def test_density_entries():
    g = make_free2()
    rep = build_rep(g, 2)
    assert density(rep, 0.0) == SparseOperator.identity(rep.dim)
    d = density(rep, math.log(2))
    idx = rep.index_of(g.gen("a"))
    assert abs(d.entries[(idx, idx)] - 0.5) <= 1e-15
    ctx = ThermoContext(g)
    assert abs(
        d.trace() - partition_function(ctx, math.log(2), "truncated", cutoff=2)
    ) <= 1e-12


def test_evolution_unitary_conjugation():
    g = make_weighted_abelian2()
    rep = build_rep(g, 4)
    p = normalize(g, "ab")
    ell = left_op(rep, p)
    for k in range(16):
        t = -3.5 + 0.45 * k
        u = evolution_unitary(rep, t)
        assert all(
            abs(abs(v) - 1) <= 1e-12 for v in u.entries.values()
        )
        conjugated = u @ ell @ u.adjoint()
        phase = cmath.exp(1j * t * float(p.weight))
        for key, v in ell.entries.items():
            assert cmath.isclose(
                conjugated.entries[key], phase * v, abs_tol=1e-12
            )
        assert set(conjugated.entries) == set(ell.entries)


def test_gibbs_numeric_identity_and_offdiagonal():
    g = make_path3()
    rep = build_rep(g, 6)
    assert abs(gibbs_numeric(rep, SparseOperator.identity(rep.dim), 1.0) - 1.0) <= 1e-15
    a, b = g.gen("a"), g.gen("b")
    op = left_op(rep, a) @ left_op(rep, b).adjoint()
    assert gibbs_numeric(rep, op, 1.2) == 0.0  # exactly, at every cutoff


def test_gibbs_numeric_vacuum_normalization():
    g = make_path3()
    ctx = ThermoContext(g)
    beta = 1.5 * ctx.beta_c
    previous_gap = None
    for cutoff in (6, 8, 10):
        rep = build_rep(g, cutoff)
        vac = vacuum_projection(rep)
        value = gibbs_numeric(rep, vac, beta)
        z_closed = partition_function(ctx, beta)
        gap = abs(value * z_closed - 1.0)
        assert gap <= tail_mass(ctx, beta, cutoff) + 1e-12
        if previous_gap is not None:
            assert gap < previous_gap
        previous_gap = gap


def test_gibbs_numeric_monomials_within_tail():
    g = make_free2()
    ctx = ThermoContext(g)
    beta = 1.5 * ctx.beta_c
    cutoff = 10
    rep = build_rep(g, cutoff)
    rng = random.Random(17)
    pool = enumerate_up_to(g, 4)
    for _ in range(30):
        p = rng.choice(pool)
        op = range_projection(rep, p)  # equals L_p L_p^*, pinned above
        got = gibbs_numeric(rep, op, beta)
        want = gibbs_value(p, p).value_at(beta)
        bound = (
            want
            * tail_mass(ctx, beta, cutoff, up_to=Fraction(cutoff) - p.weight)
        )
        assert abs(got - want) <= bound + 1e-12


def test_dynamics_factor():
    g = make_free2()
    a, e = g.gen("a"), g.identity()
    assert dynamics_factor(a, a, 1.7 + 0.3j) == 1
    assert abs(dynamics_factor(a, e, 2j) - math.exp(-2.0)) <= 1e-15
    for t in (0.1, 1.0, 5.0):
        assert abs(abs(dynamics_factor(a, e, t)) - 1.0) <= 1e-15


# -- numeric twisted-trace residuals ---------------------------------------------------


def test_kms_numeric_diagonal_case_is_exact():
    g = make_free2()
    rep = build_rep(g, 6)
    e = g.identity()
    p = normalize(g, "ab")
    report = kms_numeric_check(rep, (e, e), (p, p), 2.0)
    assert report.residual == 0.0
    assert report.ok


def test_kms_numeric_random_monomials_within_bound():
    g = make_free2()
    rep = build_rep(g, 10)
    rng = random.Random(29)
    pool = [t for t in enumerate_up_to(g, 2) if t.length <= 2]
    worst = 0.0
    for _ in range(10):
        quad = [rng.choice(pool) for _ in range(4)]
        report = kms_numeric_check(rep, (quad[0], quad[1]), (quad[2], quad[3]), 2.0)
        assert report.ok
        worst = max(worst, report.residual)
    assert worst < 1e-6


def test_kms_numeric_bound_decreases_with_cutoff():
    g = make_path3()
    p1, q1 = g.gen("a"), g.gen("b")
    p2, q2 = normalize(g, "bc"), g.identity()
    bounds = []
    for cutoff in (6, 9, 12):
        rep = build_rep(g, cutoff)
        report = kms_numeric_check(rep, (p1, q1), (p2, q2), 2.0)
        assert report.ok
        bounds.append(report.bound)
    assert bounds[0] > bounds[1] > bounds[2]


def test_kms_numeric_requires_supercritical_beta():
    g = make_free2()
    rep = build_rep(g, 4)
    with pytest.raises(ComputationError):
        kms_numeric_check(rep, (g.gen("a"), g.gen("a")), (g.gen("b"), g.gen("b")), 0.5)


def test_rep_rejects_foreign_traces():
    rep = build_rep(make_free2(), 3)
    with pytest.raises(MismatchedGraphError):
        left_op(rep, make_path3().gen("a"))
