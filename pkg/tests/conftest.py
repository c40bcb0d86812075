"""Shared graphs and independent oracles for the test suite.

The oracles deliberately avoid the code paths they check: word rewriting for
normal forms, BFS over right multiplication for enumeration, factorization
search for divisibility, and minimal-upper-bound search for joins.
"""

import itertools
import random
from fractions import Fraction

import pytest

from qlo import Trace, build_graph, divides, multiply
from qlo.monoid import INFINITY


# -- named graphs -------------------------------------------------------------


def make_free2():
    return build_graph("ab", 1, [])


def make_free3():
    return build_graph("abc", 1, [])


def make_abelian2():
    return build_graph("ab", 1, [("a", "b")])


def make_abelian3():
    return build_graph("abc", 1, [("a", "b"), ("b", "c"), ("a", "c")])


def make_path3():
    return build_graph("abc", 1, [("a", "b"), ("b", "c")])


def make_path4():
    return build_graph("abcd", 1, [("a", "b"), ("b", "c"), ("c", "d")])


def make_cycle5():
    names = "abcde"
    return build_graph(
        names, 1, [(names[i], names[(i + 1) % 5]) for i in range(5)]
    )


def make_weighted_abelian2():
    return build_graph("ab", {"a": 1, "b": Fraction(3, 2)}, [("a", "b")])


NAMED_GRAPHS = {
    "free2": make_free2,
    "free3": make_free3,
    "abelian2": make_abelian2,
    "abelian3": make_abelian3,
    "path3": make_path3,
    "path4": make_path4,
    "cycle5": make_cycle5,
    "weighted_abelian2": make_weighted_abelian2,
}


def random_graph(n, seed, edge_probability=0.5):
    rng = random.Random(seed)
    names = "abcdefgh"[:n]
    edges = [
        (a, b)
        for i, a in enumerate(names)
        for b in names[i + 1 :]
        if rng.random() < edge_probability
    ]
    return build_graph(names, 1, edges)


@pytest.fixture
def path3():
    return make_path3()


@pytest.fixture
def free2():
    return make_free2()


@pytest.fixture
def abelian2():
    return make_abelian2()


# -- oracles ------------------------------------------------------------------


def commutation_class(graph, word):
    """All words reachable from `word` by swapping adjacent commuting letters."""
    word = tuple(word)
    seen = {word}
    frontier = [word]
    while frontier:
        current = frontier.pop()
        for i in range(len(current) - 1):
            a, b = current[i], current[i + 1]
            if a != b and graph.commutes(a, b):
                swapped = current[:i] + (b, a) + current[i + 2 :]
                if swapped not in seen:
                    seen.add(swapped)
                    frontier.append(swapped)
    return seen


def bfs_traces_up_to(graph, cutoff):
    """All traces of weight <= cutoff by BFS over right multiplication."""
    cutoff = Fraction(cutoff)
    seen = {graph.identity().key: graph.identity()}
    frontier = [graph.identity()]
    gens = [graph.gen(s) for s in graph.generators]
    while frontier:
        nxt = []
        for t in frontier:
            for g in gens:
                u = multiply(t, g)
                if u.weight <= cutoff and u.key not in seen:
                    seen[u.key] = u
                    nxt.append(u)
        frontier = nxt
    return sorted(seen.values(), key=Trace.sort_key)


def divides_by_word_search(graph, p, x):
    """p <= x iff some word u over the generators satisfies p*u = x."""
    gap = x.length - p.length
    if gap < 0:
        return False
    return any(
        multiply(p, graph.trace(u)) == x
        for u in itertools.product(graph.generators, repeat=gap)
    )


def join_by_search(p, q, candidates):
    """Least common upper bound among p*v for v of weight <= w(q).

    `candidates` must contain every trace of weight <= q.weight.  Returns
    None when no common upper bound exists; asserts the least element is
    unique and genuinely divides every other upper bound found.
    """
    upper_bounds = [
        multiply(p, v)
        for v in candidates
        if v.weight <= q.weight and divides(q, multiply(p, v))
    ]
    if not upper_bounds:
        return None
    min_weight = min(u.weight for u in upper_bounds)
    least = {u.key: u for u in upper_bounds if u.weight == min_weight}
    assert len(least) == 1, "minimal common upper bound is not unique"
    least = next(iter(least.values()))
    assert all(divides(least, u) for u in upper_bounds)
    return least


def cliques_by_subset_scan(graph):
    """Every subset of generators that is pairwise adjacent (incl. empty)."""
    out = []
    for r in range(len(graph.generators) + 1):
        for subset in itertools.combinations(graph.generators, r):
            if all(
                graph.commutes(a, b)
                for a, b in itertools.combinations(subset, 2)
            ):
                out.append(frozenset(subset))
    return out


def assert_join_matches_oracle(graph, pool, candidates):
    from qlo import join

    for p, q in itertools.product(pool, repeat=2):
        expected = join_by_search(p, q, candidates)
        actual = join(p, q)
        if expected is None:
            assert actual is INFINITY, (p, q)
        else:
            assert actual is not INFINITY and actual == expected, (p, q)
