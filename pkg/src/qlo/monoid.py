"""Weighted trace monoids presented by finite commutation graphs.

A finite simple graph on a set of generators, plus a strictly positive
rational weight per generator, presents a monoid in which two generators
commute exactly when they are joined by an edge (the free and free-abelian
monoids are the edgeless and complete special cases).  Elements are kept in
Foata normal form: a sequence of blocks, each block a clique of the graph,
where every letter of a block depends on some letter of the preceding block.
Equality, left divisibility, least common upper bounds and Wick reordering
are all decided with exact arithmetic; weights are never floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "GraphError",
    "MismatchedGraphError",
    "NotADivisorError",
    "INFINITY",
    "IndependenceGraph",
    "Trace",
    "build_graph",
    "normalize",
    "multiply",
    "divides",
    "left_quotient",
    "min_letters",
    "join",
    "wick",
]


class GraphError(ValueError):
    """Invalid commutation-graph data (bad generator, edge or weight)."""


class MismatchedGraphError(ValueError):
    """Traces over different commutation graphs were combined."""


class NotADivisorError(ValueError):
    """Raised by left_quotient(p, x) when p is not a left divisor of x."""


class _Infinity:
    """Tag for 'no common upper bound'.  Use the INFINITY singleton."""

    __slots__ = ()

    def __repr__(self):
        return "Infinity"


#: Result of ``join`` when the arguments have no common upper bound.
INFINITY = _Infinity()


def _as_weight(value, generator):
    if isinstance(value, float):
        raise GraphError(
            f"weight of {generator!r} must be an exact rational, not a float"
        )
    try:
        weight = Fraction(value)
    except (TypeError, ValueError) as exc:
        raise GraphError(f"invalid weight {value!r} for {generator!r}") from exc
    if weight <= 0:
        raise GraphError(f"weight of {generator!r} must be positive, got {weight}")
    return weight


class IndependenceGraph:
    """Commutation graph: vertices generate, edges mean 'these commute'."""

    __slots__ = (
        "generators",
        "weights",
        "edges",
        "_index",
        "_adj",
        "_block_cache",
        "_identity",
        "_hash",
    )

    def __init__(self, generators, weights, edges=()):
        gens = tuple(generators)
        if not gens:
            raise GraphError("at least one generator is required")
        index = {}
        for s in gens:
            if s in index:
                raise GraphError(f"duplicate generator {s!r}")
            index[s] = len(index)

        if hasattr(weights, "keys"):
            table = {}
            for s in gens:
                if s not in weights:
                    raise GraphError(f"missing weight for generator {s!r}")
                table[s] = _as_weight(weights[s], s)
            for s in weights:
                if s not in index:
                    raise GraphError(f"weight given for unknown generator {s!r}")
        else:
            table = {s: _as_weight(weights, s) for s in gens}

        adj = {s: set() for s in gens}
        edge_set = set()
        for pair in edges:
            a, b = tuple(pair)
            for end in (a, b):
                if end not in index:
                    raise GraphError(f"edge endpoint {end!r} is not a generator")
            if a == b:
                raise GraphError(f"self-loop at {a!r}")
            edge_set.add(frozenset((a, b)))
            adj[a].add(b)
            adj[b].add(a)

        self.generators = gens
        self.weights = table
        self.edges = frozenset(edge_set)
        self._index = index
        self._adj = adj
        self._block_cache = {}
        self._identity = None
        self._hash = None

    # -- basic queries -------------------------------------------------

    def weight(self, s):
        return self.weights[s]

    def commutes(self, s, r):
        return r in self._adj[s]

    def is_complete(self):
        n = len(self.generators)
        return len(self.edges) == n * (n - 1) // 2

    @property
    def scale(self):
        """lcm of the weight denominators; weights live on (1/scale)*Z."""
        return math.lcm(*(w.denominator for w in self.weights.values()))

    @property
    def min_weight(self):
        return min(self.weights.values())

    # -- element constructors -------------------------------------------

    def identity(self):
        if self._identity is None:
            self._identity = Trace(self, (), Fraction(0), 0)
        return self._identity

    def trace(self, word):
        return normalize(self, word)

    def gen(self, s):
        return normalize(self, [s])

    def intern_block(self, letters):
        """Return a canonical frozenset for a block (heavily shared)."""
        key = tuple(sorted(letters, key=self._index.__getitem__))
        cached = self._block_cache.get(key)
        if cached is None:
            cached = (frozenset(key), key)
            self._block_cache[key] = cached
        return cached

    # -- equality --------------------------------------------------------

    def _signature(self):
        return (
            self.generators,
            tuple(self.weights[s] for s in self.generators),
            self.edges,
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, IndependenceGraph):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._signature())
        return self._hash

    def __repr__(self):
        return (
            f"IndependenceGraph({len(self.generators)} generators, "
            f"{len(self.edges)} edges)"
        )


class Trace:
    """Monoid element in Foata normal form; immutable."""

    __slots__ = ("graph", "blocks", "weight", "length", "key", "_hash")

    def __init__(self, graph, blocks, weight, length):
        self.graph = graph
        self.blocks = blocks
        self.weight = weight
        self.length = length
        self.key = tuple(graph.intern_block(b)[1] for b in blocks)
        self._hash = hash(self.key)

    def is_identity(self):
        return not self.blocks

    def alphabet(self):
        letters = set()
        for b in self.blocks:
            letters |= b
        return letters

    def serialize(self):
        if not self.blocks:
            return "e"
        return "|".join(".".join(part) for part in self.key)

    def sort_key(self):
        return (self.weight, self.serialize())

    # sugar; the module-level functions are the primary API
    def __mul__(self, other):
        return multiply(self, other)

    def divides(self, other):
        return divides(self, other)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Trace):
            return NotImplemented
        if self.key != other.key:
            return False
        return self.graph is other.graph or self.graph == other.graph

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Trace({self.serialize()!r})"


def build_graph(generators, weights, edges=()):
    """Validate and build an IndependenceGraph."""
    return IndependenceGraph(generators, weights, edges)


# -- Foata normal form machinery ------------------------------------------


def _insert_letter(graph, blocks, s):
    """Heap-insert one letter into a mutable list of block sets."""
    adj = graph._adj[s]
    depth = 0
    for i in range(len(blocks) - 1, -1, -1):
        # a block with any letter dependent on s stops the fall
        if not blocks[i] <= adj:
            depth = i + 1
            break
    if depth == len(blocks):
        blocks.append({s})
    else:
        blocks[depth].add(s)


def _freeze(graph, blocks):
    return tuple(graph.intern_block(b)[0] for b in blocks)


def _from_block_sets(graph, blocks):
    frozen = _freeze(graph, blocks)
    weight = Fraction(0)
    length = 0
    for b in frozen:
        length += len(b)
        for s in b:
            weight += graph.weights[s]
    return Trace(graph, frozen, weight, length)


def _remove_min(graph, blocks, s):
    """Blocks of p with one front occurrence of s removed, renormalized."""
    idx = graph._index.__getitem__
    out = []
    for r in sorted(blocks[0] - {s}, key=idx):
        _insert_letter(graph, out, r)
    for b in blocks[1:]:
        for r in sorted(b, key=idx):
            _insert_letter(graph, out, r)
    return out


def _check_same_graph(p, q):
    if p.graph is not q.graph and p.graph != q.graph:
        raise MismatchedGraphError("traces come from different graphs")


# -- operations -------------------------------------------------------------


def normalize(graph, word):
    """Foata normal form of a word; constant on commutation classes."""
    letters = list(word)
    blocks = []
    weight = Fraction(0)
    for s in letters:
        if s not in graph._index:
            raise GraphError(f"unknown generator {s!r}")
        _insert_letter(graph, blocks, s)
        weight += graph.weights[s]
    return Trace(graph, _freeze(graph, blocks), weight, len(letters))


def multiply(p, q):
    """Normal form of the concatenation pq; weight and length add."""
    _check_same_graph(p, q)
    if not p.blocks:
        return q
    if not q.blocks:
        return p
    graph = p.graph
    idx = graph._index.__getitem__
    blocks = [set(b) for b in p.blocks]
    for b in q.blocks:
        for s in sorted(b, key=idx):
            _insert_letter(graph, blocks, s)
    return Trace(graph, _freeze(graph, blocks), p.weight + q.weight, p.length + q.length)


def min_letters(p):
    """Generators dividing p on the left; this is the first Foata block."""
    return set(p.blocks[0]) if p.blocks else set()


def divides(p, x):
    """True iff x = p*p' for some p' (left divisibility)."""
    _check_same_graph(p, x)
    if not p.blocks:
        return True
    if p.weight > x.weight or p.length > x.length:
        return False
    graph = p.graph
    idx = graph._index.__getitem__
    pb = [set(b) for b in p.blocks]
    xb = [set(b) for b in x.blocks]
    while pb:
        if len(pb) == 1:
            # a single block divides iff all its letters are minimal in x
            return bool(xb) and pb[0] <= xb[0]
        s = min(pb[0], key=idx)
        if not xb or s not in xb[0]:
            return False
        pb = _remove_min(graph, pb, s)
        xb = _remove_min(graph, xb, s)
    return True


def left_quotient(p, x):
    """The unique p' with p*p' = x; raises NotADivisorError otherwise."""
    _check_same_graph(p, x)
    graph = p.graph
    idx = graph._index.__getitem__
    pb = [set(b) for b in p.blocks]
    xb = [set(b) for b in x.blocks]
    while pb:
        s = min(pb[0], key=idx)
        if not xb or s not in xb[0]:
            raise NotADivisorError(
                f"{p.serialize()} does not divide {x.serialize()}"
            )
        pb = _remove_min(graph, pb, s)
        xb = _remove_min(graph, xb, s)
    return _from_block_sets(graph, xb)


def join(p, q):
    """Least common upper bound of p and q, or INFINITY if none exists.

    Recursion on minimal letters s of p: consume s from p and from the front
    of q when possible; when s does not occur in q it must commute with all
    of q, otherwise no common upper bound exists.
    """
    _check_same_graph(p, q)
    if not p.blocks:
        return q
    if not q.blocks:
        return p
    graph = p.graph
    idx = graph._index.__getitem__
    adj = graph._adj
    pb = [set(b) for b in p.blocks]
    qb = [set(b) for b in q.blocks]
    consumed = []
    while pb:
        s = min(pb[0], key=idx)
        pb = _remove_min(graph, pb, s)
        consumed.append(s)
        if qb and s in qb[0]:
            qb = _remove_min(graph, qb, s)
            continue
        neighbours = adj[s]
        for b in qb:
            if s in b or not b <= neighbours:
                return INFINITY
    blocks = []
    for s in consumed:
        _insert_letter(graph, blocks, s)
    for b in qb:
        for s in sorted(b, key=idx):
            _insert_letter(graph, blocks, s)
    return _from_block_sets(graph, blocks)


def wick(p, q):
    """Reorder a starred product: returns (a, b) with p*a = q*b = join(p, q).

    Returns None when join(p, q) = INFINITY (the product collapses to zero).
    """
    bound = join(p, q)
    if bound is INFINITY:
        return None
    return left_quotient(p, bound), left_quotient(q, bound)
