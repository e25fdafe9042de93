"""Finite simple graphs: parsing, canonical form, isomorphism and enumeration.

Vertices are the integers ``0..n-1``; an isolated vertex exists only through
the vertex count. Edges are stored as sorted pairs ``(i, j)`` with ``i < j`` in
lexicographic order, which is also the order of the edge basis vectors of the
associated Lie algebra.
"""

import itertools
import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from tqdm import tqdm

from .utils import GraphFormatError, LimitExceededError

_INDEX = re.compile(r"[0-9]+")

logger = logging.getLogger(__name__)

CANONICAL_VERTEX_LIMIT = 10
ENUMERATE_VERTEX_LIMIT = 7
TOTAL_DIMENSION_LIMIT = 10


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on the vertices ``0..n-1``.

    Edges may be given in any order and orientation; they are normalized.

    >>> Graph(3, ((2, 1), (0, 1))).edges
    ((0, 1), (1, 2))
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise GraphFormatError(f"vertex count must be a non-negative integer, got {self.n!r}")
        normalized = set()
        for index, pair in enumerate(self.edges):
            i, j = pair
            if i == j:
                raise GraphFormatError("loop", index=index)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphFormatError("endpoint out of range", index=index)
            key = (min(i, j), max(i, j))
            if key in normalized:
                raise GraphFormatError("duplicate edge", index=index)
            normalized.add(key)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def edge_set(self):
        return frozenset(self.edges)

    @cached_property
    def edge_index(self):
        """Position of each edge in the lexicographic edge order."""
        return {edge: k for k, edge in enumerate(self.edges)}

    @cached_property
    def adjacency(self):
        adj = [[False] * self.n for _ in range(self.n)]
        for i, j in self.edges:
            adj[i][j] = adj[j][i] = True
        return adj

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edge_set

    def non_edges(self):
        return [
            (i, j)
            for i, j in itertools.combinations(range(self.n), 2)
            if (i, j) not in self.edge_set
        ]

    def degree(self, v):
        return sum(self.adjacency[v])

    def degree_sequence(self):
        return sorted((self.degree(v) for v in range(self.n)), reverse=True)

    def isolated_vertices(self):
        return [v for v in range(self.n) if not any(self.adjacency[v])]

    def permute(self, sigma):
        """The graph with vertex ``i`` renamed to ``sigma[i]``."""
        if not is_permutation(sigma, self.n):
            raise ValueError(f"{sigma} is not a permutation of 0..{self.n - 1}")
        return Graph(self.n, tuple((sigma[i], sigma[j]) for i, j in self.edges))

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def to_dict(self):
        return {"n": self.n, "edges": [list(edge) for edge in self.edges]}

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    def to_edge_list(self):
        lines = [f"vertices {self.n}"]
        lines.extend(f"{i} {j}" for i, j in self.edges)
        return "\n".join(lines) + "\n"


def complete_graph(n):
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def path_graph(n):
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def empty_graph(n):
    return Graph(n, ())


# Parsing


def graph_from_dict(doc):
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphFormatError("graph JSON needs the keys 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphFormatError(f"'n' must be a non-negative integer, got {n!r}")
    if not isinstance(doc["edges"], list):
        raise GraphFormatError("'edges' must be a list")
    pairs = []
    for index, pair in enumerate(doc["edges"]):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise GraphFormatError("malformed edge", index=index)
        pairs.append(tuple(pair))
    return Graph(n, tuple(pairs))


def parse_graph(text):
    """Parse the edge-list format or the JSON format.

    The edge-list format is a ``vertices <n>`` header followed by one ``i j``
    pair per line; blank lines and ``#`` comments are skipped.

    >>> parse_graph("vertices 3\\n0 1\\n1 2").edges
    ((0, 1), (1, 2))
    >>> parse_graph("vertices 2\\n0 0")
    Traceback (most recent call last):
    ...
    graphlie.utils.GraphFormatError: loop at line 2
    """
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"malformed JSON ({e.msg})", line=e.lineno) from e
        return graph_from_dict(doc)

    n = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "vertices" or not _INDEX.fullmatch(tokens[1]):
                raise GraphFormatError("expected 'vertices <n>'", line=lineno)
            n = int(tokens[1])
            continue
        if len(tokens) != 2 or not all(_INDEX.fullmatch(t) for t in tokens):
            raise GraphFormatError("malformed line", line=lineno)
        i, j = int(tokens[0]), int(tokens[1])
        if i == j:
            raise GraphFormatError("loop", line=lineno)
        if i >= n or j >= n:
            raise GraphFormatError("endpoint out of range", line=lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError("duplicate edge", line=lineno)
        seen.add(key)
    if n is None:
        raise GraphFormatError("missing 'vertices <n>' header")
    return Graph(n, tuple(sorted(seen)))


def read_graph(path):
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        return parse_graph(f.read())


# Permutations


def is_permutation(sigma, n):
    return len(sigma) == n and sorted(sigma) == list(range(n))


def compose_permutations(f, h):
    """``f o h``: apply ``h`` first."""
    return tuple(f[h[i]] for i in range(len(h)))


def invert_permutation(sigma):
    inverse = [0] * len(sigma)
    for i, image in enumerate(sigma):
        inverse[image] = i
    return tuple(inverse)


def is_graph_isomorphism(sigma, g, h):
    if g.n != h.n or g.m != h.m or not is_permutation(sigma, g.n):
        return False
    return all(h.has_edge(sigma[i], sigma[j]) for i, j in g.edges)


# Canonical form


def _canonical_pairs(n):
    # column order: (0,1), (0,2), (1,2), (0,3), ... so that the bits among the
    # first k labelled vertices form a prefix
    return [(i, j) for j in range(1, n) for i in range(j)]


def canonical_form(g, limit=CANONICAL_VERTEX_LIMIT):
    """Lexicographically least adjacency bitstring over all relabelings.

    Bits run over the upper triangle column by column. The scan is exhaustive;
    branches whose prefix already exceeds the best string are cut, and of two
    unplaced twin vertices only the first is tried since swapping them is an
    automorphism.

    >>> canonical_form(Graph(2, ((0, 1),)))
    '1'
    >>> canonical_form(Graph(3, ((0, 1), (1, 2)))) == canonical_form(Graph(3, ((1, 0), (0, 2))))
    True
    """
    n = g.n
    if n > limit:
        raise LimitExceededError(
            f"{n} vertices: too large for exhaustive canonicalization (limit {limit})"
        )
    adj = g.adjacency
    neighbourhoods = [frozenset(v for v in range(n) if adj[u][v]) for u in range(n)]
    best = None
    order = []
    used = [False] * n
    bits = []

    def twins(u, v):
        return neighbourhoods[u] - {v} == neighbourhoods[v] - {u}

    def extend():
        nonlocal best
        k = len(order)
        if k == n:
            if best is None or bits < best:
                best = list(bits)
            return
        tried = []
        for v in range(n):
            if used[v] or any(twins(u, v) for u in tried):
                continue
            tried.append(v)
            start = len(bits)
            bits.extend(1 if adj[order[i]][v] else 0 for i in range(k))
            if best is None or bits <= best[: len(bits)]:
                used[v] = True
                order.append(v)
                extend()
                order.pop()
                used[v] = False
            del bits[start:]

    extend()
    return "".join(str(b) for b in best)


def graph_from_canonical(n, bits):
    pairs = _canonical_pairs(n)
    if len(bits) != len(pairs):
        raise ValueError(f"bitstring of length {len(bits)} does not fit {n} vertices")
    return Graph(n, tuple(pair for pair, bit in zip(pairs, bits, strict=True) if bit == "1"))


# Isomorphism


def graph_iso(g, h):
    """A vertex permutation carrying the edges of ``g`` onto those of ``h``, or None.

    Uses the VF2 matcher of networkx.
    """
    if g.n != h.n or g.m != h.m or g.degree_sequence() != h.degree_sequence():
        return None
    matcher = GraphMatcher(g.to_networkx(), h.to_networkx())
    if not matcher.is_isomorphic():
        return None
    sigma = tuple(matcher.mapping[i] for i in range(g.n))
    logger.debug("graph isomorphism %s found", sigma)
    return sigma


def automorphisms(g):
    """All automorphisms of ``g`` by exhaustive permutation scan, identity first."""
    return [
        sigma
        for sigma in itertools.permutations(range(g.n))
        if is_graph_isomorphism(sigma, g, g)
    ]


# Enumeration


def _sorted_classes(classes):
    return [
        graph_from_canonical(n, canon)
        for (n, canon) in sorted(classes, key=lambda key: (key[1].count("1"), key[1]))
    ]


def _classes_by_augmentation(n, edge_count, progress):
    max_edges = n * (n - 1) // 2
    top = max_edges if edge_count is None else edge_count
    level = {canonical_form(empty_graph(n), limit=n)}
    found = set(level)
    for m in tqdm(range(1, top + 1), desc=f"n={n} edges", disable=not progress):
        next_level = set()
        for canon in level:
            g = graph_from_canonical(n, canon)
            for i, j in g.non_edges():
                grown = Graph(n, (*g.edges, (i, j)))
                next_level.add(canonical_form(grown, limit=n))
        logger.debug("n=%d: %d classes with %d edges", n, len(next_level), m)
        level = next_level
        found |= next_level
    if edge_count is not None:
        found = level
    return {(n, canon) for canon in found}


def _classes_by_subsets(n, edge_count, progress):
    pairs = list(itertools.combinations(range(n), 2))
    if edge_count is None:
        subsets = itertools.chain.from_iterable(
            itertools.combinations(pairs, m) for m in range(len(pairs) + 1)
        )
        total = 2 ** len(pairs)
    else:
        subsets = itertools.combinations(pairs, edge_count)
        total = None
    found = set()
    for subset in tqdm(subsets, total=total, desc=f"n={n} subsets", disable=not progress):
        found.add((n, canonical_form(Graph(n, subset), limit=n)))
    return found


def enumerate_graphs(
    n, edge_count=None, exhaustive=False, limit=ENUMERATE_VERTEX_LIMIT, progress=False
):
    """One canonical representative per isomorphism class of graphs on ``n`` vertices.

    Classes are grown one edge at a time from the edgeless graph; with
    ``exhaustive=True`` every edge subset is canonicalized instead. Both give
    the same list, sorted by edge count and then canonical bitstring.

    >>> [len(enumerate_graphs(n)) for n in range(1, 5)]
    [1, 2, 4, 11]
    """
    if n > limit:
        raise LimitExceededError(f"{n} vertices exceeds the enumeration limit {limit}")
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    max_edges = n * (n - 1) // 2
    if edge_count is not None and not 0 <= edge_count <= max_edges:
        return []
    if exhaustive:
        classes = _classes_by_subsets(n, edge_count, progress)
    else:
        classes = _classes_by_augmentation(n, edge_count, progress)
    return _sorted_classes(classes)


def graphs_with_total(d, limit=TOTAL_DIMENSION_LIMIT, progress=False):
    """All isomorphism classes with ``n + |E| = d`` (and ``n >= 1``).

    >>> len(graphs_with_total(6))
    5
    """
    if d > limit:
        raise LimitExceededError(f"total {d} exceeds the classification limit {limit}")
    result = []
    for n in range(1, d + 1):
        m = d - n
        if m > n * (n - 1) // 2:
            continue
        result.extend(
            enumerate_graphs(n, edge_count=m, limit=max(n, 0), progress=progress)
        )
    return result
