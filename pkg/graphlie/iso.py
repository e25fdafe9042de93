"""Isomorphism of graph Lie algebras: fingerprints and an exhaustive graded search.

Any Lie isomorphism ``n -> n'`` maps ``[n, n]`` onto ``[n', n']`` and the
bracket factors through ``V = n / [n, n]``, so the induced vertex map together
with its action on wedges is itself an isomorphism. Existence of a Lie
isomorphism therefore reduces to existence of an invertible ``A`` with
``A v_i ^ A v_j`` in ``W'`` for every non-edge ``{i, j}`` (given equal vertex and
edge counts). ``GradedIsoSearch`` decides that over a prime field.

Search: columns of ``A`` are placed vertex by vertex. For a fixed column ``c``
of an already placed non-neighbour, the condition ``c ^ x in W'`` is linear in
``x``, so the admissible columns form a subspace computed by exact
elimination; only its projective points are tried, since scaling a column is
composition with a diagonal automorphism of the source. Candidates come in
lexicographic order and the first witness found is returned.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool

from tqdm import tqdm

from .field import FieldKind, FieldSpec, field_create, mat_mul, null_space
from .graph import enumerate_graphs, graph_iso, is_graph_isomorphism
from .liealg import build_algebra, center_basis, derived_dimension
from .morphism import (
    GradedMap,
    functor_pushforward,
    induced_edge_matrix,
    is_invertible,
    is_lie_morphism,
)
from .utils import FieldError, LimitExceededError, VerificationError

logger = logging.getLogger(__name__)

SEARCH_VERTEX_LIMIT = 5
THEOREM_VERTEX_LIMIT = 4


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    derived_dim: int
    center_dim: int

    def to_list(self):
        return [self.dim, self.derived_dim, self.center_dim]


def fingerprint(a):
    """(dim, dim [n, n], dim center); unequal fingerprints certify non-isomorphism.

    >>> from graphlie.graph import complete_graph
    >>> fingerprint(build_algebra(complete_graph(3), "fp:3")).to_list()
    [6, 3, 3]
    """
    return Fingerprint(a.dim, derived_dimension(a), len(center_basis(a)))


def _as_prime_spec(field_spec):
    if isinstance(field_spec, str):
        field_spec = FieldSpec.parse(field_spec)
    elif hasattr(field_spec, "spec"):
        field_spec = field_spec.spec
    if field_spec.kind is not FieldKind.PRIME:
        raise FieldError(
            f"graded isomorphism search needs a prime field, got {field_spec}"
        )
    return field_spec


def vertex_order(g):
    """Placement order: greedily the vertex with most already placed non-neighbours."""
    non_neighbours = [
        {w for w in range(g.n) if w != u and not g.has_edge(u, w)} for u in range(g.n)
    ]
    order = []
    remaining = list(range(g.n))
    while remaining:
        placed = set(order)
        best = max(
            remaining,
            key=lambda u: (len(non_neighbours[u] & placed), len(non_neighbours[u]), -u),
        )
        order.append(best)
        remaining.remove(best)
    return order


def projective_points(fld, basis, n):
    """Vectors of ``span(basis)`` with first nonzero entry 1, in lexicographic order.

    >>> projective_points(field_create("fp:3"), [(1, 0), (0, 1)], 2)
    [(0, 1), (1, 0), (1, 1), (1, 2)]
    """
    if not basis:
        return []
    coefficients = [list(c) for c in itertools.product(range(fld.p), repeat=len(basis))]
    points = set()
    for vec in mat_mul(fld, coefficients, [list(b) for b in basis], n):
        lead = next((x for x in vec if x), None)
        if lead is None:
            continue
        points.add(fld.scale(fld.inv(lead), vec))
    return sorted(points)


class GradedIsoSearch:
    """Backtracking search for a graded isomorphism ``n(g) -> n(h)`` over ``F_p``.

    After ``run()``, ``nodes`` is the number of partial assignments visited and
    ``candidates_per_depth[t]`` how many of them placed ``t + 1`` columns.
    """

    def __init__(self, g, h, field_spec, limit=SEARCH_VERTEX_LIMIT, jobs=1):
        self.g = g
        self.h = h
        self.spec = _as_prime_spec(field_spec)
        self.field = field_create(self.spec)
        self.limit = limit
        self.jobs = jobs
        self.nodes = 0
        self.candidates_per_depth = [0] * g.n
        self.order = vertex_order(g)
        self._candidates = {}

    def candidates(self, constraint_columns):
        key = tuple(sorted(constraint_columns))
        if key not in self._candidates:
            n = self.h.n
            rows = []
            for c in key:
                for k, l in self.h.edges:
                    row = [0] * n
                    row[l] = c[k]
                    row[k] = self.field.neg(c[l])
                    if any(row):
                        rows.append(row)
            if rows:
                basis = null_space(self.field, rows, n)
            else:
                basis = [self.field.unit(n, i) for i in range(n)]
            self._candidates[key] = projective_points(self.field, basis, n)
            logger.debug(
                "%d candidate columns under %d constraints",
                len(self._candidates[key]),
                len(key),
            )
        return self._candidates[key]

    def _extend(self, t, columns, placed):
        if t == self.g.n:
            return dict(columns)
        u = self.order[t]
        constraints = [
            columns[w] for w in self.order[:t] if not self.g.has_edge(u, w)
        ]
        # a candidate is outside span(placed) iff some annihilator vector sees it
        annihilator = null_space(self.field, placed, self.h.n) if placed else None
        for candidate in self.candidates(constraints):
            if annihilator is not None and not any(
                self.field.dot(candidate, k) for k in annihilator
            ):
                continue
            self.nodes += 1
            self.candidates_per_depth[t] += 1
            columns[u] = candidate
            found = self._extend(t + 1, columns, [*placed, candidate])
            if found is not None:
                return found
            del columns[u]
        return None

    def search_below(self, root):
        """Search with the first placed vertex's column fixed to ``root``."""
        self.nodes += 1
        self.candidates_per_depth[0] += 1
        columns = {self.order[0]: tuple(root)}
        return self._extend(1, columns, [tuple(root)])

    def _run_parallel(self):
        roots = self.candidates([])
        payloads = [(self.g, self.h, str(self.spec), self.limit, root) for root in roots]
        with Pool(self.jobs) as pool:
            # imap keeps root order, so the first hit is the sequential witness
            for columns, nodes, per_depth in pool.imap(_search_from_root, payloads):
                self.nodes += nodes
                self.candidates_per_depth = [
                    a + b for a, b in zip(self.candidates_per_depth, per_depth, strict=True)
                ]
                if columns is not None:
                    return columns
        return None

    def _witness(self, columns):
        n = self.g.n
        A = tuple(tuple(columns[u][r] for u in range(n)) for r in range(n))
        source = build_algebra(self.g, self.field)
        target = build_algebra(self.h, self.field)
        B = induced_edge_matrix(self.field, A, self.g.edges, self.h.edges)
        witness = GradedMap(source, target, A, B)
        if not (is_lie_morphism(witness) and is_invertible(witness)):
            raise VerificationError(
                "search produced a map that is not a Lie isomorphism", witness.to_dict()
            )
        return witness

    def run(self):
        g, h = self.g, self.h
        if g.n != h.n or g.m != h.m:
            return None
        if g.n > self.limit:
            raise LimitExceededError(
                f"search space too large: {g.n} vertices exceeds the limit {self.limit}"
            )
        if self.jobs > 1 and g.n > 0:
            columns = self._run_parallel()
        else:
            columns = self._extend(0, {}, [])
        logger.debug("graded search visited %d nodes", self.nodes)
        if columns is None:
            return None
        return self._witness(columns)


def _search_from_root(payload):
    g, h, spec, limit, root = payload
    search = GradedIsoSearch(g, h, spec, limit)
    return search.search_below(root), search.nodes, search.candidates_per_depth


def graded_iso_search(g, h, field_spec, limit=SEARCH_VERTEX_LIMIT, jobs=1):
    """A graded Lie isomorphism ``n(g) -> n(h)`` over ``F_p``, or None."""
    return GradedIsoSearch(g, h, field_spec, limit=limit, jobs=jobs).run()


@dataclass
class IsoReport:
    g: object
    h: object
    field_spec: FieldSpec
    fingerprints: tuple
    graph_iso_result: bool
    lie_iso_result: bool
    graph_witness: tuple | None = None
    lie_witness: GradedMap | None = None
    lie_method: str = "search"
    search_nodes: int = 0

    @property
    def consistent(self):
        return self.graph_iso_result == self.lie_iso_result

    def to_dict(self):
        return {
            "graphs": [self.g.to_dict(), self.h.to_dict()],
            "field": str(self.field_spec),
            "fingerprints": [fp.to_list() for fp in self.fingerprints],
            "graph_iso": self.graph_iso_result,
            "lie_iso": self.lie_iso_result,
            "graph_witness": None if self.graph_witness is None else list(self.graph_witness),
            "lie_witness": None if self.lie_witness is None else self.lie_witness.to_dict(),
            "lie_method": self.lie_method,
            "search_nodes": self.search_nodes,
        }


def lie_iso_equivalent(g, h, field_spec, limit=SEARCH_VERTEX_LIMIT, jobs=1):
    """Decide graph and Lie isomorphism independently and report both.

    Fingerprints are compared first; the graded search runs only when they
    agree. When the vertex budget rules the search out but the graphs are
    isomorphic, the pushforward of the graph isomorphism is the Lie witness.
    """
    spec = _as_prime_spec(field_spec)
    fld = field_create(spec)
    fingerprints = (
        fingerprint(build_algebra(g, fld)),
        fingerprint(build_algebra(h, fld)),
    )
    sigma = graph_iso(g, h)
    if sigma is not None and not is_graph_isomorphism(sigma, g, h):
        raise VerificationError("graph isomorphism witness is not edge-preserving", list(sigma))
    report = IsoReport(g, h, spec, fingerprints, sigma is not None, False, sigma)

    if fingerprints[0] != fingerprints[1]:
        report.lie_method = "fingerprint"
        return report
    if g.n > limit and sigma is not None:
        report.lie_method = "pushforward"
        report.lie_witness = functor_pushforward(sigma, g, h, fld)
        report.lie_iso_result = True
        return report
    search = GradedIsoSearch(g, h, spec, limit=limit, jobs=jobs)
    witness = search.run()
    report.search_nodes = search.nodes
    report.lie_witness = witness
    report.lie_iso_result = witness is not None
    return report


@dataclass
class TheoremReport:
    field_spec: FieldSpec
    n_max: int
    classes: int
    pairs_tested: int
    iso_pairs: int
    max_search_nodes: int
    wall_time_ms: int
    violations: list

    def to_dict(self):
        return {
            "field": str(self.field_spec),
            "n_max": self.n_max,
            "classes": self.classes,
            "pairs_tested": self.pairs_tested,
            "iso_pairs": self.iso_pairs,
            "max_search_nodes": self.max_search_nodes,
            "violations": self.violations,
            "wall_time_ms": self.wall_time_ms,
        }


def theorem_check(
    n_max,
    field_spec,
    limit=THEOREM_VERTEX_LIMIT,
    search_limit=SEARCH_VERTEX_LIMIT,
    jobs=1,
    progress=False,
):
    """Graph isomorphism against Lie isomorphism for every pair of classes with ``n <= n_max``.

    Pairs are unordered and include each class with itself. A disagreement
    raises ``VerificationError`` with the report of the offending pair.
    """
    spec = _as_prime_spec(field_spec)
    if n_max > limit:
        raise LimitExceededError(f"n_max {n_max} exceeds the theorem-check limit {limit}")
    start = time.perf_counter()
    classes = [g for n in range(1, n_max + 1) for g in enumerate_graphs(n)]
    pairs = list(itertools.combinations_with_replacement(range(len(classes)), 2))
    iso_pairs = 0
    max_nodes = 0
    for i, j in tqdm(pairs, desc=f"theorem check {spec}", disable=not progress):
        report = lie_iso_equivalent(
            classes[i], classes[j], spec, limit=search_limit, jobs=jobs
        )
        logger.info(
            "pair (%d, %d): graph_iso=%s lie_iso=%s via %s",
            i,
            j,
            report.graph_iso_result,
            report.lie_iso_result,
            report.lie_method,
        )
        if not report.consistent:
            raise VerificationError(
                f"graph and Lie isomorphism disagree on classes {i} and {j}",
                {"violations": [report.to_dict()]},
            )
        iso_pairs += report.lie_iso_result
        max_nodes = max(max_nodes, report.search_nodes)
    elapsed = int((time.perf_counter() - start) * 1000)
    return TheoremReport(
        spec, n_max, len(classes), len(pairs), iso_pairs, max_nodes, elapsed, []
    )
