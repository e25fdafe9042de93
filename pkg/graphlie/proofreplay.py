"""Replay of the finite steps that turn a Lie isomorphism into a graph isomorphism.

Given an isomorphism ``F: n(S, E) -> n(S', E')`` (graded or not), project the
images of the source vertices to ``V'`` to obtain ``S''``, check that ``S''``
is a basis, read off the graph ``(S'', E'')`` from target brackets, and check
that the torus diagonal in ``S''`` lies in ``G'``. The conjugation of tori is
not replayed; the final bijection ``S' -> S''`` comes from graph isomorphism
search between the target graph and the induced graph.
"""

import itertools
import logging
import random
from dataclasses import dataclass

from .field import FieldKind, identity_matrix, inverse, mat_mul, rank, transpose
from .graph import Graph, graph_iso, is_graph_isomorphism
from .liealg import GraphLieAlgebra, derived_dimension
from .morphism import (
    compose,
    extend_to_automorphism,
    functor_pushforward,
    is_invertible,
    is_lie_morphism,
    random_central_shear,
)
from .utils import MorphismError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplayInput:
    """A Lie isomorphism ``F`` between two graph algebras, checked on construction."""

    F: object

    def __post_init__(self):
        if not isinstance(self.source, GraphLieAlgebra) or not isinstance(
            self.target, GraphLieAlgebra
        ):
            raise MorphismError("proof replay needs maps between graph algebras")
        if not is_lie_morphism(self.F):
            raise MorphismError("input map does not preserve brackets")
        if not is_invertible(self.F):
            raise MorphismError("input map is not invertible")

    @property
    def source(self):
        return self.F.source

    @property
    def target(self):
        return self.F.target

    @property
    def field(self):
        return self.F.field


@dataclass
class ReplayReport:
    field: object
    s_double_prime: list
    basis_ok: bool
    dims_ok: bool
    induced_graph: Graph | None = None
    induced_iso_ok: bool = False
    torus_weights: tuple = ()
    torus_ok: bool = False
    final_bijection: tuple | None = None
    separating_weights: tuple | None = None
    separation_ok: bool | None = None

    @property
    def ok(self):
        return self.basis_ok and self.dims_ok and self.induced_iso_ok and self.torus_ok

    def to_dict(self):
        fmt = self.field.format
        return {
            "field": str(self.field.spec),
            "s_double_prime": [[fmt(x) for x in vec] for vec in self.s_double_prime],
            "basis_ok": self.basis_ok,
            "dims_ok": self.dims_ok,
            "induced_graph": None if self.induced_graph is None else self.induced_graph.to_dict(),
            "induced_iso_ok": self.induced_iso_ok,
            "torus_weights": [fmt(x) for x in self.torus_weights],
            "torus_ok": self.torus_ok,
            "final_bijection": None
            if self.final_bijection is None
            else list(self.final_bijection),
            "separating_weights": None
            if self.separating_weights is None
            else [fmt(x) for x in self.separating_weights],
            "separation_ok": self.separation_ok,
        }


def induced_vertex_set(r):
    """``S'' = {pi(F(v)) : v in S}`` with ``pi`` killing the edge part, and whether it is a basis.

    >>> from graphlie.graph import Graph
    >>> k2 = Graph(2, ((0, 1),))
    >>> vectors, ok = induced_vertex_set(ReplayInput(functor_pushforward((1, 0), k2, k2, "q")))
    >>> [[str(x) for x in v] for v in vectors], ok
    ([['0', '1'], ['1', '0']], True)
    """
    fld = r.field
    columns = transpose(r.F.full_matrix(), r.source.dim)
    vectors = [tuple(columns[i][: r.target.v_dim]) for i in range(r.source.v_dim)]
    basis_ok = (
        len(vectors) == r.target.v_dim
        and rank(fld, vectors, r.target.v_dim) == r.target.v_dim
    )
    return vectors, basis_ok


def dimensions_match(r):
    """``|S| = |S'|`` and ``|E| = dim [n, n] = dim [n', n'] = |E'|``."""
    src, tgt = r.source, r.target
    return (
        src.v_dim == tgt.v_dim
        and src.z_dim == tgt.z_dim
        and derived_dimension(src) == src.z_dim
        and derived_dimension(tgt) == tgt.z_dim
    )


def _pad(vec, a):
    return tuple(vec) + a.field.zeros(a.z_dim)


def induced_graph(r, vectors=None):
    """The graph on ``S''`` whose edges are the pairs with nonzero target bracket.

    Vertex ``k`` of the result stands for ``pi(F(v_k))``; the second value is
    whether ``v_k -> pi(F(v_k))`` carries the source edges exactly onto it.
    """
    if vectors is None:
        vectors, _ = induced_vertex_set(r)
    tgt, fld = r.target, r.field
    edges = []
    for i, j in itertools.combinations(range(len(vectors)), 2):
        coords = tgt.bracket_coords(_pad(vectors[i], tgt), _pad(vectors[j], tgt))
        if any(not fld.is_zero(c) for c in coords):
            edges.append((i, j))
    induced = Graph(len(vectors), tuple(edges))
    identity = tuple(range(r.source.v_dim))
    return induced, is_graph_isomorphism(identity, r.source.graph, induced)


def torus_element(r, d, vectors=None):
    """The ``V'`` map acting on ``S''`` by ``d``, in the standard basis: ``P diag(d) P^-1``."""
    if vectors is None:
        vectors, _ = induced_vertex_set(r)
    fld = r.field
    n = len(vectors)
    if len(d) != n:
        raise MorphismError(f"expected {n} torus weights, got {len(d)}")
    d = tuple(fld.coerce(x) for x in d)
    if any(fld.is_zero(x) for x in d):
        raise MorphismError("torus weights must be nonzero")
    P = transpose(vectors, n)
    diagonal = identity_matrix(fld, n)
    for i, x in enumerate(d):
        diagonal[i][i] = x
    return mat_mul(fld, mat_mul(fld, P, diagonal, n), inverse(fld, P), n)


def torus_membership(r, d, vectors=None):
    """Whether the torus element for ``d`` extends to an automorphism of the target."""
    return extend_to_automorphism(torus_element(r, d, vectors), r.target) is not None


def separating_weights(n, fld):
    """Nonzero weights whose products over distinct pairs are pairwise distinct.

    Over the rationals these are the first ``n`` primes. Over ``F_p`` they are
    searched for exhaustively in lexicographic order; None when none exist.

    >>> from graphlie.field import field_create
    >>> [str(w) for w in separating_weights(3, field_create("q"))]
    ['2', '3', '5']
    >>> separating_weights(3, field_create("fp:3")) is None
    True
    """
    if fld.spec.kind is FieldKind.RATIONALS:
        primes = []
        candidate = 2
        while len(primes) < n:
            if all(candidate % q for q in primes):
                primes.append(candidate)
            candidate += 1
        return tuple(fld.coerce(q) for q in primes)
    if n * (n - 1) // 2 > fld.spec.p - 1:
        return None
    nonzero = list(range(1, fld.spec.p))

    def extend(weights, products):
        if len(weights) == n:
            return tuple(weights)
        for w in nonzero:
            new = [fld.mul(w, x) for x in weights]
            if len(set(new)) < len(new) or products.intersection(new):
                continue
            found = extend([*weights, w], products | set(new))
            if found is not None:
                return found
        return None

    return extend([], set())


def eigenvalue_separation(m, weights, graph):
    """``w_a w_b`` is an eigenvalue of ``m`` on the edge part exactly when ``ab`` is an edge.

    Eigenvalues are tested exactly by the rank of ``B - lambda I``.
    """
    fld = m.field
    size = len(m.B)
    for a, b in itertools.combinations(range(graph.n), 2):
        lam = fld.mul(weights[a], weights[b])
        shifted = [
            [fld.sub(x, lam) if r == c else x for c, x in enumerate(row)]
            for r, row in enumerate(m.B)
        ]
        is_eigenvalue = size > 0 and rank(fld, shifted, size) < size
        if is_eigenvalue != graph.has_edge(a, b):
            logger.debug("pair (%d, %d): eigenvalue test disagrees with the graph", a, b)
            return False
    return True


def final_bijection(report, target_graph):
    """A vertex bijection ``S' -> S''`` carrying the target edges onto ``E''``, or None."""
    if report.induced_graph is None:
        return None
    f = graph_iso(target_graph, report.induced_graph)
    if f is not None and not is_graph_isomorphism(f, target_graph, report.induced_graph):
        return None
    return f


def replay(r, d=None, rng=None):
    """Run every step for ``r`` and collect the flags in a ``ReplayReport``.

    Torus weights default to random nonzero values when ``rng`` is given and
    to all ones otherwise.
    """
    fld = r.field
    vectors, basis_ok = induced_vertex_set(r)
    report = ReplayReport(fld, vectors, basis_ok, dimensions_match(r))
    if not basis_ok:
        logger.warning("S'' is not a basis of V'")
        return report
    report.induced_graph, report.induced_iso_ok = induced_graph(r, vectors)
    if d is None:
        if rng is None:
            d = tuple(fld.one() for _ in vectors)
        else:
            d = tuple(fld.random_nonzero(rng) for _ in vectors)
    report.torus_weights = tuple(fld.coerce(x) for x in d)
    report.torus_ok = torus_membership(r, report.torus_weights, vectors)
    report.final_bijection = final_bijection(report, r.target.graph)

    weights = separating_weights(len(vectors), fld)
    report.separating_weights = weights
    if weights is not None:
        torus = extend_to_automorphism(torus_element(r, weights, vectors), r.target)
        report.separation_ok = torus is not None and eigenvalue_separation(
            torus, weights, report.induced_graph
        )
    logger.info(
        "replay: basis=%s dims=%s induced_iso=%s torus=%s separation=%s",
        report.basis_ok,
        report.dims_ok,
        report.induced_iso_ok,
        report.torus_ok,
        report.separation_ok,
    )
    return report


def sheared_isomorphism(g, fld, rng=None, sigma=None, bound=3):
    """``shear o f_*`` from ``n(g)`` to ``n(g.permute(sigma))``: a non-graded Lie isomorphism.

    ``sigma`` defaults to a random permutation drawn from ``rng``.
    """
    rng = rng or random.Random(0)
    if sigma is None:
        sigma = list(range(g.n))
        rng.shuffle(sigma)
    sigma = tuple(sigma)
    h = g.permute(sigma)
    pushed = functor_pushforward(sigma, g, h, fld)
    return compose(random_central_shear(pushed.target, rng, bound), pushed)

