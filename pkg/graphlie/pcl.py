"""Free partially commutative Lie algebras truncated at degree two.

The free Lie algebra on the vertex set, cut off above degree two, has the
vertices as degree-one basis and ``[v_i, v_j]`` (``i < j``) as degree-two Hall
basis. Killing the brackets of non-adjacent vertices and everything of degree
three or more leaves ``l(S, E) / l^3``, which is the graph algebra again.
"""

import itertools
import logging
from dataclasses import dataclass

from .field import FieldKind, field_create, mat_mul, row_reduce
from .graph import graph_iso
from .iso import SEARCH_VERTEX_LIMIT, _as_prime_spec, fingerprint, graded_iso_search
from .liealg import StructureConstantAlgebra, build_algebra
from .morphism import (
    GradedMap,
    compose,
    functor_pushforward,
    induced_edge_matrix,
    invert,
    is_invertible,
    is_lie_morphism,
)
from .utils import LimitExceededError, VerificationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreeLieDegree2:
    """Generators ``v0..v(n-1)``, the degree-two Hall basis and the relations to impose."""

    n: int
    relations: tuple = ()

    @property
    def degree2_basis(self):
        return tuple(itertools.combinations(range(self.n), 2))

    @property
    def dim(self):
        return self.n + len(self.degree2_basis)

    def relation_vectors(self, fld):
        """Each relation ``[v_i, v_j] = 0`` as a vector on the degree-two basis."""
        index = {pair: k for k, pair in enumerate(self.degree2_basis)}
        size = len(index)
        return [fld.unit(size, index[pair]) for pair in self.relations]

    @classmethod
    def for_graph(cls, g):
        return cls(g.n, tuple(g.non_edges()))


def quotient_projection(fld, free):
    """Quotient of the degree-two part by the span of the relations.

    :return: (surviving Hall pairs, function mapping a degree-two vector to
        its coordinates on the surviving pairs)
    """
    basis = free.degree2_basis
    size = len(basis)
    relations = free.relation_vectors(fld)
    if relations:
        reduced, pivots = row_reduce(fld, relations, size)
        reduced = reduced[: len(pivots)]
    else:
        reduced, pivots = [], []
    surviving = [c for c in range(size) if c not in pivots]
    # projection onto the surviving pairs along the span of the relations
    P = [[fld.zero()] * len(surviving) for _ in range(size)]
    for j, c in enumerate(surviving):
        P[c][j] = fld.one()
        for row, p in zip(reduced, pivots, strict=True):
            P[p][j] = fld.neg(row[c])

    def project(vec):
        return tuple(mat_mul(fld, [list(vec)], P, len(surviving))[0])

    return [basis[c] for c in surviving], project


def pcl_mod_cube(g, fld):
    """``l(S, E) / l^3`` as a structure-constant algebra.

    >>> from graphlie.graph import Graph
    >>> a = pcl_mod_cube(Graph(2, ((0, 1),)), "q")
    >>> a.basis_labels, a.dim
    (('v0', 'v1', '[v0,v1]'), 3)
    """
    if not hasattr(fld, "spec"):
        fld = field_create(fld)
    free = FreeLieDegree2.for_graph(g)
    surviving, project = quotient_projection(fld, free)
    n = free.n
    size = len(free.degree2_basis)
    table = {}
    for k, (i, j) in enumerate(free.degree2_basis):
        coords = project(fld.unit(size, k))
        entries = tuple(
            (n + t, c) for t, c in enumerate(coords) if not fld.is_zero(c)
        )
        if entries:
            table[(i, j)] = entries
    labels = tuple(f"v{i}" for i in range(n)) + tuple(f"[v{i},v{j}]" for i, j in surviving)
    logger.debug("l/l^3 on %d generators keeps %d brackets", n, len(surviving))
    return StructureConstantAlgebra(fld, labels, table, v_dim=n)


def _surviving_pairs(a):
    pairs = []
    for label in a.basis_labels[a.v_dim :]:
        i, j = label.strip("[]").split(",")
        pairs.append((int(i[1:]), int(j[1:])))
    return pairs


def verify_quotient(g, fld):
    """Certify ``l(S, E) / l^3 ~ n(S, E)`` by the map fixing the generators.

    :return: (certified, the witness ``GradedMap``)
    """
    if not hasattr(fld, "spec"):
        fld = field_create(fld)
    source = pcl_mod_cube(g, fld)
    target = build_algebra(g, fld)
    A = tuple(tuple(fld.unit(g.n, r)) for r in range(g.n))
    B = induced_edge_matrix(fld, A, _surviving_pairs(source), g.edges)
    witness = GradedMap(source, target, A, B)
    ok = (
        source.dim == g.n + g.m
        and is_lie_morphism(witness)
        and is_invertible(witness)
    )
    if not ok:
        logger.warning("generator map l/l^3 -> n(S, E) failed certification for %s", g.edges)
    return ok, witness


@dataclass
class PclReport:
    g: object
    h: object
    field_spec: object
    fingerprints: tuple
    graph_iso_result: bool
    pcl_iso_result: bool
    method: str
    witness: GradedMap | None = None

    def to_dict(self):
        return {
            "graphs": [self.g.to_dict(), self.h.to_dict()],
            "field": str(self.field_spec),
            "fingerprints": [fp.to_list() for fp in self.fingerprints],
            "graph_iso": self.graph_iso_result,
            "pcl_iso": self.pcl_iso_result,
            "method": self.method,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def pcl_isomorphic(g, h, fld, limit=SEARCH_VERTEX_LIMIT, search_field="fp:3"):
    """Whether ``l(S, E)`` and ``l(S', E')`` are isomorphic, decided on their ``l / l^3``.

    ``l^3`` is characteristic, so an isomorphism of the free partially
    commutative algebras descends to the quotients; the quotients are graph
    algebras and graph isomorphism lifts back. An isomorphism of quotients
    found by pushforward is returned as a witness between the quotients. When
    a search is needed over the rationals it runs over ``search_field``.
    """
    if not hasattr(fld, "spec"):
        fld = field_create(fld)
    quotients = (pcl_mod_cube(g, fld), pcl_mod_cube(h, fld))
    fingerprints = tuple(fingerprint(q) for q in quotients)
    sigma = graph_iso(g, h)
    report = PclReport(g, h, fld.spec, fingerprints, sigma is not None, False, "fingerprint")
    same_fingerprint = fingerprints[0] == fingerprints[1]
    if same_fingerprint and sigma is not None:
        _, to_n = verify_quotient(g, fld)
        _, to_n_prime = verify_quotient(h, fld)
        pushed = functor_pushforward(sigma, g, h, fld)
        witness = compose(invert(to_n_prime), compose(pushed, to_n))
        if not (is_lie_morphism(witness) and is_invertible(witness)):
            raise VerificationError("quotient witness is not a Lie isomorphism", witness.to_dict())
        report.pcl_iso_result = True
        report.method = "pushforward"
        report.witness = witness
    elif same_fingerprint:
        if g.n > limit:
            raise LimitExceededError(
                f"search space too large: {g.n} vertices exceeds the limit {limit}"
            )
        report.method = "search"
        spec = fld.spec if fld.spec.kind is FieldKind.PRIME else search_field
        report.pcl_iso_result = graded_iso_search(g, h, _as_prime_spec(spec), limit) is not None
    if report.pcl_iso_result != report.graph_iso_result:
        raise VerificationError(
            "free partially commutative quotients disagree with graph isomorphism",
            report.to_dict(),
        )
    return report
