"""Linear maps between graph Lie algebras.

A ``GradedMap`` is a pair of matrices: ``A`` on the vertex part and ``B`` on
the edge part. Maps built here always take ``B`` to be the action induced by
``A`` on edge coordinates, so they respect brackets by construction; the
``is_lie_morphism`` check verifies that directly on basis pairs.

The group G of the automorphism literature is never built as a variety: it is
the membership test ``extend_to_automorphism``. A matrix is a member when it
is invertible and every non-edge wedge ``A v_i ^ A v_j`` has zero edge
coordinates. These are finitely many polynomial conditions in the entries.
"""

import itertools
import logging
from dataclasses import dataclass

from .field import (
    identity_matrix,
    inverse,
    is_invertible_matrix,
    mat_mul,
    mat_vec,
    transpose,
    zero_matrix,
)
from .graph import automorphisms, is_graph_isomorphism
from .liealg import LieElement, build_algebra, wedge_coordinates
from .utils import MorphismError

logger = logging.getLogger(__name__)


def _freeze(matrix):
    return tuple(tuple(row) for row in matrix)


def _format_matrix(fld, matrix):
    return [[fld.format(x) for x in row] for row in matrix]


@dataclass(frozen=True)
class GradedMap:
    """``A`` is ``|S'| x |S|`` on vertex coordinates, ``B`` is ``|E'| x |E|`` on edges."""

    source: object
    target: object
    A: tuple
    B: tuple

    @property
    def field(self):
        return self.source.field

    def full_matrix(self):
        src, tgt = self.source, self.target
        matrix = zero_matrix(self.field, tgt.dim, src.dim)
        for r in range(tgt.v_dim):
            for c in range(src.v_dim):
                matrix[r][c] = self.A[r][c]
        for r in range(tgt.z_dim):
            for c in range(src.z_dim):
                matrix[tgt.v_dim + r][src.v_dim + c] = self.B[r][c]
        return matrix

    def to_dict(self):
        return {
            "A": _format_matrix(self.field, self.A),
            "B": _format_matrix(self.field, self.B),
            "field": str(self.field.spec),
        }


@dataclass(frozen=True)
class LinearMap:
    """An arbitrary linear map given by its full ``target.dim x source.dim`` matrix."""

    source: object
    target: object
    matrix: tuple

    @property
    def field(self):
        return self.source.field

    def full_matrix(self):
        return [list(row) for row in self.matrix]

    def to_dict(self):
        return {
            "matrix": _format_matrix(self.field, self.matrix),
            "field": str(self.field.spec),
        }


@dataclass(frozen=True)
class DiagonalMap:
    algebra: object
    d: tuple

    def __post_init__(self):
        fld = self.algebra.field
        if len(self.d) != self.algebra.v_dim:
            raise MorphismError(
                f"expected {self.algebra.v_dim} diagonal entries, got {len(self.d)}"
            )
        if any(fld.is_zero(x) for x in self.d):
            raise MorphismError("diagonal entries must be nonzero")


def induced_edge_matrix(fld, A, source_edges, target_edges):
    """The action of ``A`` on edge coordinates: column ``e_ij`` is ``A v_i ^ A v_j`` mod W'."""
    columns = transpose(A, len(A[0]) if A else 0)
    edge_columns = [
        wedge_coordinates(fld, target_edges, columns[i], columns[j]) for i, j in source_edges
    ]
    if not edge_columns:
        return tuple(() for _ in target_edges)
    return _freeze(transpose(edge_columns, len(target_edges)))


def functor_pushforward(f, g, g_prime, fld):
    """The Lie isomorphism ``f_*: n(g) -> n(g')`` induced by a graph isomorphism.

    >>> from graphlie.graph import Graph
    >>> k2 = Graph(2, ((0, 1),))
    >>> functor_pushforward((1, 0), k2, k2, "q").to_dict()["B"]
    [['-1']]
    """
    if not is_graph_isomorphism(f, g, g_prime):
        raise MorphismError(f"{f} is not an edge-preserving bijection")
    source = build_algebra(g, fld)
    target = build_algebra(g_prime, source.field)
    one, zero = source.field.one(), source.field.zero()
    A = [[one if f[c] == r else zero for c in range(g.n)] for r in range(g_prime.n)]
    B = induced_edge_matrix(source.field, A, g.edges, g_prime.edges)
    return GradedMap(source, target, _freeze(A), B)


def is_lie_morphism(m):
    """``F[b_i, b_j] == [F b_i, F b_j]`` for every pair of basis vectors, exactly."""
    src, tgt = m.source, m.target
    matrix = m.full_matrix()
    if len(matrix) != tgt.dim or any(len(row) != src.dim for row in matrix):
        return False
    fld = src.field
    images = transpose(matrix, src.dim)
    for i, j in itertools.combinations(range(src.dim), 2):
        left = mat_vec(fld, matrix, src.bracket_basis(i, j))
        right = tgt.bracket_coords(images[i], images[j])
        if left != right:
            logger.debug("bracket of basis pair (%d, %d) not preserved", i, j)
            return False
    return True


def is_invertible(m):
    if isinstance(m, GradedMap):
        return is_invertible_matrix(m.field, m.A) and is_invertible_matrix(m.field, m.B)
    return is_invertible_matrix(m.field, m.full_matrix())


def non_edge_violation(fld, graph, A):
    """First non-edge ``(i, j)`` whose image wedge has a nonzero edge coordinate, or None."""
    columns = transpose(A, graph.n)
    for i, j in graph.non_edges():
        coords = wedge_coordinates(fld, graph.edges, columns[i], columns[j])
        if any(not fld.is_zero(c) for c in coords):
            return (i, j)
    return None


def extend_to_automorphism(A, a):
    """The graded automorphism ``A + induced B`` when ``A`` lies in G, else None."""
    fld = a.field
    A = [[fld.coerce(x) for x in row] for row in A]
    if len(A) != a.v_dim or not is_invertible_matrix(fld, A):
        return None
    violation = non_edge_violation(fld, a.graph, A)
    if violation is not None:
        logger.debug("non-edge %s is not mapped into W", violation)
        return None
    return GradedMap(a, a, _freeze(A), induced_edge_matrix(fld, A, a.graph.edges, a.graph.edges))


def diagonal_extend(d):
    """The automorphism scaling ``v_i`` by ``d_i`` and the edge ``e_ij`` by ``d_i d_j``."""
    a, fld = d.algebra, d.algebra.field
    n = a.v_dim
    A = [[d.d[r] if r == c else fld.zero() for c in range(n)] for r in range(n)]
    products = [fld.mul(d.d[i], d.d[j]) for i, j in a.graph.edges]
    B = [
        [products[r] if r == c else fld.zero() for c in range(a.z_dim)]
        for r in range(a.z_dim)
    ]
    return GradedMap(a, a, _freeze(A), _freeze(B))


def identity_map(a):
    fld = a.field
    return GradedMap(
        a, a, _freeze(identity_matrix(fld, a.v_dim)), _freeze(identity_matrix(fld, a.z_dim))
    )


def compose(m1, m2):
    """``m1 o m2`` (apply ``m2`` first); graded when both factors are."""
    if m2.target.dim != m1.source.dim:
        raise MorphismError("maps are not composable")
    fld = m1.field
    if isinstance(m1, GradedMap) and isinstance(m2, GradedMap):
        return GradedMap(
            m2.source,
            m1.target,
            _freeze(mat_mul(fld, m1.A, m2.A, m2.source.v_dim)),
            _freeze(mat_mul(fld, m1.B, m2.B, m2.source.z_dim)),
        )
    return LinearMap(
        m2.source,
        m1.target,
        _freeze(mat_mul(fld, m1.full_matrix(), m2.full_matrix(), m2.source.dim)),
    )


def invert(m):
    """Inverse map; raises ``SingularMatrixError`` when ``A`` (or the matrix) is singular."""
    fld = m.field
    if isinstance(m, GradedMap):
        return GradedMap(
            m.target, m.source, _freeze(inverse(fld, m.A)), _freeze(inverse(fld, m.B))
        )
    return LinearMap(m.target, m.source, _freeze(inverse(fld, m.full_matrix())))


def apply(m, x):
    if x.algebra != m.source:
        raise MorphismError("element does not lie in the source algebra")
    return LieElement(m.target, mat_vec(m.field, m.full_matrix(), x.coeffs))


def central_shear(a, phi):
    """``v + z -> v + phi(v) + z`` for a ``z_dim x v_dim`` matrix ``phi``.

    Brackets land in the central edge part, so every shear is an automorphism.
    """
    fld = a.field
    if len(phi) != a.z_dim or any(len(row) != a.v_dim for row in phi):
        raise MorphismError(f"shear must be a {a.z_dim} x {a.v_dim} matrix")
    matrix = identity_matrix(fld, a.dim)
    for r in range(a.z_dim):
        for c in range(a.v_dim):
            matrix[a.v_dim + r][c] = fld.coerce(phi[r][c])
    return LinearMap(a, a, _freeze(matrix))


def random_central_shear(a, rng, bound=3):
    phi = [
        [rng.randint(-bound, bound) for _ in range(a.v_dim)] for _ in range(a.z_dim)
    ]
    return central_shear(a, phi)


def random_diagonal(a, rng):
    return DiagonalMap(a, tuple(a.field.random_nonzero(rng) for _ in range(a.v_dim)))


def random_g_element(a, rng, factors=3, graph_automorphisms=None):
    """A random member of G: a product of diagonal maps and pushforwards of automorphisms."""
    if graph_automorphisms is None:
        graph_automorphisms = automorphisms(a.graph)
    result = identity_map(a)
    for _ in range(factors):
        if rng.random() < 0.5:
            factor = diagonal_extend(random_diagonal(a, rng))
        else:
            sigma = rng.choice(graph_automorphisms)
            factor = functor_pushforward(sigma, a.graph, a.graph, a.field)
        result = compose(factor, result)
    return result
