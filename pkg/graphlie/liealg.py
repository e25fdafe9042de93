"""The two-step nilpotent Lie algebra n(S, E) of a graph.

Basis order: the vertex vectors ``v0..v(n-1)`` followed by one vector
``e<i>_<j>`` per edge in lexicographic edge order. For ``i < j`` the bracket
``[v_i, v_j]`` is ``e<i>_<j>`` when ``{i, j}`` is an edge and zero otherwise;
the edge vectors are central. Structure constants are never stored densely:
``structure(i, j)`` computes the sparse bracket of two basis vectors.
"""

import dataclasses
import itertools
import logging
from dataclasses import dataclass

from tqdm import tqdm

from .field import field_create, null_space, rank
from .graph import Graph

logger = logging.getLogger(__name__)


def wedge_coordinates(fld, edges, u, w):
    """Coordinates of ``u ^ w`` on the basis ``{v_i ^ v_j : (i, j) in edges}``.

    This is the projection of the wedge modulo the span of the non-edge
    wedges, i.e. the Z-part of ``[u, w]`` when ``edges`` are the graph's edges.
    """
    return tuple(
        fld.sub(fld.mul(u[i], w[j]), fld.mul(u[j], w[i])) for i, j in edges
    )


class LieAlgebraBase:
    """Operations shared by every algebra given through sparse structure constants.

    Subclasses provide ``field``, ``dim``, ``v_dim``, ``z_dim``,
    ``basis_labels`` and ``structure(i, j)``.
    """

    def structure(self, i, j):
        raise NotImplementedError

    def bracket_basis(self, i, j):
        coeffs = [self.field.zero()] * self.dim
        for k, c in self.structure(i, j):
            coeffs[k] = c
        return tuple(coeffs)

    def bracket_coords(self, x, y):
        fld = self.field
        result = [fld.zero()] * self.dim
        xs = [(i, c) for i, c in enumerate(x) if not fld.is_zero(c)]
        ys = [(j, c) for j, c in enumerate(y) if not fld.is_zero(c)]
        for i, ci in xs:
            for j, cj in ys:
                if i == j:
                    continue
                for k, s in self.structure(i, j):
                    result[k] = fld.add(result[k], fld.mul(fld.mul(ci, cj), s))
        return tuple(result)

    def element(self, coords):
        coords = self.field.vector(coords)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return LieElement(self, coords)

    def basis_element(self, k):
        return LieElement(self, self.field.unit(self.dim, k))

    def zero_element(self):
        return LieElement(self, self.field.zeros(self.dim))

    def random_element(self, rng):
        return LieElement(
            self, tuple(self.field.random_element(rng) for _ in range(self.dim))
        )

    def bracket(self, x, y):
        return bracket(x, y)


@dataclass(frozen=True)
class GraphLieAlgebra(LieAlgebraBase):
    graph: Graph
    field: object

    @property
    def v_dim(self):
        return self.graph.n

    @property
    def z_dim(self):
        return self.graph.m

    @property
    def dim(self):
        return self.graph.n + self.graph.m

    @property
    def is_abelian(self):
        return self.graph.m == 0

    @property
    def basis_labels(self):
        return [f"v{i}" for i in range(self.graph.n)] + [
            f"e{i}_{j}" for i, j in self.graph.edges
        ]

    def structure(self, i, j):
        n = self.graph.n
        if i >= n or j >= n or i == j:
            return ()
        k = self.graph.edge_index.get((min(i, j), max(i, j)))
        if k is None:
            return ()
        one = self.field.one()
        return ((n + k, one if i < j else self.field.neg(one)),)

    def v(self, i):
        return self.basis_element(i)

    def e(self, i, j):
        """The edge vector ``v_i ^ v_j`` (negated when ``i > j``)."""
        k = self.graph.edge_index[(min(i, j), max(i, j))]
        vec = self.basis_element(self.graph.n + k)
        return vec if i < j else -vec


@dataclass(frozen=True)
class StructureConstantAlgebra(LieAlgebraBase):
    """An algebra given by an explicit sparse table ``{(i, j): ((k, c), ...)}``, ``i < j``.

    ``v_dim`` counts the leading basis vectors spanning a complement of the
    derived algebra when the algebra is graded, as for exported graph algebras.
    """

    field: object
    basis_labels: tuple
    table: dict = dataclasses.field(hash=False)
    v_dim: int = 0

    @property
    def dim(self):
        return len(self.basis_labels)

    @property
    def z_dim(self):
        return self.dim - self.v_dim

    def structure(self, i, j):
        if i == j:
            return ()
        if i < j:
            return self.table.get((i, j), ())
        return tuple((k, self.field.neg(c)) for k, c in self.table.get((j, i), ()))

    @classmethod
    def from_document(cls, doc, fld=None):
        """Rebuild an algebra from an exported structure-constant document."""
        if fld is None:
            fld = field_create(doc.get("field", "q"))
        labels = tuple(doc["basis"])
        if doc["dim"] != len(labels):
            raise ValueError(f"dim {doc['dim']} does not match {len(labels)} basis labels")
        table = {}
        for key, entries in doc["brackets"].items():
            i, j = (int(part) for part in key.split(","))
            if not 0 <= i < j < len(labels):
                raise ValueError(f"bracket key {key!r} must be 'i,j' with i < j < dim")
            table[(i, j)] = tuple(
                (int(k), fld.coerce(c)) for k, c in sorted(entries.items(), key=lambda kv: int(kv[0]))
            )
        v_dim = sum(1 for label in labels if label.startswith("v"))
        return cls(fld, labels, table, v_dim)


@dataclass(frozen=True)
class LieElement:
    algebra: object
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, LieElement) or (
            other.algebra is not self.algebra and other.algebra != self.algebra
        ):
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return LieElement(
            self.algebra, self.algebra.field.add_vectors(self.coeffs, other.coeffs)
        )

    def __neg__(self):
        fld = self.algebra.field
        return LieElement(self.algebra, tuple(fld.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        fld = self.algebra.field
        return LieElement(self.algebra, fld.scale(fld.coerce(scalar), self.coeffs))

    @property
    def v_part(self):
        return self.coeffs[: self.algebra.v_dim]

    @property
    def z_part(self):
        return self.coeffs[self.algebra.v_dim :]

    def is_zero(self):
        return all(self.algebra.field.is_zero(c) for c in self.coeffs)

    def to_list(self):
        return [self.algebra.field.format(c) for c in self.coeffs]


def build_algebra(g, fld):
    """n(S, E) over ``fld`` (a field handle, ``FieldSpec`` or spec string).

    >>> a = build_algebra(Graph(2, ((0, 1),)), "q")
    >>> a.dim, a.basis_labels
    (3, ['v0', 'v1', 'e0_1'])
    """
    if not hasattr(fld, "spec"):
        fld = field_create(fld)
    return GraphLieAlgebra(g, fld)


def bracket(x, y):
    """The Lie bracket of two elements of the same algebra.

    >>> a = build_algebra(Graph(2, ((0, 1),)), "q")
    >>> bracket(a.v(1), a.v(0)).to_list()
    ['0', '0', '-1']
    """
    x._check(y)
    return LieElement(x.algebra, x.algebra.bracket_coords(x.coeffs, y.coeffs))


@dataclass(frozen=True)
class AlgebraInvariants:
    dim: int
    derived_dim: int
    center_dim: int
    is_abelian: bool
    is_two_step: bool

    def to_dict(self):
        return {
            "dim": self.dim,
            "derived_dim": self.derived_dim,
            "center_dim": self.center_dim,
            "is_abelian": self.is_abelian,
            "is_two_step": self.is_two_step,
        }


def derived_dimension(a):
    rows = [a.bracket_basis(i, j) for i, j in itertools.combinations(range(a.dim), 2)]
    if not rows:
        return 0
    return rank(a.field, rows, a.dim)


def center_basis(a):
    """Kernel of ``x -> ([x, b_0], ..., [x, b_(dim-1)])`` by exact elimination."""
    rows = []
    for k in range(a.dim):
        columns = [a.bracket_basis(i, k) for i in range(a.dim)]
        for c in range(a.dim):
            row = [columns[i][c] for i in range(a.dim)]
            if any(not a.field.is_zero(x) for x in row):
                rows.append(row)
    return null_space(a.field, rows, a.dim)


def double_brackets_vanish(a):
    for i, j, k in itertools.product(range(a.dim), repeat=3):
        inner = a.bracket_basis(j, k)
        if any(not a.field.is_zero(c) for c in a.bracket_coords(a.field.unit(a.dim, i), inner)):
            return False
    return True


def jacobi_holds(a):
    """Jacobi identity on every triple of basis vectors."""
    fld = a.field
    for i, j, k in itertools.combinations(range(a.dim), 3):
        b_i, b_j, b_k = (fld.unit(a.dim, t) for t in (i, j, k))
        total = fld.zeros(a.dim)
        for x, y, z in ((b_i, b_j, b_k), (b_j, b_k, b_i), (b_k, b_i, b_j)):
            total = fld.add_vectors(total, a.bracket_coords(x, a.bracket_coords(y, z)))
        if any(not fld.is_zero(c) for c in total):
            return False
    return True


def structural_invariants(a):
    """Dimension, derived and center dimensions, abelian and two-step flags.

    >>> from graphlie.graph import complete_graph
    >>> structural_invariants(build_algebra(complete_graph(3), "q")).to_dict()
    {'dim': 6, 'derived_dim': 3, 'center_dim': 3, 'is_abelian': False, 'is_two_step': True}
    """
    derived = derived_dimension(a)
    invariants = AlgebraInvariants(
        dim=a.dim,
        derived_dim=derived,
        center_dim=len(center_basis(a)),
        is_abelian=derived == 0,
        is_two_step=double_brackets_vanish(a),
    )
    logger.debug("invariants %s", invariants)
    return invariants


def export_structure_constants(a):
    """Machine-readable table of the nonzero brackets ``[b_i, b_j]``, ``i < j``.

    >>> export_structure_constants(build_algebra(Graph(2, ((0, 1),)), "q"))["brackets"]
    {'0,1': {'2': '1'}}
    """
    brackets = {}
    for i, j in itertools.combinations(range(a.dim), 2):
        entries = a.structure(i, j)
        nonzero = {str(k): a.field.format(c) for k, c in entries if not a.field.is_zero(c)}
        if nonzero:
            brackets[f"{i},{j}"] = nonzero
    return {
        "dim": a.dim,
        "basis": list(a.basis_labels),
        "field": str(a.field.spec),
        "brackets": brackets,
    }


def algebra_checks(a, rng, random_triples=100, progress=False):
    """The invariant suite for one graph algebra.

    :return: (``AlgebraInvariants``, dict of check name to verdict)
    """
    invariants = structural_invariants(a)
    random_two_step = True
    for _ in tqdm(range(random_triples), desc="random triples", disable=not progress):
        x, y, z = (a.random_element(rng) for _ in range(3))
        if not bracket(x, bracket(y, z)).is_zero():
            logger.warning("[x, [y, z]] != 0 for x=%s y=%s z=%s", x.to_list(), y.to_list(), z.to_list())
            random_two_step = False
            break
    checks = {
        "dim": invariants.dim == a.v_dim + a.z_dim,
        "derived_dim": invariants.derived_dim == a.z_dim,
        "jacobi": jacobi_holds(a),
        "two_step": invariants.is_two_step and random_two_step,
    }
    return invariants, checks
