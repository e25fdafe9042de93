"""The simply connected group N(S, E) in exponential coordinates.

An element is a pair ``(v, z)`` of vertex and edge coordinates and the
product is ``(v1 + v2, z1 + z2 + 1/2 [v1, v2])``. Over any field of
characteristic other than two this is an exact group law, associative
because the algebra is two-step.
"""

from dataclasses import dataclass

from .liealg import LieElement, bracket, wedge_coordinates
from .morphism import GradedMap
from .utils import MorphismError


@dataclass(frozen=True)
class GroupElement:
    algebra: object
    v: tuple
    z: tuple

    def __post_init__(self):
        if len(self.v) != self.algebra.v_dim or len(self.z) != self.algebra.z_dim:
            raise ValueError(
                f"expected {self.algebra.v_dim} vertex and {self.algebra.z_dim} edge coordinates"
            )

    def to_dict(self):
        fld = self.algebra.field
        return {"v": [fld.format(x) for x in self.v], "z": [fld.format(x) for x in self.z]}

    @classmethod
    def from_dict(cls, algebra, doc):
        if not isinstance(doc, dict) or set(doc) != {"v", "z"}:
            raise ValueError("group element JSON needs exactly the keys 'v' and 'z'")
        fld = algebra.field
        return cls(algebra, fld.vector(doc["v"]), fld.vector(doc["z"]))

    def __mul__(self, other):
        return bch_multiply(self, other)


def _check_same(g1, g2):
    if g1.algebra is not g2.algebra and g1.algebra != g2.algebra:
        raise ValueError("group elements belong to different groups")


def bch_multiply(g1, g2):
    """``(v1, z1) . (v2, z2) = (v1 + v2, z1 + z2 + 1/2 [v1, v2])``.

    >>> from graphlie.graph import Graph
    >>> from graphlie.liealg import build_algebra
    >>> a = build_algebra(Graph(2, ((0, 1),)), "q")
    >>> bch_multiply(exp(a.v(0)), exp(a.v(1))).to_dict()
    {'v': ['1', '1'], 'z': ['1/2']}
    """
    _check_same(g1, g2)
    a = g1.algebra
    fld = a.field
    half = fld.half()
    wedge = wedge_coordinates(fld, a.graph.edges, g1.v, g2.v)
    z = tuple(
        fld.add(fld.add(x1, x2), fld.mul(half, w))
        for x1, x2, w in zip(g1.z, g2.z, wedge, strict=True)
    )
    return GroupElement(a, fld.add_vectors(g1.v, g2.v), z)


def identity(a):
    return GroupElement(a, a.field.zeros(a.v_dim), a.field.zeros(a.z_dim))


def inverse(g):
    """``(v, z)^-1 = (-v, -z)``, exact since ``[v, -v] = 0``."""
    fld = g.algebra.field
    return GroupElement(
        g.algebra, tuple(fld.neg(x) for x in g.v), tuple(fld.neg(x) for x in g.z)
    )


def exp(x):
    """Exponential coordinates: the coordinates of ``x`` read as a group element."""
    a = x.algebra
    return GroupElement(a, tuple(x.v_part), tuple(x.z_part))


def log(g):
    return LieElement(g.algebra, tuple(g.v) + tuple(g.z))


def log_exp_roundtrip(x):
    """``(exp(x), log(exp(x)))``; the second entry equals ``x`` exactly."""
    g = exp(x)
    return g, log(g)


def commutator(g1, g2):
    """``g1 g2 g1^-1 g2^-1``; equals ``(0, [v1, v2])``."""
    return bch_multiply(bch_multiply(bch_multiply(g1, g2), inverse(g1)), inverse(g2))


def power(g, k):
    """``g^k`` for any integer ``k``; in exponential coordinates ``exp(x)^k = exp(kx)``."""
    result = identity(g.algebra)
    base = g if k >= 0 else inverse(g)
    for _ in range(abs(k)):
        result = bch_multiply(result, base)
    return result


def pushforward(m, g):
    """Image of ``g`` under the group isomorphism induced by a graded Lie map."""
    if not isinstance(m, GradedMap):
        raise MorphismError("group pushforward needs a graded map")
    if g.algebra != m.source:
        raise MorphismError("element does not lie in the source group")
    fld = m.field
    v = tuple(fld.dot(row, g.v) for row in m.A)
    z = tuple(fld.dot(row, g.z) for row in m.B)
    return GroupElement(m.target, v, z)


def group_law_checks(a, rng, random_triples=100, random_pairs=100):
    """Associativity, identity and inverse laws on random triples, and the commutator formula on random pairs."""
    one = identity(a)
    checks = {"associative": True, "identity": True, "inverse": True, "commutator": True}
    for _ in range(random_triples):
        g1, g2, g3 = (exp(a.random_element(rng)) for _ in range(3))
        if (g1 * g2) * g3 != g1 * (g2 * g3):
            checks["associative"] = False
        if g1 * one != g1 or one * g1 != g1:
            checks["identity"] = False
        if g1 * inverse(g1) != one or inverse(g1) * g1 != one:
            checks["inverse"] = False
    for _ in range(random_pairs):
        u, w = a.random_element(rng), a.random_element(rng)
        expected = GroupElement(a, a.field.zeros(a.v_dim), tuple(bracket(u, w).z_part))
        if commutator(exp(u), exp(w)) != expected:
            checks["commutator"] = False
    return checks
