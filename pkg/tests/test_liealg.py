import pytest

from graphlie.field import rank
from graphlie.graph import Graph, complete_graph, empty_graph, enumerate_graphs
from graphlie.liealg import (
    StructureConstantAlgebra,
    algebra_checks,
    bracket,
    build_algebra,
    center_basis,
    derived_dimension,
    export_structure_constants,
    jacobi_holds,
    structural_invariants,
    wedge_coordinates,
)


def test_heisenberg(k2):
    a = build_algebra(k2, "q")
    assert a.dim == 3
    assert bracket(a.v(0), a.v(1)) == a.e(0, 1)
    assert bracket(a.v(1), a.v(0)) == -a.e(0, 1)
    assert bracket(a.v(0), a.e(0, 1)).is_zero()


def test_path_brackets(p3):
    a = build_algebra(p3, "fp:3")
    assert a.basis_labels == ["v0", "v1", "v2", "e0_1", "e1_2"]
    assert bracket(a.v(0), a.v(2)).is_zero()
    assert bracket(a.v(1), a.v(2)) == a.e(1, 2)


def test_bilinear_bracket(p3):
    a = build_algebra(p3, "q")
    x = a.v(0) + 2 * a.v(2)
    y = a.v(1)
    assert bracket(x, y) == a.e(0, 1) - 2 * a.e(1, 2)


def test_invariants_of_small_graphs(k3, p3_isolated, matching4, edgeless6):
    expected = {
        k3: (6, 3, 3),
        p3_isolated: (6, 2, 3),
        matching4: (6, 2, 2),
        edgeless6: (6, 0, 6),
    }
    for g, (dim, derived, center) in expected.items():
        inv = structural_invariants(build_algebra(g, "q"))
        assert (inv.dim, inv.derived_dim, inv.center_dim) == (dim, derived, center)
        assert inv.is_two_step
    assert structural_invariants(build_algebra(edgeless6, "q")).is_abelian


def test_center_contains_isolated_vertices(p3_isolated, q):
    a = build_algebra(p3_isolated, q)
    center = center_basis(a)
    rows = [list(vec) for vec in center]
    isolated = q.unit(a.dim, 3)
    assert len(center) == 3
    # the isolated vertex lies in the span of the center basis
    assert rank(q, [*rows, list(isolated)], a.dim) == len(center)


def test_wedge_coordinates(q):
    edges = ((0, 1), (1, 2))
    assert wedge_coordinates(q, edges, (1, 0, 0), (0, 1, 0)) == (1, 0)
    assert wedge_coordinates(q, edges, (0, 0, 1), (0, 1, 0)) == (0, -1)
    assert wedge_coordinates(q, edges, (1, 0, 0), (0, 0, 1)) == (0, 0)


def test_mixed_algebras_rejected(k2, p3):
    a, b = build_algebra(k2, "q"), build_algebra(p3, "q")
    with pytest.raises(ValueError, match="different algebras"):
        bracket(a.v(0), b.v(0))


def test_element_length_checked(k2):
    with pytest.raises(ValueError):
        build_algebra(k2, "q").element([1, 0])


def test_export_and_rebuild(p3):
    a = build_algebra(p3, "fp:5")
    doc = export_structure_constants(a)
    assert doc["brackets"] == {"0,1": {"3": "1"}, "1,2": {"4": "1"}}
    assert doc["field"] == "fp:5"
    rebuilt = StructureConstantAlgebra.from_document(doc)
    assert rebuilt.v_dim == 3
    for i in range(a.dim):
        for j in range(a.dim):
            assert rebuilt.bracket_basis(i, j) == a.bracket_basis(i, j)


def test_export_validates(k3, load_schema):
    jsonschema = pytest.importorskip("jsonschema")
    doc = export_structure_constants(build_algebra(k3, "q"))
    jsonschema.validate(doc, load_schema("structure_constants"))


def test_bad_document():
    doc = {"dim": 2, "basis": ["v0"], "field": "q", "brackets": {}}
    with pytest.raises(ValueError, match="does not match"):
        StructureConstantAlgebra.from_document(doc)


@pytest.mark.parametrize("n", range(1, 6))
def test_algebra_invariant_suite(n, rng):
    for g in enumerate_graphs(n):
        a = build_algebra(g, "q")
        assert a.dim == g.n + g.m
        assert derived_dimension(a) == g.m
        assert jacobi_holds(a)
        _, checks = algebra_checks(a, rng, random_triples=100)
        assert all(checks.values()), (g.edges, checks)


def test_complete_graph_is_free_two_step():
    a = build_algebra(complete_graph(4), "fp:3")
    assert a.dim == 4 + 6
    assert derived_dimension(a) == 6
    assert len(center_basis(a)) == 6


def test_abelian_flag():
    assert build_algebra(empty_graph(3), "q").is_abelian
    assert not build_algebra(Graph(2, ((0, 1),)), "q").is_abelian
