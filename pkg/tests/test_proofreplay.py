from fractions import Fraction

import pytest

from graphlie.field import field_create
from graphlie.graph import Graph, complete_graph, enumerate_graphs, is_graph_isomorphism
from graphlie.iso import graded_iso_search
from graphlie.liealg import build_algebra
from graphlie.morphism import (
    DiagonalMap,
    LinearMap,
    central_shear,
    diagonal_extend,
    functor_pushforward,
)
from graphlie.pcl import verify_quotient
from graphlie.proofreplay import (
    ReplayInput,
    dimensions_match,
    eigenvalue_separation,
    induced_graph,
    induced_vertex_set,
    replay,
    separating_weights,
    sheared_isomorphism,
    torus_membership,
)
from graphlie.utils import MorphismError


@pytest.fixture
def swap_input(k2):
    return ReplayInput(functor_pushforward((1, 0), k2, k2, "q"))


@pytest.fixture
def shear_input(p3):
    return ReplayInput(central_shear(build_algebra(p3, "q"), [[1, 0, 0], [0, 0, 0]]))


def test_swap_vertex_set(swap_input, k2):
    vectors, ok = induced_vertex_set(swap_input)
    assert vectors == [(0, 1), (1, 0)]
    assert ok
    graph, iso_ok = induced_graph(swap_input)
    assert graph == k2 and iso_ok


def test_projection_kills_shear(shear_input, p3):
    vectors, ok = induced_vertex_set(shear_input)
    assert vectors == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert ok
    graph, iso_ok = induced_graph(shear_input, vectors)
    assert graph.edges == p3.edges
    assert iso_ok
    assert dimensions_match(shear_input)


def test_graded_search_witness_replays(p3):
    witness = graded_iso_search(p3, p3.permute((1, 2, 0)), "fp:3")
    report = replay(ReplayInput(witness))
    assert report.ok
    # three pairwise products cannot be distinct in F_3
    assert report.separating_weights is None
    assert report.separation_ok is None


def test_torus_membership(swap_input, shear_input, rng):
    assert torus_membership(swap_input, (1, 1))
    f5 = field_create("fp:5")
    r = ReplayInput(functor_pushforward((1, 0), Graph(2, ((0, 1),)), Graph(2, ((0, 1),)), f5))
    for _ in range(10):
        assert torus_membership(r, (f5.random_nonzero(rng), f5.random_nonzero(rng)))
    q = field_create("q")
    for _ in range(10):
        d = tuple(q.random_nonzero(rng) for _ in range(3))
        assert torus_membership(shear_input, d)


def test_torus_weights_checked(swap_input):
    with pytest.raises(MorphismError, match="nonzero"):
        torus_membership(swap_input, (1, 0))
    with pytest.raises(MorphismError, match="expected 2"):
        torus_membership(swap_input, (1, 2, 3))


def test_input_must_be_isomorphism(k2, p3):
    a = build_algebra(k2, "q")
    zero = tuple((Fraction(0),) * 3 for _ in range(3))
    with pytest.raises(MorphismError, match="not invertible"):
        ReplayInput(LinearMap(a, a, zero))
    scaled = tuple(tuple(Fraction(2 if r == c == 2 else int(r == c)) for c in range(3)) for r in range(3))
    with pytest.raises(MorphismError, match="brackets"):
        ReplayInput(LinearMap(a, a, scaled))
    _, quotient_map = verify_quotient(p3, "q")
    with pytest.raises(MorphismError, match="graph algebras"):
        ReplayInput(quotient_map)


def test_separating_weights():
    q, f7 = field_create("q"), field_create("fp:7")
    assert separating_weights(4, q) == (2, 3, 5, 7)
    assert separating_weights(3, f7) == (1, 2, 3)
    assert separating_weights(2, field_create("fp:3")) == (1, 1)


def test_eigenvalue_separation(p3):
    a = build_algebra(p3, "q")
    weights = separating_weights(3, a.field)
    torus = diagonal_extend(DiagonalMap(a, weights))
    assert eigenvalue_separation(torus, weights, p3)
    assert not eigenvalue_separation(torus, weights, complete_graph(3))


def test_swap_replay_document(swap_input, load_schema):
    report = replay(swap_input)
    doc = report.to_dict()
    assert doc["s_double_prime"] == [["0", "1"], ["1", "0"]]
    assert doc["torus_weights"] == ["1", "1"]
    assert doc["separating_weights"] == ["2", "3"]
    assert doc["separation_ok"] is True
    assert report.ok
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(doc, load_schema("replay_report"))


@pytest.mark.parametrize("n", range(1, 5))
def test_sheared_isomorphisms_replay(n, rng):
    for g in enumerate_graphs(n):
        F = sheared_isomorphism(g, "q", rng)
        report = replay(ReplayInput(F), rng=rng)
        assert report.ok, g.edges
        assert report.separation_ok
        target = F.target.graph
        assert is_graph_isomorphism(report.final_bijection, target, report.induced_graph)


def test_sheared_isomorphism_is_not_graded(p3, rng):
    F = sheared_isomorphism(p3, "q", rng, sigma=(2, 0, 1))
    assert isinstance(F, LinearMap)
    assert F.target.graph == p3.permute((2, 0, 1))
