import pytest

from graphlie.graph import Graph, enumerate_graphs, path_graph
from graphlie.iso import (
    Fingerprint,
    GradedIsoSearch,
    IsoReport,
    fingerprint,
    graded_iso_search,
    lie_iso_equivalent,
    projective_points,
    theorem_check,
    vertex_order,
)
from graphlie.liealg import build_algebra
from graphlie.morphism import is_invertible, is_lie_morphism
from graphlie.utils import FieldError, LimitExceededError, VerificationError

STAR = Graph(4, ((0, 1), (0, 2), (0, 3)))
CYCLE = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
PAW = Graph(4, ((0, 1), (0, 2), (1, 2), (2, 3)))


def test_fingerprints(k3, p3_isolated, matching4, edgeless6):
    assert fingerprint(build_algebra(k3, "fp:3")) == Fingerprint(6, 3, 3)
    assert fingerprint(build_algebra(p3_isolated, "fp:3")) == Fingerprint(6, 2, 3)
    assert fingerprint(build_algebra(matching4, "fp:3")) == Fingerprint(6, 2, 2)
    assert fingerprint(build_algebra(edgeless6, "fp:3")).to_list() == [6, 0, 6]


def test_fingerprint_invariant_under_relabeling(rng):
    for n in range(2, 6):
        for g in enumerate_graphs(n):
            sigma = list(range(n))
            rng.shuffle(sigma)
            relabeled = g.permute(tuple(sigma))
            assert fingerprint(build_algebra(g, "fp:3")) == fingerprint(
                build_algebra(relabeled, "fp:3")
            )


def test_projective_points(f3, f5):
    points = projective_points(f3, [(1, 0), (0, 1)], 2)
    assert points == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert projective_points(f5, [(1, 2, 0)], 3) == [(1, 2, 0)]
    assert projective_points(f5, [(0, 3, 1)], 3) == [(0, 1, 2)]
    assert projective_points(f5, [], 3) == []


def test_vertex_order_prefers_non_neighbours():
    assert vertex_order(path_graph(4)) == [0, 3, 1, 2]


def test_heisenberg_search(k2):
    search = GradedIsoSearch(k2, k2, "fp:3")
    witness = search.run()
    # first root is (0, 1), so the vertices are swapped and the edge negated
    assert witness.A == ((0, 1), (1, 0))
    assert witness.B == ((2,),)
    assert search.nodes == 2
    assert search.candidates_per_depth == [1, 1]


def test_search_finds_relabeling(p3):
    relabeled = p3.permute((2, 0, 1))
    witness = graded_iso_search(p3, relabeled, "fp:3")
    assert witness is not None
    assert is_lie_morphism(witness) and is_invertible(witness)


def test_search_separates_same_fingerprint(p3_isolated, matching4):
    assert graded_iso_search(p3_isolated, matching4, "fp:3") is None
    a, b = build_algebra(path_graph(4), "fp:3"), build_algebra(STAR, "fp:3")
    assert fingerprint(a) == fingerprint(b)
    assert graded_iso_search(path_graph(4), STAR, "fp:3") is None
    assert graded_iso_search(CYCLE, PAW, "fp:3") is None


def test_search_needs_equal_counts(k2, p3):
    assert graded_iso_search(k2, p3, "fp:3") is None


def test_search_rejects_rationals(k2):
    with pytest.raises(FieldError, match="prime field"):
        graded_iso_search(k2, k2, "q")


def test_search_limit(edgeless6):
    with pytest.raises(LimitExceededError, match="search space too large"):
        graded_iso_search(edgeless6, edgeless6, "fp:3")


def test_parallel_search_matches_sequential():
    relabeled = path_graph(4).permute((3, 1, 0, 2))
    for g, h in ((path_graph(4), relabeled), (path_graph(4), STAR)):
        sequential = GradedIsoSearch(g, h, "fp:3")
        parallel = GradedIsoSearch(g, h, "fp:3", jobs=2)
        assert sequential.run() == parallel.run()
        assert sequential.nodes == parallel.nodes
        assert sequential.candidates_per_depth == parallel.candidates_per_depth


def test_lie_iso_by_fingerprint(p3_isolated, matching4):
    report = lie_iso_equivalent(p3_isolated, matching4, "fp:3")
    assert report.lie_method == "fingerprint"
    assert not report.graph_iso_result and not report.lie_iso_result
    assert report.consistent
    assert report.search_nodes == 0


def test_lie_iso_by_search(p3, load_schema):
    report = lie_iso_equivalent(p3, p3.permute((1, 2, 0)), "fp:5")
    assert report.lie_method == "search"
    assert report.graph_iso_result and report.lie_iso_result
    assert report.search_nodes > 0
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(report.to_dict(), load_schema("iso_report"))


def test_lie_iso_by_pushforward(edgeless6):
    report = lie_iso_equivalent(edgeless6, edgeless6, "fp:3")
    assert report.lie_method == "pushforward"
    assert report.lie_iso_result
    assert sorted(report.to_dict()["graph_witness"]) == [0, 1, 2, 3, 4, 5]


def test_lie_iso_beyond_limit_without_graph_iso():
    path_plus = Graph(6, ((0, 1), (1, 2), (2, 3)))
    star_plus = Graph(6, ((0, 1), (0, 2), (0, 3)))
    with pytest.raises(LimitExceededError):
        lie_iso_equivalent(path_plus, star_plus, "fp:3")


@pytest.mark.parametrize(("n_max", "classes", "pairs"), [(2, 3, 6), (3, 7, 28)])
def test_theorem_check_small(n_max, classes, pairs, load_schema):
    report = theorem_check(n_max, "fp:3")
    assert report.classes == classes
    assert report.pairs_tested == pairs
    assert report.iso_pairs == classes
    assert report.violations == []
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(report.to_dict(), load_schema("theorem_report"))


def test_theorem_check_limits():
    with pytest.raises(LimitExceededError):
        theorem_check(5, "fp:3")
    with pytest.raises(FieldError):
        theorem_check(2, "q")


def test_theorem_check_reports_violation(mocker, k2):
    inconsistent = IsoReport(k2, k2, None, (), True, False)
    mocker.patch("graphlie.iso.lie_iso_equivalent", return_value=inconsistent)
    mocker.patch.object(IsoReport, "to_dict", return_value={"graph_iso": True, "lie_iso": False})
    with pytest.raises(VerificationError) as exc:
        theorem_check(1, "fp:3")
    assert exc.value.payload == {"violations": [{"graph_iso": True, "lie_iso": False}]}
