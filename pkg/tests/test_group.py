from fractions import Fraction

import pytest

from graphlie.field import field_create
from graphlie.graph import Graph
from graphlie.group import (
    GroupElement,
    bch_multiply,
    commutator,
    exp,
    group_law_checks,
    identity,
    inverse,
    log,
    log_exp_roundtrip,
    power,
    pushforward,
)
from graphlie.liealg import bracket, build_algebra
from graphlie.morphism import functor_pushforward, random_central_shear, random_g_element
from graphlie.utils import FieldError, MorphismError


def test_heisenberg_product(k2):
    a = build_algebra(k2, "q")
    product = bch_multiply(exp(a.v(0)), exp(a.v(1)))
    assert product.v == (1, 1)
    assert product.z == (Fraction(1, 2),)
    assert product.to_dict() == {"v": ["1", "1"], "z": ["1/2"]}


def test_product_with_negative_is_identity(k2, rng):
    a = build_algebra(k2, "q")
    x = a.random_element(rng)
    assert exp(x) * exp(-x) == identity(a)


def test_commutator_of_generators(k2):
    a = build_algebra(k2, "q")
    c = commutator(exp(a.v(0)), exp(a.v(1)))
    assert c == GroupElement(a, (0, 0), (1,))


def test_identity_and_inverse(k2, rng):
    a = build_algebra(k2, "q")
    assert identity(a).to_dict() == {"v": ["0", "0"], "z": ["0"]}
    g = exp(a.v(0) + a.e(0, 1))
    assert inverse(g).to_dict() == {"v": ["-1", "0"], "z": ["-1"]}
    for _ in range(20):
        h = exp(a.random_element(rng))
        assert inverse(inverse(h)) == h


def test_log_exp_roundtrip(k2, rng):
    a = build_algebra(k2, "q")
    zero = a.zero_element()
    g, back = log_exp_roundtrip(zero)
    assert g == identity(a) and back == zero
    x = a.v(0) + 3 * a.e(0, 1)
    assert log_exp_roundtrip(x)[1] == x
    b = build_algebra(k2, "fp:5")
    for _ in range(20):
        y = b.random_element(rng)
        assert log(exp(y)) == y


def test_power_is_scaling(p3, rng):
    a = build_algebra(p3, "fp:7")
    for _ in range(10):
        x = a.random_element(rng)
        assert power(exp(x), 3) == exp(3 * x)
        assert power(exp(x), -2) == exp(-2 * x)
    assert power(exp(a.v(0)), 0) == identity(a)


@pytest.mark.parametrize("spec", ["q", "fp:3", "fp:5"])
def test_group_laws(spec, rng):
    g = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    checks = group_law_checks(build_algebra(g, spec), rng, 200, 200)
    assert checks == {"associative": True, "identity": True, "inverse": True, "commutator": True}


def test_commutator_random(p3, rng):
    a = build_algebra(p3, "fp:3")
    for _ in range(50):
        u, w = a.random_element(rng), a.random_element(rng)
        c = commutator(exp(u), exp(w))
        assert log(c) == bracket(u, w)


def test_pushforward_is_homomorphism(p3, rng):
    a = build_algebra(p3, "q")
    maps = [functor_pushforward((2, 1, 0), p3, p3, "q"), random_g_element(a, rng)]
    for m in maps:
        for _ in range(20):
            g1, g2 = exp(a.random_element(rng)), exp(a.random_element(rng))
            assert pushforward(m, g1 * g2) == pushforward(m, g1) * pushforward(m, g2)


def test_pushforward_needs_graded_map(p3, rng):
    a = build_algebra(p3, "q")
    with pytest.raises(MorphismError):
        pushforward(random_central_shear(a, rng), identity(a))


def test_mismatched_groups(k2, p3):
    a, b = build_algebra(k2, "q"), build_algebra(p3, "q")
    with pytest.raises(ValueError):
        bch_multiply(identity(a), identity(b))


def test_from_dict(k2):
    a = build_algebra(k2, "q")
    g = GroupElement.from_dict(a, {"v": ["1", "0"], "z": [0]})
    assert g == exp(a.v(0))
    with pytest.raises(ValueError):
        GroupElement.from_dict(a, {"v": ["1"], "z": ["0"]})
    with pytest.raises(ValueError):
        GroupElement.from_dict(a, {"v": ["1", "0"]})


def test_group_element_validates(k2, load_schema):
    jsonschema = pytest.importorskip("jsonschema")
    a = build_algebra(k2, "q")
    doc = (exp(a.v(0)) * exp(a.v(1))).to_dict()
    jsonschema.validate(doc, load_schema("group_element"))


def test_characteristic_two_rejected():
    with pytest.raises(FieldError):
        field_create("fp:2")
