import json
import random
from pathlib import Path

import pytest

from graphlie.field import field_create
from graphlie.graph import Graph, complete_graph, empty_graph, path_graph

DATA_DIR = Path(__file__).parent / "data"
SCHEMA_DIR = Path(__file__).parent.parent / "keyFiles"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def load_schema():
    def _load(name):
        with open(SCHEMA_DIR / f"{name}_schema.json", encoding="utf-8") as f:
            return json.load(f)

    return _load


@pytest.fixture
def rng():
    return random.Random(20240501)


@pytest.fixture
def q():
    return field_create("q")


@pytest.fixture
def f3():
    return field_create("fp:3")


@pytest.fixture
def f5():
    return field_create("fp:5")


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def p3_isolated():
    return Graph(4, ((0, 1), (1, 2)))


@pytest.fixture
def matching4():
    return Graph(4, ((0, 1), (2, 3)))


@pytest.fixture
def edgeless6():
    return empty_graph(6)
