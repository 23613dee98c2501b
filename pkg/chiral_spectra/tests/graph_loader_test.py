import os

import pytest

from . import utils
from .. import graph, graph_loader
from ..errors import GraphFormatError


def test_get_graph_loader(monkeypatch):
    assert isinstance(graph_loader.get_graph_loader("file"), graph_loader.FileGraphLoader)
    assert isinstance(graph_loader.get_graph_loader("BUILTIN"), graph_loader.BuiltinGraphLoader)
    assert isinstance(graph_loader.get_graph_loader("AUTO"), graph_loader.AutoGraphLoader)

    monkeypatch.setattr(graph_loader.config, "GRAPH_LOADER", "FILE")
    assert isinstance(graph_loader.get_graph_loader(), graph_loader.FileGraphLoader)

    with pytest.raises(ValueError):
        graph_loader.get_graph_loader("ENV")


def test_file_graph_loader_resolves_relative_paths(tmp_path, monkeypatch):
    expected = graph.builtin_graph("k33")
    path = utils.write_edge_list(tmp_path, "k33.txt", expected)
    monkeypatch.setattr(graph_loader.config, "GRAPH_DIR", str(tmp_path))
    loader = graph_loader.FileGraphLoader()
    assert loader.get_graph("k33.txt") == expected
    assert loader.get_graph(path) == expected
    assert loader.describe(path) == "k33.txt"

    with pytest.raises(GraphFormatError) as e:
        loader.get_graph("missing.txt")
    assert isinstance(e.value.__cause__, FileNotFoundError)
    assert e.value.line is None


def test_file_graph_loader_reports_format_errors(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("0 1\n1 1\n", encoding="utf-8")
    with pytest.raises(GraphFormatError) as e:
        graph_loader.FileGraphLoader().get_graph(str(path))
    assert e.value.line == 2


def test_builtin_graph_loader():
    loader = graph_loader.BuiltinGraphLoader()
    assert loader.get_graph("Petersen").edge_count == 15
    assert loader.describe("Petersen") == "petersen"
    with pytest.raises(ValueError):
        loader.get_graph("cube")


def test_auto_graph_loader_prefers_catalog(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(graph_loader.config, "GRAPH_DIR", os.getcwd())
    # a file named like a catalog entry is shadowed by the catalog
    utils.write_edge_list(tmp_path, "k4", graph.builtin_graph("c3"))
    utils.write_edge_list(tmp_path, "triangle.txt", graph.builtin_graph("c3"))
    loader = graph_loader.AutoGraphLoader()
    assert loader.get_graph("k4") == graph.builtin_graph("k4")
    assert loader.get_graph("triangle.txt") == graph.builtin_graph("c3")
    assert loader.describe("triangle.txt") == "triangle.txt"
