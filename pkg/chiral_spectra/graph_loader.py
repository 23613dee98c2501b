from abc import ABC, abstractmethod
import logging
import os

from chiral_spectra import config, graph
from chiral_spectra.errors import GraphFormatError
from chiral_spectra.models import Graph


class GraphLoader(ABC):
    @abstractmethod
    def get_graph(self, name: str) -> Graph: ...

    @abstractmethod
    def describe(self, name: str) -> str: ...


class FileGraphLoader(GraphLoader):
    def _get_graph_file_path(self, path: str) -> str:
        if os.path.isabs(path):
            return path
        return os.path.abspath(os.path.join(config.GRAPH_DIR, path))

    def get_graph(self, name: str) -> Graph:
        path = self._get_graph_file_path(name)
        logging.debug("Reading edge list from %s", path)
        try:
            with open(path, encoding="utf-8") as f:
                return graph.parse_edge_list(f)
        except (OSError, UnicodeDecodeError) as e:
            raise GraphFormatError(f"cannot read edge list {path}: {e}") from e

    def describe(self, name: str) -> str:
        return os.path.basename(name)


class BuiltinGraphLoader(GraphLoader):
    def get_graph(self, name: str) -> Graph:
        return graph.builtin_graph(name)

    def describe(self, name: str) -> str:
        return name.lower()


class AutoGraphLoader(GraphLoader):
    """Catalog names first, edge-list files otherwise."""

    def __init__(self):
        self.builtin = BuiltinGraphLoader()
        self.file = FileGraphLoader()

    def _pick(self, name: str) -> GraphLoader:
        try:
            graph.builtin_graph(name)
        except ValueError:
            return self.file
        return self.builtin

    def get_graph(self, name: str) -> Graph:
        return self._pick(name).get_graph(name)

    def describe(self, name: str) -> str:
        return self._pick(name).describe(name)


def get_graph_loader(kind: str | None = None) -> GraphLoader:
    kind = (kind or config.GRAPH_LOADER).upper()
    match kind:
        case "FILE":
            return FileGraphLoader()
        case "BUILTIN":
            return BuiltinGraphLoader()
        case "AUTO":
            return AutoGraphLoader()
        case _:
            raise ValueError(f"Unsupported graph loader: {kind}. Allowed: ['FILE', 'BUILTIN', 'AUTO']")
