"""Plain-text graph, partition and attribute files."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .errors import DuplicateNode, MissingNode, NegativeWeight, ParseError
from .graph import Graph, build_graph
from .stratify import Partition


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _lines(path):
    text = Path(path).read_text(encoding="utf-8")
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _fields(line: str) -> list[str]:
    return line.split("\t") if "\t" in line else line.split()


def parse_edge_list(path) -> Graph:
    """``tail<TAB>head[<TAB>weight]`` per line; ``%directed``, ``%undirected`` and ``%n=N`` directives."""
    directed = True
    n = None
    edges = []
    for no, line in _lines(path):
        if line.startswith("%"):
            d = line[1:].strip()
            if d == "directed":
                directed = True
            elif d == "undirected":
                directed = False
            elif d.startswith("n="):
                try:
                    n = int(d[2:])
                except ValueError:
                    raise ParseError(f"bad node count {d[2:]!r}", no) from None
            else:
                raise ParseError(f"unknown directive {line!r}", no)
            continue
        parts = _fields(line)
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 2 or 3 fields, got {len(parts)}", no)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"cannot parse {line!r}", no) from None
        if u < 0 or v < 0:
            raise ParseError("node ids must be nonnegative", no)
        if w < 0 or not np.isfinite(w):
            raise NegativeWeight(f"weight {w!r}", no)
        edges.append((u, v, w))
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return build_graph(n, edges, directed)


def _node_values(path, n: int):
    values: dict[int, str] = {}
    default = None
    for no, line in _lines(path):
        if line.startswith("%"):
            d = line[1:].strip()
            if d.startswith("default="):
                default = d[len("default="):]
                continue
            raise ParseError(f"unknown directive {line!r}", no)
        parts = _fields(line)
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", no)
        try:
            v = int(parts[0])
        except ValueError:
            raise ParseError(f"bad node id {parts[0]!r}", no) from None
        if not 0 <= v < n:
            raise ParseError(f"node {v} outside 0..{n - 1}", no)
        if v in values:
            raise DuplicateNode(f"node {v} listed twice (line {no})")
        values[v] = parts[1]
    return values, default


def parse_partition(path, n: int) -> tuple[Partition, dict[str, int]]:
    """Every node exactly once; block names mapped to ids in first-appearance order."""
    values, _ = _node_values(path, n)
    missing = [v for v in range(n) if v not in values]
    if missing:
        raise MissingNode(f"partition lacks node(s) {missing[:10]}")
    ids: dict[str, int] = {}
    for v in range(n):
        ids.setdefault(values[v], len(ids))
    return Partition.from_labels([values[v] for v in range(n)]), ids


def parse_attribute(path, n: int, categorical: bool = False):
    """Scalar values (floats) or categorical labels mapped to ids in first-appearance order.

    Returns ``(values, mapping)``; ``mapping`` is ``None`` for scalar attributes.
    """
    values, default = _node_values(path, n)
    missing = [v for v in range(n) if v not in values]
    if missing and default is None:
        raise MissingNode(f"attribute lacks node(s) {missing[:10]} and no %default is set")
    raw = [values.get(v, default) for v in range(n)]
    if categorical:
        ids: dict[str, int] = {}
        for val in raw:
            ids.setdefault(val, len(ids))
        return np.array([ids[val] for val in raw], dtype=np.int64), ids
    try:
        return np.array([float(val) for val in raw]), None
    except ValueError as exc:
        raise ParseError(f"non-numeric attribute value: {exc}") from None


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_edge_list(G: Graph, path) -> None:
    lines = ["%directed" if G.directed else "%undirected", f"%n={G.n}"]
    lines += [f"{u}\t{v}\t{fmt_float(w)}" for u, v, w in G.edges()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_node_values(values, path) -> None:
    lines = [f"{v}\t{fmt_float(x) if isinstance(x, (float, np.floating)) else x}" for v, x in enumerate(values)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
