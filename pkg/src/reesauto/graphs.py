"""Directed graphs with named edges, and composable paths over them.

Edges carry a source and a target vertex, so words of edges are only
meaningful when consecutive endpoints match.  Empty paths are first-class
values anchored at a vertex; they act as identities under composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import CompositionError, ForeignPathError


class Graph:
    """Finite directed graph; vertex and edge ids are opaque strings.

    Deterministic orderings are always lexicographic on ids.
    """

    __slots__ = ("vertices", "edge_ends", "_edges_sorted", "_out")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        self.vertices = frozenset(vertices)
        self.edge_ends: dict[str, tuple[str, str]] = {}
        for eid, src, dst in edges:
            if eid in self.edge_ends:
                raise ValueError(f"duplicate edge id {eid!r}")
            if src not in self.vertices or dst not in self.vertices:
                raise ValueError(f"edge {eid!r} uses unknown vertex")
            self.edge_ends[eid] = (src, dst)
        self._edges_sorted = tuple(sorted(self.edge_ends))
        self._out: dict[str, tuple[str, ...]] = {v: () for v in self.vertices}
        for e in self._edges_sorted:
            src = self.edge_ends[e][0]
            self._out[src] = self._out[src] + (e,)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edge_ends == other.edge_ends
        )

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.edge_ends.items()))))

    def __repr__(self):
        return f"Graph({sorted(self.vertices)}, {len(self.edge_ends)} edges)"

    @property
    def edges(self) -> tuple[str, ...]:
        return self._edges_sorted

    def source(self, edge: str) -> str:
        try:
            return self.edge_ends[edge][0]
        except KeyError:
            raise ForeignPathError(f"unknown edge {edge!r}") from None

    def target(self, edge: str) -> str:
        try:
            return self.edge_ends[edge][1]
        except KeyError:
            raise ForeignPathError(f"unknown edge {edge!r}") from None

    def has_edge(self, edge: str) -> bool:
        return edge in self.edge_ends

    def out_edges(self, vertex: str) -> tuple[str, ...]:
        return self._out.get(vertex, ())

    def path(self, edges: Iterable[str]) -> "Path":
        """Build a non-empty path after checking composability."""
        seq = tuple(edges)
        if not seq:
            raise ValueError("use empty_path(vertex) for length-0 paths")
        for e in seq:
            if e not in self.edge_ends:
                raise ForeignPathError(f"unknown edge {e!r}")
        for a, b in zip(seq, seq[1:]):
            if self.edge_ends[a][1] != self.edge_ends[b][0]:
                raise CompositionError(f"edges {a!r} and {b!r} do not compose")
        return Path(seq, self.edge_ends[seq[0]][0], self.edge_ends[seq[-1]][1])

    def empty_path(self, vertex: str) -> "Path":
        if vertex not in self.vertices:
            raise ForeignPathError(f"unknown vertex {vertex!r}")
        return Path((), vertex, vertex)

    def subpath(self, p: "Path", start: int, stop: int) -> "Path":
        """The factor p[start:stop] (0-based, stop exclusive), non-empty."""
        return self.path(p.edges[start:stop])

    def contains_path(self, p: "Path") -> bool:
        if not p.edges:
            return p.source in self.vertices and p.source == p.target
        try:
            return self.path(p.edges) == p
        except (ForeignPathError, CompositionError):
            return False


@dataclass(frozen=True, order=True)
class Path:
    """A composable sequence of edges; empty paths carry their anchor vertex.

    Ordering is length-then-lexicographic on edge ids, the deterministic
    enumeration order used throughout.
    """

    sort_key: tuple = field(init=False, repr=False)
    edges: tuple[str, ...]
    source: str
    target: str

    def __post_init__(self):
        object.__setattr__(
            self, "sort_key", (len(self.edges), self.edges, self.source)
        )

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self):
        if not self.edges:
            return f"Path(empty@{self.source})"
        return f"Path({'.'.join(self.edges)}: {self.source}->{self.target})"

    @property
    def is_empty(self) -> bool:
        return not self.edges


def compose(p: Path, q: Path) -> Path:
    """Concatenate two paths; empty paths act as identities."""
    if p.target != q.source:
        raise CompositionError(
            f"target {p.target!r} of left path differs from source "
            f"{q.source!r} of right path"
        )
    if p.is_empty:
        return q
    if q.is_empty:
        return p
    return Path(p.edges + q.edges, p.source, q.target)


def compose_all(paths: Iterable[Path]) -> Path:
    seq = list(paths)
    if not seq:
        raise ValueError("cannot compose an empty sequence of paths")
    out = seq[0]
    for p in seq[1:]:
        out = compose(out, p)
    return out


def enumerate_paths(graph: Graph, max_len: int, include_empty: bool = False) -> list[Path]:
    """All paths of length <= max_len, length-then-lex by edge ids."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    out: list[Path] = []
    if include_empty:
        out.extend(graph.empty_path(v) for v in sorted(graph.vertices))
    frontier: list[tuple[tuple[str, ...], str, str]] = [
        ((), v, v) for v in sorted(graph.vertices)
    ]
    for _ in range(max_len):
        nxt = []
        for edges, src, end in frontier:
            for e in graph.out_edges(end):
                nxt.append((edges + (e,), src if edges else graph.edge_ends[e][0],
                            graph.edge_ends[e][1]))
        nxt.sort()
        out.extend(Path(edges, src, end) for edges, src, end in nxt)
        frontier = nxt
    return out


def iter_paths_from(graph: Graph, vertex: str, max_len: int) -> Iterator[Path]:
    """Non-empty paths starting at a vertex, length-then-lex order."""
    frontier: list[tuple[tuple[str, ...], str]] = [((), vertex)]
    for _ in range(max_len):
        nxt = []
        for edges, end in frontier:
            for e in graph.out_edges(end):
                nxt.append((edges + (e,), graph.edge_ends[e][1]))
        nxt.sort()
        for edges, end in nxt:
            yield Path(edges, vertex, end)
        frontier = nxt


def path_parts(graph: Graph, p: Path, kind: str) -> set[Path]:
    """Non-empty prefixes, suffixes, factors or internal factors of a path.

    Internal factors are the factors of the interior x2 .. x(n-1).
    """
    if p.is_empty:
        raise ValueError("parts of the empty path are not defined")
    n = len(p.edges)
    if kind == "prefix":
        spans = [(0, j) for j in range(1, n + 1)]
    elif kind == "suffix":
        spans = [(i, n) for i in range(n)]
    elif kind == "factor":
        spans = [(i, j) for i in range(n) for j in range(i + 1, n + 1)]
    elif kind == "internal":
        spans = [(i, j) for i in range(1, n - 1) for j in range(i + 1, n)]
    else:
        raise ValueError(f"unknown part kind {kind!r}")
    return {graph.subpath(p, i, j) for i, j in spans}
