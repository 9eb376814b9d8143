"""Tests for graphs and paths, mostly against hand or brute-force oracles."""

from __future__ import annotations

import itertools
import random

import pytest

from reesauto.errors import CompositionError
from reesauto.graphs import (
    Graph,
    Path,
    compose,
    enumerate_paths,
    path_parts,
)


def two_cycle() -> Graph:
    return Graph(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])


def loop_graph() -> Graph:
    return Graph(["u"], [("e", "u", "u")])


def line_graph() -> Graph:
    return Graph(
        ["0", "1", "2", "3"],
        [("a", "0", "1"), ("b", "1", "2"), ("c", "2", "3")],
    )


def test_compose_concatenates():
    g = two_cycle()
    ab = compose(g.path(["a"]), g.path(["b"]))
    assert ab == g.path(["a", "b"])
    assert len(ab) == 2
    assert ab.source == "u" and ab.target == "u"


def test_compose_empty_identity():
    g = two_cycle()
    b = g.path(["b"])
    assert compose(g.empty_path("v"), b) == b
    assert compose(b, g.empty_path("u")) == b


def test_compose_endpoint_clash():
    g = two_cycle()
    a = g.path(["a"])
    with pytest.raises(CompositionError):
        compose(a, a)


def test_compose_length_additive():
    g = two_cycle()
    paths = enumerate_paths(g, 3)
    for p, q in itertools.product(paths, repeat=2):
        if p.target == q.source:
            assert len(compose(p, q)) == len(p) + len(q)


def test_compose_associative_bruteforce():
    rng = random.Random(7)
    for _ in range(12):
        nv = rng.randint(1, 3)
        vs = [f"v{i}" for i in range(nv)]
        edges = [
            (f"e{j}", rng.choice(vs), rng.choice(vs)) for j in range(rng.randint(1, 5))
        ]
        g = Graph(vs, edges)
        paths = enumerate_paths(g, 3, include_empty=True)
        if len(paths) > 60:
            paths = rng.sample(paths, 60)
        by_source: dict[str, list[Path]] = {}
        for p in paths:
            by_source.setdefault(p.source, []).append(p)
        for p in paths:
            for q in by_source.get(p.target, ()):
                pq = compose(p, q)
                for r in by_source.get(q.target, ()):
                    assert compose(pq, r) == compose(p, compose(q, r))


def test_enumerate_paths_loop():
    g = loop_graph()
    got = enumerate_paths(g, 2, include_empty=True)
    assert got == [g.empty_path("u"), g.path(["e"]), g.path(["e", "e"])]


def test_enumerate_paths_two_cycle():
    g = two_cycle()
    got = enumerate_paths(g, 2)
    assert got == [g.path(["a"]), g.path(["b"]), g.path(["a", "b"]), g.path(["b", "a"])]


def test_enumerate_paths_zero_length():
    assert enumerate_paths(two_cycle(), 0) == []


def test_path_parts_prefix():
    g = line_graph()
    p = g.path(["a", "b", "c"])
    assert path_parts(g, p, "prefix") == {
        g.path(["a"]),
        g.path(["a", "b"]),
        g.path(["a", "b", "c"]),
    }


def test_path_parts_internal():
    g = line_graph()
    p = g.path(["a", "b", "c"])
    assert path_parts(g, p, "internal") == {g.path(["b"])}
    assert path_parts(g, g.path(["a"]), "internal") == set()


def test_path_parts_empty_path_rejected():
    g = line_graph()
    with pytest.raises(ValueError):
        path_parts(g, g.empty_path("0"), "prefix")


def test_factor_is_prefix_of_suffix():
    rng = random.Random(3)
    for _ in range(10):
        nv = rng.randint(1, 3)
        vs = [f"v{i}" for i in range(nv)]
        edges = [
            (f"e{j}", rng.choice(vs), rng.choice(vs)) for j in range(rng.randint(1, 4))
        ]
        g = Graph(vs, edges)
        for p in enumerate_paths(g, 6):
            factors = set()
            for s in path_parts(g, p, "suffix"):
                factors |= path_parts(g, s, "prefix")
            assert factors == path_parts(g, p, "factor")


def test_path_ordering_is_length_then_lex():
    g = two_cycle()
    paths = enumerate_paths(g, 3)
    assert paths == sorted(paths)
    assert [p.edges for p in paths[:4]] == [("a",), ("b",), ("a", "b"), ("b", "a")]
