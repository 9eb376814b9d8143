"""Synchronously regular binary relations on non-empty paths.

A pair of paths is encoded as a single word over the product of two padded
copies of the graph: the shorter component is extended by repeating the
padding loop at its final vertex.  A relation is represented by a path
automaton over that product graph whose language is contained in the image
of the padding encoding; the containment is enforced by intersecting every
construction output with a fixed validity automaton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import automata
from .automata import PathAutomaton
from .errors import (
    GraphMismatchError,
    InvalidPaddedWordError,
)
from .graphs import Graph, Path

PAD_PREFIX = "$:"


def pad_edge(vertex: str) -> str:
    return PAD_PREFIX + vertex


def is_pad(edge: str) -> bool:
    return edge.startswith(PAD_PREFIX)


def padded_graph(base: Graph) -> Graph:
    """The graph with one extra padding loop at every vertex."""
    for e in base.edges:
        if is_pad(e):
            raise ValueError(f"edge id {e!r} collides with padding names")
    edges = [(e, *base.edge_ends[e]) for e in base.edges]
    edges += [(pad_edge(v), v, v) for v in base.vertices]
    return Graph(base.vertices, edges)


class PairGraph:
    """Product of the padded graph with itself, with decodable ids."""

    def __init__(self, base: Graph):
        self.base = base
        self.padded = padded_graph(base)
        self.vertex_ids: dict[tuple[str, str], str] = {}
        self.vertex_pairs: dict[str, tuple[str, str]] = {}
        for u in sorted(base.vertices):
            for v in sorted(base.vertices):
                vid = f"({u},{v})"
                self.vertex_ids[(u, v)] = vid
                self.vertex_pairs[vid] = (u, v)
        self.edge_ids: dict[tuple[str, str], str] = {}
        self.edge_pairs: dict[str, tuple[str, str]] = {}
        edges = []
        for e in self.padded.edges:
            for f in self.padded.edges:
                eid = f"({e},{f})"
                if eid in self.edge_pairs:
                    raise ValueError("pair edge id collision; rename base edges")
                self.edge_ids[(e, f)] = eid
                self.edge_pairs[eid] = (e, f)
                edges.append(
                    (
                        eid,
                        self.vertex_ids[
                            (self.padded.source(e), self.padded.source(f))
                        ],
                        self.vertex_ids[
                            (self.padded.target(e), self.padded.target(f))
                        ],
                    )
                )
        self.graph = Graph(self.vertex_pairs, edges)

    def __eq__(self, other):
        return isinstance(other, PairGraph) and self.base == other.base

    def __hash__(self):
        return hash(self.base)


_PAIR_CACHE: dict[Graph, PairGraph] = {}


def pair_graph(base: Graph) -> PairGraph:
    if base not in _PAIR_CACHE:
        _PAIR_CACHE[base] = PairGraph(base)
    return _PAIR_CACHE[base]


# -- convolution -----------------------------------------------------------


def convolve(base: Graph, a: Path, b: Path) -> Path:
    """Pad the shorter path and zip the two into a product-graph word."""
    if a.is_empty or b.is_empty:
        raise ValueError("convolution is defined on non-empty paths only")
    pg = pair_graph(base)
    m, n = len(a), len(b)
    letters = []
    for i in range(max(m, n)):
        left = a.edges[i] if i < m else pad_edge(a.target)
        right = b.edges[i] if i < n else pad_edge(b.target)
        letters.append(pg.edge_ids[(left, right)])
    return pg.graph.path(letters)


def deconvolve(base: Graph, word: Path) -> tuple[Path, Path]:
    """Inverse of convolve; rejects words outside the encoding's image."""
    pg = pair_graph(base)
    if word.is_empty:
        raise InvalidPaddedWordError("empty pair word")
    left_edges: list[str] = []
    right_edges: list[str] = []
    left_padding = right_padding = False
    for eid in word.edges:
        left, right = pg.edge_pairs[eid]
        if is_pad(left) and is_pad(right):
            raise InvalidPaddedWordError("both coordinates padded")
        if is_pad(left):
            left_padding = True
            if right_padding:
                raise InvalidPaddedWordError("padding switched coordinates")
        elif left_padding:
            raise InvalidPaddedWordError("padding must be trailing")
        else:
            left_edges.append(left)
        if is_pad(right):
            right_padding = True
        elif right_padding:
            raise InvalidPaddedWordError("padding must be trailing")
        else:
            right_edges.append(right)
    if not left_edges or not right_edges:
        raise InvalidPaddedWordError("a coordinate is empty")
    a = base.path(left_edges)
    b = base.path(right_edges)
    expected = convolve(base, a, b)
    if expected != word:
        raise InvalidPaddedWordError("padding vertices are inconsistent")
    return a, b


# -- the validity automaton -------------------------------------------------

_VALIDITY_CACHE: dict[Graph, PathAutomaton] = {}


def validity_automaton(base: Graph) -> PathAutomaton:
    """Accepts exactly the convolutions of pairs of non-empty paths.

    Phases: before any letter, strict synchronization; once a coordinate
    pads it must keep padding at the same vertex and the other coordinate
    must stay real.
    """
    if base in _VALIDITY_CACHE:
        return _VALIDITY_CACHE[base]
    pg = pair_graph(base)
    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    for u in base.vertices:
        for v in base.vertices:
            vid = pg.vertex_ids[(u, v)]
            states[f"pre:{vid}"] = vid
            states[f"sync:{vid}"] = vid
            states[f"pad1:{vid}"] = vid
            states[f"pad2:{vid}"] = vid
    for eid, (left, right) in pg.edge_pairs.items():
        src = pg.graph.source(eid)
        dst = pg.graph.target(eid)
        lp, rp = is_pad(left), is_pad(right)
        if not lp and not rp:
            transitions.add((f"pre:{src}", eid, f"sync:{dst}"))
            transitions.add((f"sync:{src}", eid, f"sync:{dst}"))
        elif lp and not rp:
            transitions.add((f"sync:{src}", eid, f"pad1:{dst}"))
            transitions.add((f"pad1:{src}", eid, f"pad1:{dst}"))
        elif rp and not lp:
            transitions.add((f"sync:{src}", eid, f"pad2:{dst}"))
            transitions.add((f"pad2:{src}", eid, f"pad2:{dst}"))
    starts = frozenset(s for s in states if s.startswith("pre:"))
    finals = frozenset(
        s for s in states if not s.startswith("pre:")
    )
    aut = PathAutomaton(
        pg.graph, states, frozenset(transitions), starts, finals
    ).trim()
    _VALIDITY_CACHE[base] = aut
    return aut


# -- relations ---------------------------------------------------------------


@dataclass
class SyncRelationAutomaton:
    """A synchronously regular relation on non-empty paths of ``base``."""

    base: Graph
    automaton: PathAutomaton

    def __post_init__(self):
        if self.automaton.graph != pair_graph(self.base).graph:
            raise GraphMismatchError(
                "relation automaton must live over the padded pair graph"
            )
        if self.automaton.empty_accepting:
            raise ValueError("relations never accept empty pair words")

    def member(self, a: Path, b: Path) -> bool:
        return self.automaton.accepts(convolve(self.base, a, b))

    def enumerate(self, max_len: int) -> list[tuple[Path, Path]]:
        """All related pairs with both path lengths <= max_len, sorted."""
        out = []
        for word in self.automaton.enumerate(max_len, include_empty=False):
            out.append(deconvolve(self.base, word))
        out.sort(key=lambda ab: (ab[0].sort_key, ab[1].sort_key))
        return out

    def is_empty(self) -> bool:
        return self.automaton.is_empty()

    def compact(self) -> "SyncRelationAutomaton":
        return SyncRelationAutomaton(self.base, automata.compact(self.automaton))


def _seal(base: Graph, aut: PathAutomaton) -> SyncRelationAutomaton:
    """Intersect with the validity automaton and trim; enforces the invariant."""
    sealed = automata.intersection(aut, validity_automaton(base))
    if len(sealed.state_labels) > 64:
        sealed = automata.compact(sealed)
    return SyncRelationAutomaton(base, sealed)


def rel_empty(base: Graph) -> SyncRelationAutomaton:
    return SyncRelationAutomaton(base, automata.empty_language(pair_graph(base).graph))


def rel_from_pairs(
    base: Graph, pairs: Iterable[tuple[Path, Path]]
) -> SyncRelationAutomaton:
    """Compile a finite set of path pairs into a relation automaton."""
    words = [convolve(base, a, b) for a, b in set(pairs)]
    return SyncRelationAutomaton(
        base, automata.finite_language(pair_graph(base).graph, words)
    )


def rel_union(
    r: SyncRelationAutomaton, s: SyncRelationAutomaton
) -> SyncRelationAutomaton:
    _same_base(r, s)
    return _seal(r.base, automata.union(r.automaton, s.automaton))


def rel_union_all(
    base: Graph, rels: Iterable[SyncRelationAutomaton]
) -> SyncRelationAutomaton:
    out = rel_empty(base)
    for r in rels:
        out = rel_union(out, r)
    return out


def rel_intersection(
    r: SyncRelationAutomaton, s: SyncRelationAutomaton
) -> SyncRelationAutomaton:
    _same_base(r, s)
    return _seal(r.base, automata.intersection(r.automaton, s.automaton))


def rel_difference(
    r: SyncRelationAutomaton, s: SyncRelationAutomaton
) -> SyncRelationAutomaton:
    _same_base(r, s)
    return _seal(r.base, automata.difference(r.automaton, s.automaton))


def _same_base(r: SyncRelationAutomaton, s: SyncRelationAutomaton):
    if r.base != s.base:
        raise GraphMismatchError("relations are over different base graphs")


def rel_inverse(r: SyncRelationAutomaton) -> SyncRelationAutomaton:
    pg = pair_graph(r.base)

    def swap_edge(eid: str) -> str:
        left, right = pg.edge_pairs[eid]
        return pg.edge_ids[(right, left)]

    def swap_vertex(vid: str) -> str:
        u, v = pg.vertex_pairs[vid]
        return pg.vertex_ids[(v, u)]

    swapped = automata.relabel_edges(r.automaton, pg.graph, swap_edge, swap_vertex)
    return _seal(r.base, swapped)


def rel_diagonal(base: Graph, lang: PathAutomaton) -> SyncRelationAutomaton:
    """{(w, w) : w in L}, for a language of non-empty paths."""
    pg = pair_graph(base)
    trimmed = lang.trim()

    def dbl(eid: str) -> str:
        return pg.edge_ids[(eid, eid)]

    def dbl_v(v: str) -> str:
        return pg.vertex_ids[(v, v)]

    doubled = automata.relabel_edges(
        PathAutomaton(
            trimmed.graph, trimmed.state_labels, trimmed.transitions,
            trimmed.starts, trimmed.finals,
        ),
        pg.graph,
        dbl,
        dbl_v,
    )
    return _seal(base, doubled)


def rel_product(
    base: Graph, k: PathAutomaton, l: PathAutomaton
) -> SyncRelationAutomaton:
    """K x L as a relation, padding whichever word ends first."""
    pg = pair_graph(base)
    ka, la = k.trim(), l.trim()
    ik, il = ka._by_state(), la._by_state()
    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    starts: set[str] = set()
    finals: set[str] = set()

    def sname(p, q):
        return f"s:({p},{q})"

    def p1name(w, q):
        return f"p1:({w},{q})"

    def p2name(p, w):
        return f"p2:({p},{w})"

    for p in ka.state_labels:
        for q in la.state_labels:
            states[sname(p, q)] = pg.vertex_ids[
                (ka.state_labels[p], la.state_labels[q])
            ]
            if p in ka.starts and q in la.starts:
                starts.add(sname(p, q))
            if p in ka.finals and q in la.finals:
                finals.add(sname(p, q))
    for q in la.state_labels:
        for w in base.vertices:
            states[p1name(w, q)] = pg.vertex_ids[(w, la.state_labels[q])]
            if q in la.finals:
                finals.add(p1name(w, q))
    for p in ka.state_labels:
        for w in base.vertices:
            states[p2name(p, w)] = pg.vertex_ids[(ka.state_labels[p], w)]
            if p in ka.finals:
                finals.add(p2name(p, w))
    for p in ka.state_labels:
        for q in la.state_labels:
            for e, tp in ik[p]:
                for f, tq in il[q]:
                    transitions.add(
                        (sname(p, q), pg.edge_ids[(e, f)], sname(tp, tq))
                    )
            # second word over: keep reading k while padding coordinate 2
            if q in la.finals:
                w = la.state_labels[q]
                for e, tp in ik[p]:
                    transitions.add(
                        (sname(p, q), pg.edge_ids[(e, pad_edge(w))], p2name(tp, w))
                    )
            if p in ka.finals:
                w = ka.state_labels[p]
                for f, tq in il[q]:
                    transitions.add(
                        (sname(p, q), pg.edge_ids[(pad_edge(w), f)], p1name(w, tq))
                    )
    for p in ka.state_labels:
        for w in base.vertices:
            for e, tp in ik[p]:
                transitions.add(
                    (p2name(p, w), pg.edge_ids[(e, pad_edge(w))], p2name(tp, w))
                )
    for q in la.state_labels:
        for w in base.vertices:
            for f, tq in il[q]:
                transitions.add(
                    (p1name(w, q), pg.edge_ids[(pad_edge(w), f)], p1name(w, tq))
                )
    aut = PathAutomaton(
        pg.graph, states, frozenset(transitions), frozenset(starts),
        frozenset(finals),
    )
    return _seal(base, aut)


def rel_project(r: SyncRelationAutomaton, coordinate: int) -> PathAutomaton:
    """Projection onto coordinate 1 or 2; padded positions become silent."""
    if coordinate not in (1, 2):
        raise ValueError("coordinate must be 1 or 2")
    pg = pair_graph(r.base)
    aut = r.automaton.trim()
    labelled = []
    silent = []
    for s, eid, t in aut.transitions:
        left, right = pg.edge_pairs[eid]
        mine = left if coordinate == 1 else right
        if is_pad(mine):
            silent.append((s, t))
        else:
            labelled.append((s, mine, t))
    labels = {
        s: pg.vertex_pairs[v][coordinate - 1]
        for s, v in aut.state_labels.items()
    }
    return automata.eliminate_epsilon(
        r.base, labels, labelled, silent, aut.starts, aut.finals
    ).trim()


def rel_compose(
    r: SyncRelationAutomaton, s: SyncRelationAutomaton
) -> SyncRelationAutomaton:
    """Relational composition; the shared coordinate is eliminated.

    The product automaton reads pairs (left of r, right of s) while both
    operand automata consume a common middle word.  Positions beyond both
    outer words (both outer components padded) are silent moves; they can
    only occur in a trailing block, so finality is decided by closing the
    silent moves into accepting pairs.
    """
    _same_base(r, s)
    pg = pair_graph(r.base)
    ra, sa = r.automaton.trim(), s.automaton.trim()
    ir, isx = ra._by_state(), sa._by_state()
    # index s-transitions by their left (shared) component
    by_mid: dict[str, dict[str, list[tuple[str, str]]]] = {}
    for q in sa.state_labels:
        table: dict[str, list[tuple[str, str]]] = {}
        for eid, tq in isx[q]:
            left, right = pg.edge_pairs[eid]
            table.setdefault(left, []).append((right, tq))
        by_mid[q] = table

    def name(p, q):
        return f"({p},{q})"

    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    silent: list[tuple[str, str]] = []
    starts: set[str] = set()
    work: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for p in sorted(ra.starts):
        for q in sorted(sa.starts):
            pu, pv = pg.vertex_pairs[ra.state_labels[p]]
            qu, qv = pg.vertex_pairs[sa.state_labels[q]]
            if pv == qu:
                seen.add((p, q))
                work.append((p, q))
                starts.add(name(p, q))
    while work:
        p, q = work.pop()
        pu, pv = pg.vertex_pairs[ra.state_labels[p]]
        qu, qv = pg.vertex_pairs[sa.state_labels[q]]
        states[name(p, q)] = pg.vertex_ids[(pu, qv)]
        for eid, tp in ir[p]:
            left, mid = pg.edge_pairs[eid]
            for right, tq in by_mid[q].get(mid, ()):
                if is_pad(left) and is_pad(right):
                    silent.append((name(p, q), name(tp, tq)))
                else:
                    transitions.add(
                        (name(p, q), pg.edge_ids[(left, right)], name(tp, tq))
                    )
                if (tp, tq) not in seen:
                    seen.add((tp, tq))
                    work.append((tp, tq))
    # make sure every mentioned state is labelled
    for p, q in seen:
        pu, pv = pg.vertex_pairs[ra.state_labels[p]]
        qu, qv = pg.vertex_pairs[sa.state_labels[q]]
        states.setdefault(name(p, q), pg.vertex_ids[(pu, qv)])
    finals = {
        name(p, q) for (p, q) in seen if p in ra.finals and q in sa.finals
    }
    aut = automata.eliminate_epsilon(
        pg.graph, states, transitions, silent, starts, finals
    )
    return _seal(r.base, aut)


def rel_combine(mode: str, *operands) -> SyncRelationAutomaton | PathAutomaton:
    """Dispatcher over the relation algebra; see the individual functions."""
    if mode == "inverse":
        (r,) = operands
        return rel_inverse(r)
    if mode == "union":
        r, s = operands
        return rel_union(r, s)
    if mode == "intersection":
        r, s = operands
        return rel_intersection(r, s)
    if mode == "composition":
        r, s = operands
        return rel_compose(r, s)
    if mode == "product":
        base, k, l = operands
        return rel_product(base, k, l)
    if mode == "diagonal":
        base, k = operands
        return rel_diagonal(base, k)
    if mode in ("projection1", "projection2"):
        (r,) = operands
        return rel_project(r, 1 if mode.endswith("1") else 2)
    raise ValueError(f"unknown relation mode {mode!r}")


# -- tail rewriting ----------------------------------------------------------


def tail_rewrite_relation(
    base: Graph, entries: Iterable[tuple[Path, Path]]
) -> SyncRelationAutomaton:
    """{(v x, v y) : v a path, (x, y) an entry, everything composable}.

    The diagonal prefix v may be empty; pairs whose coordinate would become
    an empty path are excluded, since relations live on non-empty paths.
    Entries may freely mix lengths, including empty sides: an empty side is
    anchored at a vertex which must match the other side's source.
    """
    pg = pair_graph(base)
    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    starts: set[str] = set()
    finals: set[str] = set()
    for v in base.vertices:
        states[f"d0:{v}"] = pg.vertex_ids[(v, v)]
        states[f"d1:{v}"] = pg.vertex_ids[(v, v)]
        starts.add(f"d0:{v}")
    for e in base.edges:
        src, dst = base.edge_ends[e]
        pe = pg.edge_ids[(e, e)]
        transitions.add((f"d0:{src}", pe, f"d1:{dst}"))
        transitions.add((f"d1:{src}", pe, f"d1:{dst}"))
    for k, (x, y) in enumerate(sorted(set(entries),
                                      key=lambda xy: (xy[0].sort_key, xy[1].sort_key))):
        if x.source != y.source:
            raise ValueError("entry sides must share their source vertex")
        m, n = len(x), len(y)
        if m == 0 and n == 0:
            # pure identity tail: contributes the diagonal itself
            finals.add(f"d1:{x.source}")
            continue
        # the tail pair word, padding the exhausted side at its end vertex
        letters = []
        ends = []
        for i in range(max(m, n)):
            left = x.edges[i] if i < m else pad_edge(x.target)
            right = y.edges[i] if i < n else pad_edge(y.target)
            letters.append(pg.edge_ids[(left, right)])
            lv = base.target(x.edges[i]) if i < m else x.target
            rv = base.target(y.edges[i]) if i < n else y.target
            ends.append(pg.vertex_ids[(lv, rv)])
        anchor = x.source
        # a chain may start on the empty diagonal only if both coordinates
        # of the resulting pair are non-empty
        sources = [f"d1:{anchor}"]
        if m >= 1 and n >= 1:
            sources.append(f"d0:{anchor}")
        for idx, src_state in enumerate(sources):
            prev = src_state
            for i, eid in enumerate(letters):
                node = f"t{k}.{idx}.{i}"
                states[node] = ends[i]
                transitions.add((prev, eid, node))
                prev = node
            finals.add(prev)
    aut = PathAutomaton(
        pg.graph, states, frozenset(transitions), frozenset(starts),
        frozenset(finals),
    )
    return _seal(base, aut)


def rel_rewrite_tail(
    r: SyncRelationAutomaton, m: int, table: Mapping[Path, Path]
) -> SyncRelationAutomaton:
    """Rewrite length-m tails of second coordinates through a finite table.

    Produces {(u, v . f(x)) : (u, v x) in R, x a length-m path in the
    table's domain}.
    """
    if m < 0:
        raise ValueError("window length must be >= 0")
    for x, y in table.items():
        if len(x) != m:
            raise ValueError(f"table key {x!r} does not have length {m}")
        if x.source != y.source:
            raise ValueError(f"table output for {x!r} moves the source vertex")
    t = tail_rewrite_relation(r.base, table.items())
    return rel_compose(r, t)
