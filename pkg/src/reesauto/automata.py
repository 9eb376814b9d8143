"""Finite path automata over a graph and the closure algebra of path languages.

A path automaton is a graph mapped onto the target graph: every state is
labelled by a vertex and every transition by an edge whose endpoints match
the labels of its states.  The accepted language is therefore always a set
of genuine paths.  Acceptance of empty paths is recorded as a per-vertex
flag set rather than via epsilon transitions, which keeps boolean
operations on the X+ / X* distinction exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator

from .errors import ForeignPathError, GraphMismatchError
from .graphs import Graph, Path


@dataclass
class PathAutomaton:
    graph: Graph
    state_labels: dict[str, str]                     # state id -> vertex id
    transitions: frozenset[tuple[str, str, str]]     # (state, edge, state)
    starts: frozenset[str]
    finals: frozenset[str]
    empty_accepting: frozenset[str] = frozenset()    # vertices accepting the empty path
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for s, e, t in self.transitions:
            src, dst = self.graph.edge_ends[e]
            if self.state_labels[s] != src or self.state_labels[t] != dst:
                raise ValueError(
                    f"transition ({s},{e},{t}) violates the labelling morphism"
                )
        for s in self.starts | self.finals:
            if s not in self.state_labels:
                raise ValueError(f"unknown state {s!r}")
        for v in self.empty_accepting:
            if v not in self.graph.vertices:
                raise ValueError(f"unknown vertex {v!r} in empty-path flags")

    # -- indexed views ----------------------------------------------------

    def _by_state(self) -> dict[str, list[tuple[str, str]]]:
        if self._index is None:
            idx: dict[str, list[tuple[str, str]]] = {s: [] for s in self.state_labels}
            for s, e, t in sorted(self.transitions):
                idx[s].append((e, t))
            object.__setattr__(self, "_index", idx)
        return self._index

    def step(self, states: frozenset[str], edge: str) -> frozenset[str]:
        idx = self._by_state()
        return frozenset(t for s in states for (e, t) in idx[s] if e == edge)

    # -- acceptance and enumeration ---------------------------------------

    def accepts(self, p: Path) -> bool:
        if not self.graph.contains_path(p):
            raise ForeignPathError(f"{p!r} is not a path of the target graph")
        if p.is_empty:
            return p.source in self.empty_accepting
        current = frozenset(
            s for s in self.starts if self.state_labels[s] == p.source
        )
        for e in p.edges:
            if not current:
                return False
            current = self.step(current, e)
        return bool(current & self.finals)

    def enumerate(self, max_len: int, include_empty: bool = True) -> list[Path]:
        """Accepted paths of length <= max_len in length-then-lex order."""
        out: list[Path] = []
        if include_empty:
            out.extend(
                Path((), v, v) for v in sorted(self.empty_accepting)
            )
        idx = self._by_state()
        starts_by_vertex: dict[str, frozenset[str]] = {}
        for s in self.starts:
            v = self.state_labels[s]
            starts_by_vertex.setdefault(v, frozenset())
            starts_by_vertex[v] |= {s}
        frontier: list[tuple[tuple[str, ...], str, frozenset[str]]] = [
            ((), v, ss) for v, ss in sorted(starts_by_vertex.items())
        ]
        for _ in range(max_len):
            nxt: list[tuple[tuple[str, ...], str, frozenset[str]]] = []
            for word, src, states in frontier:
                by_edge: dict[str, set[str]] = {}
                for s in states:
                    for e, t in idx[s]:
                        by_edge.setdefault(e, set()).add(t)
                for e in sorted(by_edge):
                    nxt.append((word + (e,), src, frozenset(by_edge[e])))
            nxt.sort(key=lambda item: item[0])
            for word, src, states in nxt:
                if states & self.finals:
                    out.append(Path(word, src, self.graph.edge_ends[word[-1]][1]))
            frontier = nxt
        return out

    # -- reachability helpers ---------------------------------------------

    def reachable_states(self) -> frozenset[str]:
        idx = self._by_state()
        seen = set(self.starts)
        stack = list(self.starts)
        while stack:
            s = stack.pop()
            for _, t in idx[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def coreachable_states(self) -> frozenset[str]:
        back: dict[str, set[str]] = {s: set() for s in self.state_labels}
        for s, _, t in self.transitions:
            back[t].add(s)
        seen = set(self.finals)
        stack = list(self.finals)
        while stack:
            s = stack.pop()
            for p in back[s]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def trim(self) -> "PathAutomaton":
        """Drop states not on any accepting run; language is unchanged."""
        keep = self.reachable_states() & self.coreachable_states()
        return PathAutomaton(
            self.graph,
            {s: v for s, v in self.state_labels.items() if s in keep},
            frozenset(
                (s, e, t) for s, e, t in self.transitions if s in keep and t in keep
            ),
            self.starts & keep,
            self.finals & keep,
            self.empty_accepting,
        )

    def is_empty(self) -> bool:
        if self.empty_accepting:
            return False
        # a final state only accepts when reached by >= 1 transition
        reach = self.reachable_states()
        hit = {t for s, _, t in self.transitions if s in reach}
        return not (hit & self.finals)

    def is_finite(self) -> bool:
        """True iff the accepted language is finite (no pumpable cycle)."""
        useful = self.reachable_states() & self.coreachable_states()
        idx = self._by_state()
        color: dict[str, int] = {}

        def has_cycle(s: str) -> bool:
            color[s] = 1
            for _, t in idx[s]:
                if t not in useful:
                    continue
                c = color.get(t)
                if c == 1:
                    return True
                if c is None and has_cycle(t):
                    return True
            color[s] = 2
            return False

        return not any(color.get(s) is None and has_cycle(s) for s in sorted(useful))

    def relabel_states(self, rename: Callable[[str], str]) -> "PathAutomaton":
        return PathAutomaton(
            self.graph,
            {rename(s): v for s, v in self.state_labels.items()},
            frozenset((rename(s), e, rename(t)) for s, e, t in self.transitions),
            frozenset(rename(s) for s in self.starts),
            frozenset(rename(s) for s in self.finals),
            self.empty_accepting,
        )


# -- construction helpers ------------------------------------------------


def empty_language(graph: Graph) -> PathAutomaton:
    return PathAutomaton(graph, {}, frozenset(), frozenset(), frozenset())


def full_language(graph: Graph, include_empty: bool) -> PathAutomaton:
    """Automaton for X+ (or X* when include_empty is set)."""
    states = {f"v:{v}": v for v in graph.vertices}
    transitions = frozenset(
        (f"v:{graph.edge_ends[e][0]}", e, f"v:{graph.edge_ends[e][1]}")
        for e in graph.edges
    )
    empties = graph.vertices if include_empty else frozenset()
    names = frozenset(states)
    return PathAutomaton(graph, states, transitions, names, names, frozenset(empties))


def finite_language(graph: Graph, paths: Iterable[Path]) -> PathAutomaton:
    """Automaton accepting exactly the given finite set of paths."""
    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    starts: set[str] = set()
    finals: set[str] = set()
    empties: set[str] = set()
    for i, p in enumerate(sorted(set(paths))):
        if p.is_empty:
            empties.add(p.source)
            continue
        prev = f"p{i}.0"
        states[prev] = p.source
        starts.add(prev)
        at = p.source
        for j, e in enumerate(p.edges):
            at = graph.edge_ends[e][1]
            cur = f"p{i}.{j + 1}"
            states[cur] = at
            transitions.add((prev, e, cur))
            prev = cur
        finals.add(prev)
    return PathAutomaton(
        graph, states, frozenset(transitions), frozenset(starts),
        frozenset(finals), frozenset(empties),
    )


def singleton_language(graph: Graph, p: Path) -> PathAutomaton:
    return finite_language(graph, [p])


# -- determinization, minimization, boolean algebra -----------------------


def determinize(aut: PathAutomaton) -> PathAutomaton:
    """Complete deterministic automaton with the same language.

    The subset construction runs per vertex fibre: there is exactly one
    start state over each vertex of the target graph and, from any state,
    exactly one transition per outgoing edge of its vertex.
    """
    idx = aut._by_state()
    starts_of: dict[str, frozenset[str]] = {v: frozenset() for v in aut.graph.vertices}
    for s in aut.starts:
        v = aut.state_labels[s]
        starts_of[v] |= {s}

    def name(v: str, subset: frozenset[str]) -> str:
        return f"{v}|{{{','.join(sorted(subset))}}}"

    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    start_names: set[str] = set()
    finals: set[str] = set()
    work: list[tuple[str, frozenset[str]]] = []
    seen: set[tuple[str, frozenset[str]]] = set()
    for v in sorted(aut.graph.vertices):
        cfg = (v, starts_of[v])
        start_names.add(name(*cfg))
        seen.add(cfg)
        work.append(cfg)
    while work:
        v, subset = work.pop()
        n = name(v, subset)
        states[n] = v
        if subset & aut.finals:
            finals.add(n)
        for e in aut.graph.out_edges(v):
            nxt = frozenset(t for s in subset for (ee, t) in idx[s] if ee == e)
            w = aut.graph.edge_ends[e][1]
            transitions.add((n, e, name(w, nxt)))
            if (w, nxt) not in seen:
                seen.add((w, nxt))
                work.append((w, nxt))
    return PathAutomaton(
        aut.graph, states, frozenset(transitions), frozenset(start_names),
        frozenset(finals), aut.empty_accepting,
    )


def minimize(aut: PathAutomaton) -> PathAutomaton:
    """Moore partition refinement on a complete deterministic automaton."""
    det = determinize(aut)
    idx = {s: dict(pairs) for s, pairs in det._by_state().items()}
    block: dict[str, tuple] = {
        s: (det.state_labels[s], s in det.finals) for s in det.state_labels
    }
    while True:
        signature = {
            s: (block[s], tuple(sorted((e, block[t]) for e, t in idx[s].items())))
            for s in det.state_labels
        }
        if len(set(signature.values())) == len(set(block.values())):
            break
        block = signature
    rep: dict[tuple, str] = {}
    for s in sorted(det.state_labels):
        rep.setdefault(block[s], s)
    name = {s: rep[block[s]] for s in det.state_labels}
    states = {name[s]: det.state_labels[s] for s in det.state_labels}
    transitions = frozenset(
        (name[s], e, name[t]) for s, e, t in det.transitions
    )
    return PathAutomaton(
        det.graph, states, transitions,
        frozenset(name[s] for s in det.starts),
        frozenset(name[s] for s in det.finals),
        det.empty_accepting,
    )


def compact(aut: PathAutomaton) -> PathAutomaton:
    """Trimmed minimal automaton; used to keep pipeline blow-up in check."""
    return minimize(aut).trim()


def _check_same_graph(a: PathAutomaton, b: PathAutomaton):
    if a.graph != b.graph:
        raise GraphMismatchError("operands are over different graphs")


def union(a: PathAutomaton, b: PathAutomaton) -> PathAutomaton:
    _check_same_graph(a, b)
    sa = a.relabel_states(lambda s: f"a:{s}")
    sb = b.relabel_states(lambda s: f"b:{s}")
    return PathAutomaton(
        a.graph,
        {**sa.state_labels, **sb.state_labels},
        sa.transitions | sb.transitions,
        sa.starts | sb.starts,
        sa.finals | sb.finals,
        a.empty_accepting | b.empty_accepting,
    ).trim()


def intersection(a: PathAutomaton, b: PathAutomaton) -> PathAutomaton:
    _check_same_graph(a, b)
    ia, ib = a._by_state(), b._by_state()

    def name(p: str, q: str) -> str:
        return f"({p},{q})"

    states: dict[str, str] = {}
    transitions: set[tuple[str, str, str]] = set()
    starts: set[str] = set()
    finals: set[str] = set()
    work: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for p in sorted(a.starts):
        for q in sorted(b.starts):
            if a.state_labels[p] == b.state_labels[q]:
                seen.add((p, q))
                work.append((p, q))
                starts.add(name(p, q))
    while work:
        p, q = work.pop()
        n = name(p, q)
        states[n] = a.state_labels[p]
        if p in a.finals and q in b.finals:
            finals.add(n)
        targets_b: dict[str, list[str]] = {}
        for e, t in ib[q]:
            targets_b.setdefault(e, []).append(t)
        for e, tp in ia[p]:
            for tq in targets_b.get(e, ()):
                transitions.add((n, e, name(tp, tq)))
                if (tp, tq) not in seen:
                    seen.add((tp, tq))
                    work.append((tp, tq))
    return PathAutomaton(
        a.graph, states, frozenset(transitions), frozenset(starts),
        frozenset(finals), a.empty_accepting & b.empty_accepting,
    ).trim()


def complement(aut: PathAutomaton, universe: str = "X*") -> PathAutomaton:
    """Complement within X+ or X*."""
    if universe not in ("X+", "X*"):
        raise ValueError("universe must be 'X+' or 'X*'")
    det = determinize(aut)
    empties = (
        frozenset(aut.graph.vertices) - aut.empty_accepting
        if universe == "X*"
        else frozenset()
    )
    return PathAutomaton(
        det.graph, det.state_labels, det.transitions, det.starts,
        frozenset(det.state_labels) - det.finals, empties,
    ).trim()


def difference(a: PathAutomaton, b: PathAutomaton) -> PathAutomaton:
    return intersection(a, complement(b, "X*"))


def concatenation(a: PathAutomaton, b: PathAutomaton) -> PathAutomaton:
    """{p q : p in L(a), q in L(b), p.target = q.source}."""
    _check_same_graph(a, b)
    sa = a.relabel_states(lambda s: f"a:{s}").trim()
    sb = b.relabel_states(lambda s: f"b:{s}").trim()
    state_labels = {**sa.state_labels, **sb.state_labels}
    transitions = set(sa.transitions | sb.transitions)
    # fresh copies of a's starts, so reaching an a-final always means a
    # non-empty word of a was read: a start that is also final must not
    # act as an empty prefix
    starts: set[str] = set()
    for s in sa.starts:
        copy = f"in:{s}"
        state_labels[copy] = sa.state_labels[s]
        starts.add(copy)
        for (src, e, t) in sa.transitions:
            if src == s:
                transitions.add((copy, e, t))
    # nonempty . nonempty: jump from a final of a into b's start successors
    for f in sa.finals:
        for (s0, e, t) in sb.transitions:
            if s0 in sb.starts and sb.state_labels[s0] == sa.state_labels[f]:
                transitions.add((f, e, t))
    finals = set(sb.finals)
    # nonempty . empty: a's word alone when b accepts an empty path at its end
    finals.update(
        f for f in sa.finals if sa.state_labels[f] in b.empty_accepting
    )
    # empty . nonempty: b's word alone when a accepts an empty path at its start
    starts.update(
        s for s in sb.starts if sb.state_labels[s] in a.empty_accepting
    )
    return PathAutomaton(
        a.graph,
        state_labels,
        frozenset(transitions),
        frozenset(starts),
        frozenset(finals),
        a.empty_accepting & b.empty_accepting,
    ).trim()


def combine(a: PathAutomaton, b: PathAutomaton, mode: str) -> PathAutomaton:
    ops = {
        "union": union,
        "intersection": intersection,
        "difference": difference,
        "concatenation": concatenation,
    }
    if mode not in ops:
        raise ValueError(f"unknown combine mode {mode!r}")
    return ops[mode](a, b)


# -- closures --------------------------------------------------------------


def prefix_closure(aut: PathAutomaton) -> PathAutomaton:
    """Non-empty prefixes of accepted non-empty paths."""
    trimmed = aut.trim()
    co = trimmed.coreachable_states()
    return PathAutomaton(
        trimmed.graph, trimmed.state_labels, trimmed.transitions,
        trimmed.starts, frozenset(co), frozenset(),
    ).trim()


def plus_closure(aut: PathAutomaton) -> PathAutomaton:
    """Smallest composition-closed superset of L minus its empty paths."""
    base = PathAutomaton(
        aut.graph, aut.state_labels, aut.transitions, aut.starts,
        aut.finals, frozenset(),
    ).trim()
    transitions = set(base.transitions)
    for f in base.finals:
        for (s0, e, t) in base.transitions:
            if s0 in base.starts and base.state_labels[s0] == base.state_labels[f]:
                transitions.add((f, e, t))
    return PathAutomaton(
        base.graph, base.state_labels, frozenset(transitions),
        base.starts, base.finals, frozenset(),
    ).trim()


def touched_vertices(aut: PathAutomaton) -> frozenset[str]:
    """Sources and targets of accepted paths, including flagged anchors.

    In a trimmed automaton every transition lies on some accepting run, so
    a start with an outgoing transition begins an accepted word and a final
    with an incoming transition ends one.
    """
    trimmed = PathAutomaton(
        aut.graph, aut.state_labels, aut.transitions, aut.starts,
        aut.finals, frozenset(),
    ).trim()
    sources = {
        trimmed.state_labels[s]
        for s in trimmed.starts
        if any(t[0] == s for t in trimmed.transitions)
    }
    targets = {
        trimmed.state_labels[f]
        for f in trimmed.finals
        if any(t[2] == f for t in trimmed.transitions)
    }
    return frozenset(sources | targets | set(aut.empty_accepting))


def closure(aut: PathAutomaton, mode: str) -> PathAutomaton:
    if mode == "prefix":
        return prefix_closure(aut)
    if mode == "subsemigroupoid":
        return plus_closure(aut)
    if mode == "subcategory":
        closed = plus_closure(aut)
        return PathAutomaton(
            closed.graph, closed.state_labels, closed.transitions,
            closed.starts, closed.finals, touched_vertices(aut),
        )
    raise ValueError(f"unknown closure mode {mode!r}")


# -- language-level predicates --------------------------------------------


def language_subset(a: PathAutomaton, b: PathAutomaton) -> bool:
    """Exact test that L(a) is contained in L(b)."""
    return difference(a, b).is_empty()


def language_equal(a: PathAutomaton, b: PathAutomaton) -> bool:
    """Exact language equivalence via symmetric difference emptiness."""
    return language_subset(a, b) and language_subset(b, a)


def relabel_edges(
    aut: PathAutomaton,
    target: Graph,
    edge_map: Callable[[str], str],
    vertex_map: Callable[[str], str] = lambda v: v,
) -> PathAutomaton:
    """Push an automaton along a graph morphism given on edges and vertices."""
    return PathAutomaton(
        target,
        {s: vertex_map(v) for s, v in aut.state_labels.items()},
        frozenset((s, edge_map(e), t) for s, e, t in aut.transitions),
        aut.starts,
        aut.finals,
        frozenset(vertex_map(v) for v in aut.empty_accepting),
    )


def eliminate_epsilon(
    graph: Graph,
    state_labels: dict[str, str],
    labelled: Iterable[tuple[str, str, str]],
    silent: Iterable[tuple[str, str]],
    starts: Iterable[str],
    finals: Iterable[str],
    empty_accepting: frozenset[str] = frozenset(),
) -> PathAutomaton:
    """Build an automaton from labelled plus silent transitions.

    Silent moves must be label-preserving only in the sense that the caller
    guarantees the resulting labelled transitions satisfy the morphism.
    """
    closure_map: dict[str, set[str]] = {}
    adj: dict[str, set[str]] = {s: set() for s in state_labels}
    for u, v in silent:
        adj[u].add(v)
    for s in state_labels:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closure_map[s] = seen
    final_set = set(finals)
    new_finals = {s for s in state_labels if closure_map[s] & final_set}
    new_transitions: set[tuple[str, str, str]] = set()
    for s, e, t in labelled:
        new_transitions.add((s, e, t))
    # route labelled moves through silent prefixes: p --eps*--> s --e--> t
    by_src: dict[str, list[tuple[str, str]]] = {}
    for s, e, t in labelled:
        by_src.setdefault(s, []).append((e, t))
    for p in state_labels:
        for s in closure_map[p]:
            for e, t in by_src.get(s, ()):
                new_transitions.add((p, e, t))
    return PathAutomaton(
        graph, dict(state_labels), frozenset(new_transitions),
        frozenset(starts), frozenset(new_finals), empty_accepting,
    ).trim()
