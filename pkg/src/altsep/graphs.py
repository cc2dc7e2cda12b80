"""Finite labeled graphs with involutive edges, folding, and amalgamation.

A labeled graph stores each edge/inverse-edge pair once, in the canonical
orientation whose letter has positive sign: the stored pair (u, w, x1)
represents the edge u --x1--> w together with its involution partner
w --x1^-1--> u.  Graphs are immutable; every operation returns a new graph,
and operations that can merge vertices also return the induced vertex map.

A graph is *folded* when no vertex has two distinct outgoing edges with the
same letter.  Folding is confluent, so ``fold`` picks its own order; the
test suite checks confluence against random fold orders.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .words import Letter


def canonical_pair(source: int, target: int, letter: Letter):
    """Orient an edge so its letter has positive sign."""
    if letter.sign < 0:
        return (target, source, letter.inverse())
    return (source, target, letter)


def _pair_key(pair):
    u, w, letter = pair
    return (u, letter.sort_key, w)


@dataclass(frozen=True)
class LabeledGraph:
    vertices: frozenset
    pairs: frozenset
    base: int
    folded: bool

    @cached_property
    def out(self):
        """Outgoing edges: vertex -> {letter -> sorted tuple of targets}."""
        table = {v: {} for v in self.vertices}
        for u, w, letter in self.pairs:
            table[u].setdefault(letter, []).append(w)
            table[w].setdefault(letter.inverse(), []).append(u)
        return {
            v: {letter: tuple(sorted(ts)) for letter, ts in d.items()}
            for v, d in table.items()
        }

    def step(self, vertex: int, letter: Letter):
        """Unique out-neighbor along ``letter``, or None.  Requires folded."""
        if not self.folded:
            raise ValueError("step requires a folded graph")
        targets = self.out[vertex].get(letter)
        return targets[0] if targets else None

    def has_out(self, vertex: int, letter: Letter) -> bool:
        return letter in self.out[vertex]

    def letters_at(self, vertex: int):
        return sorted(self.out[vertex], key=lambda l: l.sort_key)

    def num_pairs(self) -> int:
        return len(self.pairs)

    def __repr__(self):
        return (f"LabeledGraph({len(self.vertices)} vertices, "
                f"{len(self.pairs)} edge pairs, base={self.base}, "
                f"folded={self.folded})")


@dataclass(frozen=True)
class TraceResult:
    status: str  # 'closed' | 'open' | 'stuck'
    vertex: int
    position: int | None = None  # 1-based index of the letter with no edge

    @property
    def closed(self) -> bool:
        return self.status == "closed"


@dataclass(frozen=True)
class SaturationDefect:
    vertex: int
    missing: Letter


def _is_folded(vertices, pairs) -> bool:
    seen = set()
    for u, w, letter in pairs:
        for s, _, lab in ((u, w, letter), (w, u, letter.inverse())):
            key = (s, lab)
            if key in seen:
                return False
            seen.add(key)
    return True


def make_graph(vertices, pairs, base) -> LabeledGraph:
    """Assemble a graph from canonical pairs, certifying foldedness."""
    vertices = frozenset(vertices)
    pairs = frozenset(pairs)
    return LabeledGraph(vertices, pairs, base, _is_folded(vertices, pairs))


def build_graph(vertices, edges, base) -> LabeledGraph:
    """Build a graph from declared vertices and (source, target, letter)
    edges; each listed edge also carries its involution partner.

    Listing the same edge pair twice (directly or via its inverse
    orientation) is rejected.
    """
    vertex_set = frozenset(vertices)
    if base not in vertex_set:
        raise ValueError(f"base {base!r} is not a declared vertex")
    pairs = set()
    for source, target, letter in edges:
        if source not in vertex_set or target not in vertex_set:
            raise ValueError(f"edge ({source}, {target}, {letter}) uses an undeclared vertex")
        pair = canonical_pair(source, target, letter)
        if pair in pairs:
            raise ValueError(f"duplicate edge {pair[0]} --{pair[2]}--> {pair[1]}")
        pairs.add(pair)
    return make_graph(vertex_set, pairs, base)


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        parent = self.parent
        root = item
        while parent[root] != root:
            root = parent[root]
        while parent[item] != root:
            parent[item], item = root, parent[item]
        return root

    def union(self, a, b):
        """Merge classes; the smaller id survives (deterministic)."""
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        keep, drop = (a, b) if a < b else (b, a)
        self.parent[drop] = keep
        return keep


def fold(graph: LabeledGraph):
    """Fold to an immersion: identify same-source same-letter edges until
    none remain.  Returns (folded graph, total vertex map)."""
    uf = _UnionFind(graph.vertices)
    out = {v: {} for v in graph.vertices}
    work = deque()
    for u, w, letter in sorted(graph.pairs, key=_pair_key):
        work.append((u, w, letter))
        work.append((w, u, letter.inverse()))
    while work:
        source, target, letter = work.popleft()
        source, target = uf.find(source), uf.find(target)
        slots = out[source]
        existing = slots.get(letter)
        if existing is None:
            slots[letter] = target
            continue
        existing = uf.find(existing)
        slots[letter] = existing
        if existing == target:
            continue
        keep = uf.union(existing, target)
        drop = target if keep == existing else existing
        # the dropped class's slots are replayed from the survivor; stale
        # targets resolve through find() on their next visit
        for l2, t2 in out.pop(drop).items():
            work.append((keep, t2, l2))
    vmap = {v: uf.find(v) for v in graph.vertices}
    vertices = frozenset(vmap.values())
    pairs = set()
    for source, slots in out.items():
        for letter, target in slots.items():
            pairs.add(canonical_pair(uf.find(source), uf.find(target), letter))
    result = LabeledGraph(vertices, frozenset(pairs), vmap[graph.base], True)
    return result, vmap


def identify_vertices(graph: LabeledGraph, groups):
    """Quotient by merging each group of vertices to one (the smallest id).

    The result is not folded in general.  Returns (graph, vertex map).
    """
    uf = _UnionFind(graph.vertices)
    for group in groups:
        group = sorted(group)
        for v in group:
            if v not in graph.vertices:
                raise ValueError(f"unknown vertex {v!r}")
        for v in group[1:]:
            uf.union(group[0], v)
    vmap = {v: uf.find(v) for v in graph.vertices}
    pairs = frozenset(
        canonical_pair(vmap[u], vmap[w], letter) for u, w, letter in graph.pairs
    )
    vertices = frozenset(vmap.values())
    return LabeledGraph(vertices, pairs, vmap[graph.base], _is_folded(vertices, pairs)), vmap


def trace(graph: LabeledGraph, start: int, word) -> TraceResult:
    """Follow ``word`` letter by letter from ``start`` in a folded graph."""
    if not graph.folded:
        raise ValueError("trace requires a folded graph")
    if start not in graph.vertices:
        raise ValueError(f"unknown vertex {start!r}")
    current = start
    for position, letter in enumerate(word, start=1):
        target = graph.step(current, letter)
        if target is None:
            return TraceResult("stuck", current, position)
        current = target
    return TraceResult("closed" if current == start else "open", current)


def amalgamate(base_graph: LabeledGraph, pieces):
    """Pushout: glue each piece onto the base graph along a shared subgraph.

    ``pieces`` is a list of (shared, piece, mapping) triples where ``shared``
    is a subgraph of the base graph, ``piece`` is the graph being glued, and
    ``mapping`` sends shared vertices to piece vertices.  Each mapping must
    be injective and label-preserving on the shared subgraph.  The glued
    union is folded; the base's base point is kept.

    Returns (result, base_map, piece_maps) with total vertex maps into the
    result for the base graph and for each piece.
    """
    vertices = set(base_graph.vertices)
    pairs = set(base_graph.pairs)
    offset = max(base_graph.vertices) + 1 if base_graph.vertices else 0
    offsets = []
    merge_groups = []
    for shared, piece, mapping in pieces:
        if not shared.vertices <= base_graph.vertices or not shared.pairs <= base_graph.pairs:
            raise ValueError("shared graph is not a subgraph of the base graph")
        if set(mapping) != set(shared.vertices):
            raise ValueError("mapping domain must be the shared vertex set")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("injection is not injective on the shared subgraph")
        for u, w, letter in shared.pairs:
            if canonical_pair(mapping[u], mapping[w], letter) not in piece.pairs:
                raise ValueError(
                    f"injection is not label-preserving: shared edge "
                    f"{u} --{letter}--> {w} has no image in the piece")
        offsets.append(offset)
        for v in piece.vertices:
            vertices.add(offset + v)
        for u, w, letter in piece.pairs:
            pairs.add((offset + u, offset + w, letter))
        for shared_v, piece_v in mapping.items():
            merge_groups.append((shared_v, offset + piece_v))
        offset += max(piece.vertices) + 1 if piece.vertices else 0
    union = LabeledGraph(frozenset(vertices), frozenset(pairs), base_graph.base, False)
    glued, m1 = identify_vertices(union, merge_groups)
    folded, m2 = fold(glued)
    base_map = {v: m2[m1[v]] for v in base_graph.vertices}
    piece_maps = [
        {v: m2[m1[off + v]] for v in piece.vertices}
        for off, (_, piece, _) in zip(offsets, pieces)
    ]
    return folded, base_map, piece_maps


def components(graph: LabeledGraph, factor: str, include_singletons: bool = False):
    """Maximal connected monochromatic subgraphs for one factor.

    Returns a list of (subgraph, anchor) sorted by smallest vertex id.  The
    subgraph keeps the original vertex ids and is based at the anchor (the
    graph's base point when it belongs to the component, else the smallest
    vertex).  Vertices with no edge of the factor appear as degenerate
    singleton components only when ``include_singletons`` is set.
    """
    uf = _UnionFind(graph.vertices)
    touched = set()
    for u, w, letter in graph.pairs:
        if letter.factor == factor:
            uf.union(u, w)
            touched.add(u)
            touched.add(w)
    groups = {}
    for v in sorted(graph.vertices):
        if v in touched or include_singletons:
            groups.setdefault(uf.find(v), []).append(v)
    out = []
    for root in sorted(groups):
        members = frozenset(groups[root])
        pairs = frozenset(
            pair for pair in graph.pairs
            if pair[2].factor == factor and pair[0] in members
        )
        anchor = graph.base if graph.base in members else min(members)
        out.append((LabeledGraph(members, pairs, anchor, graph.folded), anchor))
    return out


def saturation_defects(graph: LabeledGraph, alphabet):
    """All (vertex, letter) gaps: letters of the alphabet with no outgoing
    edge at a vertex.  Requires a folded graph."""
    if not graph.folded:
        raise ValueError("saturation_defects requires a folded graph")
    letters = sorted(alphabet, key=lambda l: l.sort_key)
    defects = []
    for v in sorted(graph.vertices):
        for letter in letters:
            if not graph.has_out(v, letter):
                defects.append(SaturationDefect(v, letter))
    return defects


def breadth_first_tree(graph: LabeledGraph, root: int):
    """Deterministic BFS: letters sorted x-first, ascending index, positive
    sign first.  Returns (discovery order, parent) where parent maps each
    non-root reached vertex to (parent vertex, letter of the edge parent->v).
    """
    if not graph.folded:
        raise ValueError("breadth_first_tree requires a folded graph")
    order = [root]
    parent = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for letter in graph.letters_at(v):
            w = graph.step(v, letter)
            if w not in seen:
                seen.add(w)
                parent[w] = (v, letter)
                order.append(w)
                queue.append(w)
    return order, parent


def tree_path_word(parent, vertex):
    """Word along BFS-tree edges from the root to ``vertex``."""
    letters = []
    while vertex in parent:
        vertex, letter = parent[vertex]
        letters.append(letter)
    return tuple(reversed(letters))


def is_connected(graph: LabeledGraph) -> bool:
    order, _ = breadth_first_tree(graph, graph.base)
    return len(order) == len(graph.vertices)


def is_tree(graph: LabeledGraph) -> bool:
    """A connected graph is a tree iff its edge-pair count is |V| - 1."""
    return len(graph.pairs) == len(graph.vertices) - 1


def canonical_form(graph: LabeledGraph):
    """Canonical relabeling of a connected folded based graph.

    Two such graphs are isomorphic as based labeled graphs exactly when
    their canonical forms are equal (folded based graphs are rigid, so the
    letter-ordered BFS numbering is a complete invariant).
    """
    order, _ = breadth_first_tree(graph, graph.base)
    if len(order) != len(graph.vertices):
        raise ValueError("canonical_form requires a connected graph")
    number = {v: i for i, v in enumerate(order)}
    pairs = sorted(
        (canonical_pair(number[u], number[w], letter) for u, w, letter in graph.pairs),
        key=_pair_key,
    )
    return (len(order), tuple((u, w, str(letter)) for u, w, letter in pairs))
