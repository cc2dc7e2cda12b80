"""The two free factors: a free group of rank r and a finite group G.

G is always presented by permutation generators and closed by breadth-first
enumeration into a multiplication table (element 0 is the identity).  The
finite side builds coset graphs on right cosets Kg, with an edge
Kg --y--> Kgy per generator; the free side completes any folded graph to a
saturated one on the same vertex set by extending each generator's partial
injection to a permutation of the vertices.
"""

from __future__ import annotations

from collections import deque

from . import permgroup
from .graphs import LabeledGraph, breadth_first_tree, canonical_pair, make_graph
from .words import Word, x_letter, y_letter


class NotGBasedError(ValueError):
    """A path with identity label is not closed: the graph does not embed
    in a coset graph of the finite factor."""


class FiniteGroupTable:
    """Enumerated finite group: elements are indices into a closed list of
    permutations; index 0 is the identity."""

    identity = 0

    def __init__(self, degree, elements, generator_indices):
        self.degree = degree
        self.elements = tuple(elements)
        self.generator_indices = tuple(generator_indices)
        self._index = {perm: i for i, perm in enumerate(self.elements)}
        self._inverses = tuple(
            self._index[permgroup.inverse(perm)] for perm in self.elements
        )
        self._geodesics = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_generators(self) -> int:
        return len(self.generator_indices)

    def multiply(self, a: int, b: int) -> int:
        return self._index[permgroup.compose(self.elements[a], self.elements[b])]

    def inverse(self, a: int) -> int:
        return self._inverses[a]

    def generator_element(self, index: int) -> int:
        """Element of the 1-based generator y<index>."""
        if not 1 <= index <= len(self.generator_indices):
            raise ValueError(f"no generator y{index}")
        return self.generator_indices[index - 1]

    def letter_element(self, letter) -> int:
        element = self.generator_element(letter.index)
        return element if letter.sign > 0 else self.inverse(element)

    def _geodesic_words(self):
        """Shortest generator word per element, BFS with the fixed letter
        order y1, y1^-1, y2, ...; ties break toward earlier letters."""
        if self._geodesics is not None:
            return self._geodesics
        letters = []
        for j in range(1, self.num_generators + 1):
            letters.append(y_letter(j))
            letters.append(y_letter(j, -1))
        words = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            current = queue.popleft()
            for letter in letters:
                target = self.multiply(current, self.letter_element(letter))
                if target not in words:
                    words[target] = words[current] + (letter,)
                    queue.append(target)
        if len(words) != self.order:
            raise AssertionError("generators do not generate the closed table")
        self._geodesics = words
        return words

    def element_word(self, element: int) -> Word:
        return self._geodesic_words()[element]

    def element_length(self, element: int) -> int:
        return len(self._geodesic_words()[element])

    def word_element(self, word) -> int:
        """Evaluate a y-word in the table."""
        out = self.identity
        for letter in word:
            if letter.factor != "y":
                raise ValueError(f"not a finite-factor letter: {letter}")
            out = self.multiply(out, self.letter_element(letter))
        return out

    def is_subgroup(self, members) -> bool:
        members = frozenset(members)
        if self.identity not in members:
            return False
        return all(
            self.multiply(a, b) in members for a in members for b in members
        )


def enumerate_group(degree: int, generators) -> FiniteGroupTable:
    """Close permutation generators into a full group table."""
    gens = []
    for perm in generators:
        perm = tuple(perm)
        if sorted(perm) != list(range(degree)):
            raise ValueError(f"not a permutation of 0..{degree - 1}: {perm}")
        gens.append(perm)
    identity = permgroup.identity_perm(degree)
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = permgroup.compose(current, g)
            if product not in index:
                index[product] = len(elements)
                elements.append(product)
                queue.append(product)
    return FiniteGroupTable(degree, elements, tuple(index[g] for g in gens))


def group_from_multiplication_table(rows, generators) -> FiniteGroupTable:
    """Convert a multiplication table into the internal permutation form.

    ``rows[a][b]`` is the product a*b over elements 0..m-1 with 0 the
    identity; ``generators`` picks the elements the letters y1..yq name.
    Each generator becomes its right-multiplication permutation, and the
    group is re-enumerated from those, so all tables share one internal
    representation."""
    size = len(rows)
    for a, row in enumerate(rows):
        if len(row) != size or sorted(row) != list(range(size)):
            raise ValueError(f"row {a} is not a permutation of the elements")
        if rows[a][0] != a or rows[0][a] != a:
            raise ValueError("element 0 must be a two-sided identity")
    perms = [tuple(rows[a][g] for a in range(size)) for g in generators]
    table = enumerate_group(size, perms)
    if table.order != size:
        raise ValueError("the chosen generators do not generate the table")
    return table


def subgroup_closure(table: FiniteGroupTable, seeds) -> frozenset:
    """Smallest subgroup of the table containing the seed elements."""
    members = {table.identity}
    queue = deque([table.identity])
    gens = sorted(set(seeds) | {table.inverse(s) for s in seeds})
    while queue:
        current = queue.popleft()
        for s in gens:
            product = table.multiply(current, s)
            if product not in members:
                members.add(product)
                queue.append(product)
    return frozenset(members)


def _coset_enumeration(table: FiniteGroupTable, subgroup):
    """BFS over right cosets Kg.  Returns (number of cosets, element_to_coset
    list, edges) with coset 0 = K itself and edges (coset, generator index,
    image coset)."""
    subgroup = frozenset(subgroup)
    if not table.is_subgroup(subgroup):
        raise ValueError("not a subgroup")
    element_to_coset = [None] * table.order
    first = frozenset(subgroup)
    for e in first:
        element_to_coset[e] = 0
    cosets = [first]
    queue = deque([0])
    edges = []
    while queue:
        cid = queue.popleft()
        for j in range(1, table.num_generators + 1):
            gen = table.generator_element(j)
            image = frozenset(table.multiply(e, gen) for e in cosets[cid])
            witness = min(image)
            target = element_to_coset[witness]
            if target is None:
                target = len(cosets)
                cosets.append(image)
                for e in image:
                    element_to_coset[e] = target
                queue.append(target)
            edges.append((cid, j, target))
    return len(cosets), element_to_coset, edges


def coset_graph(table: FiniteGroupTable, subgroup) -> LabeledGraph:
    """Coset graph of the finite factor relative to a subgroup K: vertices
    are the right cosets Kg, base K*1, one y-edge Kg --y--> Kgy per
    generator.  Folded, connected, saturated for all y-letters."""
    count, _, edges = _coset_enumeration(table, subgroup)
    pairs = set()
    for cid, j, target in edges:
        pairs.add(canonical_pair(cid, target, y_letter(j)))
    graph = make_graph(range(count), pairs, 0)
    if not graph.folded:
        raise AssertionError("coset graph must be folded")
    return graph


def _component_elements(table: FiniteGroupTable, component: LabeledGraph):
    """Spanning-tree element per vertex of a y-monochromatic component,
    relative to its base, plus the loop elements of the non-tree edges."""
    order, parent = breadth_first_tree(component, component.base)
    if len(order) != len(component.vertices):
        raise ValueError("component must be connected")
    reach = {component.base: table.identity}
    for v in order[1:]:
        u, letter = parent[v]
        reach[v] = table.multiply(reach[u], table.letter_element(letter))
    tree_pairs = set()
    for v, (u, letter) in parent.items():
        tree_pairs.add(canonical_pair(u, v, letter))
    loops = []
    for u, w, letter in sorted(component.pairs - tree_pairs, key=lambda p: (p[0], p[2].sort_key, p[1])):
        element = table.multiply(
            table.multiply(reach[u], table.letter_element(letter)),
            table.inverse(reach[w]),
        )
        loops.append(element)
    return reach, loops


def component_cosets(table: FiniteGroupTable, component: LabeledGraph):
    """Subgroup K read off a y-component's loops, and the coset key each
    vertex lands on in the coset graph of K (key = smallest element of the
    coset).  Vertices sharing a key have a non-closed identity-label path
    between them."""
    reach, loops = _component_elements(table, component)
    subgroup = subgroup_closure(table, loops)
    assignment = {
        v: min(table.multiply(k, g) for k in subgroup) for v, g in reach.items()
    }
    return subgroup, assignment


def embed_Y_component(table: FiniteGroupTable, component: LabeledGraph):
    """Embed a connected folded y-component into the coset graph of the
    subgroup generated by its loop labels.

    Returns (cover, embedding).  Raises NotGBasedError when two vertices
    land on the same coset, i.e. some identity-label path is not closed.
    """
    reach, loops = _component_elements(table, component)
    subgroup = subgroup_closure(table, loops)
    count, element_to_coset, edges = _coset_enumeration(table, subgroup)
    pairs = set()
    for cid, j, target in edges:
        pairs.add(canonical_pair(cid, target, y_letter(j)))
    cover = make_graph(range(count), pairs, 0)
    embedding = {v: element_to_coset[g] for v, g in reach.items()}
    if len(set(embedding.values())) != len(embedding):
        raise NotGBasedError(
            "two vertices of the component land on the same coset; "
            "an identity-labeled path is not closed")
    for u, w, letter in component.pairs:
        if canonical_pair(embedding[u], embedding[w], letter) not in cover.pairs:
            raise AssertionError("embedding failed to preserve an edge")
    return cover, embedding


def complete_X_cover(graph: LabeledGraph, rank: int) -> LabeledGraph:
    """Extend each x-generator's partial injection to a permutation of the
    vertex set: the i-th unsaturated source joins the i-th unsaturated
    target, in ascending vertex order.  No vertices are added; the result
    has no x-saturation defects.  Edges with other labels pass through."""
    if not graph.folded:
        raise ValueError("complete_X_cover requires a folded graph")
    new_pairs = set(graph.pairs)
    for i in range(1, rank + 1):
        letter = x_letter(i)
        sources = sorted(v for v in graph.vertices if not graph.has_out(v, letter))
        targets = sorted(
            v for v in graph.vertices if not graph.has_out(v, letter.inverse())
        )
        if len(sources) != len(targets):
            raise AssertionError("partial injection is unbalanced")
        for s, t in zip(sources, targets):
            new_pairs.add((s, t, letter))
    result = make_graph(graph.vertices, new_pairs, graph.base)
    if not result.folded:
        raise AssertionError("completion broke the immersion condition")
    return result


__all__ = [
    "FiniteGroupTable",
    "NotGBasedError",
    "enumerate_group",
    "subgroup_closure",
    "coset_graph",
    "component_cosets",
    "embed_Y_component",
    "complete_X_cover",
]
