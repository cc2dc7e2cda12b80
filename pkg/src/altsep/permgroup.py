"""Exact permutation-group computation.

Permutations act on 0-based points internally and are stored as tuples:
``p[i]`` is the image of point i.  ``compose(p, q)`` means "apply p, then
q", matching path tracing (the image of a vertex under a word is the
endpoint of the word's path).  Cycle notation at the text boundary is
1-based, e.g. "(1 2 3)(4 5)"; the identity prints as "()".

Group orders come from a deterministic base-and-strong-generating-set
construction (no randomization): base points are the smallest not-yet-fixed
points, transversals extend in BFS order, and a full sifting pass over all
Schreier generators re-verifies the strong generating set before an order
is reported.  Orders are exact Python integers, so comparisons against
factorials are exact at any degree.
"""

from __future__ import annotations

import math
import re
from collections import deque


def identity_perm(degree: int):
    return tuple(range(degree))


def is_identity(perm) -> bool:
    return all(i == j for i, j in enumerate(perm))


def compose(p, q):
    """Apply p, then q."""
    if len(p) != len(q):
        raise ValueError(f"degree mismatch: {len(p)} vs {len(q)}")
    return tuple(q[i] for i in p)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def support(p):
    """Moved points, ascending."""
    return tuple(i for i, j in enumerate(p) if i != j)


def cycles(p):
    """Nontrivial cycles, each rotated to start at its smallest point,
    sorted by that point."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cycle = [i]
        j = p[i]
        while j != i:
            seen.add(j)
            cycle.append(j)
            j = p[j]
        out.append(tuple(cycle))
    return out

def parity(p) -> str:
    """'even' or 'odd' (a k-cycle contributes k - 1 transpositions)."""
    swaps = sum(len(c) - 1 for c in cycles(p))
    return "even" if swaps % 2 == 0 else "odd"


def format_cycles(p) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cs)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int):
    """Parse 1-based cycle notation into a permutation of the degree."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty permutation")
    rebuilt = "".join("(" + body + ")" for body in _CYCLE_RE.findall(stripped))
    if re.sub(r"\s", "", rebuilt) != re.sub(r"\s", "", stripped):
        raise ValueError(f"malformed cycle notation: {text!r}")
    images = list(range(degree))
    seen = set()
    for body in _CYCLE_RE.findall(stripped):
        points = [int(tok) for tok in body.split()]
        if not points:
            continue
        for point in points:
            if not 1 <= point <= degree:
                raise ValueError(f"point {point} out of range 1..{degree}")
            if point in seen:
                raise ValueError(f"point {point} repeated in {text!r}")
            seen.add(point)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def orbit_transitive(gens, degree: int):
    """Orbits of the generated group and whether it is transitive."""
    for g in gens:
        if len(g) != degree:
            raise ValueError("generator degree mismatch")
    parent = list(range(degree))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        for i, j in enumerate(g):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(degree):
        groups.setdefault(find(i), []).append(i)
    orbits = [tuple(groups[root]) for root in sorted(groups)]
    return orbits, len(orbits) == 1


class _Level:
    __slots__ = ("point", "orbit", "transversal", "gens", "pending")

    def __init__(self, point: int):
        self.point = point
        self.orbit = [point]
        self.transversal = {point: None}  # None stands for the identity
        self.gens = []
        self.pending = deque()


class StrongGeneratingSet:
    """Stabilizer chain with strong generators, built deterministically."""

    def __init__(self, gens, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []
        for g in gens:
            if len(g) != degree:
                raise ValueError("generator degree mismatch")
            self._ingest(tuple(g))
        self._verify()

    # -- construction ---------------------------------------------------

    def _rep(self, level: _Level, point: int):
        u = level.transversal[point]
        return u if u is not None else identity_perm(self.degree)

    def _sift(self, perm, start: int):
        """Reduce perm through levels >= start; returns (residue, level at
        which sifting stopped)."""
        for i in range(start, len(self.levels)):
            level = self.levels[i]
            image = perm[level.point]
            if image == level.point:
                continue
            if image not in level.transversal:
                return perm, i
            perm = compose(perm, inverse(self._rep(level, image)))
        return perm, len(self.levels)

    def _ingest(self, perm):
        residue, at = self._sift(perm, 0)
        if is_identity(residue):
            return
        self._place(residue, at)
        for i in range(min(at, len(self.levels) - 1), -1, -1):
            self._complete(i)

    def _place(self, perm, at: int):
        if at == len(self.levels):
            point = min(support(perm))
            self.levels.append(_Level(point))
        for i in range(at + 1):
            self._add_generator(self.levels[i], perm)

    def _add_generator(self, level: _Level, perm):
        gen_index = len(level.gens)
        level.gens.append(perm)
        for point in list(level.orbit):
            level.pending.append((point, gen_index))
        self._extend_orbit(level, [perm])

    def _extend_orbit(self, level: _Level, new_gens):
        queue = deque()
        for point in level.orbit:
            for g in new_gens:
                image = g[point]
                if image not in level.transversal:
                    level.transversal[image] = compose(self._rep(level, point), g)
                    level.orbit.append(image)
                    queue.append(image)
                    for gi in range(len(level.gens)):
                        level.pending.append((image, gi))
        while queue:
            point = queue.popleft()
            for g in level.gens:
                image = g[point]
                if image not in level.transversal:
                    level.transversal[image] = compose(self._rep(level, point), g)
                    level.orbit.append(image)
                    queue.append(image)
                    for gi in range(len(level.gens)):
                        level.pending.append((image, gi))

    def _schreier_generator(self, level: _Level, point: int, gen):
        u = self._rep(level, point)
        ug = compose(u, gen)
        return compose(ug, inverse(self._rep(level, gen[point])))

    def _complete(self, i: int):
        level = self.levels[i]
        while level.pending:
            point, gen_index = level.pending.popleft()
            sg = self._schreier_generator(level, point, level.gens[gen_index])
            residue, at = self._sift(sg, i + 1)
            if is_identity(residue):
                continue
            self._place(residue, at)
            for j in range(min(at, len(self.levels) - 1), i, -1):
                self._complete(j)

    def _verify(self):
        """Full sifting pass: every Schreier generator of every level must
        sift to the identity against the finished chain."""
        for i, level in enumerate(self.levels):
            for point in level.orbit:
                for gen in level.gens:
                    sg = self._schreier_generator(level, point, gen)
                    residue, _ = self._sift(sg, i + 1)
                    if not is_identity(residue):
                        raise AssertionError(
                            "strong generating set failed verification")

    # -- queries ----------------------------------------------------------

    def order(self) -> int:
        return math.prod(len(level.orbit) for level in self.levels)

    def base(self):
        return tuple(level.point for level in self.levels)

    def contains(self, perm) -> bool:
        residue, _ = self._sift(tuple(perm), 0)
        return is_identity(residue)


def bsgs_order(gens, degree: int) -> int:
    """Exact order of the group generated by ``gens``."""
    return StrongGeneratingSet(gens, degree).order()


ALTERNATING = "alternating"
SYMMETRIC = "symmetric"
OTHER = "other"


def recognize_alt_sym(gens, degree: int) -> str:
    """Classify the generated group as the full symmetric group, the
    alternating group, or something smaller, by exact order."""
    if degree < 3:
        raise ValueError("recognition needs degree >= 3")
    order = bsgs_order(gens, degree)
    full = math.factorial(degree)
    if order == full:
        return SYMMETRIC
    if order == full // 2 and all(parity(g) == "even" for g in gens):
        return ALTERNATING
    return OTHER
