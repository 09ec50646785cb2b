"""Acyclic directed mixed graphs (path diagrams) and their structural relations.

An ADMG has a set of vertices, a set of directed edges whose directed part is
acyclic, and a set of bi-directed edges. A pair of vertices may carry both a
directed and a bi-directed edge. Graphs are immutable after construction, so
derived relations (ancestor closures, districts) are cached on the instance
and instances are safe to share between threads.
"""

from __future__ import annotations

import heapq
import re
from collections import deque
from typing import Collection, Iterable

from .errors import InputError, InternalError

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise InputError(
            f"invalid vertex name {name!r}: expected a non-empty string of "
            "letters, digits and underscores"
        )
    return name


class Admg:
    """An acyclic directed mixed graph over named vertices.

    Parameters
    ----------
    vertices:
        Iterable of vertex names. Duplicates are ignored; names from edges
        must be declared here as well.
    directed:
        Iterable of ``(tail, head)`` pairs, one per edge ``tail -> head``.
    bidirected:
        Iterable of two-element pairs, one per edge ``u <-> v``.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        directed: Iterable[tuple[str, str]] = (),
        bidirected: Iterable[Collection[str]] = (),
    ):
        names = sorted({_check_name(v) for v in vertices})
        vset = set(names)

        dir_edges: set[tuple[str, str]] = set()
        for tail, head in directed:
            if tail not in vset or head not in vset:
                raise InputError(f"directed edge ({tail!r}, {head!r}) uses an undeclared vertex")
            if tail == head:
                raise InputError(f"self-loop {tail!r} -> {head!r} is not allowed")
            if (tail, head) in dir_edges:
                raise InputError(f"duplicate directed edge {tail} -> {head}")
            dir_edges.add((tail, head))

        bi_edges: set[frozenset[str]] = set()
        for pair in bidirected:
            u, v = tuple(pair)
            if u not in vset or v not in vset:
                raise InputError(f"bi-directed edge ({u!r}, {v!r}) uses an undeclared vertex")
            if u == v:
                raise InputError(f"self-loop {u!r} <-> {v!r} is not allowed")
            edge = frozenset((u, v))
            if edge in bi_edges:
                raise InputError(f"duplicate bi-directed edge {min(u, v)} <-> {max(u, v)}")
            bi_edges.add(edge)

        self._vertices: tuple[str, ...] = tuple(names)
        self._vset = frozenset(names)
        self._directed = frozenset(dir_edges)
        self._bidirected = frozenset(bi_edges)

        self._parents: dict[str, frozenset[str]] = {}
        self._children: dict[str, frozenset[str]] = {}
        self._spouses: dict[str, frozenset[str]] = {}
        pa: dict[str, set[str]] = {v: set() for v in names}
        ch: dict[str, set[str]] = {v: set() for v in names}
        sp: dict[str, set[str]] = {v: set() for v in names}
        for tail, head in dir_edges:
            pa[head].add(tail)
            ch[tail].add(head)
        for edge in bi_edges:
            u, v = tuple(edge)
            sp[u].add(v)
            sp[v].add(u)
        for v in names:
            self._parents[v] = frozenset(pa[v])
            self._children[v] = frozenset(ch[v])
            self._spouses[v] = frozenset(sp[v])

        self._assert_acyclic()

        # lazy caches; safe because the graph never mutates
        self._an_cache: dict[str, frozenset[str]] = {}
        self._de_cache: dict[str, frozenset[str]] = {}
        self._district_cache: dict[str, frozenset[str]] = {}
        self._components: tuple[frozenset[str], ...] | None = None
        self._mixed_cycle: bool | None = None
        self._hash: int | None = None

    def _assert_acyclic(self) -> None:
        indeg = {v: len(self._parents[v]) for v in self._vertices}
        ready = deque(v for v in self._vertices if indeg[v] == 0)
        seen = 0
        while ready:
            v = ready.popleft()
            seen += 1
            for c in self._children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if seen != len(self._vertices):
            cyclic = sorted(v for v in self._vertices if indeg[v] > 0)
            raise InputError(f"directed part has a cycle through {{{','.join(cyclic)}}}")

    # --- identity -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Admg):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._directed == other._directed
            and self._bidirected == other._bidirected
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._directed, self._bidirected))
        return self._hash

    def __repr__(self) -> str:
        return (
            f"Admg(vertices={list(self._vertices)!r}, "
            f"directed={sorted(self._directed)!r}, "
            f"bidirected={sorted(tuple(sorted(e)) for e in self._bidirected)!r})"
        )

    # --- basic accessors ----------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        """All vertex names in lexicographic order."""
        return self._vertices

    @property
    def directed_edges(self) -> frozenset[tuple[str, str]]:
        return self._directed

    @property
    def bidirected_edges(self) -> frozenset[frozenset[str]]:
        return self._bidirected

    def has_vertex(self, name: str) -> bool:
        return name in self._vset

    def _check_vertex(self, name: str) -> str:
        if name not in self._vset:
            raise InputError(f"unknown vertex {name!r}")
        return name

    def _check_set(self, s: Collection[str]) -> frozenset[str]:
        if isinstance(s, str):
            raise InputError("expected a collection of vertex names, got a bare string")
        out = frozenset(s)
        for v in out:
            self._check_vertex(v)
        return out

    # --- structural relations -----------------------------------------------

    def parents(self, s: Collection[str]) -> frozenset[str]:
        """Union of tails of directed edges into members of ``s``."""
        s = self._check_set(s)
        out: set[str] = set()
        for v in s:
            out |= self._parents[v]
        return frozenset(out)

    def children(self, s: Collection[str]) -> frozenset[str]:
        """Union of heads of directed edges out of members of ``s``."""
        s = self._check_set(s)
        out: set[str] = set()
        for v in s:
            out |= self._children[v]
        return frozenset(out)

    def spouses(self, s: Collection[str]) -> frozenset[str]:
        """Union of bi-directed neighbours of members of ``s``."""
        s = self._check_set(s)
        out: set[str] = set()
        for v in s:
            out |= self._spouses[v]
        return frozenset(out)

    def _closure_of(self, v: str, step: dict[str, frozenset[str]], cache: dict) -> frozenset[str]:
        hit = cache.get(v)
        if hit is not None:
            return hit
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in step[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        result = frozenset(seen)
        cache[v] = result
        return result

    def ancestors(self, s: Collection[str]) -> frozenset[str]:
        """Reflexive-transitive closure of the parent relation; ``s`` is included."""
        s = self._check_set(s)
        out: set[str] = set()
        for v in s:
            out |= self._closure_of(v, self._parents, self._an_cache)
        return frozenset(out)

    def descendants(self, s: Collection[str]) -> frozenset[str]:
        """Reflexive-transitive closure of the child relation; ``s`` is included."""
        s = self._check_set(s)
        out: set[str] = set()
        for v in s:
            out |= self._closure_of(v, self._children, self._de_cache)
        return frozenset(out)

    def district(self, x: str) -> frozenset[str]:
        """The c-component of ``x``: its connected component via bi-directed edges."""
        self._check_vertex(x)
        hit = self._district_cache.get(x)
        if hit is not None:
            return hit
        comp = self._closure_of(x, self._spouses, {})
        for v in comp:
            self._district_cache[v] = comp
        return comp

    def c_components(self) -> tuple[frozenset[str], ...]:
        """Partition of the vertices into districts, ordered by least member."""
        if self._components is None:
            seen: set[str] = set()
            comps = []
            for v in self._vertices:
                if v not in seen:
                    comp = self.district(v)
                    comps.append(comp)
                    seen |= comp
            self._components = tuple(comps)
        return self._components

    def induced_subgraph(self, a: Collection[str]) -> "Admg":
        """The subgraph on ``a``: both edge sets restricted to endpoints within ``a``."""
        a = self._check_set(a)
        directed = [(t, h) for (t, h) in self._directed if t in a and h in a]
        bidirected = [e for e in self._bidirected if e <= a]
        return Admg(a, directed, bidirected)

    def is_ancestral(self, a: Collection[str]) -> bool:
        """True iff ``a`` is closed under the ancestor relation."""
        a = self._check_set(a)
        return self.ancestors(a) == a

    def ancestral_closure(self, s: Collection[str]) -> frozenset[str]:
        """The smallest ancestral superset of ``s``."""
        return self.ancestors(s)

    def has_mixed_directed_path(self, alpha: str, beta: str) -> bool:
        """True iff a vertex-simple path from ``alpha`` to ``beta`` exists whose
        edges are all bi-directed or forward-pointing directed, with at least
        one directed edge."""
        self._check_vertex(alpha)
        self._check_vertex(beta)
        if alpha == beta:
            raise InputError("mixed directed paths require distinct endpoints")
        return _mixed_path_search(self._children, self._spouses, alpha, beta)

    def has_mixed_directed_cycle(self) -> bool:
        """True iff some mixed directed path is closed by an opposing edge."""
        if self._mixed_cycle is None:
            self._mixed_cycle = self._find_mixed_cycle()
        return self._mixed_cycle

    def _find_mixed_cycle(self) -> bool:
        for beta, alpha in self._directed:
            if _mixed_path_search(self._children, self._spouses, alpha, beta):
                return True
        for edge in self._bidirected:
            u, v = tuple(edge)
            if _mixed_path_search(self._children, self._spouses, u, v):
                return True
            if _mixed_path_search(self._children, self._spouses, v, u):
                return True
        return False

    def topological_ordering(self) -> tuple[str, ...]:
        """A consistent ordering of the vertices (lexicographic tie-break)."""
        indeg = {v: len(self._parents[v]) for v in self._vertices}
        heap = [v for v in self._vertices if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for c in sorted(self._children[v]):
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(heap, c)
        if len(order) != len(self._vertices):
            raise InternalError("topological sort failed on a validated acyclic graph")
        return tuple(order)


def _mixed_path_search(children, spouses, alpha, beta) -> bool:
    """Vertex-simple mixed directed path test, generic over node type.

    A witnessing path splits at its first directed edge into a simple
    bi-directed-only prefix alpha..u, the edge u -> w, and a suffix from w
    that may use any admissible move. Suffix simplicity comes for free (any
    admissible walk avoiding the prefix shortcuts to a simple path), so the
    search enumerates simple bi-directed prefixes and answers each candidate
    first edge with one plain reachability query. Vertex-simplicity cannot be
    dropped: a two-state walk search would accept walks that revisit the
    endpoint and have no simple witness.
    """

    def reaches(start, excluded) -> bool:
        if start == beta:
            return True
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in children[v]:
                if w == beta:
                    return True
                if w not in excluded and w not in seen:
                    seen.add(w)
                    stack.append(w)
            for w in spouses[v]:
                if w == beta:
                    return True
                if w not in excluded and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    on_prefix = {alpha}

    def extend(u) -> bool:
        for w in children[u]:
            if w == beta or (w not in on_prefix and reaches(w, on_prefix)):
                return True
        for v in spouses[u]:
            if v == beta or v in on_prefix:
                continue  # the path cannot pass through beta before ending there
            on_prefix.add(v)
            if extend(v):
                return True
            on_prefix.discard(v)
        return False

    return extend(alpha)


def validate_ordering(g: Admg, ordering: Iterable[str]) -> tuple[str, ...]:
    """Check that ``ordering`` is a consistent total order on ``g``'s vertices.

    Consistency means every vertex appears after all of its ancestors.
    """
    order = tuple(ordering)
    if sorted(order) != list(g.vertices):
        raise InputError(
            "ordering must be a permutation of the graph's vertices "
            f"({','.join(g.vertices)}), got {','.join(order)}"
        )
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        for a in g.ancestors([v]):
            if position[a] > position[v]:
                raise InputError(
                    f"ordering is not consistent: {a} is an ancestor of {v} but follows it"
                )
    return order
