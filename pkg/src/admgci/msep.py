"""m-separation: a linear-time decision procedure and a brute-force path oracle.

The fast path canonicalizes the ADMG into a DAG by giving every bi-directed
edge a fresh latent common parent, then runs the standard reachability form
of d-separation (Koller & Friedman, Alg. 3.1) without ever conditioning on a
latent. The oracle enumerates vertex-simple paths and applies the collider /
non-collider conditions literally; it is intentionally small-graph only.
"""

from __future__ import annotations

from collections import deque
from typing import Collection, Iterator

from .admg import Admg
from .errors import CapacityError, InputError

BRUTE_FORCE_CAP = 10

_UP, _DOWN = 0, 1


def _validate_query(
    g: Admg, x_set: Collection[str], y_set: Collection[str], z_set: Collection[str]
) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    x = g._check_set(x_set)
    y = g._check_set(y_set)
    z = g._check_set(z_set)
    if not x or not y:
        raise InputError("m-separation queries need non-empty x and y sets")
    if x & y or x & z or y & z:
        raise InputError("m-separation query sets must be pairwise disjoint")
    return x, y, z


def m_separated(
    g: Admg, x_set: Collection[str], y_set: Collection[str], z_set: Collection[str]
) -> bool:
    """True iff no m-connecting path exists between ``x_set`` and ``y_set`` given ``z_set``."""
    x, y, z = _validate_query(g, x_set, y_set, z_set)

    parents: dict[object, set[object]] = {v: set(g.parents([v])) for v in g.vertices}
    children: dict[object, set[object]] = {v: set(g.children([v])) for v in g.vertices}
    for edge in g.bidirected_edges:
        u, v = tuple(edge)
        latent = ("latent", u, v)
        parents[latent] = set()
        children[latent] = {u, v}
        parents[u].add(latent)
        parents[v].add(latent)

    # vertices with a descendant in z (in the latent-augmented DAG)
    anc_z: set[object] = set(z)
    stack = list(z)
    while stack:
        v = stack.pop()
        for p in parents[v]:
            if p not in anc_z:
                anc_z.add(p)
                stack.append(p)

    # query each x separately: the definition is pairwise over x, y
    for source in sorted(x):
        if _reachable(source, parents, children, z, anc_z) & y:
            return False
    return True


def _reachable(
    source: object,
    parents: dict[object, set[object]],
    children: dict[object, set[object]],
    z: frozenset[str],
    anc_z: set[object],
) -> set[object]:
    reached: set[object] = set()
    visited: set[tuple[object, int]] = set()
    queue: deque[tuple[object, int]] = deque([(source, _UP)])
    while queue:
        v, direction = queue.popleft()
        if (v, direction) in visited:
            continue
        visited.add((v, direction))
        if v not in z:
            reached.add(v)
        if direction == _UP and v not in z:
            for p in parents[v]:
                queue.append((p, _UP))
            for c in children[v]:
                queue.append((c, _DOWN))
        elif direction == _DOWN:
            if v not in z:
                for c in children[v]:
                    queue.append((c, _DOWN))
            if v in anc_z:  # collider (or observed) with a descendant in z
                for p in parents[v]:
                    queue.append((p, _UP))
    return reached


# Edge marks as seen walking along a path: '>' tail->head along the walk,
# '<' against the arrow, '=' bi-directed.
_FORWARD, _BACKWARD, _BI = ">", "<", "="


def _simple_mixed_paths(
    g: Admg, start: str, goal: str
) -> Iterator[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All vertex-simple paths start..goal, branching over parallel edge types."""
    children = {v: sorted(g.children([v])) for v in g.vertices}
    parents = {v: sorted(g.parents([v])) for v in g.vertices}
    spouses = {v: sorted(g.spouses([v])) for v in g.vertices}

    path = [start]
    marks: list[str] = []
    on_path = {start}

    def walk(v: str) -> Iterator[tuple[tuple[str, ...], tuple[str, ...]]]:
        steps = (
            [(w, _FORWARD) for w in children[v]]
            + [(w, _BACKWARD) for w in parents[v]]
            + [(w, _BI) for w in spouses[v]]
        )
        for w, mark in steps:
            if w in on_path:
                continue
            path.append(w)
            marks.append(mark)
            if w == goal:
                yield tuple(path), tuple(marks)
            else:
                on_path.add(w)
                yield from walk(w)
                on_path.discard(w)
            path.pop()
            marks.pop()

    yield from walk(start)


def _m_connecting(
    path: tuple[str, ...],
    marks: tuple[str, ...],
    z: frozenset[str],
    anc_z: frozenset[str],
) -> bool:
    for i in range(1, len(path) - 1):
        into_left = marks[i - 1] in (_FORWARD, _BI)  # arrowhead at path[i] from the left edge
        into_right = marks[i] in (_BACKWARD, _BI)  # arrowhead at path[i] from the right edge
        if into_left and into_right:  # collider
            if path[i] not in anc_z:
                return False
        else:
            if path[i] in z:
                return False
    return True


def m_separated_bruteforce(
    g: Admg,
    x_set: Collection[str],
    y_set: Collection[str],
    z_set: Collection[str],
    cap: int = BRUTE_FORCE_CAP,
) -> bool:
    """Literal m-separation by exhaustive simple-path enumeration.

    Independent of :func:`m_separated`; intended as an oracle for graphs with
    at most ``cap`` vertices.
    """
    if len(g.vertices) > cap:
        raise CapacityError(
            f"brute-force oracle capped at {cap} vertices, graph has {len(g.vertices)}"
        )
    x, y, z = _validate_query(g, x_set, y_set, z_set)
    anc_z = g.ancestors(z)
    for a in sorted(x):
        for b in sorted(y):
            for path, marks in _simple_mixed_paths(g, a, b):
                if _m_connecting(path, marks, z, anc_z):
                    return False
    return True


def connecting_paths(
    g: Admg, x: str, y: str, z_set: Collection[str]
) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All m-connecting simple paths between two vertices (debugging aid)."""
    xs, ys, z = _validate_query(g, [x], [y], z_set)
    anc_z = g.ancestors(z)
    return [
        (path, marks)
        for path, marks in _simple_mixed_paths(g, x, y)
        if _m_connecting(path, marks, z, anc_z)
    ]
