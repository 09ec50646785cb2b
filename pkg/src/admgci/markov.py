"""Local Markov machinery for ADMGs.

Covers Markov blankets, the maximal ancestral sets behind the ordered local
Markov property, the one-statement-per-vertex reduced form valid for graphs
without mixed directed cycles (under the composition axiom), the collapsed
ordering construction, and the pruning procedure that yields a small basis
of conditional-independence statements for arbitrary ADMGs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Collection, Iterable

from .admg import Admg, _mixed_path_search, validate_ordering
from .errors import CapacityError, InputError, InternalError
from .statements import CiStatement

ANCESTRAL_ENUM_CAP = 16

REDUCED_FORM = "reduced-form"
ORDERED_LOCAL = "ordered-local"


@dataclass(frozen=True)
class PrunedStatement:
    """A statement dropped from the basis because an emitted one implies it."""

    statement: CiStatement
    implied_by: int  # index into ReducedBasis.statements


@dataclass(frozen=True)
class ReducedBasis:
    """Output of :func:`reduced_basis`: statements, per-statement provenance,
    the ordering used, and the audit trail of pruned statements."""

    ordering: tuple[str, ...]
    statements: tuple[CiStatement, ...]
    provenance: tuple[str, ...]
    pruned: tuple[PrunedStatement, ...]

    def __post_init__(self):
        if len(self.statements) != len(self.provenance):
            raise InternalError("one provenance tag per statement required")


# --- blankets and ancestral sets ---------------------------------------------


def _district_in(g: Admg, x: str, members: frozenset[str]) -> frozenset[str]:
    """District of ``x`` in the subgraph induced on ``members`` (x assumed in)."""
    comp = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for w in g._spouses[v]:
            if w in members and w not in comp:
                comp.add(w)
                stack.append(w)
    return frozenset(comp)


def _blanket_in(g: Admg, x: str, members: frozenset[str]) -> frozenset[str]:
    """Markov blanket of ``x`` w.r.t. the subgraph on ``members``, unvalidated."""
    dis = _district_in(g, x, members)
    pa: set[str] = set()
    for v in dis:
        pa |= g._parents[v]
    return frozenset((pa & members) | dis - {x})


def markov_blanket(g: Admg, x: str, a: Collection[str]) -> frozenset[str]:
    """Parents of ``x``'s district within the subgraph on ``a``, plus the
    district itself minus ``x``.

    ``a`` must be ancestral, contain ``x``, and give ``x`` no children in ``a``.
    """
    g._check_vertex(x)
    a = g._check_set(a)
    if x not in a:
        raise InputError(f"{x} is not a member of the conditioning set")
    if not g.is_ancestral(a):
        raise InputError("markov_blanket requires an ancestral vertex set")
    if g._children[x] & a:
        raise InputError(f"{x} has children inside the given ancestral set")
    return _blanket_in(g, x, a)


def maximal_ancestral_sets(
    g: Admg, x: str, ordering: Iterable[str], cap: int = ANCESTRAL_ENUM_CAP
) -> list[frozenset[str]]:
    """All ancestral sets A with ``x in A <= pre(x)`` that are maximal with
    respect to their Markov blanket.

    Enumerated by brute force over subsets of the ordering prefix, bucketed
    by blanket; within a bucket only sets with no proper ancestral superset
    of equal blanket survive. Ordered by descending size, then name.
    """
    order = validate_ordering(g, ordering)
    g._check_vertex(x)
    pos = order.index(x)
    pre = order[: pos + 1]
    free = [v for v in pre if v != x]
    if len(free) > cap:
        raise CapacityError(
            f"{len(free)} candidate vertices before {x} exceeds the enumeration "
            f"cap of {cap}; raise the cap to force the exponential scan"
        )

    index = {v: i for i, v in enumerate(pre)}
    an_masks = []
    for v in pre:
        m = 0
        for a in g.ancestors([v]):
            m |= 1 << index[a]  # ancestors of a prefix member stay in the prefix
        an_masks.append(m)
    x_bit = 1 << index[x]
    required = an_masks[index[x]]

    free_bits = [1 << index[v] for v in free]
    n_free = len(free_bits)
    buckets: dict[frozenset[str], list[int]] = {}
    for choice in range(1 << n_free):
        mask = x_bit
        for i in range(n_free):
            if choice >> i & 1:
                mask |= free_bits[i]
        if mask & required != required:
            continue
        ancestral = True
        m = mask
        while m:
            low = m & -m
            if an_masks[low.bit_length() - 1] & ~mask:
                ancestral = False
                break
            m ^= low
        if not ancestral:
            continue
        members = frozenset(pre[i] for i in range(len(pre)) if mask >> i & 1)
        blanket = _blanket_in(g, x, members)
        buckets.setdefault(blanket, []).append(mask)

    decode = {1 << i: pre[i] for i in range(len(pre))}

    def unpack(m: int) -> frozenset[str]:
        members = set()
        while m:
            low = m & -m
            members.add(decode[low])
            m ^= low
        return frozenset(members)

    result: list[frozenset[str]] = []
    for masks in buckets.values():
        union = 0
        for m in masks:
            union |= m
        if union in set(masks):
            # every other set in the bucket is contained in it: unique maximum
            result.append(unpack(union))
            continue
        for m in masks:  # keep the masks not strictly contained in another
            if not any(o != m and m & o == m for o in masks):
                result.append(unpack(m))
    result.sort(key=lambda s: (-len(s), tuple(sorted(s))))
    return result


# --- the ordered local Markov property ---------------------------------------


def ordered_local_entries(
    g: Admg, ordering: Iterable[str], cap: int = ANCESTRAL_ENUM_CAP
) -> list[tuple[str, frozenset[str], CiStatement | None]]:
    """Every (vertex, maximal ancestral set) invocation of the ordered local
    property, with its statement, or ``None`` when the independence side is
    empty (vacuous)."""
    order = validate_ordering(g, ordering)
    entries: list[tuple[str, frozenset[str], CiStatement | None]] = []
    for x in order:
        for a in maximal_ancestral_sets(g, x, order, cap):
            mb = _blanket_in(g, x, a)
            indep = a - mb - {x}
            stmt = CiStatement([x], mb, indep) if indep else None
            entries.append((x, a, stmt))
    return entries


def ordered_local_markov(
    g: Admg, ordering: Iterable[str], cap: int = ANCESTRAL_ENUM_CAP
) -> list[CiStatement]:
    """The ordered local Markov statements for a consistent ordering.

    One statement per vertex and maximal ancestral set; vacuous statements
    (empty independence side) are dropped and duplicates canonicalized away.
    """
    seen: set[tuple] = set()
    out: list[CiStatement] = []
    for _, _, stmt in ordered_local_entries(g, ordering, cap):
        if stmt is not None and stmt.key not in seen:
            seen.add(stmt.key)
            out.append(stmt)
    return out


# --- the reduced (one statement per vertex) property --------------------------


def reduced_scope(g: Admg, x: str) -> frozenset[str]:
    """Parents of ``x`` plus all descendants of ``x`` and its spouses.

    The complement of this set is what the reduced-form statement declares
    independent of ``x`` given its parents. Always contains ``x``.
    """
    g._check_vertex(x)
    return g.parents([x]) | g.descendants({x} | g.spouses([x]))


def reduced_local_markov(g: Admg) -> list[CiStatement]:
    """One statement per vertex: x independent of everything outside its
    reduced scope, given its parents.

    Only valid (equivalent to the global property under composition) when the
    graph has no mixed directed cycle.
    """
    if g.has_mixed_directed_cycle():
        raise InputError(
            "graph has a mixed directed cycle; the one-statement-per-vertex "
            "form does not apply - use reduced_basis() instead"
        )
    all_v = frozenset(g.vertices)
    seen: set[tuple] = set()
    out: list[CiStatement] = []
    for x in g.vertices:
        indep = all_v - reduced_scope(g, x)
        if not indep:
            continue
        stmt = CiStatement([x], g.parents([x]), indep)
        if stmt.key not in seen:
            seen.add(stmt.key)
            out.append(stmt)
    return out


# --- collapsed ordering construction ------------------------------------------


def _mixed_path_between_nodes(
    children: dict[frozenset, set[frozenset]],
    spouses: dict[frozenset, set[frozenset]],
    u: frozenset,
    w: frozenset,
) -> bool:
    """Mixed directed path between supernodes, in either direction."""
    return _mixed_path_search(children, spouses, u, w) or _mixed_path_search(
        children, spouses, w, u
    )


def build_collapsed_ordering(g: Admg) -> tuple[str, ...]:
    """Construct a consistent ordering that keeps confounded vertices together.

    Repeatedly, in lexicographic endpoint order: a bi-directed edge whose
    endpoints admit no mixed directed path between them is contracted into a
    supernode (parallel edges merge when all of one kind; anything else would
    witness a mixed directed cycle); otherwise the bi-directed edge is
    dropped. The resulting DAG of supernodes is topologically sorted with a
    lexicographic tie-break and supernodes expand in name order. For graphs
    without mixed directed cycles every c-component ends up consecutive.
    """
    nodes: set[frozenset[str]] = {frozenset({v}) for v in g.vertices}
    children: dict[frozenset, set[frozenset]] = {n: set() for n in nodes}
    parents: dict[frozenset, set[frozenset]] = {n: set() for n in nodes}
    spouses: dict[frozenset, set[frozenset]] = {n: set() for n in nodes}
    singleton = {v: frozenset({v}) for v in g.vertices}
    for t, h in g.directed_edges:
        children[singleton[t]].add(singleton[h])
        parents[singleton[h]].add(singleton[t])
    for e in g.bidirected_edges:
        u, v = tuple(e)
        spouses[singleton[u]].add(singleton[v])
        spouses[singleton[v]].add(singleton[u])

    def label(n: frozenset[str]) -> tuple[str, ...]:
        return tuple(sorted(n))

    while True:
        bi_edges = sorted(
            (tuple(sorted((label(a), label(b)))), a, b)
            for a in nodes
            for b in spouses[a]
            if label(a) < label(b)
        )
        if not bi_edges:
            break
        _, u, w = bi_edges[0]
        if _mixed_path_between_nodes(children, spouses, u, w):
            spouses[u].discard(w)
            spouses[w].discard(u)
            continue

        if w in children[u] or u in children[w]:
            raise InternalError("directed edge inside a mergeable confounded pair")
        merged = u | w
        new_parents = (parents[u] | parents[w]) - {u, w}
        new_children = (children[u] | children[w]) - {u, w}
        new_spouses = (spouses[u] | spouses[w]) - {u, w}
        if new_parents & new_children:
            raise InternalError(
                "merging a confounded pair produced opposing directed edges; "
                "this would require a mixed directed cycle"
            )
        for n in (u, w):
            for p in parents[n]:
                children[p].discard(n)
            for c in children[n]:
                parents[c].discard(n)
            for s in spouses[n]:
                spouses[s].discard(n)
            del parents[n], children[n], spouses[n]
            nodes.remove(n)
        nodes.add(merged)
        parents[merged] = set(new_parents)
        children[merged] = set(new_children)
        spouses[merged] = set(new_spouses)
        for p in new_parents:
            children[p].add(merged)
        for c in new_children:
            parents[c].add(merged)
        for s in new_spouses:
            spouses[s].add(merged)

    indeg = {n: len(parents[n]) for n in nodes}
    heap = [(label(n), n) for n in nodes if indeg[n] == 0]
    heapq.heapify(heap)
    order: list[str] = []
    emitted = 0
    while heap:
        _, n = heapq.heappop(heap)
        order.extend(sorted(n))
        emitted += 1
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, (label(c), c))
    if emitted != len(nodes):
        raise InternalError("collapsed graph is not a DAG")
    return validate_ordering(g, order)


# --- pruning conditions --------------------------------------------------------


def reduced_form_applies(g: Admg, x: str, ordering: Iterable[str]) -> bool:
    """True iff the single reduced-form statement for ``x`` subsumes all of its
    ordered-local statements: the part of ``x``'s district preceding it must
    be consecutive in the ordering and free of internal directed edges."""
    order = validate_ordering(g, ordering)
    g._check_vertex(x)
    pos = {v: i for i, v in enumerate(order)}
    dp = g.district(x) & frozenset(order[: pos[x] + 1])
    positions = sorted(pos[v] for v in dp)
    if positions != list(range(positions[0], positions[0] + len(positions))):
        return False
    return all(not (g._children[v] & dp) for v in dp)


def redundant_ancestral_set(
    g: Admg, x: str, ordering: Iterable[str], a_prime: Collection[str]
) -> bool:
    """True iff the statement for the ancestral set ``a_prime`` is implied by
    the statement for the full prefix of ``x`` (together with the statements
    of earlier vertices), so it can be pruned from the basis."""
    order = validate_ordering(g, ordering)
    g._check_vertex(x)
    a_prime = g._check_set(a_prime)
    pre = frozenset(order[: order.index(x) + 1])
    if x not in a_prime or not a_prime <= pre:
        raise InputError("the candidate set must contain the vertex and lie in its prefix")
    if not g.is_ancestral(a_prime):
        raise InputError("the candidate set must be ancestral")

    dis_pre = _district_in(g, x, pre)
    dis_prime = _district_in(g, x, a_prime)
    dropped = dis_pre - dis_prime
    outside = dis_pre - a_prime
    straddling = dropped - outside  # in a_prime but cut off from x's district
    if straddling:
        return False
    return g.parents(dropped) <= _blanket_in(g, x, a_prime)


# --- the basis-producing procedure ---------------------------------------------


def reduced_basis(
    g: Admg,
    ordering: Iterable[str] | None = None,
    cap: int = ANCESTRAL_ENUM_CAP,
) -> ReducedBasis:
    """Produce the pruned set of conditional-independence statements whose
    closure under the composition-extended semi-graphoid axioms recovers the
    ordered local Markov property.

    Works for any ADMG. Vertices satisfying :func:`reduced_form_applies`
    contribute their single reduced-form statement; the rest fall back to the
    ordered local statements, pruning every ancestral set that
    :func:`redundant_ancestral_set` certifies as implied. Vacuous statements
    are dropped, duplicates collapse to their first occurrence, and pruned
    statements are recorded with the index of the statement implying them.
    """
    order = (
        build_collapsed_ordering(g) if ordering is None else validate_ordering(g, ordering)
    )
    all_v = frozenset(g.vertices)
    statements: list[CiStatement] = []
    provenance: list[str] = []
    pruned: list[PrunedStatement] = []
    index_of: dict[tuple, int] = {}

    def emit(stmt: CiStatement, tag: str) -> int:
        at = index_of.get(stmt.key)
        if at is None:
            at = len(statements)
            statements.append(stmt)
            provenance.append(tag)
            index_of[stmt.key] = at
        return at

    for x in order:
        if reduced_form_applies(g, x, order):
            indep = all_v - reduced_scope(g, x)
            if indep:
                emit(CiStatement([x], g.parents([x]), indep), REDUCED_FORM)
            continue

        sets = maximal_ancestral_sets(g, x, order, cap)
        pre = frozenset(order[: order.index(x) + 1])
        if not sets or sets[0] != pre:
            raise InternalError("the full prefix must be the largest maximal ancestral set")
        top_index: int | None = None
        mb = _blanket_in(g, x, pre)
        indep = pre - mb - {x}
        if indep:
            top_index = emit(CiStatement([x], mb, indep), ORDERED_LOCAL)
        for a in sets[1:]:
            mb = _blanket_in(g, x, a)
            indep = a - mb - {x}
            stmt = CiStatement([x], mb, indep) if indep else None
            if redundant_ancestral_set(g, x, order, a):
                if stmt is not None:
                    if top_index is None:
                        raise InternalError(
                            "pruned a non-vacuous statement via a vacuous one"
                        )
                    pruned.append(PrunedStatement(stmt, top_index))
            elif stmt is not None:
                emit(stmt, ORDERED_LOCAL)

    return ReducedBasis(order, tuple(statements), tuple(provenance), tuple(pruned))
