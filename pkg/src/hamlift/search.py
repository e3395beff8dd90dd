"""Certified Hamilton-cycle backtracking search and certificate verification.

The searcher is deterministic: it starts at vertex 0, branches to the
lowest-index unvisited neighbor first, and breaks the two traversal
directions of each cycle by requiring the closing neighbor of 0 to exceed
the first step.  Pruning: residual degree >= 2, reachability of the whole
unvisited region plus both path ends, and a closing-edge check for vertex 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .graphs import SimpleGraph, graph_hash

DEFAULT_BUDGET = 100_000_000


@dataclass(frozen=True)
class HamiltonCertificate:
    """An explicit spanning cycle, checkable in O(order) time."""

    graph_hash: str
    cycle: tuple[int, ...]
    producer: str = "search"
    trace: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    prunes: tuple[tuple[str, int], ...] = ()

    def prune_counts(self) -> dict[str, int]:
        return dict(self.prunes)


@dataclass(frozen=True)
class Found:
    certificate: HamiltonCertificate
    stats: SearchStats


@dataclass(frozen=True)
class ExhaustedNone:
    stats: SearchStats


@dataclass(frozen=True)
class BudgetExceeded:
    stats: SearchStats


SearchOutcome = Union[Found, ExhaustedNone, BudgetExceeded]


def verify_certificate(
    X: SimpleGraph, cert: HamiltonCertificate, check_hash: bool = True
) -> bool:
    """True iff the cycle is a spanning cycle of X (and the hash matches)."""
    cycle = cert.cycle
    if len(cycle) != X.order or X.order < 3:
        return False
    if sorted(cycle) != list(range(X.order)):
        return False
    for a, b in zip(cycle, cycle[1:]):
        if not X.has_edge(a, b):
            return False
    if not X.has_edge(cycle[-1], cycle[0]):
        return False
    if check_hash and cert.graph_hash != graph_hash(X):
        return False
    return True


def verify_cycle(X: SimpleGraph, cycle: Sequence[int]) -> bool:
    """A (not necessarily spanning) sequence of distinct vertices forming a cycle."""
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    return all(
        X.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    )


def hamilton_search(
    X: SimpleGraph,
    budget: int = DEFAULT_BUDGET,
    vertex_order: Optional[Sequence[int]] = None,
) -> SearchOutcome:
    """Depth-first search for a Hamilton cycle with certificate verification.

    ``vertex_order`` is an optional priority relabeling (e.g. a guided orbit
    order): the search runs on the relabeled graph, so branching follows that
    order, and the certificate is mapped back before verification.
    """
    if vertex_order is not None:
        order = list(vertex_order)
        if sorted(order) != list(range(X.order)):
            raise ValueError("vertex_order must be a permutation of the vertices")
        relabel = [0] * X.order  # old -> new
        for new, old in enumerate(order):
            relabel[old] = new
        inner = X.relabeled(relabel)
        outcome = hamilton_search(inner, budget)
        if isinstance(outcome, Found):
            cycle = tuple(order[v] for v in outcome.certificate.cycle)
            cert = HamiltonCertificate(
                graph_hash=graph_hash(X),
                cycle=cycle,
                producer=outcome.certificate.producer,
                trace=outcome.certificate.trace + ("guided-relabel",),
            )
            if not verify_certificate(X, cert):
                raise AssertionError("internal error: relabeled certificate invalid")
            return Found(cert, outcome.stats)
        return outcome

    n = X.order
    prunes = {"degree": 0, "connectivity": 0, "closing": 0}
    if n < 3 or not X.is_connected() or X.min_degree() < 2:
        return ExhaustedNone(SearchStats(nodes=0, prunes=tuple(sorted(prunes.items()))))

    adj = [0] * n
    for v in range(n):
        for w in X.adjacency[v]:
            adj[v] |= 1 << w
    nbrs = [sorted(X.adjacency[v]) for v in range(n)]
    full = (1 << n) - 1
    start_bit = 1

    nodes = 0
    budget_hit = False
    path = [0]
    visited = 1
    # stack of neighbor cursors, one per path position
    cursors = [0]
    first_step: Optional[int] = None
    result: Optional[tuple[int, ...]] = None

    def feasible(endpoint: int) -> bool:
        avail = full & ~visited
        if avail == 0:
            return True
        endpoint_bit = 1 << endpoint
        allowed = avail | endpoint_bit | start_bit
        # every unvisited vertex still needs two cycle-neighbors
        m = avail
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            if (adj[u] & allowed & ~low).bit_count() < 2:
                prunes["degree"] += 1
                return False
        # vertex 0 still needs a closing edge
        if adj[0] & (avail | endpoint_bit) == 0:
            prunes["closing"] += 1
            return False
        # the rest of the cycle is a path endpoint -> all avail -> 0
        reached = endpoint_bit
        frontier = endpoint_bit
        region = allowed
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                nxt |= adj[v] & region & ~reached
            reached |= nxt
            frontier = nxt
        if reached & avail != avail or not reached & start_bit:
            prunes["connectivity"] += 1
            return False
        return True

    while True:
        depth = len(path) - 1
        v = path[-1]
        advanced = False
        while cursors[depth] < len(nbrs[v]):
            w = nbrs[v][cursors[depth]]
            cursors[depth] += 1
            wbit = 1 << w
            if visited & wbit:
                continue
            if depth == 0:
                first_step = w
            # symmetry break: the closing neighbor of 0 must exceed the first step,
            # so each cycle is explored in exactly one direction
            nodes += 1
            if nodes > budget:
                budget_hit = True
                break
            path.append(w)
            visited |= wbit
            if len(path) == n:
                if adj[w] & start_bit and w > (first_step or 0):
                    result = tuple(path)
                    break
                visited ^= wbit
                path.pop()
                continue
            if feasible(w):
                cursors.append(0)
                advanced = True
                break
            visited ^= wbit
            path.pop()
        if result is not None or budget_hit:
            break
        if advanced:
            continue
        # backtrack
        if len(path) == 1:
            break
        last = path.pop()
        visited ^= 1 << last
        cursors.pop()

    stats = SearchStats(nodes=nodes, prunes=tuple(sorted(prunes.items())))
    if result is not None:
        cert = HamiltonCertificate(graph_hash=graph_hash(X), cycle=result)
        if not verify_certificate(X, cert):
            raise AssertionError("internal error: search produced an invalid cycle")
        return Found(cert, stats)
    if budget_hit:
        return BudgetExceeded(stats)
    return ExhaustedNone(stats)


def prove_nonhamiltonian(
    X: SimpleGraph, budget: int = DEFAULT_BUDGET
) -> Optional[SearchStats]:
    """Stats of a complete exhaustion with no cycle; None if a cycle exists
    or the budget ran out before exhaustion."""
    outcome = hamilton_search(X, budget)
    if isinstance(outcome, ExhaustedNone):
        return outcome.stats
    return None


def merge_outcomes(outcomes: Sequence[SearchOutcome]) -> SearchOutcome:
    """Associative merge: any Found wins, else all-Exhausted, else BudgetExceeded."""
    if not outcomes:
        raise ValueError("nothing to merge")
    total_nodes = sum(o.stats.nodes for o in outcomes)
    merged_prunes: dict[str, int] = {}
    for o in outcomes:
        for k, v in o.stats.prunes:
            merged_prunes[k] = merged_prunes.get(k, 0) + v
    stats = SearchStats(nodes=total_nodes, prunes=tuple(sorted(merged_prunes.items())))
    for o in outcomes:
        if isinstance(o, Found):
            return Found(o.certificate, stats)
    if all(isinstance(o, ExhaustedNone) for o in outcomes):
        return ExhaustedNone(stats)
    return BudgetExceeded(stats)


def split_search(
    X: SimpleGraph, budget: int = DEFAULT_BUDGET, split_depth: int = 2
) -> SearchOutcome:
    """Deterministic split-at-shallow-depth search with associative merging.

    Splits fix the first one or two steps out of vertex 0; each split runs
    the plain searcher on a graph whose unwanted depth-1/2 edges at vertex 0
    are hidden.  The merged outcome is schedule-independent because the
    merge is associative and splits partition the cycle space.
    """
    if split_depth <= 0 or X.order < 3 or not X.is_connected():
        return hamilton_search(X, budget)
    outcomes = []
    first_choices = sorted(X.adjacency[0])
    per_budget = max(1, budget // max(1, len(first_choices)))
    for w in first_choices:
        # hide the other 0-edges except one candidate closer > w
        kept = [
            (a, b)
            for a, b in X.edges()
            if 0 not in (a, b) or {a, b} == {0, w} or max(a, b) > w
        ]
        sub = SimpleGraph(X.order, kept, X.labels)
        outcome = hamilton_search(sub, per_budget)
        if isinstance(outcome, Found):
            cert = HamiltonCertificate(
                graph_hash=graph_hash(X),
                cycle=outcome.certificate.cycle,
                producer="search",
                trace=(f"split-first={w}",),
            )
            if not verify_certificate(X, cert):
                raise AssertionError("split certificate invalid on the full graph")
            outcomes.append(Found(cert, outcome.stats))
            break
        outcomes.append(outcome)
    return merge_outcomes(outcomes)
