"""Quotient multigraphs over orbit partitions and the lifting-cycle machinery.

A prime-order semiregular automorphism rho turns every cycle C of the
quotient into either one long cycle of length k*p or p disjoint k-cycles;
in the disjoint case every edge of C has cross-multiplicity 1.  The lift is
computed through shift sets: an edge between orbit positions alpha and beta
forces edges at every rotation, so the edges between two orbits are the
residues beta - alpha (mod p) they realize.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .graphs import SimpleGraph, regular_bivalency, regular_valency
from .perm import Permutation, SemiregularDecomposition
from .search import (
    Found,
    HamiltonCertificate,
    SearchOutcome,
    hamilton_search,
    verify_cycle,
)


@dataclass(frozen=True)
class QuotientMultigraph:
    """Orbit quotient with bi-regular cross degrees as edge multiplicities."""

    cells: tuple[tuple[int, ...], ...]
    multiplicity: tuple[tuple[int, ...], ...]
    underlying: SimpleGraph
    nonregular_pairs: frozenset[tuple[int, int]]

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    def max_multiplicity(self) -> int:
        return max((m for row in self.multiplicity for m in row), default=0)


def quotient_multigraph(X: SimpleGraph, cells: Sequence[Sequence[int]]) -> QuotientMultigraph:
    """Quotient of X over a partition; multiplicity d(A,B) when bi-regular, else 0 + flag."""
    cell_tuples = tuple(tuple(sorted(c)) for c in cells)
    covered = sorted(v for c in cell_tuples for v in c)
    if covered != list(range(X.order)):
        raise ValueError("partition does not cover the vertex set exactly")
    m = len(cell_tuples)
    mult = [[0] * m for _ in range(m)]
    flagged = set()
    edges = []
    for i in range(m):
        set_i = set(cell_tuples[i])
        for j in range(i + 1, m):
            set_j = set(cell_tuples[j])
            cross = sum(len(X.adjacency[v] & set_j) for v in set_i)
            if cross == 0:
                continue
            d = regular_bivalency(X, set_i, set_j)
            if d is None:
                flagged.add((i, j))
            else:
                mult[i][j] = mult[j][i] = d
                edges.append((i, j))
    underlying = SimpleGraph(m, edges)
    return QuotientMultigraph(
        cells=cell_tuples,
        multiplicity=tuple(tuple(row) for row in mult),
        underlying=underlying,
        nonregular_pairs=frozenset(flagged),
    )


@dataclass(frozen=True)
class LongCycle:
    cycle: tuple[int, ...]
    source_cycle: tuple[int, ...]
    shifts: tuple[int, ...]


@dataclass(frozen=True)
class DisjointCycles:
    cycles: tuple[tuple[int, ...], ...]
    source_cycle: tuple[int, ...]


LiftResult = Union[LongCycle, DisjointCycles]


class LiftError(ValueError):
    """Inconsistent lift input (bad cycle, missing edges, non-automorphism)."""


def _is_automorphism(X: SimpleGraph, p: Permutation) -> bool:
    return all(X.has_edge(p(u), p(v)) for u, v in X.edges())


def _shift_set(
    X: SimpleGraph, a_cycle: Sequence[int], b_cycle: Sequence[int], p: int
) -> list[int]:
    """Residues realized by edges from orbit A to orbit B (positions mod p)."""
    pos_b = {v: i for i, v in enumerate(b_cycle)}
    shifts = sorted(pos_b[w] for w in X.adjacency[a_cycle[0]] if w in pos_b)
    return shifts


def lift_cycle(
    X: SimpleGraph,
    rho: SemiregularDecomposition,
    cell_cycle: Sequence[int],
) -> LiftResult:
    """Lift a quotient cycle through a prime-order semiregular automorphism.

    Threads the lexicographically least shift on every edge of C; when the
    net rotation is 0 (mod p), redirects through the least-index edge with a
    parallel alternative.  If no redirection exists the dichotomy forces p
    disjoint k-cycles, and every edge of C must have multiplicity 1.
    """
    p = rho.n
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise LiftError(f"orbit length {p} is not prime")
    if not _is_automorphism(X, rho.perm):
        raise LiftError("rho is not an automorphism of X")
    k = len(cell_cycle)
    if k < 2 or len(set(cell_cycle)) != k:
        raise LiftError("C must visit at least two distinct cells, each once")
    orbits = rho.orbits
    for c in cell_cycle:
        if not 0 <= c < len(orbits):
            raise LiftError(f"cell index {c} out of range")

    shift_sets = []
    for idx in range(k):
        a = orbits[cell_cycle[idx]]
        b = orbits[cell_cycle[(idx + 1) % k]]
        shifts = _shift_set(X, a, b, p)
        if not shifts:
            raise LiftError(
                f"no lift edge between cells {cell_cycle[idx]} and "
                f"{cell_cycle[(idx + 1) % k]}"
            )
        shift_sets.append(shifts)
    if k == 2 and len(shift_sets[0]) < 2:
        # a digon in the quotient multigraph needs two parallel classes
        raise LiftError(
            "C of length 2 is not a multigraph cycle: d(A,B) = 1"
        )

    chosen = [s[0] for s in shift_sets]
    net = sum(chosen) % p
    if net == 0:
        redirected = False
        for idx in range(k):
            for alt in shift_sets[idx][1:]:
                candidate = (net - shift_sets[idx][0] + alt) % p
                if candidate != 0:
                    chosen[idx] = alt
                    net = candidate
                    redirected = True
                    break
            if redirected:
                break
        if not redirected and any(len(s) > 1 for s in shift_sets):
            # cannot happen for prime p: two distinct residues differ mod p
            raise LiftError(
                "parallel edges present but no redirection changes the net power"
            )

    if net != 0:
        seq = []
        offset = 0
        for _ in range(p):
            for idx in range(k):
                seq.append(orbits[cell_cycle[idx]][offset % p])
                offset += chosen[idx]
        cycle = tuple(seq)
        if len(set(cycle)) != k * p or not verify_cycle(X, cycle):
            raise LiftError("lift produced an invalid long cycle")
        return LongCycle(cycle=cycle, source_cycle=tuple(cell_cycle), shifts=tuple(chosen))

    cycles = []
    for s in range(p):
        offset = s
        cyc = []
        for idx in range(k):
            cyc.append(orbits[cell_cycle[idx]][offset % p])
            offset += chosen[idx]
        if not verify_cycle(X, cyc):
            raise LiftError("lift produced an invalid short cycle")
        cycles.append(tuple(cyc))
    return DisjointCycles(cycles=tuple(cycles), source_cycle=tuple(cell_cycle))


def brute_force_lift_kinds(
    X: SimpleGraph,
    rho: SemiregularDecomposition,
    cell_cycle: Sequence[int],
) -> tuple[bool, Optional[int]]:
    """Independent oracle: enumerate all monotone lifts of C by raw adjacency.

    Returns (long_cycle_exists, component_cycle_count).  The second entry is
    the number of disjoint k-cycles when no k*p-cycle exists (else None).
    Walks vertex-by-vertex through the cells of C, never consulting shift
    arithmetic.
    """
    p = rho.n
    k = len(cell_cycle)
    orbits = [rho.orbits[c] for c in cell_cycle]
    total = k * p

    long_found = False

    def dfs(position: int, current: int, start: int, visited: set[int]) -> bool:
        if position == total:
            return X.has_edge(current, start)
        cell = set(orbits[position % k])
        for w in sorted(X.adjacency[current] & cell):
            if w in visited:
                continue
            visited.add(w)
            if dfs(position + 1, w, start, visited):
                return True
            visited.remove(w)
        return False

    start = orbits[0][0]
    long_found = dfs(1, start, start, {start})
    if long_found:
        return True, None

    # no kp-cycle: count closed k-lifts from every start vertex of the first cell
    closed = 0
    for start in orbits[0]:
        def dfs_short(position: int, current: int) -> bool:
            if position == k:
                return X.has_edge(current, start)
            cell = set(orbits[position % k])
            return any(
                dfs_short(position + 1, w)
                for w in sorted(X.adjacency[current] & cell)
                if w != start
            )

        if dfs_short(1, start):
            closed += 1
    return False, closed


# ---------------------------------------------------------------------------
# Degree-3 guided plans and the valency-n/3 guarantee
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GuidedPlan:
    """A quotient Hamilton path ending at an orbit of inner valency >= 3."""

    rho: SemiregularDecomposition
    orbit_order: tuple[int, ...]
    anchor_orbit: int


def hamilton_path_in(
    X: SimpleGraph, end: Optional[int] = None
) -> Optional[list[int]]:
    """Backtracking Hamilton path (small graphs); optionally pin one endpoint."""
    n = X.order
    if n == 0:
        return None
    if n == 1:
        return [0]
    starts = range(n) if end is None else [end]
    for s in starts:
        path = [s]
        used = {s}

        def extend() -> bool:
            if len(path) == n:
                return True
            for w in sorted(X.adjacency[path[-1]]):
                if w not in used:
                    path.append(w)
                    used.add(w)
                    if extend():
                        return True
                    used.remove(w)
                    path.pop()
            return False

        if extend():
            return path[::-1] if end is not None else path
    return None


def hamilton_path_between(X: SimpleGraph, a: int, b: int) -> Optional[list[int]]:
    """Backtracking Hamilton path with both endpoints pinned (small graphs)."""
    n = X.order
    if a == b or n < 2:
        return None
    path = [a]
    used = {a}

    def extend() -> bool:
        if len(path) == n:
            return path[-1] == b
        for w in sorted(X.adjacency[path[-1]]):
            if w in used or (w == b and len(path) < n - 1):
                continue
            path.append(w)
            used.add(w)
            if extend():
                return True
            used.remove(w)
            path.pop()
        return False

    return path if extend() else None


def check_deg3_hypotheses(
    X: SimpleGraph, rho: SemiregularDecomposition
) -> Optional[GuidedPlan]:
    """Hypotheses of the guided-cycle route for a semiregular rho of order >= 4.

    Requires every orbit-induced subgraph connected, some orbit with inner
    valency >= 3, and a Hamilton path of the quotient ending at that orbit.
    """
    if rho.n < 4:
        return None
    if not _is_automorphism(X, rho.perm):
        return None
    orbit_sets = [set(c) for c in rho.orbits]
    from .graphs import induced

    for cell in rho.orbits:
        if not induced(X, cell).is_connected():
            return None
    anchors = []
    for j, cell in enumerate(rho.orbits):
        d = regular_valency(X, cell)
        if d is not None and d >= 3:
            anchors.append(j)
    if not anchors:
        return None
    quotient = quotient_multigraph(X, rho.orbits)
    for j in anchors:
        path = hamilton_path_in(quotient.underlying, end=j)
        if path is not None:
            return GuidedPlan(rho=rho, orbit_order=tuple(path), anchor_orbit=j)
    return None


def guided_hamilton(
    X: SimpleGraph, plan: GuidedPlan, budget: int = 10_000_000
) -> SearchOutcome:
    """Search with branching priority following the plan's orbit order.

    Guided success is expected, not guaranteed; a BudgetExceeded outcome
    signals fallback to unguided search, not a refutation.
    """
    order = []
    for cell_idx in plan.orbit_order:
        order.extend(plan.rho.orbits[cell_idx])
    outcome = hamilton_search(X, budget, vertex_order=order)
    if isinstance(outcome, Found):
        cert = HamiltonCertificate(
            graph_hash=outcome.certificate.graph_hash,
            cycle=outcome.certificate.cycle,
            producer="search",
            trace=("deg3-guided", f"orbit-order={','.join(map(str, plan.orbit_order))}"),
        )
        return Found(cert, outcome.stats)
    return outcome


def jackson_guarantee(X: SimpleGraph) -> bool:
    """Valency >= order/3 for a connected vertex-transitive graph forces a cycle."""
    if X.order < 3 or not X.is_connected():
        return False
    return 3 * X.min_degree() >= X.order
