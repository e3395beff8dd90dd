"""The dispatcher: normal block systems, case routing, certificates.

Pipeline order: exception fingerprints, the valency-n/3 fast path, normal
block systems (prime sizes feed the lift; a Petersen quotient feeds the
block-walk families), guided search from a degree-3 orbit plan, and plain
search as the fallback.  Every certificate is re-verified against a freshly
hashed copy of the input graph before the trace is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .catalog import deg10_catalog  # noqa: F401  (re-exported pipeline surface)
from .families import (
    BlockLabeledGraph,
    build_block_graph,
    family_walk,
    petersen_layout_edges,
)
from .graphs import (
    SimpleGraph,
    all_isomorphisms,
    graph_hash,
    is_petersen,
    is_vertex_transitive_witnessed,
)
from .perm import (
    BlockSystem,
    PermGroup,
    Permutation,
    SemiregularDecomposition,
    normal_closure,
    orbits,
    semiregular_decomposition,
)
from .quotient import (
    DisjointCycles,
    LongCycle,
    QuotientMultigraph,
    check_deg3_hypotheses,
    guided_hamilton,
    hamilton_path_between,
    jackson_guarantee,
    lift_cycle,
    quotient_multigraph,
)
from .search import (
    BudgetExceeded,
    ExhaustedNone,
    Found,
    HamiltonCertificate,
    SearchStats,
    hamilton_search,
    prove_nonhamiltonian,
    verify_certificate,
)

DEFAULT_CLASSIFY_CAP = 20_000
DEFAULT_DISPATCH_BUDGET = 10_000_000


class PipelineError(RuntimeError):
    pass


@dataclass(frozen=True)
class SystemRecord:
    """A normal subgroup with its induced block system."""

    subgroup: PermGroup
    description: str
    system: BlockSystem
    r: int


def classify_normal_block_systems(
    X: SimpleGraph, G: PermGroup, cap: int = DEFAULT_CLASSIFY_CAP
) -> list[SystemRecord]:
    """Nontrivial block systems from normal closures of cyclic subgroups of G."""
    if G.degree != X.order:
        raise ValueError("witness degree does not match graph order")
    if not G.is_transitive():
        raise ValueError("witness must be transitive")
    elements = G.elements(cap)
    seen_cyclic: set[frozenset[Permutation]] = set()
    seen_partitions: set[tuple[tuple[int, ...], ...]] = set()
    records: list[SystemRecord] = []
    for g in sorted(elements):
        if g.is_identity():
            continue
        cyc = frozenset(g**k for k in range(1, g.order() + 1))
        if cyc in seen_cyclic:
            continue
        seen_cyclic.add(cyc)
        closure = normal_closure(elements, g, cap)
        if len(closure) == len(elements):
            continue
        n_group = PermGroup.from_elements(closure, name=f"<<{g!r}>>")
        cells = orbits(n_group)
        sizes = {len(c) for c in cells}
        if len(sizes) != 1:
            raise PipelineError("normal subgroup with unequal orbit sizes")
        r = sizes.pop()
        if r in (1, X.order):
            continue
        system = BlockSystem.from_partition(X.order, cells)
        if system.blocks in seen_partitions:
            continue
        seen_partitions.add(system.blocks)
        records.append(
            SystemRecord(
                subgroup=n_group,
                description=f"normal closure of order-{g.order()} element, |N|={len(closure)}",
                system=system,
                r=r,
            )
        )
    records.sort(key=lambda rec: rec.r)
    return records


def semiregular_from_prime_blocks(
    N: PermGroup, system: BlockSystem
) -> SemiregularDecomposition:
    """An element of N acting as a q-cycle on every block of the prime system."""
    q = system.block_size
    block_sets = [frozenset(cell) for cell in system.blocks]
    for candidate in sorted(N.elements()):
        if candidate.is_identity():
            continue
        decomp = semiregular_decomposition(candidate)
        if decomp is None or decomp.n != q:
            continue
        if sorted(frozenset(c) for c in decomp.orbits) == sorted(block_sets):
            return decomp
    raise PipelineError(
        f"no ({system.block_count},{q})-semiregular element matches the blocks"
    )


def block_action(G: PermGroup, system: BlockSystem) -> PermGroup:
    """Induced permutation action of G on the cells of the system."""
    cell_of = system.cell_of()
    perms = []
    for g in G.generators:
        images = [0] * system.block_count
        for i, cell in enumerate(system.blocks):
            images[i] = cell_of[g(cell[0])]
        perms.append(Permutation(images))
    return PermGroup(perms, name=f"{G.name or 'G'} on blocks")


# ---------------------------------------------------------------------------
# Family-walk normalization: align a block system with the canonical displays
# ---------------------------------------------------------------------------

_SPOKE_PATTERNS = {
    False: lambda j, r: (j + 1) % r,
    True: lambda j, r: 0 if j == 1 else (2 if j == r - 1 else (j + 1) % r),
}


def _petersen_layout_graph() -> SimpleGraph:
    return SimpleGraph(10, petersen_layout_edges())


def _matching_map(X: SimpleGraph, cell_a: Sequence[int], cell_b: Sequence[int]) -> dict[int, int]:
    set_b = set(cell_b)
    out = {}
    for v in cell_a:
        partners = X.adjacency[v] & set_b
        if len(partners) != 1:
            raise PipelineError("pair is not a perfect matching")
        out[v] = next(iter(partners))
    return out


def match_block_family(
    X: SimpleGraph, system: BlockSystem
) -> Optional[tuple[BlockLabeledGraph, list[int]]]:
    """Try to align (X, system) with one of the two block-family displays.

    Returns the canonical block graph and a map canonical-vertex -> X-vertex
    whose image spans a subgraph of X, or None when the structure does not
    match (wrong pair classes, or a rim holonomy that is not a single
    r-cycle in case B).
    """
    r = system.block_size
    if system.block_count != 10 or r < 7:
        return None
    quotient = quotient_multigraph(X, system.blocks)
    if quotient.nonregular_pairs or not is_petersen(quotient.underlying):
        return None
    matching_pairs = set()
    complete_pairs = set()
    for i in range(10):
        for j in range(i + 1, 10):
            d = quotient.multiplicity[i][j]
            if d == 1:
                matching_pairs.add((i, j))
            elif d == r:
                complete_pairs.add((i, j))
            elif d != 0:
                return None
    if len(matching_pairs) == 5 and len(complete_pairs) == 10:
        case = "A"
        spoke_class = matching_pairs
    elif len(complete_pairs) == 5 and len(matching_pairs) == 10:
        case = "B"
        spoke_class = complete_pairs
    else:
        return None

    # an isomorphism quotient -> layout taking the 5-pair class onto the spokes
    layout = _petersen_layout_graph()
    spoke_set = {frozenset(p) for p in ((i, 5 + i) for i in range(5))}
    iso = None
    for candidate in all_isomorphisms(quotient.underlying, layout):
        mapped = {frozenset((candidate[a], candidate[b])) for a, b in spoke_class}
        if mapped == spoke_set:
            iso = candidate
            break
    if iso is None:
        return None
    # layout block index -> X cell
    cell_for = {iso[i]: list(system.blocks[i]) for i in range(10)}

    label: dict[int, tuple[int, int]] = {}

    def assign(block: int, ordered: Sequence[int]):
        for j, v in enumerate(ordered):
            label[v] = (block, j)

    if case == "A":
        for i in range(5):
            assign(i, sorted(cell_for[i]))
        for i in range(5):
            mu = _matching_map(X, cell_for[i], cell_for[5 + i])
            pattern = _SPOKE_PATTERNS[i in (1, 4)]
            ordered: list[Optional[int]] = [None] * r
            for v in cell_for[i]:
                j = label[v][1]
                ordered[pattern(j, r)] = mu[v]
            assign(5 + i, ordered)  # type: ignore[arg-type]
    else:
        outer_cycle = [0, 1, 2, 3, 4]
        inner_cycle = [5, 7, 9, 6, 8]
        for base, cyc in ((0, outer_cycle), (5, inner_cycle)):
            maps = [
                _matching_map(X, cell_for[cyc[s]], cell_for[cyc[(s + 1) % 5]])
                for s in range(5)
            ]
            holonomy = {}
            for v in cell_for[cyc[0]]:
                w = v
                for mu in maps:
                    w = mu[w]
                holonomy[v] = w
            # the start cell must be a single r-cycle under the holonomy
            start = min(cell_for[cyc[0]])
            seq = [start]
            while True:
                nxt = holonomy[seq[-1]]
                if nxt == start:
                    break
                seq.append(nxt)
            if len(seq) != r:
                return None
            ordered = [None] * r
            for s, v in enumerate(seq):
                ordered[(5 * s) % r] = v
            assign(cyc[0], ordered)  # type: ignore[arg-type]
            for s in range(4):
                src = cyc[s]
                mu = maps[s]
                ordered = [None] * r
                for v in cell_for[src]:
                    j = label[v][1]
                    ordered[(j + 1) % r] = mu[v]
                assign(cyc[s + 1], ordered)  # type: ignore[arg-type]

    canonical = build_block_graph(r, case)
    to_x = [0] * (10 * r)
    for v, (i, j) in label.items():
        to_x[i * r + j] = v
    for a, b in canonical.graph.edges():
        if not X.has_edge(to_x[a], to_x[b]):
            return None
    return canonical, to_x


# ---------------------------------------------------------------------------
# Exception fingerprints
# ---------------------------------------------------------------------------


def truncated_petersen_fingerprint(X: SimpleGraph) -> bool:
    """Order 30, cubic, exactly ten disjoint triangles whose contraction is Petersen."""
    if X.order != 30 or not X.is_cubic():
        return False
    triangles = X.triangles()
    if len(triangles) != 10:
        return False
    covered = [v for tri in triangles for v in tri]
    if len(set(covered)) != 30:
        return False
    cell_of = {}
    for idx, tri in enumerate(triangles):
        for v in tri:
            cell_of[v] = idx
    edges = set()
    for u, v in X.edges():
        cu, cv = cell_of[u], cell_of[v]
        if cu != cv:
            edges.add((min(cu, cv), max(cu, cv)))
    return is_petersen(SimpleGraph(10, edges))


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DispatchTrace:
    input_description: str
    order: int
    graph_hash: str
    case_tag: str
    certificate: Optional[HamiltonCertificate]
    exception_kind: Optional[str]
    systems: tuple[tuple[str, int], ...]
    lift_summary: Optional[str]
    exhaustion_stats: Optional[SearchStats]
    timings: tuple[tuple[str, float], ...]
    notes: tuple[str, ...]

    @property
    def succeeded(self) -> bool:
        return self.certificate is not None

    @property
    def inconclusive(self) -> bool:
        return self.certificate is None and self.exception_kind is None


def _finish(
    X: SimpleGraph,
    tag: str,
    certificate: Optional[HamiltonCertificate],
    *,
    description: str,
    exception_kind: Optional[str] = None,
    systems: Sequence[tuple[str, int]] = (),
    lift_summary: Optional[str] = None,
    exhaustion: Optional[SearchStats] = None,
    timings: Sequence[tuple[str, float]] = (),
    notes: Sequence[str] = (),
) -> DispatchTrace:
    if certificate is not None and not verify_certificate(X, certificate):
        raise PipelineError("certificate failed re-verification against the input")
    return DispatchTrace(
        input_description=description,
        order=X.order,
        graph_hash=graph_hash(X),
        case_tag=tag,
        certificate=certificate,
        exception_kind=exception_kind,
        systems=tuple(systems),
        lift_summary=lift_summary,
        exhaustion_stats=exhaustion,
        timings=tuple(timings),
        notes=tuple(notes),
    )


def dispatch(
    X: SimpleGraph,
    witness: Optional[PermGroup] = None,
    budget: int = DEFAULT_DISPATCH_BUDGET,
    block_systems: Optional[Sequence[BlockSystem]] = None,
    description: str = "",
    classify_cap: int = DEFAULT_CLASSIFY_CAP,
) -> DispatchTrace:
    """Route a connected graph to a certificate or a proven exception.

    Without a witness the classification stage is skipped (vertex
    transitivity is then the caller's assertion); caller-supplied block
    systems are used alongside witness-derived ones.
    """
    if not X.is_connected():
        raise ValueError("dispatch requires a connected graph")
    timings: list[tuple[str, float]] = []
    notes: list[str] = []
    t0 = time.perf_counter()

    # stage 1: exception fingerprints
    if is_petersen(X):
        stats = prove_nonhamiltonian(X, budget)
        timings.append(("exception", time.perf_counter() - t0))
        if stats is None:
            raise PipelineError("Petersen fingerprint but exhaustion failed")
        return _finish(
            X,
            "exception_petersen",
            None,
            description=description,
            exception_kind="petersen",
            exhaustion=stats,
            timings=timings,
            notes=notes,
        )
    if truncated_petersen_fingerprint(X):
        stats = prove_nonhamiltonian(X, budget)
        timings.append(("exception", time.perf_counter() - t0))
        if stats is None:
            raise PipelineError("truncated-Petersen fingerprint but exhaustion failed")
        return _finish(
            X,
            "exception_truncated_petersen",
            None,
            description=description,
            exception_kind="truncated_petersen",
            exhaustion=stats,
            timings=timings,
            notes=notes,
        )
    timings.append(("exception", time.perf_counter() - t0))

    # stage 2: valency >= n/3 guarantee
    t1 = time.perf_counter()
    if jackson_guarantee(X):
        outcome = hamilton_search(X, budget)
        timings.append(("jackson", time.perf_counter() - t1))
        if not isinstance(outcome, Found):
            raise PipelineError(
                "valency >= n/3 guarantees a cycle; search failed — this is a bug"
            )
        cert = HamiltonCertificate(
            graph_hash=outcome.certificate.graph_hash,
            cycle=outcome.certificate.cycle,
            producer="search",
            trace=("jackson-fast-path",),
        )
        return _finish(
            X, "jackson", cert, description=description, timings=timings, notes=notes
        )
    timings.append(("jackson", time.perf_counter() - t1))

    # stage 3: block classification
    t2 = time.perf_counter()
    records: list[SystemRecord] = []
    if witness is not None:
        if not is_vertex_transitive_witnessed(X, witness):
            notes.append("witness is not an automorphism group; classification skipped")
        else:
            records = classify_normal_block_systems(X, witness, classify_cap)
    else:
        notes.append("no witness: classification stage skipped")
    extra_systems = list(block_systems or ())
    system_summaries = [(rec.description, rec.r) for rec in records] + [
        (f"caller-supplied system, r={s.block_size}", s.block_size)
        for s in extra_systems
    ]
    lift_summary = None
    prime_decomps: list[SemiregularDecomposition] = []

    def try_prime_system(
        rho: SemiregularDecomposition,
    ) -> Optional[tuple[str, HamiltonCertificate, str]]:
        quotient = quotient_multigraph(X, rho.orbits)
        if quotient.nonregular_pairs:
            notes.append("quotient has non-bi-regular pairs; lift skipped")
            return None
        under = quotient.underlying
        if not under.is_connected():
            return None
        cell_cycle: Optional[list[int]] = None
        multi_edge = None
        for a, b in under.edges():
            if quotient.multiplicity[a][b] >= 2:
                multi_edge = (a, b)
                break
        if multi_edge is not None:
            if quotient.cell_count == 2:
                cell_cycle = [0, 1]
            else:
                path = hamilton_path_between(under, multi_edge[0], multi_edge[1])
                if path is not None:
                    cell_cycle = path
        if cell_cycle is None:
            if under.order < 3:
                return None
            outcome = hamilton_search(under, budget)
            if isinstance(outcome, Found):
                cell_cycle = list(outcome.certificate.cycle)
            elif isinstance(outcome, ExhaustedNone) and is_petersen(under):
                return None  # Petersen quotient: handled by the family route
            else:
                return None
        result = lift_cycle(X, rho, cell_cycle)
        if isinstance(result, LongCycle) and len(result.cycle) == X.order:
            cert = HamiltonCertificate(
                graph_hash=graph_hash(X),
                cycle=result.cycle,
                producer="lift",
                trace=(
                    f"lift-r={rho.n}",
                    f"quotient-cycle={','.join(map(str, result.source_cycle))}",
                ),
            )
            return (f"lift_r={rho.n}", cert, f"long cycle over {rho.m} cells")
        if isinstance(result, DisjointCycles):
            return None
        return None

    for rec in records:
        from .families import is_prime

        if not is_prime(rec.r):
            continue
        try:
            rho = semiregular_from_prime_blocks(rec.subgroup, rec.system)
        except PipelineError as exc:
            notes.append(f"{rec.description}: {exc}")
            continue
        prime_decomps.append(rho)
        hit = try_prime_system(rho)
        if hit is not None:
            tag, cert, lift_summary = hit
            timings.append(("blocks", time.perf_counter() - t2))
            return _finish(
                X,
                tag,
                cert,
                description=description,
                systems=system_summaries,
                lift_summary=lift_summary,
                timings=timings,
                notes=notes,
            )

    # Petersen-quotient special case: the block-walk families
    for candidate_system in [rec.system for rec in records] + extra_systems:
        from .families import is_prime

        if candidate_system.block_count != 10 or not is_prime(candidate_system.block_size):
            continue
        matched = match_block_family(X, candidate_system)
        if matched is None:
            continue
        canonical, to_x = matched
        inner_cert = family_walk(canonical)
        cycle = tuple(to_x[v] for v in inner_cert.cycle)
        cert = HamiltonCertificate(
            graph_hash=graph_hash(X),
            cycle=cycle,
            producer="walk",
            trace=(f"family-case-{canonical.case}", f"r={canonical.r}"),
        )
        timings.append(("blocks", time.perf_counter() - t2))
        return _finish(
            X,
            "family_walk",
            cert,
            description=description,
            systems=system_summaries,
            timings=timings,
            notes=notes,
        )
    timings.append(("blocks", time.perf_counter() - t2))

    # stage 4: guided search from a degree-3 orbit plan
    t3 = time.perf_counter()
    for rho in prime_decomps:
        if rho.n < 4:
            continue
        plan = check_deg3_hypotheses(X, rho)
        if plan is None:
            continue
        outcome = guided_hamilton(X, plan, budget)
        if isinstance(outcome, Found):
            timings.append(("deg3", time.perf_counter() - t3))
            return _finish(
                X,
                "deg3_guided",
                outcome.certificate,
                description=description,
                systems=system_summaries,
                timings=timings,
                notes=notes,
            )
        notes.append("guided search exhausted its budget; falling back")
    timings.append(("deg3", time.perf_counter() - t3))

    # stage 5: fallback search
    t4 = time.perf_counter()
    outcome = hamilton_search(X, budget)
    timings.append(("fallback", time.perf_counter() - t4))
    if isinstance(outcome, Found):
        cert = HamiltonCertificate(
            graph_hash=outcome.certificate.graph_hash,
            cycle=outcome.certificate.cycle,
            producer="search",
            trace=("fallback",),
        )
        return _finish(
            X,
            "fallback_search",
            cert,
            description=description,
            systems=system_summaries,
            timings=timings,
            notes=notes,
        )
    if isinstance(outcome, ExhaustedNone):
        return _finish(
            X,
            "fallback_search",
            None,
            description=description,
            exception_kind="exhausted_nonhamiltonian",
            systems=system_summaries,
            exhaustion=outcome.stats,
            timings=timings,
            notes=notes,
        )
    return _finish(
        X,
        "inconclusive",
        None,
        description=description,
        systems=system_summaries,
        timings=timings,
        notes=notes + ["budget exhausted with no certificate and no exhaustion"],
    )
