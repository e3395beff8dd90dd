"""Simple graphs and every constructor the toolkit needs.

Coset and bi-coset graphs over small permutation groups, Cayley graphs,
generalized Petersen graphs, truncations, induced subgraphs, and the
predicates used by the dispatcher.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .perm import PermGroup, Permutation, generate_elements, mulclose


class SimpleGraph:
    """Undirected simple graph on {0..order-1} with optional vertex labels."""

    __slots__ = ("order", "adjacency", "labels", "_hash")

    def __init__(
        self,
        order: int,
        edges: Iterable[tuple[int, int]],
        labels: Optional[Sequence[object]] = None,
    ):
        adj: list[set[int]] = [set() for _ in range(order)]
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge ({u},{v}) out of range for order {order}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "adjacency", tuple(frozenset(s) for s in adj))
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != order:
                raise ValueError("label count does not match order")
            if len(set(labels)) != order:
                raise ValueError("labels are not unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("SimpleGraph is immutable")

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in self.adjacency[u] if u < v]

    def edge_count(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.order else 0

    def regular_degree(self) -> Optional[int]:
        degs = set(self.degrees())
        return degs.pop() if len(degs) == 1 else None

    def is_cubic(self) -> bool:
        return self.regular_degree() == 3

    def components(self) -> list[frozenset[int]]:
        seen = [False] * self.order
        comps = []
        for start in range(self.order):
            if seen[start]:
                continue
            comp = {start}
            seen[start] = True
            frontier = [start]
            while frontier:
                nxt = []
                for v in frontier:
                    for w in self.adjacency[v]:
                        if not seen[w]:
                            seen[w] = True
                            comp.add(w)
                            nxt.append(w)
                frontier = nxt
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return self.order <= 1 or len(self.components()) == 1

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle, or None for a forest."""
        best: Optional[int] = None
        for root in range(self.order):
            dist = {root: 0}
            parent = {root: -1}
            frontier = [root]
            while frontier:
                nxt = []
                for v in frontier:
                    for w in self.adjacency[v]:
                        if w not in dist:
                            dist[w] = dist[v] + 1
                            parent[w] = v
                            nxt.append(w)
                        elif w != parent[v]:
                            cycle_len = dist[v] + dist[w] + 1
                            if best is None or cycle_len < best:
                                best = cycle_len
                frontier = nxt
        return best

    def triangles(self) -> list[tuple[int, int, int]]:
        out = []
        for u in range(self.order):
            for v in self.adjacency[u]:
                if v <= u:
                    continue
                for w in self.adjacency[u] & self.adjacency[v]:
                    if w > v:
                        out.append((u, v, w))
        return out

    def relabeled(self, perm: Sequence[int]) -> "SimpleGraph":
        """Graph with vertex i renamed perm[i]."""
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        labels = None
        if self.labels is not None:
            new_labels: list[object] = [None] * self.order
            for i, lab in enumerate(self.labels):
                new_labels[perm[i]] = lab
            labels = new_labels
        return SimpleGraph(self.order, edges, labels)

    def __repr__(self) -> str:
        return f"SimpleGraph(order={self.order}, edges={self.edge_count()})"


def graph_hash(X: SimpleGraph) -> str:
    """Content hash of the labeled edge set (order + sorted edges)."""
    h = hashlib.sha256()
    h.update(f"order={X.order};".encode())
    for u, v in sorted(X.edges()):
        h.update(f"{u}-{v};".encode())
    return h.hexdigest()


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def circulant(n: int, steps: Iterable[int]) -> SimpleGraph:
    edges = []
    for s in steps:
        s %= n
        if s == 0:
            continue
        edges.extend((i, (i + s) % n) for i in range(n))
    return SimpleGraph(n, edges)


# ---------------------------------------------------------------------------
# Coset and bi-coset graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetDiagnostics:
    undirected_ok: bool
    symmetrized: bool
    connected: bool
    generates: bool
    discarded_from_h: int


@dataclass(frozen=True)
class BiCosetDiagnostics:
    connected: bool
    generates: bool


@dataclass(frozen=True)
class CosetSpec:
    group: PermGroup
    subgroup_h: tuple[Permutation, ...]
    connection_s: tuple[Permutation, ...]

    @classmethod
    def make(cls, group, h_gens, s_elements) -> "CosetSpec":
        return cls(group, tuple(h_gens), tuple(s_elements))


@dataclass(frozen=True)
class BiCosetSpec:
    group: PermGroup
    subgroup_l: tuple[Permutation, ...]
    subgroup_r: tuple[Permutation, ...]
    connection_d: tuple[Permutation, ...]

    @classmethod
    def make(cls, group, l_gens, r_gens, d_elements) -> "BiCosetSpec":
        return cls(group, tuple(l_gens), tuple(r_gens), tuple(d_elements))


def _coset_key(h_elements: frozenset[Permutation], x: Permutation) -> tuple[int, ...]:
    return min((h * x).images for h in h_elements)


def _double_coset(
    h_elements: frozenset[Permutation], s: Permutation, k_elements: frozenset[Permutation]
) -> frozenset[Permutation]:
    return frozenset(h * s * k for h in h_elements for k in k_elements)


def coset_graph(
    spec: CosetSpec, cap: Optional[int] = None
) -> tuple[SimpleGraph, CosetDiagnostics]:
    """Cos(G, H, HSH): vertices are right cosets Hx, with Hx ~ Hy iff y x^-1 in HSH.

    When HS^-1H != HSH the connection set is symmetrized with S u S^-1 and
    flagged, so the result is always an undirected graph.  Cosets are indexed
    in breadth-first order from H using the group's generator order, which
    makes vertex numbering reproducible.
    """
    g_elements = spec.group.elements(cap)
    h_elements = mulclose(spec.subgroup_h, cap)
    if not h_elements <= g_elements:
        raise ValueError("H is not a subgroup of G")

    s_raw = [s for s in spec.connection_s]
    s_kept = [s for s in s_raw if s not in h_elements]
    discarded = len(s_raw) - len(s_kept)
    if not s_kept:
        raise ValueError("connection set is empty after discarding S n H")
    for s in s_kept:
        if s not in g_elements:
            raise ValueError("connection element outside G")

    hsh = frozenset().union(*(_double_coset(h_elements, s, h_elements) for s in s_kept))
    hs1h = frozenset().union(
        *(_double_coset(h_elements, s.inverse(), h_elements) for s in s_kept)
    )
    undirected_ok = hsh == hs1h
    symmetrized = not undirected_ok
    connection = hsh if undirected_ok else hsh | hs1h

    # breadth-first coset enumeration from H
    ident = Permutation.identity(spec.group.degree)
    index: dict[tuple[int, ...], int] = {}
    reps: list[Permutation] = []

    def visit(x: Permutation) -> int:
        key = _coset_key(h_elements, x)
        if key not in index:
            index[key] = len(reps)
            reps.append(Permutation(key))
        return index[key]

    visit(ident)
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in spec.group.generators:
                y = x * g
                before = len(reps)
                visit(y)
                if len(reps) > before:
                    nxt.append(reps[-1])
        frontier = nxt
    if len(reps) * len(h_elements) != len(g_elements):
        raise ValueError("coset enumeration incomplete; H is not a subgroup?")

    # neighbors of Hx are the cosets H(d x) for d in the symmetrized HSH;
    # left H-factors are absorbed, so d ranges over S'.H only
    sh = sorted({s * h for s in (s_kept if undirected_ok else s_kept + [s.inverse() for s in s_kept]) for h in h_elements})
    edges = set()
    for i, x in enumerate(reps):
        for d in sh:
            j = index[_coset_key(h_elements, d * x)]
            if i != j:
                edges.add((min(i, j), max(i, j)))

    labels = tuple("H" + "".join(f".{v}" for v in rep.images) for rep in reps)
    graph = SimpleGraph(len(reps), edges, labels)
    generates = mulclose(list(h_elements) + s_kept, cap) == g_elements
    diag = CosetDiagnostics(
        undirected_ok=undirected_ok,
        symmetrized=symmetrized,
        connected=graph.is_connected(),
        generates=generates,
        discarded_from_h=discarded,
    )
    return graph, diag


def bicoset_graph(
    spec: BiCosetSpec, cap: Optional[int] = None
) -> tuple[SimpleGraph, BiCosetDiagnostics]:
    """B(G, L, R, D): bipartite graph on [G:L] u [G:R] with edges {Lg, Rdg}.

    D is closed into a union of double cosets RdL (the closure that leaves
    the edge set unchanged).  Connectivity diagnostic: <D^-1 D> = G.
    """
    g_elements = spec.group.elements(cap)
    l_elements = mulclose(spec.subgroup_l, cap)
    r_elements = mulclose(spec.subgroup_r, cap)
    if not (l_elements <= g_elements and r_elements <= g_elements):
        raise ValueError("L or R is not a subgroup of G")
    if not spec.connection_d:
        raise ValueError("D must be nonempty")
    for d in spec.connection_d:
        if d not in g_elements:
            raise ValueError("connection element outside G")

    d_closed = frozenset(
        r * d * l for d in spec.connection_d for r in r_elements for l in l_elements
    )

    ident = Permutation.identity(spec.group.degree)
    l_index: dict[tuple[int, ...], int] = {}
    l_reps: list[Permutation] = []
    for x in sorted(g_elements):
        key = _coset_key(l_elements, x)
        if key not in l_index:
            l_index[key] = len(l_reps)
            l_reps.append(Permutation(key))
    r_index: dict[tuple[int, ...], int] = {}
    r_reps: list[Permutation] = []
    for x in sorted(g_elements):
        key = _coset_key(r_elements, x)
        if key not in r_index:
            r_index[key] = len(r_reps)
            r_reps.append(Permutation(key))

    offset = len(l_reps)
    edges = set()
    d_sorted = sorted(d_closed)
    for i, x in enumerate(l_reps):
        for d in d_sorted:
            j = r_index[_coset_key(r_elements, d * x)]
            edges.add((i, offset + j))

    labels = tuple(
        ["L" + "".join(f".{v}" for v in rep.images) for rep in l_reps]
        + ["R" + "".join(f".{v}" for v in rep.images) for rep in r_reps]
    )
    graph = SimpleGraph(offset + len(r_reps), edges, labels)
    d1d = sorted({d1.inverse() * d2 for d1 in d_closed for d2 in d_closed})
    generates = mulclose(d1d, cap) == g_elements
    diag = BiCosetDiagnostics(connected=graph.is_connected(), generates=generates)
    return graph, diag


def cayley_graph(
    group: PermGroup, connection: Sequence[Permutation], cap: Optional[int] = None
) -> tuple[SimpleGraph, CosetDiagnostics]:
    """Cayley graph as the trivial-H coset graph: x ~ sx for s in S u S^-1."""
    trivial = (Permutation.identity(group.degree),)
    return coset_graph(CosetSpec(group, trivial, tuple(connection)), cap)


# ---------------------------------------------------------------------------
# Generalized Petersen graphs and truncation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GPParams:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("GP(n,k) needs n >= 3")
        if not 1 <= self.k <= self.n - 1:
            raise ValueError("GP(n,k) needs 1 <= k <= n-1")
        if 2 * self.k == self.n:
            raise ValueError("GP(n,k) with 2k = n is not simple cubic; rejected")


def generalized_petersen(params: GPParams) -> SimpleGraph:
    """GP(n, k): outer rim u_i, spokes u_i v_i, inner edges v_i v_{i+k}."""
    n, k = params.n, params.k
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))            # u_i u_{i+1}
        edges.append((i, n + i))                  # u_i v_i
        edges.append((n + i, n + (i + k) % n))    # v_i v_{i+k}
    labels = [("u", i) for i in range(n)] + [("v", i) for i in range(n)]
    return SimpleGraph(2 * n, edges, labels)


def petersen_graph() -> SimpleGraph:
    return generalized_petersen(GPParams(5, 2))


def truncation(X: SimpleGraph) -> SimpleGraph:
    """Replace each vertex of a cubic graph by a triangle on its edge-ends."""
    if not X.is_cubic():
        raise ValueError("truncation requires a cubic graph")
    darts = []
    dart_index = {}
    for v in range(X.order):
        for w in sorted(X.adjacency[v]):
            dart_index[(v, w)] = len(darts)
            darts.append((v, w))
    edges = []
    for v in range(X.order):
        local = [dart_index[(v, w)] for w in sorted(X.adjacency[v])]
        edges.extend(
            (local[i], local[j]) for i in range(3) for j in range(i + 1, 3)
        )
    for u, v in X.edges():
        edges.append((dart_index[(u, v)], dart_index[(v, u)]))
    labels = [("t", v, w) for v, w in darts]
    return SimpleGraph(3 * X.order, edges, labels)


# ---------------------------------------------------------------------------
# Subgraphs and valency predicates
# ---------------------------------------------------------------------------


def induced(X: SimpleGraph, U: Iterable[int]) -> SimpleGraph:
    verts = sorted(set(U))
    pos = {v: i for i, v in enumerate(verts)}
    edges = [
        (pos[u], pos[v])
        for u in verts
        for v in X.adjacency[u]
        if v in pos and u < v
    ]
    labels = (
        [X.labels[v] for v in verts] if X.labels is not None else list(verts)
    )
    return SimpleGraph(len(verts), edges, labels)


def bipartite_between(X: SimpleGraph, U: Iterable[int], W: Iterable[int]) -> SimpleGraph:
    u_list, w_list = sorted(set(U)), sorted(set(W))
    if set(u_list) & set(w_list):
        raise ValueError("U and W overlap")
    pos = {v: i for i, v in enumerate(u_list)}
    pos.update({v: len(u_list) + i for i, v in enumerate(w_list)})
    edges = [
        (pos[u], pos[v]) for u in u_list for v in X.adjacency[u] if v in pos and v in set(w_list)
    ]
    base = u_list + w_list
    labels = [X.labels[v] for v in base] if X.labels is not None else base
    return SimpleGraph(len(base), edges, labels)


def regular_valency(X: SimpleGraph, U: Iterable[int]) -> Optional[int]:
    """Common degree of the induced subgraph X<U>, if it is regular."""
    verts = set(U)
    degs = {len(X.adjacency[v] & verts) for v in verts}
    return degs.pop() if len(degs) == 1 else None


def regular_bivalency(
    X: SimpleGraph, U: Iterable[int], W: Iterable[int]
) -> Optional[int]:
    """Common cross-degree of X[U, W], if bi-regular with equal side degrees."""
    u_set, w_set = set(U), set(W)
    if u_set & w_set:
        raise ValueError("U and W overlap")
    du = {len(X.adjacency[v] & w_set) for v in u_set}
    dw = {len(X.adjacency[v] & u_set) for v in w_set}
    if len(du) == 1 and len(dw) == 1 and du == dw:
        return du.pop()
    return None


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def is_petersen(X: SimpleGraph) -> bool:
    """Order 10, cubic, girth 5: that triple pins the Petersen graph uniquely."""
    return X.order == 10 and X.is_cubic() and X.girth() == 5


def is_vertex_transitive_witnessed(X: SimpleGraph, G: PermGroup) -> bool:
    """True iff every generator of G maps edges to edges and G is transitive."""
    if G.degree != X.order:
        raise ValueError("witness degree does not match graph order")
    for g in G.generators:
        for u, v in X.edges():
            if not X.has_edge(g(u), g(v)):
                return False
    return G.is_transitive()


def automorphism_witness(X: SimpleGraph, perms: Sequence[Permutation]) -> bool:
    return all(
        X.has_edge(g(u), g(v)) for g in perms for u, v in X.edges()
    )


# ---------------------------------------------------------------------------
# Isomorphism backtracking (test-scale; degree + neighborhood pruning)
# ---------------------------------------------------------------------------


def find_isomorphism(X: SimpleGraph, Y: SimpleGraph) -> Optional[list[int]]:
    """A vertex bijection X -> Y preserving adjacency, or None.

    Plain backtracking with degree pruning; adequate at order <= ~40.
    """
    if X.order != Y.order or X.edge_count() != Y.edge_count():
        return None
    if sorted(X.degrees()) != sorted(Y.degrees()):
        return None
    n = X.order
    x_deg, y_deg = X.degrees(), Y.degrees()
    # order X-vertices by connectivity to already-mapped ones for tighter pruning
    order_x: list[int] = []
    seen = [False] * n
    for start in sorted(range(n), key=lambda v: -x_deg[v]):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        while queue:
            v = queue.pop(0)
            order_x.append(v)
            for w in sorted(X.adjacency[v]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    mapping = [-1] * n
    used = [False] * n

    def backtrack(idx: int) -> bool:
        if idx == n:
            return True
        v = order_x[idx]
        mapped_nbrs = [(w, mapping[w]) for w in X.adjacency[v] if mapping[w] != -1]
        for cand in range(n):
            if used[cand] or y_deg[cand] != x_deg[v]:
                continue
            if any(not Y.has_edge(cand, mw) for _, mw in mapped_nbrs):
                continue
            # non-edges must also map to non-edges
            ok = True
            for w in range(n):
                mw = mapping[w]
                if mw != -1 and w not in X.adjacency[v] and Y.has_edge(cand, mw):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = cand
            used[cand] = True
            if backtrack(idx + 1):
                return True
            mapping[v] = -1
            used[cand] = False
        return False

    return mapping if backtrack(0) else None


def is_isomorphic(X: SimpleGraph, Y: SimpleGraph) -> bool:
    return find_isomorphism(X, Y) is not None


def all_isomorphisms(
    X: SimpleGraph, Y: SimpleGraph, limit: Optional[int] = None
) -> list[list[int]]:
    """All adjacency-preserving bijections X -> Y (tiny graphs only)."""
    if X.order != Y.order or sorted(X.degrees()) != sorted(Y.degrees()):
        return []
    n = X.order
    x_deg, y_deg = X.degrees(), Y.degrees()
    found: list[list[int]] = []
    mapping = [-1] * n
    used = [False] * n

    def backtrack(v: int):
        if limit is not None and len(found) >= limit:
            return
        if v == n:
            found.append(mapping[:])
            return
        for cand in range(n):
            if used[cand] or y_deg[cand] != x_deg[v]:
                continue
            ok = True
            for w in range(v):
                if X.has_edge(v, w) != Y.has_edge(cand, mapping[w]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = cand
            used[cand] = True
            backtrack(v + 1)
            mapping[v] = -1
            used[cand] = False

    backtrack(0)
    return found
