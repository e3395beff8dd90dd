"""Explicit Hamilton-cycle families over block-labeled graphs of order 10r.

Four constructions live here: the two block-walk families over a Petersen
quotient (complete-bipartite pairs on one edge class, perfect matchings on
the other), the CRT exponent with its generalized-Petersen spanning
subgraph, the K_{5,5}-minus-perfect-matching chained cycle, and the
ten-term alternating-sign walk.  Walk templates are stored as data so a
transcription slip is reported with its step index instead of surfacing as
a generic failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graphs import SimpleGraph, graph_hash
from .perm import PermGroup, Permutation
from .search import HamiltonCertificate, verify_certificate

# Petersen quotient layout used by the block families: outer pentagon 0-4,
# spokes i -- 5+i, inner pentagram 5-7-9-6-8-5.
OUTER_PAIRS = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))
SPOKE_PAIRS = tuple((i, 5 + i) for i in range(5))
INNER_PAIRS = ((5, 7), (7, 9), (9, 6), (6, 8), (8, 5))


def petersen_layout_edges() -> list[tuple[int, int]]:
    return list(OUTER_PAIRS) + list(SPOKE_PAIRS) + list(INNER_PAIRS)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FamilyWalkError(ValueError):
    """A walk step landed on a non-edge; carries the offending step."""

    def __init__(self, message: str, step: Optional[int] = None, detail: object = None):
        super().__init__(message)
        self.step = step
        self.detail = detail


# ---------------------------------------------------------------------------
# Block-labeled graphs (order 10r over a Petersen quotient)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockLabeledGraph:
    """Order-10r graph whose quotient over the ten blocks is the Petersen graph."""

    r: int
    case: str
    graph: SimpleGraph
    blocks: tuple[tuple[int, ...], ...]
    pair_classes: tuple[tuple[tuple[int, int], str], ...]
    adjustments: tuple[str, ...] = ()

    def vertex(self, block: int, layer: int) -> int:
        return block * self.r + layer % self.r


def _spoke_matching_edges(i: int, r: int, swapped: bool) -> list[tuple[int, int]]:
    """Perfect matching on spoke {i, 5+i}: layer j pairs with layer j+1.

    The swapped form replaces the partners of layers 1 and r-1 on the outer
    side: (i,1)-(5+i,0) and (i,r-1)-(5+i,2), defaults elsewhere.
    """
    edges = []
    for j in range(r):
        if swapped and j == 1:
            target = 0
        elif swapped and j == r - 1:
            target = 2
        else:
            target = (j + 1) % r
        edges.append((i * r + j, (5 + i) * r + target))
    return edges


def build_block_graph(r: int, case: str) -> BlockLabeledGraph:
    """The two adjacency displays over the Petersen quotient, realized exactly.

    Case A: outer and pentagram pairs induce K_{r,r}; spokes are perfect
    matchings, with the swapped matching on spoke {1,6}.  The displayed walk
    additionally forces the same swap on spoke {4,9}; the builder applies it
    and records the adjustment (the two displays are inconsistent otherwise).

    Case B: spokes induce K_{r,r}; outer and pentagram pairs are the shifted
    matchings b(i,j) ~ b(i+1,j+1) and b(5+i,j) ~ b(5+i+2,j+1).
    """
    if case not in ("A", "B"):
        raise ValueError(f"case must be 'A' or 'B', got {case!r}")
    if r < 7 or not is_prime(r):
        raise ValueError(f"block size must be a prime >= 7, got {r}")
    edges: list[tuple[int, int]] = []
    pair_classes = []
    adjustments: list[str] = []

    def complete_pair(a: int, b: int):
        edges.extend((a * r + x, b * r + y) for x in range(r) for y in range(r))

    if case == "A":
        for a, b in OUTER_PAIRS + INNER_PAIRS:
            complete_pair(a, b)
            pair_classes.append(((a, b), "complete"))
        for i in range(5):
            swapped = i in (1, 4)
            edges.extend(_spoke_matching_edges(i, r, swapped))
            pair_classes.append(((i, 5 + i), "matching"))
        adjustments.append(
            "spoke {4,9} uses the swapped matching (layers 1 and r-1 exchanged): "
            "required by the first walk of the family, which disagrees with the "
            "uniform-shift display at exactly this spoke"
        )
    else:
        for i, (a, b) in enumerate(OUTER_PAIRS):
            edges.extend((a * r + j, b * r + (j + 1) % r) for j in range(r))
            pair_classes.append(((a, b), "matching"))
        for a, b in INNER_PAIRS:
            edges.extend((a * r + j, b * r + (j + 1) % r) for j in range(r))
            pair_classes.append(((a, b), "matching"))
        for i in range(5):
            complete_pair(i, 5 + i)
            pair_classes.append(((i, 5 + i), "complete"))

    labels = [("b", i, j) for i in range(10) for j in range(r)]
    graph = SimpleGraph(10 * r, edges, labels)
    blocks = tuple(tuple(range(i * r, (i + 1) * r)) for i in range(10))
    return BlockLabeledGraph(
        r=r,
        case=case,
        graph=graph,
        blocks=blocks,
        pair_classes=tuple(pair_classes),
        adjustments=tuple(adjustments),
    )


# Walk templates: (block, layer) pairs; layers in the parametrized templates
# are offsets added to the running parameter.
WALK_ALPHA_A = (
    (0, 0), (4, 0), (3, 0), (8, 1), (5, 0), (7, 0), (9, 1), (6, 0), (1, 1), (2, 0),
    (7, 1), (5, 1), (8, 0), (6, 1), (9, 0), (4, 1), (3, 1), (2, 2), (1, 0), (0, 1),
    (5, 2), (8, 2), (6, 2), (9, 2), (7, 2), (2, 1), (3, 2), (4, 2), (0, 2), (1, 2),
)

WALK_BETA_A = (
    (6, 0), (8, 0), (5, 0), (7, 0), (9, 1), (4, 0), (3, 0), (2, 1), (1, 0), (0, 0),
    (5, 1), (8, 1), (6, 1), (9, 0), (7, 1), (2, 0), (3, 1), (4, 1), (0, 1), (1, 1),
)

WALK_ALPHA_B = (
    (0, 0), (5, 2), (8, 1), (3, 0), (4, 1), (9, 3), (7, 2), (2, 2), (1, 1), (6, 0),
    (1, 2), (6, 2), (9, 1), (4, 0), (0, 1), (5, 1), (8, 0), (3, 2), (2, 1), (7, 0),
    (2, 0), (7, 1), (9, 2), (4, 2), (3, 1), (8, 2), (6, 1), (1, 4), (0, 3), (5, 0),
)

WALK_BETA_B = (
    (0, 2), (5, 4), (8, 3), (3, 3), (4, 4), (9, 4), (7, 3), (2, 4), (1, 3), (6, 4),
    (1, 0), (6, 3), (8, 4), (3, 4), (2, 3), (7, 4), (9, 5), (4, 3), (0, 4), (5, 3),
)

WALK_GAMMA_B = (
    (0, 0), (5, 1), (8, 0), (3, 0), (4, 1), (9, 1), (7, 0), (2, 1), (1, 0), (6, 1),
    (1, 1), (6, 0), (8, 1), (3, 1), (2, 0), (7, 1), (9, 2), (4, 0), (0, 1), (5, 0),
)


def walk_steps(case: str, r: int) -> list[tuple[int, int]]:
    """The full chained vertex template (block, layer) for the given case."""
    steps: list[tuple[int, int]] = []
    if case == "A":
        steps.extend(WALK_ALPHA_A)
        for jp in range(3, r - 1, 2):
            steps.extend((blk, (jp + off) % r) for blk, off in WALK_BETA_A)
    else:
        steps.extend(WALK_ALPHA_B)
        steps.extend((blk, off % r) for blk, off in WALK_BETA_B)
        for jp in range(5, r - 1, 2):
            steps.extend((blk, (jp + off) % r) for blk, off in WALK_GAMMA_B)
    return steps


def family_walk(block_graph: BlockLabeledGraph, case: Optional[str] = None) -> HamiltonCertificate:
    """Instantiate and chain the walk templates into a verified Hamilton cycle."""
    case = case or block_graph.case
    if case != block_graph.case:
        raise ValueError(
            f"graph was built for case {block_graph.case}, walk requested for {case}"
        )
    r = block_graph.r
    steps = walk_steps(case, r)
    cycle = [block_graph.vertex(blk, layer) for blk, layer in steps]
    X = block_graph.graph
    if len(cycle) != X.order:
        raise FamilyWalkError(
            f"template covers {len(cycle)} vertices, graph has {X.order}"
        )
    seen = set()
    for idx, v in enumerate(cycle):
        if v in seen:
            raise FamilyWalkError(
                f"template revisits vertex at step {idx}", step=idx, detail=steps[idx]
            )
        seen.add(v)
    for idx in range(len(cycle)):
        a, b = cycle[idx], cycle[(idx + 1) % len(cycle)]
        if not X.has_edge(a, b):
            raise FamilyWalkError(
                f"step {idx}: {steps[idx]} ~ {steps[(idx + 1) % len(steps)]} "
                "is not an edge (transcription mismatch)",
                step=idx,
                detail=(steps[idx], steps[(idx + 1) % len(steps)]),
            )
    cert = HamiltonCertificate(
        graph_hash=graph_hash(X),
        cycle=tuple(cycle),
        producer="walk",
        trace=(f"family-case-{case}", f"r={r}"),
    )
    if not verify_certificate(X, cert):
        raise FamilyWalkError("walk failed final certificate verification")
    return cert


# ---------------------------------------------------------------------------
# CRT exponent and the generalized-Petersen spanning subgraph
# ---------------------------------------------------------------------------


def crt_exponent(t: int, p: int) -> int:
    """Least positive l with l = t (mod p) and l = 2 (mod 5)."""
    if p % 5 == 0:
        raise ValueError("p must be coprime to 5")
    inv_p = pow(p, -1, 5)
    k = ((2 - t) * inv_p) % 5
    ell = (t % p) + p * k
    ell %= 5 * p
    if ell == 0:
        ell = 5 * p
    return ell


def gp_spanning_subgraph(p: int, ell: int) -> SimpleGraph:
    """GP(5p, l mod 5p): the spanning subgraph traced by the two base orbits."""
    from .graphs import GPParams, generalized_petersen

    n = 5 * p
    k = ell % n
    if k == 0:
        raise ValueError("l = 0 (mod 5p) gives a degenerate inner step")
    if 2 * k == n:
        raise ValueError("l = 5p/2 gives doubled inner edges; degenerate")
    if k > n - 1:
        raise ValueError("inner step out of range")
    return generalized_petersen(GPParams(n, k))


# ---------------------------------------------------------------------------
# The ten-term alternating-sign walk (order 10p, point stabilizer of order 2)
# ---------------------------------------------------------------------------

# sign on t^x for x = 0..9; the closing identity is
# 1 + t - t^2 - t^3 + t^4 + t^5 - t^6 - t^7 + t^8 + t^9 = (t+1)(1-t^2+t^4-t^6+t^8)
SIGN_PATTERN = (1, 1, -1, -1, 1, 1, -1, -1, 1, 1)


def sign_walk_congruence_holds(t: int, p: int) -> bool:
    total = sum(SIGN_PATTERN[x] * pow(t, x, p) for x in range(10)) % p
    return total == 0


@dataclass(frozen=True)
class SignWalkResult:
    graph: SimpleGraph
    certificate: HamiltonCertificate
    deltas: tuple[int, ...]
    block_sequence: tuple[int, ...]


def z10_sign_walk(
    p: int,
    t: int,
    ell: int = 1,
    quotient_order: Optional[Sequence[int]] = None,
) -> SignWalkResult:
    """Order-10p graph from the b^20-presentation plus its sign-walk cycle.

    Vertices are (x, y) with x in Z_10 (block) and y in Z_p.  In-block edges
    step by +-l*t^x; the quotient Hamilton cycle through the blocks in the
    given order is lifted as equal-y matchings.  The walk crosses each block
    with the fixed sign pattern and closes because the ten-term alternating
    sum vanishes mod p.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if pow(t, 10, p) != p - 1:
        raise ValueError(f"t^10 != -1 (mod {p}); t = {t}")
    if pow(t, 4, p) == 1:
        raise ValueError(f"t^4 = 1 (mod {p}); the sign walk needs t of order 20")
    if ell % p == 0:
        raise ValueError("l must be nonzero mod p")
    order = list(quotient_order) if quotient_order is not None else list(range(1, 10))
    if sorted(order) != list(range(1, 10)):
        raise ValueError("quotient_order must be a permutation of 1..9")
    seq = [0] + order

    def vid(x: int, y: int) -> int:
        return x * p + y % p

    edges = []
    step = [ell * pow(t, x, p) % p for x in range(10)]
    for x in range(10):
        for y in range(p):
            edges.append((vid(x, y), vid(x, y + step[x])))
    for s in range(10):
        a, b = seq[s], seq[(s + 1) % 10]
        for y in range(p):
            edges.append((vid(a, y), vid(b, y)))
    labels = [("Mb^%d a^%d" % (x, y)) for x in range(10) for y in range(p)]
    graph = SimpleGraph(10 * p, edges, labels)

    if not sign_walk_congruence_holds(t, p):
        raise ValueError("alternating-sum congruence fails; invalid (p, t)")

    cycle: list[int] = []
    y = 0
    for s, block in enumerate(seq):
        delta = SIGN_PATTERN[block]
        c = step[block]
        # Hamilton path of the block from y to y + delta*c, stepping by -delta*c
        for i in range(p):
            cycle.append(vid(block, y - i * delta * c))
        y = (y + delta * c) % p
    final = cycle[-1]
    if final != vid(seq[-1], 0):
        raise FamilyWalkError(
            "sign walk did not return to the zero layer "
            "(sign-pattern transcription error)",
            detail=(seq[-1], final),
        )
    cert = HamiltonCertificate(
        graph_hash=graph_hash(graph),
        cycle=tuple(cycle),
        producer="walk",
        trace=(f"z10-sign-walk", f"p={p}", f"t={t}", f"l={ell}"),
    )
    if not verify_certificate(graph, cert):
        raise FamilyWalkError("sign walk failed certificate verification")
    return SignWalkResult(
        graph=graph,
        certificate=cert,
        deltas=tuple(SIGN_PATTERN),
        block_sequence=tuple(seq),
    )


# ---------------------------------------------------------------------------
# K_{5,5} - 5K_{1,1} quotient: chained block paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class K55CycleResult:
    graph: SimpleGraph
    certificate: HamiltonCertificate
    chain: tuple[int, ...]


def k55_case_cycle(
    p: int, ell: int, ell_prime: int, iota: int = 1
) -> K55CycleResult:
    """Order-10p graph whose block quotient is K_{5,5} minus a perfect matching.

    Vertices are (i, x, y) with i in {0,1}, x in Z_p, y in Z_5.  Cross edges
    follow the four-entry neighbor rule (sign (-1)^i on the a-exponent);
    in-block edges step by +-l'.  The cycle chains a Hamilton path of every
    block, alternating sides, and closes on the (y+4) cross edge.
    """
    if not is_prime(p) or p < 7:
        raise ValueError(f"p must be a prime >= 7, got {p}")
    if ell % p == 0 or ell_prime % p == 0:
        raise ValueError("l and l' must be nonzero mod p")
    if iota % p not in (1, p - 1):
        raise ValueError("iota must be +1 or -1 mod p")

    def vid(i: int, x: int, y: int) -> int:
        return i * 5 * p + (x % p) * 5 + y % 5

    edges = []
    for i in range(2):
        sign = 1 if i == 0 else -1
        for x in range(p):
            for y in range(5):
                v = vid(i, x, y)
                edges.append((v, vid(i, x + ell_prime, y)))
                edges.append((v, vid(1 - i, x + sign * ell, y + 1)))
                edges.append((v, vid(1 - i, x - sign * iota * ell, y + 2)))
                edges.append((v, vid(1 - i, x - sign * iota * ell, y + 3)))
                edges.append((v, vid(1 - i, x + sign * ell, y + 4)))
    labels = [
        ("Msigma^%d a^%d b^%d" % (i, x, y))
        for i in range(2)
        for x in range(p)
        for y in range(5)
    ]
    graph = SimpleGraph(10 * p, edges, labels)

    chain = (0, 6, 2, 8, 4, 5, 1, 7, 3, 9)
    cycle: list[int] = []
    for block in chain:
        i, j = divmod(block, 5)
        if i == 0:
            # forward path from (0, 0, j) to (0, -l', j)
            cycle.extend(vid(0, s * ell_prime, j) for s in range(p))
        else:
            # reversed path from (1, l - l', j) to (1, l, j)
            cycle.extend(vid(1, ell + s * ell_prime, j) for s in range(p - 1, -1, -1))
    cert = HamiltonCertificate(
        graph_hash=graph_hash(graph),
        cycle=tuple(cycle),
        producer="walk",
        trace=("k55-chain", f"p={p}", f"l={ell}", f"l'={ell_prime}", f"iota={iota}"),
    )
    if not verify_certificate(graph, cert):
        # surface the first bad chaining edge
        for idx in range(len(cycle)):
            a, b = cycle[idx], cycle[(idx + 1) % len(cycle)]
            if not graph.has_edge(a, b):
                raise FamilyWalkError(
                    f"chaining edge at step {idx} missing", step=idx, detail=(a, b)
                )
        raise FamilyWalkError("chained cycle failed verification")
    return K55CycleResult(graph=graph, certificate=cert, chain=chain)


# ---------------------------------------------------------------------------
# Group flavors: permutation actions of degree 10p from presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupPresentationParams:
    """Parameters for the three coset-action flavors of degree 10p."""

    flavor: str  # "Z5Z4", "Z10" or "D10"
    p: int
    t: int
    k: int = 0  # Z5Z4: |sigma| = 2^(k+2)
    s: int = 1  # D10: |c| = 2^(s+1)


class FlavorError(ValueError):
    """Flavor congruence preconditions failed."""


def _coset_action(
    elements: list[tuple],
    mult,
    subgroup: list[tuple],
    gens: list[tuple],
    name: str,
) -> PermGroup:
    """Right-multiplication action on the right cosets of a subgroup."""
    sub = list(subgroup)
    key_cache: dict[tuple, tuple] = {}

    def coset_key(g: tuple) -> tuple:
        if g not in key_cache:
            key = min(mult(m, g) for m in sub)
            key_cache[g] = key
        return key_cache[g]

    index: dict[tuple, int] = {}
    for g in sorted(elements):
        key = coset_key(g)
        if key not in index:
            index[key] = len(index)
    reps = sorted(index, key=index.get)
    perms = []
    for gen in gens:
        images = [index[coset_key(mult(rep, gen))] for rep in reps]
        perms.append(Permutation(images))
    return PermGroup(perms, name=name)


def z5z4_group(p: int, t: int, k: int = 0) -> PermGroup:
    """<a> x <b> : <sigma> with a^sigma = a^t, b^sigma = b^2, |sigma| = 2^(k+2).

    Valid parameters: t^(2^(k+1)) = -1 (mod p), or k = 0 with t = +-1
    (the centralizer-of-a cases).  Acts on the 10p cosets of <sigma^2>.
    """
    if not is_prime(p) or p < 7:
        raise FlavorError(f"p must be a prime >= 7, got {p}")
    order_sigma = 2 ** (k + 2)
    t %= p
    case1 = pow(t, 2 ** (k + 1), p) == p - 1
    case2 = k == 0 and t in (1, p - 1)
    if not (case1 or case2):
        raise FlavorError(
            f"need t^(2^{k + 1}) = -1 (mod {p}) or k=0 with t = +-1; got t = {t}"
        )
    t_inv = pow(t, -1, p)
    inv2 = 3  # 2^-1 mod 5

    def mult(g1: tuple, g2: tuple) -> tuple:
        x1, y1, z1 = g1
        x2, y2, z2 = g2
        return (
            (x1 + x2 * pow(t_inv, z1, p)) % p,
            (y1 + y2 * pow(inv2, z1, 5)) % 5,
            (z1 + z2) % order_sigma,
        )

    elements = [
        (x, y, z) for x in range(p) for y in range(5) for z in range(order_sigma)
    ]
    subgroup = [(0, 0, 2 * j) for j in range(order_sigma // 2)]
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    group = _coset_action(
        elements, mult, subgroup, gens, name=f"Z5Z4(p={p},t={t},k={k})"
    )
    if group.degree != 10 * p:
        raise FlavorError(f"coset action has degree {group.degree}, expected {10 * p}")
    return group


def z10_group(p: int, t: int) -> PermGroup:
    """<a,b | a^p = b^20 = 1, a^b = a^t> with t of order 20, on cosets of <b^10>."""
    if not is_prime(p):
        raise FlavorError(f"p must be prime, got {p}")
    t %= p
    if pow(t, 10, p) != p - 1 or pow(t, 4, p) == 1:
        raise FlavorError(f"t must have multiplicative order 20 mod {p}; got {t}")

    def mult(g1: tuple, g2: tuple) -> tuple:
        m1, y1 = g1
        m2, y2 = g2
        return ((m1 + m2) % 20, (y1 * pow(t, m2, p) + y2) % p)

    elements = [(m, y) for m in range(20) for y in range(p)]
    subgroup = [(0, 0), (10, 0)]
    gens = [(0, 1), (1, 0)]
    group = _coset_action(elements, mult, subgroup, gens, name=f"Z10(p={p},t={t})")
    if group.degree != 10 * p:
        raise FlavorError(f"coset action has degree {group.degree}, expected {10 * p}")
    return group


def d10_group(p: int, t: int, s: int = 1) -> PermGroup:
    """<a,b,c | a^p = b^5 = c^(2^(s+1)) = 1, [a,b] = 1, b^c = b^-1, a^c = a^t>.

    Needs t^(2^s) = -1 (mod p); acts on the 10p cosets of <c^2>.
    """
    if not is_prime(p) or p < 7:
        raise FlavorError(f"p must be a prime >= 7, got {p}")
    if s < 1:
        raise FlavorError("s must be >= 1")
    t %= p
    if pow(t, 2**s, p) != p - 1:
        raise FlavorError(f"need t^(2^{s}) = -1 (mod {p}); got t = {t}")
    order_c = 2 ** (s + 1)
    t_inv = pow(t, -1, p)

    def mult(g1: tuple, g2: tuple) -> tuple:
        x1, y1, z1 = g1
        x2, y2, z2 = g2
        return (
            (x1 + x2 * pow(t_inv, z1, p)) % p,
            (y1 + y2 * (-1) ** (z1 % 2)) % 5,
            (z1 + z2) % order_c,
        )

    elements = [(x, y, z) for x in range(p) for y in range(5) for z in range(order_c)]
    subgroup = [(0, 0, 2 * j) for j in range(order_c // 2)]
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    group = _coset_action(
        elements, mult, subgroup, gens, name=f"D10(p={p},t={t},s={s})"
    )
    if group.degree != 10 * p:
        raise FlavorError(f"coset action has degree {group.degree}, expected {10 * p}")
    return group


def build_group_flavor(params: GroupPresentationParams) -> PermGroup:
    if params.flavor == "Z5Z4":
        return z5z4_group(params.p, params.t, params.k)
    if params.flavor == "Z10":
        return z10_group(params.p, params.t)
    if params.flavor == "D10":
        return d10_group(params.p, params.t, params.s)
    raise FlavorError(f"unknown flavor {params.flavor!r}")


def z5z4_valid_ts(p: int, k: int = 0) -> list[int]:
    """All t making the Z5Z4 flavor valid at (p, k)."""
    out = [t for t in range(1, p) if pow(t, 2 ** (k + 1), p) == p - 1]
    if k == 0:
        out.extend(t for t in (1, p - 1) if t not in out)
    return sorted(out)


def z10_valid_ts(p: int) -> list[int]:
    return [
        t for t in range(2, p - 1) if pow(t, 10, p) == p - 1 and pow(t, 4, p) != 1
    ]


def d10_valid_ts(p: int, s: int = 1) -> list[int]:
    return [t for t in range(1, p) if pow(t, 2**s, p) == p - 1]
