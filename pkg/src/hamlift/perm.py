"""Permutations, small-group closure, orbits, block systems, semiregular decompositions.

Composition convention used throughout: ``compose(p, q)`` (and ``p * q``)
applies ``p`` first, then ``q``.  Permutations act on points 0..degree-1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

DEFAULT_ELEMENT_CAP = 2_000_000

_CAP_ENV = "HAMLIFT_MAX_ELEMENTS"


def element_cap(override: Optional[int] = None) -> int:
    """Closure cap: explicit override, else HAMLIFT_MAX_ELEMENTS, else the default."""
    if override is not None:
        return int(override)
    env = os.environ.get(_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_ELEMENT_CAP


class CapExceededError(RuntimeError):
    """Raised when a generator closure grows past the element cap."""


class Permutation:
    """An immutable permutation of {0..degree-1}, stored as its image table."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(x) for x in images)
        n = len(imgs)
        seen = [False] * n
        for x in imgs:
            if not 0 <= x < n or seen[x]:
                raise ValueError(f"not a bijection on 0..{n - 1}: {imgs}")
            seen[x] = True
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:]):
                images[a] = b
            if cyc:
                images[cyc[-1]] = cyc[0]
        return cls(images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Cycle decomposition; each cycle starts at its least point, ordered by it."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            v = self.images[start]
            while v != start:
                cyc.append(v)
                seen[v] = True
                v = self.images[v]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        n = 1
        for cyc in self.cycles():
            n = n * len(cyc) // gcd(n, len(cyc))
        return n

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Permutation(id, degree={self.degree})"
        text = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        return f"Permutation{text}"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` first, then ``q``: the image of x is q(p(x))."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    qi = q.images
    return Permutation(tuple(qi[x] for x in p.images))


def generate_elements(
    gens: Sequence[Permutation], cap: Optional[int] = None
) -> frozenset[Permutation]:
    """Breadth-first closure of the generators under composition.

    Inverses come for free in a finite closure.  Raises CapExceededError if
    the closure grows past the cap.
    """
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError("generators have mixed degrees")
    limit = element_cap(cap)
    ident = Permutation.identity(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        new_frontier = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    if len(elements) > limit:
                        raise CapExceededError(
                            f"closure exceeded cap of {limit} elements"
                        )
                    new_frontier.append(y)
        frontier = new_frontier
    return frozenset(elements)


class PermGroup:
    """A permutation group given by generators, with an optional cached element set."""

    def __init__(
        self,
        generators: Sequence[Permutation],
        name: str = "",
        elements: Optional[frozenset[Permutation]] = None,
    ):
        if not generators:
            raise ValueError("a PermGroup needs at least one generator")
        degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise ValueError("generators have mixed degrees")
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name
        self._elements = elements

    @classmethod
    def trivial(cls, degree: int, name: str = "1") -> "PermGroup":
        ident = Permutation.identity(degree)
        return cls([ident], name=name, elements=frozenset([ident]))

    @classmethod
    def from_elements(cls, elements: Iterable[Permutation], name: str = "") -> "PermGroup":
        elts = frozenset(elements)
        gens = sorted(elts)
        return cls(gens, name=name, elements=elts)

    def elements(self, cap: Optional[int] = None) -> frozenset[Permutation]:
        if self._elements is None:
            self._elements = generate_elements(self.generators, cap)
        return self._elements

    @property
    def has_cached_elements(self) -> bool:
        return self._elements is not None

    def order(self, cap: Optional[int] = None) -> int:
        return len(self.elements(cap))

    def contains(self, p: Permutation, cap: Optional[int] = None) -> bool:
        return p in self.elements(cap)

    def orbit(self, point: int) -> frozenset[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for v in frontier:
                for g in self.generators:
                    w = g(v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return frozenset(seen)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def __repr__(self) -> str:
        label = self.name or f"{len(self.generators)} gens"
        return f"PermGroup({label}, degree={self.degree})"


def orbits(group: PermGroup) -> list[tuple[int, ...]]:
    """Orbit partition of the points under the group's generators, as sorted cells."""
    n = group.degree
    seen = [False] * n
    cells = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = sorted(group.orbit(start))
        for v in orbit:
            seen[v] = True
        cells.append(tuple(orbit))
    return cells


@dataclass(frozen=True)
class BlockSystem:
    """A G-invariant partition of the points into equal-size cells."""

    degree: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        covered = sorted(v for cell in self.blocks for v in cell)
        if covered != list(range(self.degree)):
            raise ValueError("blocks do not partition the point set")
        sizes = {len(cell) for cell in self.blocks}
        if len(sizes) != 1:
            raise ValueError(f"unequal block sizes: {sorted(sizes)}")

    @classmethod
    def from_partition(cls, degree: int, cells: Iterable[Iterable[int]]) -> "BlockSystem":
        normalized = tuple(sorted(tuple(sorted(cell)) for cell in cells))
        return cls(degree, normalized)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def cell_of(self) -> dict[int, int]:
        out = {}
        for i, cell in enumerate(self.blocks):
            for v in cell:
                out[v] = i
        return out

    def is_invariant_under(self, gens: Sequence[Permutation]) -> bool:
        cell_set = {frozenset(cell) for cell in self.blocks}
        for g in gens:
            for cell in self.blocks:
                if frozenset(g(v) for v in cell) not in cell_set:
                    return False
        return True

    def is_trivial(self) -> bool:
        return self.block_size in (1, self.degree)


class NotNormalError(ValueError):
    """Raised when a claimed normal subgroup fails the conjugation test."""


def is_normal(G: PermGroup, N: PermGroup, cap: Optional[int] = None) -> bool:
    """True iff every conjugate of every N-generator by a G-generator lies in N."""
    if G.degree != N.degree:
        raise ValueError("degree mismatch between G and N")
    n_elements = N.elements(cap)
    for g in G.generators:
        ginv = g.inverse()
        for x in N.generators:
            if ginv * x * g not in n_elements:
                return False
    return True


def orbit_block_system(G: PermGroup, N: PermGroup, cap: Optional[int] = None) -> BlockSystem:
    """The N-orbit partition, validated as a block system for transitive G."""
    if not is_normal(G, N, cap):
        raise NotNormalError("N is not normal in G")
    cells = orbits(N)
    sizes = {len(c) for c in cells}
    if len(sizes) != 1:
        raise ValueError(
            f"N-orbits of unequal size {sorted(sizes)}; G is not transitive"
        )
    system = BlockSystem.from_partition(G.degree, cells)
    if not system.is_invariant_under(G.generators):
        raise NotNormalError("N-orbit partition is not G-invariant")
    return system


def _finest_block_partition(gens: Sequence[Permutation], degree: int, pair: tuple[int, int]) -> list[int]:
    """Union-find refinement: the finest G-congruence gluing the given pair."""
    parent = list(range(degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[rb] = ra
        return True

    queue = [pair]
    union(*pair)
    while queue:
        a, b = queue.pop()
        for g in gens:
            ga, gb = g(a), g(b)
            if union(ga, gb):
                queue.append((ga, gb))
    return [find(v) for v in range(degree)]


def minimal_block_systems(G: PermGroup) -> list[BlockSystem]:
    """All minimal nontrivial block systems of a transitive group.

    For each v != 0 the finest block containing {0, v} is closed by
    union-find refinement; nontrivial results are deduplicated.  An empty
    list means G is primitive.
    """
    if not G.is_transitive():
        raise ValueError("G must be transitive")
    n = G.degree
    seen: set[tuple[tuple[int, ...], ...]] = set()
    out = []
    for v in range(1, n):
        roots = _finest_block_partition(G.generators, n, (0, v))
        cells: dict[int, list[int]] = {}
        for point, root in enumerate(roots):
            cells.setdefault(root, []).append(point)
        if len(cells) in (1, n):
            continue
        system = BlockSystem.from_partition(n, cells.values())
        if system.blocks not in seen:
            seen.add(system.blocks)
            out.append(system)
    out.sort(key=lambda s: s.block_size)
    return out


@dataclass(frozen=True)
class SemiregularDecomposition:
    """An (m, n)-semiregular permutation: m cycles, all of length n."""

    perm: Permutation
    m: int
    n: int
    orbits: tuple[tuple[int, ...], ...]

    def position(self) -> dict[int, tuple[int, int]]:
        """point -> (orbit index, offset along the cycle)."""
        out = {}
        for i, cyc in enumerate(self.orbits):
            for j, v in enumerate(cyc):
                out[v] = (i, j)
        return out


def semiregular_decomposition(p: Permutation) -> Optional[SemiregularDecomposition]:
    """Present iff all cycles of p have equal length (fixed points only when n = 1)."""
    cycles = p.cycles(include_fixed=True)
    lengths = {len(c) for c in cycles}
    if len(lengths) != 1:
        return None
    n = lengths.pop()
    return SemiregularDecomposition(p, m=len(cycles), n=n, orbits=tuple(cycles))


def point_stabilizer(G: PermGroup, v: int, cap: Optional[int] = None) -> PermGroup:
    """Subgroup of cached elements fixing v."""
    if not G.has_cached_elements:
        G.elements(cap)
    fixed = [g for g in G.elements() if g(v) == v]
    return PermGroup.from_elements(fixed, name=f"Stab_{v}({G.name})" if G.name else "")


def normal_closure(
    G_elements: frozenset[Permutation],
    seed: Permutation,
    cap: Optional[int] = None,
) -> frozenset[Permutation]:
    """Subgroup generated by all G-conjugates of the seed element."""
    conjugates = {h.inverse() * seed * h for h in G_elements}
    return generate_elements(sorted(conjugates), cap)


def mulclose(
    gens: Iterable[Permutation], cap: Optional[int] = None
) -> frozenset[Permutation]:
    return generate_elements(sorted(set(gens)), cap)


def cyclic_group(n: int) -> PermGroup:
    """Regular cyclic group of order n (rotation of 0..n-1)."""
    rot = Permutation([(i + 1) % n for i in range(n)])
    return PermGroup([rot], name=f"Z{n}")


def dihedral_group(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points (rotation + reflection)."""
    rot = Permutation([(i + 1) % n for i in range(n)])
    refl = Permutation([(-i) % n for i in range(n)])
    return PermGroup([rot, refl], name=f"D{2 * n}(deg {n})")


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup.trivial(1, name="S1")
    rot = Permutation([(i + 1) % n for i in range(n)])
    swap = Permutation.from_cycles(n, [(0, 1)])
    return PermGroup([swap, rot], name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup.trivial(n, name=f"A{n}")
    three = Permutation.from_cycles(n, [(0, 1, 2)])
    if n == 3:
        return PermGroup([three], name="A3")
    if n % 2 == 1:
        long = Permutation([(i + 1) % n for i in range(n)])
    else:
        long = Permutation.from_cycles(n, [tuple(range(1, n))])
    return PermGroup([three, long], name=f"A{n}")
