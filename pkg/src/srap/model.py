"""Ring instances, hyper-links, directed links and ring-interval geometry.

Ring vertices are numbered 0..n-1 in circular order.  Vertex 0 is the root
and the ring edge {0, n-1} is the root edge; deleting it turns the ring into
the path 0, 1, ..., n-1, so every 2-cut avoiding the root is an index range
[i, j] with 1 <= i <= j <= n-1.  Outside (Steiner) vertices are n..n+m-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class InstanceError(ValueError):
    """Raised when an instance violates its structural invariants."""


@dataclass(frozen=True, order=True)
class Link:
    u: int
    v: int
    cost: int

    def __post_init__(self):
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class SrapInstance:
    n: int
    m: int
    terminals: frozenset
    links: tuple  # tuple[Link, ...] sorted by endpoint pair

    @property
    def root(self) -> int:
        return 0

    @property
    def vertex_count(self) -> int:
        return self.n + self.m

    @property
    def all_terminals(self) -> bool:
        return len(self.terminals) == self.n

    def is_ring(self, v: int) -> bool:
        return 0 <= v < self.n

    def link_cost(self, u: int, v: int) -> int | None:
        key = (min(u, v), max(u, v))
        for link in self.links:
            if link.pair == key:
                return link.cost
        return None

    def ring_edges(self) -> list[tuple[int, int]]:
        return [(i, (i + 1) % self.n) for i in range(self.n)]


def build_instance(n: int, m: int, terminals: Iterable[int], links) -> SrapInstance:
    """Validate and freeze an instance.

    ``links`` holds :class:`Link` objects or ``(u, v, cost)`` triples.
    """
    if n < 3:
        raise InstanceError(f"ring needs at least 3 vertices, got n={n}")
    if m < 0:
        raise InstanceError(f"negative outside vertex count {m}")
    terms = frozenset(int(t) for t in terminals)
    if 0 not in terms:
        raise InstanceError("root 0 must be a terminal")
    for t in terms:
        if not 0 <= t < n:
            raise InstanceError(f"terminal {t} is not a ring vertex")
    seen = {}
    for item in links:
        link = item if isinstance(item, Link) else Link(int(item[0]), int(item[1]), int(item[2]))
        if link.u == link.v:
            raise InstanceError(f"link {link.pair} is a loop")
        if link.u < 0 or link.v >= n + m:
            raise InstanceError(f"link {link.pair} has an endpoint outside 0..{n + m - 1}")
        if link.cost < 0:
            raise InstanceError(f"link {link.pair} has negative cost {link.cost}")
        if link.pair in seen:
            raise InstanceError(f"duplicate link {link.pair}")
        seen[link.pair] = link
    ordered = tuple(seen[p] for p in sorted(seen))
    return SrapInstance(n, m, terms, ordered)


@dataclass(frozen=True, order=True)
class DangerousCut:
    i: int
    j: int

    def __contains__(self, v: int) -> bool:
        return self.i <= v <= self.j

    def vertices(self) -> range:
        return range(self.i, self.j + 1)


def ring_intervals(n: int) -> list[DangerousCut]:
    """All 2-cuts of the ring avoiding the root, lexicographic by (i, j)."""
    return [DangerousCut(i, j) for i in range(1, n) for j in range(i, n)]


def dangerous_cuts(instance: SrapInstance) -> list[DangerousCut]:
    n = instance.n
    terms = sorted(t for t in instance.terminals if t != 0)
    out = []
    for cut in ring_intervals(n):
        if any(cut.i <= t <= cut.j for t in terms):
            out.append(cut)
    return out


@dataclass(frozen=True)
class HyperLink:
    """A set of ring vertices priced at the cheapest full component joining it."""

    nodes: frozenset
    cost: int
    realization: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise InstanceError(f"hyper-link {sorted(self.nodes)} joins fewer than 2 ring vertices")
        if self.cost < 0:
            raise InstanceError("hyper-link cost must be nonnegative")
        if self.realization is not None:
            total = sum(link.cost for link in self.realization)
            if total != self.cost:
                raise InstanceError(
                    f"hyper-link {sorted(self.nodes)} cost {self.cost} != realization cost {total}")

    @property
    def lo(self) -> int:
        return min(self.nodes)

    @property
    def hi(self) -> int:
        return max(self.nodes)

    def key(self) -> tuple:
        return tuple(sorted(self.nodes))


def covers(h: HyperLink, cut: DangerousCut) -> bool:
    inside = outside = False
    for a in h.nodes:
        if cut.i <= a <= cut.j:
            inside = True
        else:
            outside = True
    return inside and outside


@dataclass(frozen=True)
class Provenance:
    """Where a directed link came from.

    ``kind`` is one of ``shadow``, ``shortening``, ``composition``,
    ``artificial`` or ``zero-cost``.  ``source`` is the undirected completed
    pair for shadows/shortenings and a tuple of arcs for compositions.
    """

    kind: str
    source: tuple = ()


@dataclass(frozen=True)
class DirectedLink:
    tail: int
    head: int
    cost: int = 0
    provenance: Provenance | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.tail == self.head:
            raise InstanceError(f"directed link ({self.tail},{self.head}) is a loop")
        if self.cost < 0:
            raise InstanceError("directed link cost must be nonnegative")

    @property
    def arc(self) -> tuple[int, int]:
        return (self.tail, self.head)

    def reversed(self) -> "DirectedLink":
        return DirectedLink(self.head, self.tail, self.cost)


def enters(d, cut: DangerousCut) -> bool:
    """True iff the arc's head is inside the cut and its tail is not."""
    tail, head = (d.tail, d.head) if isinstance(d, DirectedLink) else d
    return cut.i <= head <= cut.j and not cut.i <= tail <= cut.j


def interval_of(nodes: Iterable[int]) -> tuple[int, int]:
    nodes = list(nodes)
    if not nodes:
        raise ValueError("interval_of needs a nonempty node set")
    return (min(nodes), max(nodes))


def strictly_between(x: int, nodes) -> bool:
    return min(nodes) < x < max(nodes)
