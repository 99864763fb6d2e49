"""Metric completion, shadow completion and the directed second completion.

The three passes turn an instance into one where every ordered pair of ring
vertices joined by a directed path carries a direct link at shortest-path
cost, and every shortening of a link is available at no higher cost.
Missing pairs stand for infinite cost.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import DirectedLink, Link, Provenance, SrapInstance, build_instance

INF = None  # absence marker, never used in arithmetic


@dataclass(frozen=True)
class CompletedLink:
    """Undirected ring pair at shortest link-path cost."""

    u: int
    v: int
    cost: int
    path: tuple  # vertex sequence u .. v
    originals: tuple  # tuple[Link, ...] along the path

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


def _all_pairs(vertices, arcs):
    """Floyd-Warshall on (cost, hops) labels.

    ``arcs`` maps (x, y) -> cost.  Returns dict (x, y) -> (cost, hops) for
    reachable ordered pairs with x != y.
    """
    dist = {}
    for (x, y), c in arcs.items():
        label = (c, 1)
        if (x, y) not in dist or label < dist[(x, y)]:
            dist[(x, y)] = label
    vs = list(vertices)
    for k in vs:
        into_k = [(i, dist[(i, k)]) for i in vs if i != k and (i, k) in dist]
        out_k = [(j, dist[(k, j)]) for j in vs if j != k and (k, j) in dist]
        for i, (ci, hi) in into_k:
            for j, (cj, hj) in out_k:
                if i == j:
                    continue
                label = (ci + cj, hi + hj)
                cur = dist.get((i, j))
                if cur is None or label < cur:
                    dist[(i, j)] = label
    return dist


def _lex_path(source, target, dist, arcs, succ):
    """Lexicographically smallest vertex sequence among optimal (cost, hops) paths."""
    path = [source]
    x = source
    while x != target:
        goal_c, goal_h = dist[(x, target)]
        for y in succ[x]:
            c = arcs[(x, y)]
            if y == target:
                rest = (0, 0)
            elif (y, target) in dist:
                rest = dist[(y, target)]
            else:
                continue
            if (c + rest[0], 1 + rest[1]) == (goal_c, goal_h):
                x = y
                path.append(y)
                break
        else:  # pragma: no cover - distances are consistent by construction
            raise AssertionError("path reconstruction failed")
    return tuple(path)


def metric_complete_undirected(instance: SrapInstance) -> dict:
    """Map (u, v) with u < v ring vertices -> CompletedLink."""
    n = instance.n
    arcs = {}
    by_pair = {}
    for link in instance.links:
        arcs[(link.u, link.v)] = link.cost
        arcs[(link.v, link.u)] = link.cost
        by_pair[link.pair] = link
    succ = {x: [] for x in range(instance.vertex_count)}
    for (x, y) in arcs:
        succ[x].append(y)
    for x in succ:
        succ[x].sort()
    dist = _all_pairs(range(instance.vertex_count), arcs)
    out = {}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in dist:
                continue
            path = _lex_path(u, v, dist, arcs, succ)
            originals = tuple(by_pair[(min(a, b), max(a, b))] for a, b in zip(path, path[1:]))
            out[(u, v)] = CompletedLink(u, v, dist[(u, v)][0], path, originals)
    return out


def shadow_complete(l1: dict) -> dict:
    """Map arc (tail, head) -> DirectedLink: shadows plus head-fixed shortenings.

    When several completed links yield the same arc, the cheapest wins, ties
    going to the smaller source pair.
    """
    out = {}

    def offer(tail, head, cost, prov):
        cur = out.get((tail, head))
        if cur is None or (cost, prov.source) < (cur.cost, cur.provenance.source):
            out[(tail, head)] = DirectedLink(tail, head, cost, prov)

    for (u, v), cl in sorted(l1.items()):
        offer(u, v, cl.cost, Provenance("shadow", (u, v)))
        offer(v, u, cl.cost, Provenance("shadow", (u, v)))
        for s in range(u + 1, v):
            offer(s, v, cl.cost, Provenance("shortening", (u, v)))
            offer(s, u, cl.cost, Provenance("shortening", (u, v)))
    return out


def metric_complete_directed(l2: dict, n: int) -> dict:
    """Directed shortest paths over ``l2``; multi-arc paths become compositions."""
    arcs = {a: d.cost for a, d in l2.items()}
    succ = {x: [] for x in range(n)}
    for (x, y) in arcs:
        succ[x].append(y)
    for x in succ:
        succ[x].sort()
    dist = _all_pairs(range(n), arcs)
    out = {}
    for (x, y), (c, hops) in sorted(dist.items()):
        if hops == 1:
            out[(x, y)] = l2[(x, y)]
            continue
        path = _lex_path(x, y, dist, arcs, succ)
        parts = tuple(l2[(a, b)] for a, b in zip(path, path[1:]))
        out[(x, y)] = DirectedLink(x, y, c, Provenance("composition", parts))
    return out


@dataclass
class CompleteInstance:
    base: SrapInstance
    l1: dict
    l2: dict
    l3: dict
    _kappa_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    def cost(self, tail: int, head: int) -> int | None:
        d = self.l3.get((tail, head))
        return None if d is None else d.cost

    def arc(self, tail: int, head: int) -> DirectedLink:
        return self.l3[(tail, head)]

    def kappa(self, f) -> list[CompletedLink]:
        """Completed undirected links that together dominate arc ``f``."""
        key = (f.tail, f.head) if hasattr(f, "tail") else tuple(f)
        if key in self._kappa_cache:
            return self._kappa_cache[key]
        d = self.l3.get(key)
        if d is None:
            raise KeyError(f"no finite directed link {key}")
        out = [self.l1[p] for p in kappa_pairs(d)]
        self._kappa_cache[key] = out
        return out

    def as_instance(self) -> SrapInstance:
        """The completed undirected links as a plain instance on the ring."""
        links = [(u, v, cl.cost) for (u, v), cl in sorted(self.l1.items())]
        return build_instance(self.base.n, 0, self.base.terminals, links)

    def is_complete(self) -> bool:
        """Every shortening of every directed link exists at no higher cost."""
        for (x, y), d in self.l3.items():
            lo, hi = min(x, y), max(x, y)
            for s in range(lo + 1, hi):
                other = self.l3.get((s, y))
                if other is None or other.cost > d.cost:
                    return False
        return True


def kappa_pairs(d: DirectedLink) -> list[tuple[int, int]]:
    prov = d.provenance
    if prov is None:
        raise ValueError("directed link carries no provenance")
    if prov.kind in ("shadow", "shortening"):
        return [prov.source]
    if prov.kind == "composition":
        out = []
        for part in prov.source:
            for p in kappa_pairs(part):
                if p not in out:
                    out.append(p)
        return out
    raise ValueError(f"kappa undefined for provenance {prov.kind!r}")


def complete(instance: SrapInstance) -> CompleteInstance:
    l1 = metric_complete_undirected(instance)
    l2 = shadow_complete(l1)
    l3 = metric_complete_directed(l2, instance.n)
    ci = CompleteInstance(instance, l1, l2, l3)
    assert ci.is_complete(), "completion left a shortening missing"
    return ci
