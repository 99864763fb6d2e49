"""Cheapest full components via Dreyfus-Wagner and the gamma-restricted hyper instance."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations

from .feasibility import UnionFind
from .model import HyperLink, InstanceError, Link, SrapInstance

log = logging.getLogger(__name__)

DEFAULT_GAMMA_CAP = 4


def gamma_for(eps: float) -> int:
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    return 2 ** math.ceil(1 / eps)


def _floyd(vertices, adj):
    """All-pairs shortest paths with a next-hop table.

    Labels are (cost, hops) compared lexicographically and updated only on
    strict improvement, so following next hops always terminates even with
    zero-cost links.
    """
    lab = {}
    nxt = {}
    for v in vertices:
        lab[(v, v)] = (0, 0)
        nxt[(v, v)] = v
    for (x, y), c in adj.items():
        if (x, y) not in lab or (c, 1) < lab[(x, y)]:
            lab[(x, y)] = (c, 1)
            nxt[(x, y)] = y
    for k in vertices:
        for i in vertices:
            lik = lab.get((i, k))
            if lik is None or i == k:
                continue
            for j in vertices:
                lkj = lab.get((k, j))
                if lkj is None or j == k:
                    continue
                cand = (lik[0] + lkj[0], lik[1] + lkj[1])
                cur = lab.get((i, j))
                if cur is None or cand < cur:
                    lab[(i, j)] = cand
                    nxt[(i, j)] = nxt[(i, k)]
    dist = {key: val[0] for key, val in lab.items()}
    return dist, nxt


def _path_edges(x, y, nxt):
    out = []
    while x != y:
        z = nxt[(x, y)]
        out.append((min(x, z), max(x, z)))
        x = z
    return out


def _prune_tree(edge_links, required):
    """Spanning tree of the union, then strip leaves outside ``required``."""
    uf = UnionFind()
    tree = []
    for link in sorted(edge_links, key=lambda l: (l.cost, l.u, l.v)):
        uf.add(link.u)
        uf.add(link.v)
        if uf.union(link.u, link.v):
            tree.append(link)
    changed = True
    while changed:
        changed = False
        deg = {}
        for link in tree:
            deg[link.u] = deg.get(link.u, 0) + 1
            deg[link.v] = deg.get(link.v, 0) + 1
        for link in list(tree):
            for end in (link.u, link.v):
                if deg.get(end) == 1 and end not in required:
                    tree.remove(link)
                    changed = True
                    break
            if changed:
                break
    return sorted(tree)


def dreyfus_wagner(links, terminals) -> tuple[int, tuple] | None:
    """Minimum-cost tree in the graph ``links`` spanning ``terminals``.

    Returns ``(cost, tree_links)`` or ``None`` if the terminals are not
    connected.  ``links`` is an iterable of :class:`Link`.
    """
    terms = sorted(set(terminals))
    if len(terms) < 2:
        raise ValueError("need at least two terminals")
    links = list(links)
    by_pair = {}
    for link in links:
        if link.pair not in by_pair or link.cost < by_pair[link.pair].cost:
            by_pair[link.pair] = link
    vertices = sorted({x for link in by_pair.values() for x in link.pair} | set(terms))
    adj = {}
    for (u, v), link in by_pair.items():
        adj[(u, v)] = link.cost
        adj[(v, u)] = link.cost
    dist, nxt = _floyd(vertices, adj)
    t0 = terms[0]
    if any((t0, t) not in dist for t in terms[1:]):
        return None

    p = len(terms)
    last = terms[-1]
    rest = terms[:-1]
    full = (1 << (p - 1)) - 1
    dp = [dict() for _ in range(full + 1)]
    how = [dict() for _ in range(full + 1)]
    for i, t in enumerate(rest):
        for v in vertices:
            d = dist.get((t, v))
            if d is not None:
                dp[1 << i][v] = d
                how[1 << i][v] = ("path", t)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        low = mask & -mask
        table = dp[mask]
        choice = how[mask]
        for v in vertices:
            best = None
            sub = (mask - 1) & mask
            while sub:
                if sub & low and sub != mask:
                    a = dp[sub].get(v)
                    b = dp[mask ^ sub].get(v)
                    if a is not None and b is not None and (best is None or a + b < best[0]):
                        best = (a + b, sub)
                sub = (sub - 1) & mask
            if best is not None:
                table[v] = best[0]
                choice[v] = ("split", best[1])
        # relax through shortest paths
        base = dict(table)
        for v in vertices:
            for u, val in base.items():
                d = dist.get((u, v))
                if d is None or u == v:
                    continue
                if v not in table or val + d < table[v]:
                    table[v] = val + d
                    choice[v] = ("via", u)
    total = dp[full].get(last)
    if total is None:
        return None

    edges = set()

    def collect(mask, v):
        kind, arg = how[mask][v]
        if kind == "path":
            edges.update(_path_edges(arg, v, nxt))
        elif kind == "via":
            edges.update(_path_edges(arg, v, nxt))
            collect(mask, arg)
        else:
            collect(arg, v)
            collect(mask ^ arg, v)

    collect(full, last)
    tree = _prune_tree([by_pair[e] for e in edges], set(terms))
    cost = sum(link.cost for link in tree)
    assert cost <= total, "tree extraction exceeded the DP value"
    return cost, tuple(tree)


@dataclass(frozen=True)
class HyperSrapInstance:
    base: SrapInstance
    links: tuple  # tuple[HyperLink, ...] sorted by (len, nodes)
    gamma: int
    gamma_requested: int | None = None

    @property
    def truncated(self) -> bool:
        return self.gamma_requested is not None and self.gamma_requested > self.gamma


def _component_filter(instance: SrapInstance, A) -> bool:
    """Quick reachability test in G[A + outside]."""
    allowed = set(A) | set(range(instance.n, instance.vertex_count))
    uf = UnionFind(allowed)
    for link in instance.links:
        if link.u in allowed and link.v in allowed:
            uf.union(link.u, link.v)
    roots = {uf.find(a) for a in A}
    return len(roots) == 1


def generate_hyperlinks(instance: SrapInstance, gamma: int, gamma_requested: int | None = None) -> HyperSrapInstance:
    """Price every ring-vertex set of size 2..gamma by its cheapest full component."""
    if gamma < 2:
        raise ValueError("gamma must be at least 2")
    n = instance.n
    outside = set(range(n, instance.vertex_count))
    out = []
    for size in range(2, min(gamma, n) + 1):
        for A in combinations(range(n), size):
            if not _component_filter(instance, A):
                continue
            allowed = set(A) | outside
            sub = [l for l in instance.links if l.u in allowed and l.v in allowed]
            res = dreyfus_wagner(sub, A)
            if res is None:
                continue
            cost, tree = res
            out.append(HyperLink(frozenset(A), cost, tree))
    log.debug("generated %d hyper-links with gamma=%d", len(out), gamma)
    return HyperSrapInstance(instance, tuple(out), gamma, gamma_requested)


def realize_solution(S) -> list[Link]:
    seen = {}
    for h in S:
        if h.realization is None:
            raise InstanceError(f"hyper-link {sorted(h.nodes)} has no realization")
        for link in h.realization:
            seen[link.pair] = link
    return [seen[p] for p in sorted(seen)]
