"""Feasibility checks for hyper-link, directed and mixed solutions.

Also hosts a small augmenting-path max-flow used to certify edge
connectivity of final realized graphs.
"""
from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterable

from .model import DangerousCut, HyperLink, SrapInstance, covers, dangerous_cuts, enters


class UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if repr(ra) < repr(rb):
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True


def _nodes(h) -> frozenset:
    return h.nodes if isinstance(h, HyperLink) else frozenset(h)


def intersecting(h1, h2) -> bool:
    a1, a2 = _nodes(h1), _nodes(h2)
    if a1 & a2:
        return True
    lo1, hi1 = min(a1), max(a1)
    lo2, hi2 = min(a2), max(a2)
    return any(lo2 < a < hi2 for a in a1) and any(lo1 < b < hi1 for b in a2)


class IntersectionGraph:
    """Adjacency over a list of hyper-links (indices into ``links``)."""

    def __init__(self, links):
        self.links = list(links)
        k = len(self.links)
        self.adj = [set() for _ in range(k)]
        self.by_vertex = defaultdict(list)
        for idx, h in enumerate(self.links):
            for a in _nodes(h):
                self.by_vertex[a].append(idx)
        for x in range(k):
            for y in range(x + 1, k):
                if intersecting(self.links[x], self.links[y]):
                    self.adj[x].add(y)
                    self.adj[y].add(x)

    def components(self, subset=None) -> UnionFind:
        idxs = range(len(self.links)) if subset is None else subset
        chosen = set(idxs)
        uf = UnionFind(chosen)
        for x in chosen:
            for y in self.adj[x]:
                if y in chosen:
                    uf.union(x, y)
        return uf


def _hyper_components(links) -> tuple[list, UnionFind]:
    links = list(links)
    uf = UnionFind(range(len(links)))
    for x in range(len(links)):
        for y in range(x + 1, len(links)):
            if intersecting(links[x], links[y]):
                uf.union(x, y)
    return links, uf


def is_feasible_hyper_paths(instance: SrapInstance, S) -> bool:
    """Path criterion: each terminal reaches the root inside the intersection graph."""
    links, uf = _hyper_components(S)
    root_comps = {uf.find(i) for i, h in enumerate(links) if 0 in _nodes(h)}
    for t in instance.terminals:
        if t == 0:
            continue
        if not any(uf.find(i) in root_comps for i, h in enumerate(links) if t in _nodes(h)):
            return False
    return True


def is_feasible_hyper_cuts(instance: SrapInstance, S) -> bool:
    links = [HyperLink(_nodes(h), 0) if not isinstance(h, HyperLink) else h for h in S]
    return all(any(covers(h, c) for h in links) for c in dangerous_cuts(instance))


def is_feasible_hyper(instance: SrapInstance, S) -> bool:
    return is_feasible_hyper_paths(instance, S)


def _arc(d) -> tuple[int, int]:
    return (d.tail, d.head) if hasattr(d, "tail") else (d[0], d[1])


def is_feasible_directed(instance: SrapInstance, F) -> bool:
    return is_feasible_mixed(instance, (), F)


def uncovered_cuts(instance: SrapInstance, S, F) -> list[DangerousCut]:
    nodes = [_nodes(h) for h in S]
    arcs = [_arc(d) for d in F]
    out = []
    for c in dangerous_cuts(instance):
        if any(enters(a, c) for a in arcs):
            continue
        if any(any(x in c for x in A) and any(x not in c for x in A) for A in nodes):
            continue
        out.append(c)
    return out


def is_feasible_mixed(instance: SrapInstance, S, F) -> bool:
    return not uncovered_cuts(instance, S, F)


# --- max-flow -------------------------------------------------------------

def max_flow(edges, source, sink, limit: int | None = None) -> int:
    """Undirected unit-capacity max-flow; parallel edges add capacity.

    Stops early once ``limit`` units have been routed.
    """
    if source == sink:
        raise ValueError("source equals sink")
    cap = defaultdict(int)
    nbrs = defaultdict(set)
    for u, v in edges:
        if u == v:
            continue
        cap[(u, v)] += 1
        cap[(v, u)] += 1
        nbrs[u].add(v)
        nbrs[v].add(u)
    flow = 0
    while limit is None or flow < limit:
        prev = {source: None}
        queue = deque([source])
        while queue and sink not in prev:
            x = queue.popleft()
            for y in sorted(nbrs[x]):
                if y not in prev and cap[(x, y)] > 0:
                    prev[y] = x
                    queue.append(y)
        if sink not in prev:
            break
        y = sink
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
    return flow


def verify_edge_connectivity(edges, terminals, k: int) -> bool:
    """True iff every pair of terminals is joined by k edge-disjoint paths.

    Local edge connectivity satisfies lambda(a,c) >= min(lambda(a,b), lambda(b,c)),
    so testing one fixed terminal against the rest suffices.
    """
    terms = sorted(set(terminals))
    if len(terms) < 2:
        return True
    edges = list(edges)
    base = terms[0]
    return all(max_flow(edges, base, t, limit=k) >= k for t in terms[1:])
