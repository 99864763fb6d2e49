"""Which arcs of an R-special solution become redundant once hyper-links are added.

An arc (u, v) is responsible for a dangerous cut C when v is in C and C lies
inside the v-bad interval I_v, the largest ring interval around v free of
terminals that are not descendants of v.  The arc can be dropped exactly
when every cut it is responsible for is covered by the added hyper-links.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .feasibility import UnionFind, intersecting
from .model import SrapInstance, dangerous_cuts


def _arc(d):
    return (d.tail, d.head) if hasattr(d, "tail") else tuple(d)


def _descendants(arcs, v) -> set:
    children = defaultdict(list)
    for a, b in arcs:
        children[a].append(b)
    out = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in children[x]:
            if y not in out:
                out.add(y)
                stack.append(y)
    return out


def v_bad_interval(instance: SrapInstance, F0, v: int) -> tuple[int, int]:
    if v not in instance.terminals:
        raise ValueError(f"{v} is not a terminal")
    arcs = [_arc(d) for d in F0]
    desc = _descendants(arcs, v)
    bad = instance.terminals - desc
    lo = v
    while lo - 1 >= 0 and lo - 1 not in bad:
        lo -= 1
    hi = v
    while hi + 1 < instance.n and hi + 1 not in bad:
        hi += 1
    return (lo, hi)


@dataclass(frozen=True)
class ArtificialExtension:
    parent: dict  # ring vertex -> parent in the extended arborescence (root absent)
    intervals: dict  # terminal -> I_v
    chains: dict  # terminal -> (left chain, right chain), each ordered outward
    artificial: tuple  # artificial arcs
    depth: dict

    def ancestors(self, x) -> list:
        out = [x]
        while x in self.parent:
            x = self.parent[x]
            out.append(x)
        return out

    def lca(self, nodes) -> int:
        nodes = list(nodes)
        if not nodes:
            raise ValueError("lca of an empty set")
        cur = nodes[0]
        for y in nodes[1:]:
            cur = self.lca2(cur, y)
        return cur

    def lca2(self, a, b) -> int:
        da, db = self.depth[a], self.depth[b]
        while da > db:
            a = self.parent[a]
            da -= 1
        while db > da:
            b = self.parent[b]
            db -= 1
        while a != b:
            a, b = self.parent[a], self.parent[b]
        return a


def artificial_extension(instance: SrapInstance, F0) -> ArtificialExtension:
    arcs = [_arc(d) for d in F0]
    R = sorted(instance.terminals)
    intervals = {v: v_bad_interval(instance, arcs, v) for v in R}
    fam = list(intervals.items())
    for i in range(len(fam)):
        for j in range(i + 1, len(fam)):
            (a, (l1, h1)), (b, (l2, h2)) = fam[i], fam[j]
            disjoint = h1 < l2 or h2 < l1
            nested = (l1 <= l2 and h2 <= h1) or (l2 <= l1 and h1 <= h2)
            assert disjoint or nested, f"bad intervals of {a} and {b} are not laminar"
            assert (l1, h1) != (l2, h2), "two terminals share a bad interval"
    owner = {}
    for x in range(instance.n):
        best = None
        for v, (lo, hi) in intervals.items():
            if lo <= x <= hi and (best is None or hi - lo < best[1] - best[0]):
                best = (lo, hi, v)
        owner[x] = best[2]
    parent = {}
    for u, v in arcs:
        parent[v] = u
    chains = {}
    artificial = []
    for v in R:
        members = [x for x in range(instance.n) if owner[x] == v and x != v]
        left = sorted((x for x in members if x < v), reverse=True)
        right = sorted(x for x in members if x > v)
        chains[v] = (tuple(left), tuple(right))
        for chain in (left, right):
            prev = v
            for x in chain:
                parent[x] = prev
                artificial.append((prev, x))
                prev = x
    depth = {}
    for x in range(instance.n):
        d = 0
        y = x
        while y in parent:
            y = parent[y]
            d += 1
        assert y == 0, f"vertex {x} does not reach the root"
        depth[x] = d
    return ArtificialExtension(parent, intervals, chains, tuple(artificial), depth)


@dataclass(frozen=True)
class ResponsibilityIndex:
    by_arc: dict  # arc -> list of cuts
    by_cut: dict  # cut -> arc


def responsibility(instance: SrapInstance, F0, ext: ArtificialExtension | None = None) -> ResponsibilityIndex:
    arcs = [_arc(d) for d in F0]
    intervals = ext.intervals if ext else {v: v_bad_interval(instance, arcs, v) for v in instance.terminals}
    by_cut = {}
    by_arc = {a: [] for a in arcs}
    for C in dangerous_cuts(instance):
        found = [(u, v) for u, v in arcs
                 if C.i <= v <= C.j and intervals[v][0] <= C.i and C.j <= intervals[v][1]]
        if len(found) != 1:
            raise ValueError(f"cut {C} has {len(found)} responsible arcs; F0 is not R-special")
        by_cut[C] = found[0]
        by_arc[found[0]].append(C)
    for a, cuts in by_arc.items():
        if not cuts:
            raise ValueError(f"arc {a} is responsible for no cut; F0 is not R-special")
    return ResponsibilityIndex(by_arc, by_cut)


def _nodes(h):
    return h.nodes if hasattr(h, "nodes") else frozenset(h)


def components(K) -> list[tuple[list, frozenset]]:
    """Connected components of the intersection graph on K as (members, vertex set)."""
    K = list(K)
    uf = UnionFind(range(len(K)))
    for i in range(len(K)):
        for j in range(i + 1, len(K)):
            if intersecting(_nodes(K[i]), _nodes(K[j])):
                uf.union(i, j)
    groups = defaultdict(list)
    for i in range(len(K)):
        groups[uf.find(i)].append(K[i])
    out = []
    for members in groups.values():
        vs = frozenset().union(*(_nodes(h) for h in members))
        out.append((members, vs))
    return out


class DropCalculator:
    """Cached drop queries against a fixed R-special solution."""

    def __init__(self, instance: SrapInstance, F0):
        self.instance = instance
        self.arcs = sorted(_arc(d) for d in F0)
        self.ext = artificial_extension(instance, self.arcs)
        self.into = {v: (u, v) for u, v in self.arcs}

    def interval(self, v):
        return self.ext.intervals[v]

    def drop(self, K) -> set:
        out = set()
        for _, vs in components(K):
            for v in vs:
                a = self.into.get(v)
                if a is None:
                    continue
                lo, hi = self.ext.intervals[v]
                if any(not lo <= x <= hi for x in vs):
                    out.add(a)
        return out

    def drop_connected_lca(self, S) -> set:
        comps = components(S)
        if len(comps) != 1:
            raise ValueError("hyper-link set is not connected in the intersection graph")
        vs = comps[0][1]
        top = self.ext.lca(vs)
        return {self.into[v] for v in vs if v in self.into and v != top}


def drop(instance: SrapInstance, F0, K) -> set:
    return DropCalculator(instance, F0).drop(K)


def drop_connected_lca(instance: SrapInstance, F0, S) -> set:
    return DropCalculator(instance, F0).drop_connected_lca(S)


def extended_lca(ext: ArtificialExtension, nodes) -> int:
    return ext.lca(nodes)

