"""Construction of a cheap R-special directed solution.

Pipeline: split a feasible undirected solution into full components, turn
each into a directed cycle along its Euler tour, merge the cycles into one
through the root, shortcut non-terminals, then delete or shorten arcs until
no such move keeps feasibility.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field

from .completion import CompleteInstance
from .feasibility import UnionFind, intersecting, is_feasible_directed
from .model import SrapInstance, dangerous_cuts, enters

log = logging.getLogger(__name__)


class NotFeasible(ValueError):
    pass


@dataclass(frozen=True)
class DirectedCycle:
    seq: tuple  # ring vertices a1..ak, closing arc (ak, a1) implied

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.seq)

    def arcs(self) -> list[tuple[int, int]]:
        k = len(self.seq)
        if k < 2:
            return []
        return [(self.seq[i], self.seq[(i + 1) % k]) for i in range(k)]

    def cost(self, ci: CompleteInstance) -> int:
        return sum(ci.cost(u, v) for u, v in self.arcs())


# --- full components and Euler tours ----------------------------------------

def full_components(instance: SrapInstance, links) -> list[list]:
    """Group links into full components (joined through outside vertices only)."""
    n = instance.n
    links = sorted(links)
    uf = UnionFind(range(len(links)))
    by_outside = defaultdict(list)
    for idx, l in enumerate(links):
        for x in l.pair:
            if x >= n:
                by_outside[x].append(idx)
    for idxs in by_outside.values():
        for i in idxs[1:]:
            uf.union(idxs[0], i)
    groups = defaultdict(list)
    for idx in range(len(links)):
        groups[uf.find(idx)].append(links[idx])
    out = []
    for g in groups.values():
        ring = {x for l in g for x in l.pair if x < n}
        if len(ring) >= 2:
            out.append(sorted(g))
    out.sort(key=lambda g: g[0].pair)
    return out


def _spanning_tree(links):
    uf = UnionFind()
    tree = []
    for l in sorted(links, key=lambda l: (l.cost, l.u, l.v)):
        uf.add(l.u)
        uf.add(l.v)
        if uf.union(l.u, l.v):
            tree.append(l)
    return tree


def euler_tour(tree_links, n: int):
    """Ring vertices in first-visit order and the links walked between them.

    Returns ``(order, segments)``; ``segments[i]`` lists link pairs traversed
    from ``order[i]`` to ``order[i+1]`` (wrapping to the start).
    """
    tree = _spanning_tree(tree_links)
    adj = defaultdict(list)
    for l in tree:
        adj[l.u].append(l.v)
        adj[l.v].append(l.u)
    for x in adj:
        adj[x].sort()
    ring = sorted(x for x in adj if x < n)
    start = ring[0]
    order = [start]
    segments = [[]]
    seen = {start}

    def walk(x, parent):
        for y in adj[x]:
            if y == parent:
                continue
            segments[-1].append((min(x, y), max(x, y)))
            if y < n and y not in seen:
                seen.add(y)
                order.append(y)
                segments.append([])
            walk(y, x)
            segments[-1].append((min(x, y), max(x, y)))

    walk(start, None)
    return order, segments


def euler_cycle(tree_links, n: int) -> DirectedCycle:
    order, _ = euler_tour(tree_links, n)
    return DirectedCycle(tuple(order))


# --- merging ------------------------------------------------------------------

def _leaving(arcs, lo, hi):
    for u, v in arcs:
        if lo <= u <= hi and not lo <= v <= hi:
            return (u, v)
    return None


def merge_cycles(FS: DirectedCycle, FA: DirectedCycle) -> DirectedCycle:
    S, A = FS.nodes, FA.nodes
    if not intersecting(S, A):
        raise ValueError("cycles are not intersecting as hyper-links")
    shared = S & A
    if shared:
        seq = list(FS.seq)
        x = next(v for v in seq if v in shared)
        pos = seq.index(x)
        a = list(FA.seq)
        k = a.index(x)
        rotated = a[k:] + a[:k]
        return DirectedCycle(tuple(seq[:pos] + rotated + seq[pos:]))
    lo, hi = min(A), max(A)
    arc = _leaving(FS.arcs(), lo, hi)
    if arc is None:
        raise ValueError("no arc of the first cycle leaves the second cycle's interval")
    si, si1 = arc
    lo2, hi2 = min(si, si1), max(si, si1)
    arc2 = _leaving(FA.arcs(), lo2, hi2)
    assert arc2 is not None, "merge construction found no leaving arc"
    aj, aj1 = arc2
    s = list(FS.seq)
    i = next(p for p in range(len(s)) if s[p] == si and s[(p + 1) % len(s)] == si1)
    a = list(FA.seq)
    j1 = next(p for p in range(len(a)) if a[p] == aj1 and a[p - 1] == aj)
    a_rot = a[j1:] + a[:j1]  # a_{j+1} .. a_j
    seq = s[:i + 1] + a_rot + s[i + 1:]
    return DirectedCycle(tuple(seq))


def shortcut(cycle: DirectedCycle, terminals) -> DirectedCycle:
    seq = [v for v in cycle.seq if v in terminals]
    out = []
    for v in seq:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return DirectedCycle(tuple(out))


def build_terminal_cycle(instance: SrapInstance, ci: CompleteInstance, links) -> DirectedCycle:
    comps = full_components(instance, links)
    cycles = [euler_cycle(g, instance.n) for g in comps]
    start = next((i for i, c in enumerate(cycles) if 0 in c.nodes), None)
    if start is None:
        if len(instance.terminals) == 1:
            return DirectedCycle((0,))
        raise NotFeasible("no full component touches the root")
    current = cycles[start]
    pending = [i for i in range(len(cycles)) if i != start]
    while pending:
        pick = next((i for i in pending if intersecting(current.nodes, cycles[i].nodes)), None)
        if pick is None:
            break
        before = current.cost(ci) + cycles[pick].cost(ci)
        current = merge_cycles(current, cycles[pick])
        assert current.cost(ci) <= before
        pending.remove(pick)
    if not instance.terminals <= current.nodes:
        raise NotFeasible("solution does not reach every terminal")
    result = shortcut(current, instance.terminals)
    if not is_feasible_directed(instance, result.arcs()):
        raise NotFeasible("terminal cycle is not feasible")
    return result


# --- delete / shorten -----------------------------------------------------------

class CutCounter:
    """Number of arcs entering each dangerous cut."""

    def __init__(self, instance: SrapInstance, arcs):
        self.cuts = dangerous_cuts(instance)
        self.count = [0] * len(self.cuts)
        for a in arcs:
            self.add(a)

    def entered(self, a):
        return [i for i, c in enumerate(self.cuts) if enters(a, c)]

    def add(self, a):
        for i in self.entered(a):
            self.count[i] += 1

    def remove(self, a):
        for i in self.entered(a):
            self.count[i] -= 1

    def can_delete(self, a) -> bool:
        return all(self.count[i] >= 2 for i in self.entered(a))

    def can_replace(self, a, b) -> bool:
        keep = set(self.entered(b))
        return all(self.count[i] >= 2 for i in self.entered(a) if i not in keep)


def make_nonshortenable(instance: SrapInstance, ci: CompleteInstance, arcs, on_move=None):
    """Delete or shorten arcs until neither keeps feasibility.

    ``on_move(kind, arc, new_arc)`` is called after each applied move with
    ``kind`` in ``{"delete", "shorten"}``.  Returns the final arc set.
    """
    F = set(arcs)
    for u, v in F:
        if u not in instance.terminals or v not in instance.terminals:
            raise ValueError(f"arc {(u, v)} touches a non-terminal")
    if not is_feasible_directed(instance, F):
        raise NotFeasible("input directed solution is infeasible")
    counter = CutCounter(instance, F)
    terms = sorted(instance.terminals)
    changed = True
    while changed:
        changed = False
        for a in sorted(F, key=lambda a: (-ci.cost(*a), a)):
            if counter.can_delete(a):
                F.remove(a)
                counter.remove(a)
                if on_move:
                    on_move("delete", a, None)
                changed = True
                break
            u, v = a
            between = [s for s in terms if min(u, v) < s < max(u, v)]
            between.sort(key=lambda s: abs(s - v))
            for s in between:
                b = (s, v)
                if b in F:
                    continue
                c = ci.cost(*b)
                if c is None or c > ci.cost(*a):
                    continue
                if counter.can_replace(a, b):
                    F.remove(a)
                    counter.remove(a)
                    F.add(b)
                    counter.add(b)
                    if on_move:
                        on_move("shorten", a, b)
                    changed = True
                    break
            if changed:
                break
    return F


# --- predicate --------------------------------------------------------------------

def _cross(a, b) -> bool:
    if set(a) & set(b):
        return False
    lo, hi = min(a), max(a)
    inside = [lo < x < hi for x in b]
    return inside[0] != inside[1]


def r_special_violations(instance: SrapInstance, arcs) -> list[str]:
    arcs = sorted(set(arcs))
    R = instance.terminals
    out = []
    if any(u not in R or v not in R for u, v in arcs):
        out.append("endpoint outside R")
    indeg = defaultdict(int)
    children = defaultdict(list)
    for u, v in arcs:
        indeg[v] += 1
        children[u].append(v)
    if indeg[0] != 0 or any(indeg[t] != 1 for t in R if t != 0) or len(arcs) != len(R) - 1:
        out.append("not an arborescence")
    else:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in children[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != set(R):
            out.append("not an arborescence")
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if _cross(arcs[i], arcs[j]):
                out.append(f"arcs {arcs[i]} and {arcs[j]} cross")
    for u, heads in children.items():
        if sum(1 for h in heads if h > u) > 1 or sum(1 for h in heads if h < u) > 1:
            out.append(f"vertex {u} has two out-arcs in one direction")
    return out


def check_r_special(instance: SrapInstance, arcs) -> bool:
    return not r_special_violations(instance, arcs)


@dataclass
class RSpecialReport:
    arcs: list
    cost: int
    source_cost: int
    cycle_cost: int
    moves: list = field(default_factory=list)


def two_approx_rspecial(instance: SrapInstance, ci: CompleteInstance, links) -> RSpecialReport:
    links = list(links)
    src = sum(l.cost for l in links)
    cycle = build_terminal_cycle(instance, ci, links)
    cyc_cost = cycle.cost(ci) if len(cycle.seq) > 1 else 0
    moves = []
    F = make_nonshortenable(instance, ci, cycle.arcs(),
                            on_move=lambda k, a, b: moves.append((k, a, b)))
    arcs = sorted(F)
    cost = sum(ci.cost(u, v) for u, v in arcs)
    assert cost <= cyc_cost <= 2 * src, "R-special construction exceeded twice the input cost"
    if not check_r_special(instance, arcs):
        raise AssertionError(f"not R-special: {r_special_violations(instance, arcs)}")
    return RSpecialReport(arcs, cost, src, cyc_cost, moves)
