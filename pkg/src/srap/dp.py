"""Interval dynamic program for the best alpha-thin hyper-link set.

Objective: maximize sum(gain[f] for f in drop(K)) - weight * c(K) over
alpha-thin K.  Hyper-links are bitmask-indexed.  A table entry for ring
interval C is keyed by (B, parts): B is the set of chosen hyper-links
covering C, and each part is (mask, phi, psi) for one intersection-graph
component meeting B, with phi the extended lca of the component's vertices
and psi whether phi is itself one of those vertices.

Gain bookkeeping: a vertex v of C inside a component is paid for as soon as
it is a strict descendant of the component's current lca.  If v is the lca
itself (psi = 1) payment is deferred; it is collected when a later merge
lifts the component's lca above v.
"""
from __future__ import annotations

import copy
import logging
from collections import defaultdict
from fractions import Fraction
from itertools import combinations

from .dropcalc import DropCalculator
from .feasibility import intersecting

log = logging.getLogger(__name__)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SlackDP:
    def __init__(self, instance, hyperlinks, F0, alpha: int, calc: DropCalculator | None = None):
        if alpha < 1:
            raise ValueError("alpha must be at least 1")
        self.instance = instance
        self.n = instance.n
        self.links = list(hyperlinks)
        self.alpha = alpha
        self.calc = calc or DropCalculator(instance, F0)
        self.ext = self.calc.ext
        n = self.n
        k = len(self.links)
        self.cost = [h.cost for h in self.links]
        self.adj = [0] * k
        for a in range(k):
            for b in range(a + 1, k):
                if intersecting(self.links[a].nodes, self.links[b].nodes):
                    self.adj[a] |= 1 << b
                    self.adj[b] |= 1 << a
        self.by_vertex = defaultdict(list)
        for idx, h in enumerate(self.links):
            for v in h.nodes:
                self.by_vertex[v].append(idx)
        self.touch = {}
        self.cover = {}
        for i in range(1, n):
            for j in range(i, n):
                t = c = 0
                for idx, h in enumerate(self.links):
                    inside = sum(1 for x in h.nodes if i <= x <= j)
                    if inside:
                        t |= 1 << idx
                        if inside < len(h.nodes):
                            c |= 1 << idx
                self.touch[(i, j)] = t
                self.cover[(i, j)] = c
        self.lca = [[self.ext.lca2(a, b) for b in range(n)] for a in range(n)]
        self._adj_cache = {}
        self._cost_cache = {}
        self.stats = {}

    def rebind(self, F0) -> "SlackDP":
        """Same hyper-links against a different R-special solution."""
        out = copy.copy(self)
        out.calc = DropCalculator(self.instance, F0)
        out.ext = out.calc.ext
        out.lca = [[out.ext.lca2(a, b) for b in range(self.n)] for a in range(self.n)]
        out.stats = {}
        return out

    def _adj_of(self, mask):
        out = self._adj_cache.get(mask)
        if out is None:
            out = 0
            for b in _bits(mask):
                out |= self.adj[b]
            self._adj_cache[mask] = out
        return out

    def _mask_cost(self, mask):
        out = self._cost_cache.get(mask)
        if out is None:
            out = sum(self.cost[b] for b in _bits(mask))
            self._cost_cache[mask] = out
        return out

    def _prune(self, table, C, g, gout):
        """Drop entries that cannot end above the empty set.

        Later merges can only add gains of vertices outside C and the
        deferred gains of lca vertices inside C, so that sum bounds every
        completion.
        """
        lo, hi = C
        out = {}
        for key, (val, w) in table.items():
            bound = val + gout
            for _, phi, psi in key[1]:
                if psi and lo <= phi <= hi:
                    bound += g[phi]
            if bound > 0:
                out[key] = (val, w)
        return out

    def _base(self, v, g, weight):
        table = {(0, ()): (0, 0)}
        lca = self.lca
        for r in range(1, self.alpha + 1):
            for combo in combinations(self.by_vertex.get(v, ()), r):
                B = 0
                vs = set()
                c = 0
                for b in combo:
                    B |= 1 << b
                    vs |= self.links[b].nodes
                    c += self.cost[b]
                phi = None
                for x in vs:
                    phi = x if phi is None else lca[phi][x]
                psi = phi in vs
                val = (g[v] if v != phi else 0) - weight * c
                key = (B, ((B, phi, psi),))
                cur = table.get(key)
                if cur is None or val > cur[0]:
                    table[key] = (val, B)
        return table

    def _merge_into(self, out, T1, T2, C1, C2, g, weight):
        i1, j1 = C1
        i2, j2 = C2
        touch1 = self.touch[C1]
        touch2 = self.touch[C2]
        coverC = self.cover[(i1, j2)]
        alpha = self.alpha
        lca = self.lca
        groups = defaultdict(list)
        for key, val in T2.items():
            groups[key[0] & touch1].append((key, val))
        for key1, (v1, w1) in T1.items():
            B1, parts1 = key1
            partner = groups.get(B1 & touch2)
            if not partner:
                continue
            for (B2, parts2), (v2, w2) in partner:
                B = (B1 | B2) & coverC
                if B.bit_count() > alpha:
                    continue
                # union parts across sides; same-side parts never touch
                p1 = len(parts1)
                items = list(parts1) + list(parts2)
                parent = list(range(len(items)))

                def find(x):
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    return x

                for a in range(p1):
                    ma = items[a][0]
                    adja = self._adj_of(ma)
                    for b in range(p1, len(items)):
                        mb = items[b][0]
                        if ma & mb or adja & mb:
                            ra, rb = find(a), find(b)
                            if ra != rb:
                                parent[ra] = rb
                comp = defaultdict(list)
                for idx in range(len(items)):
                    comp[find(idx)].append(idx)
                gain = 0
                new_parts = []
                for members in comp.values():
                    M = 0
                    phi = None
                    for idx in members:
                        m, f, _ = items[idx]
                        M |= m
                        phi = f if phi is None else lca[phi][f]
                    psi = False
                    for idx in members:
                        _, f, s = items[idx]
                        if s and f == phi:
                            psi = True
                        elif s:
                            lo, hi = C1 if idx < p1 else C2
                            if lo <= f <= hi:
                                gain += g[f]
                    part = M & B
                    if part:
                        new_parts.append((part, phi, psi))
                new_parts.sort()
                val = v1 + v2 + weight * self._mask_cost(B1 & B2) + gain
                key = (B, tuple(new_parts))
                cur = out.get(key)
                if cur is None or val > cur[0]:
                    out[key] = (val, w1 | w2)

    def maximize(self, gain: dict, weight: int = 1):
        """Return (value, K) for the best alpha-thin K; K = [] when nothing beats 0."""
        n = self.n
        g = [0] * n
        for v, a in self.calc.into.items():
            g[v] = gain.get(a, 0)
        prefix = [0]
        for v in range(n):
            prefix.append(prefix[-1] + g[v])
        total = prefix[n]

        def gout(i, j):
            return total - (prefix[j + 1] - prefix[i])

        tables = {}
        for v in range(1, n):
            tables[(v, v)] = self._prune(self._base(v, g, weight), (v, v), g, gout(v, v))
        for length in range(2, n):
            for i in range(1, n - length + 1):
                j = i + length - 1
                out = {}
                for s in range(i, j):
                    self._merge_into(out, tables[(i, s)], tables[(s + 1, j)], (i, s), (s + 1, j), g, weight)
                tables[(i, j)] = self._prune(out, (i, j), g, gout(i, j))
        final = tables[(1, n - 1)]
        self.stats = {"entries": sum(len(t) for t in tables.values()), "final": len(final)}
        best_val, best_mask = 0, 0
        for key, (val, mask) in final.items():
            if val > best_val or (val == best_val and mask and best_mask and mask < best_mask):
                best_val, best_mask = val, mask
        return best_val, [self.links[b] for b in _bits(best_mask)]


def maximize_slack(instance, hyperlinks, F0, gain: dict, alpha: int, weight: int = 1):
    return SlackDP(instance, hyperlinks, F0, alpha).maximize(gain, weight)


def _drop_cost(calc, K, cur_cost):
    return sum(cur_cost.get(a, 0) for a in calc.drop(K))


def min_ratio_thin_set(dp: SlackDP, F_cur: dict):
    """Exact minimizer of c(K) / c(drop(K) restricted to F_cur) by Dinkelbach steps.

    ``F_cur`` maps surviving arcs to their costs.  Returns ``(K, ratio)`` or
    ``(None, None)`` when no alpha-thin set drops positive cost.
    """
    if not F_cur:
        return None, None
    calc = dp.calc
    best_K, rho = None, None
    for h in dp.links:
        d = _drop_cost(calc, [h], F_cur)
        if d > 0:
            r = Fraction(h.cost, d)
            if rho is None or r < rho:
                best_K, rho = [h], r
    if rho is None:
        rho = Fraction(sum(h.cost for h in dp.links) + 1)
    steps = 0
    while True:
        steps += 1
        N, D = rho.numerator, rho.denominator
        gain = {a: N * c for a, c in F_cur.items()}
        val, K = dp.maximize(gain, D)
        if val <= 0:
            break
        d = _drop_cost(calc, K, F_cur)
        assert d > 0, "positive slack with empty drop"
        new = Fraction(sum(h.cost for h in K), d)
        assert new < rho, "ratio did not decrease"
        best_K, rho = K, new
    log.debug("dinkelbach finished in %d steps at ratio %s", steps, rho)
    if best_K is None:
        return None, None
    return best_K, rho
