"""Exhaustive ground-truth solvers and definitional checkers.

Nothing here relies on the ring-specific theory used by the approximation
algorithms: exact solvers enumerate vertex cuts of the full graph directly
and solve the resulting hitting-set problem by branch and bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .feasibility import UnionFind, verify_edge_connectivity
from .model import DangerousCut, Link, SrapInstance, covers, dangerous_cuts, enters


class OracleBudgetExceeded(RuntimeError):
    pass


class Infeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_links: int = 20
    max_steiner_vertices: int = 9
    max_hyperlinks: int = 12

    def __post_init__(self):
        if min(self.max_links, self.max_steiner_vertices, self.max_hyperlinks) <= 0:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = OracleBudget()


# --- hitting set --------------------------------------------------------------

def _min_hitting_set(masks, costs) -> int | None:
    """Cheapest bitmask over link indices meeting every mask, or None."""
    masks = sorted(set(masks), key=lambda x: (bin(x).count("1"), x))
    if any(m == 0 for m in masks):
        return None
    # drop supersets of other masks: hitting the subset hits the superset
    kept = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    masks = kept
    order = sorted(range(len(costs)), key=lambda i: (costs[i], i))
    min_cost = [min(costs[i] for i in range(len(costs)) if m >> i & 1) for m in masks]
    best = [None, None]

    def lower_bound(chosen):
        lb = 0
        for m, c in zip(masks, min_cost):
            if not m & chosen and c > lb:
                lb = c
        return lb

    def search(chosen, cost, banned):
        if best[0] is not None and cost + lower_bound(chosen) >= best[0]:
            return
        target = None
        for m in masks:
            if not m & chosen:
                free = m & ~banned
                if free == 0:
                    return
                if target is None or bin(free).count("1") < bin(target).count("1"):
                    target = free
        if target is None:
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, chosen
            return
        local_ban = banned
        for i in order:
            if target >> i & 1:
                search(chosen | (1 << i), cost + costs[i], local_ban)
                local_ban |= 1 << i

    search(0, 0, 0)
    return best[1]


def _minimalize(mask, masks, costs):
    for i in sorted(range(len(costs)), key=lambda i: (-costs[i], -i)):
        if mask >> i & 1:
            trial = mask & ~(1 << i)
            if all(m & trial for m in masks):
                mask = trial
    return mask


def _solve_masks(masks, links, budget):
    if len(links) > budget.max_links:
        raise OracleBudgetExceeded(f"{len(links)} links exceed oracle budget {budget.max_links}")
    costs = [l.cost for l in links]
    chosen = _min_hitting_set(masks, costs)
    if chosen is None:
        raise Infeasible("no link subset covers every deficient cut")
    chosen = _minimalize(chosen, masks, costs)
    sol = [links[i] for i in range(len(links)) if chosen >> i & 1]
    return sum(l.cost for l in sol), sol


def srap_cut_masks(instance: SrapInstance) -> list[int]:
    """Link masks crossing each vertex set C = interval + outside subset."""
    n, m = instance.n, instance.m
    links = instance.links
    masks = []
    for i in range(1, n):
        for j in range(i, n):
            if not any(i <= t <= j for t in instance.terminals):
                continue
            for sub in range(1 << m):
                def inside(x, i=i, j=j, sub=sub):
                    return i <= x <= j if x < n else bool(sub >> (x - n) & 1)
                mask = 0
                for idx, l in enumerate(links):
                    if inside(l.u) != inside(l.v):
                        mask |= 1 << idx
                masks.append(mask)
    return masks


def ring_edge_list(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def exact_srap(instance: SrapInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Minimum-cost link set making the ring plus links 3-edge-connected on R."""
    links = list(instance.links)
    cost, sol = _solve_masks(srap_cut_masks(instance), links, budget)
    edges = ring_edge_list(instance.n) + [l.pair for l in sol]
    assert verify_edge_connectivity(edges, instance.terminals, 3), "oracle output failed max-flow check"
    return cost, sol


def exact_scap(num_vertices: int, edges, terminals, links, k: int,
               budget: OracleBudget = DEFAULT_BUDGET):
    """Minimum-cost links raising terminal edge connectivity of (V, edges) from k to k+1."""
    terms = sorted(set(terminals))
    if len(terms) < 2:
        return 0, []
    links = sorted(Link(*l) if not isinstance(l, Link) else l for l in links)
    if len(links) > budget.max_links:
        raise OracleBudgetExceeded(f"{len(links)} links exceed oracle budget {budget.max_links}")
    root = terms[0]
    others = [v for v in range(num_vertices) if v != root]
    edges = list(edges)
    masks = []
    for bits in range(1, 1 << len(others)):
        C = {others[i] for i in range(len(others)) if bits >> i & 1}
        if not any(t in C for t in terms):
            continue
        deg = sum(1 for u, v in edges if (u in C) != (v in C))
        if deg < k:
            raise ValueError(f"graph is not {k}-edge-connected on the terminals")
        if deg > k:
            continue
        mask = 0
        for idx, l in enumerate(links):
            if (l.u in C) != (l.v in C):
                mask |= 1 << idx
        masks.append(mask)
    cost, sol = _solve_masks(masks, links, budget)
    assert verify_edge_connectivity(edges + [l.pair for l in sol], terms, k + 1)
    return cost, sol


# --- steiner trees ------------------------------------------------------------

def steiner_tree_bruteforce(links, terminals, budget: OracleBudget = DEFAULT_BUDGET):
    """Minimum spanning tree over every vertex superset of the terminals.

    A minimum Steiner tree is an MST of its own vertex set, so minimizing
    the MST of G[X] over all X containing the terminals is exact.
    """
    links = list(links)
    terms = set(terminals)
    vertices = sorted({x for l in links for x in l.pair} | terms)
    if len(vertices) > budget.max_steiner_vertices:
        raise OracleBudgetExceeded(f"{len(vertices)} vertices exceed {budget.max_steiner_vertices}")
    extra = [v for v in vertices if v not in terms]
    best = None
    for r in range(len(extra) + 1):
        for X in combinations(extra, r):
            allowed = terms | set(X)
            uf = UnionFind(allowed)
            tree = []
            for l in sorted(links, key=lambda l: (l.cost, l.u, l.v)):
                if l.u in allowed and l.v in allowed and uf.union(l.u, l.v):
                    tree.append(l)
            if len({uf.find(x) for x in allowed}) != 1:
                continue
            cost = sum(l.cost for l in tree)
            if best is None or cost < best[0]:
                best = (cost, tuple(sorted(tree)))
    return best


# --- drop ---------------------------------------------------------------------

def _arc(d):
    return (d.tail, d.head) if hasattr(d, "tail") else tuple(d)


def responsible_definitional(instance: SrapInstance, F0) -> dict:
    """Cut -> responsible arc: it enters C and no other arc on the root path to its tail does."""
    arcs = [_arc(d) for d in F0]
    parent = {}
    for u, v in arcs:
        parent[v] = u
    out = {}
    for C in dangerous_cuts(instance):
        found = []
        for u, v in arcs:
            if not enters((u, v), C):
                continue
            ok = True
            x = u
            while x in parent:
                p = parent[x]
                if enters((p, x), C):
                    ok = False
                    break
                x = p
            if ok:
                found.append((u, v))
        if len(found) != 1:
            raise ValueError(f"cut {C} has {len(found)} responsible arcs")
        out[C] = found[0]
    return out


def brute_force_drop(instance: SrapInstance, F0, K) -> set:
    resp = responsible_definitional(instance, F0)
    K = list(K)
    by_arc = {}
    for C, a in resp.items():
        by_arc.setdefault(a, []).append(C)
    out = set()
    for d in F0:
        a = _arc(d)
        cuts = by_arc.get(a, [])
        if all(any(covers(h, C) for h in K) for C in cuts):
            out.add(a)
    return out


# --- thinness -----------------------------------------------------------------

def is_alpha_thin(instance_or_n, K, alpha: int) -> bool:
    n = instance_or_n.n if isinstance(instance_or_n, SrapInstance) else int(instance_or_n)
    K = list(K)
    count = {}
    for i in range(1, n):
        for j in range(i, n):
            C = DangerousCut(i, j)
            count[(i, j)] = sum(1 for h in K if covers(h, C))
    thin = {}
    for length in range(1, n):
        for i in range(1, n - length + 1):
            j = i + length - 1
            ok = count[(i, j)] <= alpha
            if ok and i < j:
                ok = any(thin[(i, s)] and thin[(s + 1, j)] for s in range(i, j))
            thin[(i, j)] = ok
    return thin[(1, n - 1)]


def laminar_families(i: int, j: int):
    """Every maximal laminar family of sub-intervals of [i, j] (as lists)."""
    if i == j:
        yield [(i, i)]
        return
    for s in range(i, j):
        for left in laminar_families(i, s):
            for right in laminar_families(s + 1, j):
                yield [(i, j)] + left + right


def is_alpha_thin_exhaustive(n: int, K, alpha: int) -> bool:
    K = list(K)
    for fam in laminar_families(1, n - 1):
        if all(sum(1 for h in K if covers(h, DangerousCut(a, b))) <= alpha for a, b in fam):
            return True
    return False


# --- slack and ratio ----------------------------------------------------------

def _check_hyper_budget(hyperlinks, budget):
    if len(hyperlinks) > budget.max_hyperlinks:
        raise OracleBudgetExceeded(f"{len(hyperlinks)} hyper-links exceed {budget.max_hyperlinks}")


def brute_force_max_slack(instance, hyperlinks, F0, gain: dict, alpha: int, weight: int = 1,
                          budget: OracleBudget = DEFAULT_BUDGET):
    """max over alpha-thin K of sum(gain[f] for f in drop(K)) - weight * c(K)."""
    hyperlinks = list(hyperlinks)
    _check_hyper_budget(hyperlinks, budget)
    best = (0, [])
    for r in range(1, len(hyperlinks) + 1):
        for K in combinations(hyperlinks, r):
            if not is_alpha_thin(instance, K, alpha):
                continue
            dropped = brute_force_drop(instance, F0, K)
            val = sum(gain.get(a, 0) for a in dropped) - weight * sum(h.cost for h in K)
            if val > best[0]:
                best = (val, list(K))
    return best


def brute_force_min_ratio(instance, hyperlinks, F0, F_cur, alpha: int,
                          budget: OracleBudget = DEFAULT_BUDGET):
    hyperlinks = list(hyperlinks)
    _check_hyper_budget(hyperlinks, budget)
    cur = dict(F_cur)  # surviving arc -> cost
    best = (None, None)
    for r in range(1, len(hyperlinks) + 1):
        for K in combinations(hyperlinks, r):
            if not is_alpha_thin(instance, K, alpha):
                continue
            denom = sum(cur[a] for a in brute_force_drop(instance, F0, K) if a in cur)
            if denom == 0:
                continue
            ratio = Fraction(sum(h.cost for h in K), denom)
            if best[1] is None or ratio < best[1]:
                best = (list(K), ratio)
    return best
