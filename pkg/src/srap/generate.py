"""Seeded random instance generators.

Every generated instance embeds a hidden spanning tree over all vertices as
links, which makes the instance feasible.
"""
from __future__ import annotations

import random

from .model import SrapInstance, build_instance


def random_srap(rng: random.Random, n: int, m: int, links: int, *, all_terminals: bool = False,
                terminal_prob: float = 0.6, max_cost: int = 9) -> SrapInstance:
    if n < 3:
        raise ValueError("n must be at least 3")
    total = n + m
    terminals = {0}
    for v in range(1, n):
        if all_terminals or rng.random() < terminal_prob:
            terminals.add(v)
    if len(terminals) == 1:
        terminals.add(rng.randrange(1, n))
    order = list(range(total))
    rng.shuffle(order)
    chosen = {}
    for idx in range(1, total):
        u = order[idx]
        v = order[rng.randrange(idx)]
        chosen[(min(u, v), max(u, v))] = rng.randint(1, max_cost)
    all_pairs = [(u, v) for u in range(total) for v in range(u + 1, total)]
    rng.shuffle(all_pairs)
    for p in all_pairs:
        if len(chosen) >= max(links, total - 1):
            break
        if p not in chosen:
            chosen[p] = rng.randint(1, max_cost)
    return build_instance(n, m, terminals, [(u, v, c) for (u, v), c in sorted(chosen.items())])


def random_srap_seeded(seed: int, n: int, m: int, links: int, **kw) -> SrapInstance:
    return random_srap(random.Random(seed), n, m, links, **kw)


def _random_links(rng, total, count, max_cost):
    order = list(range(total))
    rng.shuffle(order)
    chosen = {}
    for idx in range(1, total):
        u, v = order[idx], order[rng.randrange(idx)]
        chosen[(min(u, v), max(u, v))] = rng.randint(1, max_cost)
    pairs = [(u, v) for u in range(total) for v in range(u + 1, total)]
    rng.shuffle(pairs)
    for p in pairs:
        if len(chosen) >= count:
            break
        chosen.setdefault(p, rng.randint(1, max_cost))
    return [(u, v, c) for (u, v), c in sorted(chosen.items())]


def random_scap(rng: random.Random, num_vertices: int, links: int, *, chords: int = 1,
                max_cost: int = 9):
    """Steiner 2-edge-connected graph with pendant and detached Steiner parts.

    A spanning tree of links is always embedded, so the instance is feasible.
    """
    from .feasibility import max_flow
    from .reduction import build_scap

    if num_vertices < 3:
        raise ValueError("need at least 3 vertices")
    verts = list(range(num_vertices))
    rng.shuffle(verts)
    core_size = rng.randint(3, num_vertices)
    core, rest = verts[:core_size], verts[core_size:]
    edges = [(core[i], core[(i + 1) % core_size]) for i in range(core_size)]
    for _ in range(chords):
        u, v = rng.sample(core, 2)
        trial = edges + [(u, v)]
        # keep some 2-edge cut in the core
        if any(max_flow(trial, core[0], w, limit=3) == 2 for w in core[1:]):
            edges = trial
    attached = list(core)
    for x in rest:
        kind = rng.random()
        if kind < 0.5:
            edges.append((x, rng.choice(attached)))
            attached.append(x)
        elif kind < 0.75 and len(attached) >= 2:
            a, b = rng.sample(attached, 2)
            edges += [(x, a), (x, b)]
            attached.append(x)
    k_terms = rng.randint(2, core_size)
    terminals = rng.sample(core, k_terms)
    return build_scap(num_vertices, edges, terminals, _random_links(rng, num_vertices, links, max_cost), 2)


def random_sag(rng: random.Random, h_vertices: int, extra_vertices: int, k: int, links: int, *,
               max_cost: int = 9):
    """k-edge-connected H grown from a cycle by random edges, plus random links."""
    from .feasibility import max_flow
    from .reduction import build_sag

    order = list(range(h_vertices))
    rng.shuffle(order)
    edges = [(order[i], order[(i + 1) % h_vertices]) for i in range(h_vertices)]

    def weakest():
        best = None
        for v in range(1, h_vertices):
            f = max_flow(edges, 0, v, limit=k)
            if f < k and (best is None or f < best[0]):
                best = (f, v)
        return best

    while (w := weakest()) is not None:
        _, v = w
        u = rng.choice([x for x in range(h_vertices) if x != v])
        edges.append((u, v))
    total = h_vertices + extra_vertices
    return build_sag(k, h_vertices, extra_vertices, edges, _random_links(rng, total, links, max_cost))
