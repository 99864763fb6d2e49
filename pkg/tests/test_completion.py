from __future__ import annotations

import pytest

from conftest import hyper
from srap.completion import complete, kappa_pairs
from srap.generate import random_srap_seeded
from srap.model import DirectedLink, build_instance, covers, dangerous_cuts, enters


def _shortest(instance):
    """Bellman-Ford style relaxation over the undirected link graph."""
    INF = float("inf")
    N = instance.vertex_count
    d = [[0 if a == b else INF for b in range(N)] for a in range(N)]
    for l in instance.links:
        d[l.u][l.v] = d[l.v][l.u] = min(d[l.u][l.v], l.cost)
    for _ in range(N):
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    if d[a][c] + d[c][b] < d[a][b]:
                        d[a][b] = d[a][c] + d[c][b]
    return d


def test_r4_kappa(r4):
    ci = complete(r4)
    assert [cl.pair for cl in ci.kappa((2, 3))] == [(1, 3)]
    assert {cl.pair for cl in ci.kappa((3, 2))} == {(1, 3), (0, 2)}
    assert ci.cost(2, 3) == 1 and ci.cost(3, 2) == 2


def test_r4_directed_costs(r4):
    ci = complete(r4)
    got = {a: d.cost for a, d in ci.l3.items()}
    assert got == {(0, 1): 2, (0, 2): 1, (0, 3): 2, (1, 0): 1, (1, 2): 1, (1, 3): 1,
                   (2, 0): 1, (2, 1): 1, (2, 3): 1, (3, 0): 2, (3, 1): 1, (3, 2): 2}
    assert ci.is_complete()


def test_kappa_needs_finite_arc():
    inst = build_instance(4, 0, {0, 1, 2, 3}, [(1, 2, 1)])
    ci = complete(inst)
    with pytest.raises(KeyError):
        ci.kappa((0, 3))
    with pytest.raises(ValueError):
        kappa_pairs(DirectedLink(1, 2, 1))


def test_outside_vertices_shortcut():
    inst = build_instance(4, 1, {0, 1, 2, 3}, [(1, 4, 1), (4, 3, 2), (1, 3, 5)])
    cl = complete(inst).l1[(1, 3)]
    assert cl.cost == 3 and cl.path == (1, 4, 3)
    assert [l.pair for l in cl.originals] == [(1, 4), (3, 4)]


def test_zero_cost_links_terminate():
    inst = build_instance(5, 1, {0, 1, 2, 3, 4}, [(1, 5, 0), (5, 3, 0), (3, 4, 0), (0, 2, 0)])
    ci = complete(inst)
    assert ci.l1[(1, 4)].cost == 0 and ci.is_complete()


@pytest.mark.parametrize("seed", range(30))
def test_sweep_completion_properties(seed):
    inst = random_srap_seeded(seed, 6, 2, 10)
    ci = complete(inst)
    d = _shortest(inst)
    n = inst.n
    for (u, v), cl in ci.l1.items():
        assert cl.cost == d[u][v] == sum(l.cost for l in cl.originals)
    for (x, y), arc in ci.l3.items():
        for z in range(n):
            if (x, z) in ci.l3 and (z, y) in ci.l3 and z not in (x, y):
                assert arc.cost <= ci.l3[(x, z)].cost + ci.l3[(z, y)].cost
        ks = ci.kappa((x, y))
        assert sum(k.cost for k in ks) <= arc.cost
        hs = [hyper({k.u, k.v}) for k in ks]
        for C in dangerous_cuts(inst):
            if enters((x, y), C):
                assert any(covers(h, C) for h in hs), (seed, x, y, C)
    assert ci.is_complete()


@pytest.mark.parametrize("seed", range(20))
def test_sweep_completion_fixpoint(seed):
    inst = random_srap_seeded(seed, 7, 2, 12)
    once = complete(inst)
    twice = complete(once.as_instance())
    assert {a: d.cost for a, d in once.l3.items()} == {a: d.cost for a, d in twice.l3.items()}
    assert {p: cl.cost for p, cl in once.l1.items()} == {p: cl.cost for p, cl in twice.l1.items()}
