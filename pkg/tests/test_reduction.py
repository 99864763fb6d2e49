from __future__ import annotations

import random
from itertools import combinations

import pytest

from srap.feasibility import max_flow
from srap.generate import random_sag, random_scap
from srap.model import Link
from srap.oracle import OracleBudget, exact_scap, exact_srap
from srap.reduction import (PreconditionError, ReductionError, build_sag, build_scap, cactus_of_mincuts,
                            lift_solution, normalize_scap, reduce_sag, reduce_scap, unfold_order)

BIG = OracleBudget(max_links=40)

TWO_TRIANGLES = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]


def _cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def _mincuts(vertices, edges, k, root):
    """Every vertex set avoiding the root whose boundary has exactly k edges."""
    rest = [v for v in vertices if v != root]
    out = set()
    for r in range(1, len(rest) + 1):
        for S in combinations(rest, r):
            S = set(S)
            if sum(1 for u, v in edges if (u in S) != (v in S)) == k:
                out.add(frozenset(S))
    return out


def test_normalize_pendant_path():
    inst = build_scap(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)], {0, 1, 2}, [])
    norm = normalize_scap(inst)
    assert norm.rep[3] == norm.rep[4] == 2
    assert norm.core == [0, 1, 2] and norm.outside == []


def test_normalize_detached_triangles():
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (7, 8), (8, 6)]
    norm = normalize_scap(build_scap(9, edges, {0, 1, 2}, []))
    assert norm.rep[3] == norm.rep[4] == norm.rep[5] == 3
    assert norm.rep[6] == norm.rep[7] == norm.rep[8] == 6
    assert norm.outside == [3, 6]


def test_normalize_identity():
    inst = build_scap(4, _cycle(4), {0, 2}, [])
    norm = normalize_scap(inst)
    assert all(norm.rep[v] == v for v in range(4)) and norm.core == [0, 1, 2, 3]


def test_normalize_rejects_bridge_between_terminals():
    with pytest.raises(PreconditionError):
        normalize_scap(build_scap(4, [(0, 1), (1, 2), (2, 0), (2, 3)], {0, 3}, []))


def test_cactus_of_cycle_is_itself():
    cactus = cactus_of_mincuts(range(5), _cycle(5), 2, 0)
    assert cactus.children[0] == [[1, 2, 3, 4]]
    assert unfold_order(cactus) == [0, 1, 2, 3, 4]


def test_cactus_of_two_triangles():
    cactus = cactus_of_mincuts(range(5), TWO_TRIANGLES, 2, 0)
    assert sorted(len(c) for c in cactus.children[0]) == [2, 2]
    assert cactus.size == 5


def test_k4_rejected():
    k4 = [(a, b) for a, b in combinations(range(4), 2)]
    with pytest.raises(PreconditionError):
        reduce_scap(build_scap(4, k4, {0, 1, 2, 3}, [(0, 1, 1)]))


def test_not_k_connected_rejected():
    with pytest.raises(PreconditionError):
        cactus_of_mincuts(range(4), _cycle(4), 3, 0)


def test_single_cycle_unfold():
    red = reduce_sag(build_sag(2, 4, 0, _cycle(4), [(0, 2, 1), (1, 3, 1)]))
    assert red.instance.n == 4 and not red.lift.zero_pairs
    assert exact_srap(red.instance)[0] == 2


def test_two_triangles_unfold():
    red = reduce_sag(build_sag(2, 5, 0, TWO_TRIANGLES, [(1, 3, 2), (2, 4, 3), (1, 4, 1)]))
    assert red.instance.n == 6
    assert red.lift.zero_pairs == frozenset({(0, 3)})
    assert red.lift.occurrences == [0, 1, 2, 0, 3, 4]


def test_scap_two_triangles_opt():
    edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]
    links = [(1, 3, 2), (2, 4, 3), (1, 4, 5), (0, 3, 1)]
    inst = build_scap(5, edges, {1, 3}, links)
    red = reduce_scap(inst)
    opt, sol = exact_srap(red.instance, BIG)
    assert opt == exact_scap(5, edges, {1, 3}, [Link(*l) for l in links], 2)[0]
    lifted = lift_solution(sol, red.lift, inst)
    assert sum(l.cost for l in lifted) == opt


def test_reduce_scap_needs_k2():
    with pytest.raises(ReductionError):
        reduce_scap(build_scap(4, _cycle(4), {0, 1}, [], k=3))


def test_lift_rejects_foreign_link():
    red = reduce_sag(build_sag(2, 4, 0, _cycle(4), [(0, 2, 1), (1, 3, 1)]))
    with pytest.raises(ReductionError):
        lift_solution([(0, 1)], red.lift)


def test_lift_verification_catches_incomplete():
    inst = build_sag(2, 4, 0, _cycle(4), [(0, 2, 1), (1, 3, 1)])
    red = reduce_sag(inst)
    with pytest.raises(ReductionError):
        lift_solution([(0, 2)], red.lift, inst)


@pytest.mark.parametrize("bad", [
    lambda: build_scap(0, [], {0}, []),
    lambda: build_scap(3, [], set(), []),
    lambda: build_scap(3, [(0, 0)], {0}, []),
    lambda: build_scap(3, [], {0}, [(0, 1, 1), (1, 0, 2)]),
    lambda: build_scap(3, [], {0}, [(0, 1, -1)]),
    lambda: build_sag(2, 3, 1, [(0, 3)], []),
    lambda: build_sag(2, 1, 0, [], []),
])
def test_builders_validate(bad):
    with pytest.raises(ReductionError):
        bad()


@pytest.mark.parametrize("seed", range(40))
def test_sweep_cactus_cuts_are_min_cuts(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    sag = random_sag(rng, rng.randint(3, 7), 0, k, 1)
    cactus = cactus_of_mincuts(range(sag.h_vertices), sag.edges, k, 0)
    assert set(cactus.cuts()) == _mincuts(range(sag.h_vertices), sag.edges, k, 0)


@pytest.mark.parametrize("seed", range(30))
def test_sweep_scap_opt_preserved(seed):
    rng = random.Random(seed)
    inst = random_scap(rng, rng.randint(3, 9), rng.randint(8, 14), chords=rng.randint(0, 2))
    opt, _ = exact_scap(inst.num_vertices, inst.edges, inst.terminals, inst.links, 2)
    red = reduce_scap(inst)
    ropt, rsol = exact_srap(red.instance, BIG)
    assert opt == ropt
    assert sum(l.cost for l in lift_solution(rsol, red.lift, inst)) == ropt


@pytest.mark.parametrize("seed", range(30))
def test_sweep_sag_opt_preserved(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3, 4])
    sag = random_sag(rng, rng.randint(3, 7), rng.randint(0, 2), k, rng.randint(8, 14))
    sc = sag.as_scap()
    for v in range(1, sag.h_vertices):
        assert max_flow(sag.edges, 0, v, limit=k) >= k
    opt, _ = exact_scap(sc.num_vertices, sc.edges, sc.terminals, sc.links, k)
    red = reduce_sag(sag)
    ropt, rsol = exact_srap(red.instance, BIG)
    assert opt == ropt
    assert sum(l.cost for l in lift_solution(rsol, red.lift, sag)) == ropt
