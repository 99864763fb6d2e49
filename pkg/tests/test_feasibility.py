from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import hyper
from srap.feasibility import (IntersectionGraph, UnionFind, intersecting, is_feasible_directed,
                              is_feasible_hyper, is_feasible_hyper_cuts, is_feasible_hyper_paths,
                              is_feasible_mixed, max_flow, verify_edge_connectivity)
from srap.generate import random_srap_seeded
from srap.oracle import ring_edge_list
from srap.steiner import generate_hyperlinks, realize_solution


def test_intersecting_examples():
    assert intersecting({1, 3}, {0, 2})
    assert intersecting({0, 3}, {2, 4})
    assert not intersecting({0, 1}, {3, 4})
    assert intersecting({0, 1}, {1, 4})


def test_intersection_graph_symmetric():
    hs = [hyper({0, 3}), hyper({2, 4}), hyper({0, 1}), hyper({5, 6})]
    g = IntersectionGraph(hs)
    uf = g.components()
    assert uf.find(0) == uf.find(1) == uf.find(2)
    assert uf.find(3) != uf.find(0)


def test_hyper_feasibility_examples(r4, r4s):
    both = [hyper({1, 3}), hyper({0, 2})]
    assert is_feasible_hyper(r4, both) and is_feasible_hyper_cuts(r4, both)
    assert not is_feasible_hyper(r4, [hyper({1, 3})])
    assert not is_feasible_hyper(r4s, [hyper({1, 3})])


def test_directed_examples(r4):
    assert is_feasible_directed(r4, [(0, 1), (1, 2), (2, 3)])
    assert not is_feasible_directed(r4, [(0, 1), (1, 2)])
    assert not is_feasible_directed(r4, [])


def test_mixed_examples(r4):
    assert is_feasible_mixed(r4, [hyper({0, 2})], [(0, 1), (2, 3)])
    assert is_feasible_mixed(r4, [], [(0, 1), (1, 2), (2, 3)])
    assert not is_feasible_mixed(r4, [hyper({1, 3})], [])


def test_verify_examples():
    assert verify_edge_connectivity([("a", "b"), ("b", "c"), ("c", "a")], ["a", "b", "c"], 2)
    assert not verify_edge_connectivity([("a", "b"), ("b", "c")], ["a", "b", "c"], 2)
    assert verify_edge_connectivity(ring_edge_list(4) + [(1, 3), (0, 2)], range(4), 3)


def test_max_flow_parallel_edges():
    assert max_flow([(0, 1), (0, 1), (1, 2)], 0, 1) == 2
    assert max_flow([(0, 1), (0, 1), (0, 1)], 0, 1, limit=2) == 2
    with pytest.raises(ValueError):
        max_flow([(0, 1)], 0, 0)


def test_union_find():
    uf = UnionFind([1, 2, 3])
    assert uf.union(1, 2) and not uf.union(2, 1)
    assert uf.find(1) == uf.find(2) != uf.find(3)


@st.composite
def hyper_instances(draw):
    n = draw(st.integers(3, 8))
    terms = draw(st.sets(st.integers(1, n - 1), min_size=1)) | {0}
    from srap.model import build_instance
    inst = build_instance(n, 0, terms, [])
    S = [hyper(draw(st.sets(st.integers(0, n - 1), min_size=2, max_size=4)))
         for _ in range(draw(st.integers(0, 5)))]
    return inst, S


@settings(max_examples=300, deadline=None)
@given(hyper_instances())
def test_path_criterion_matches_cut_coverage(case):
    inst, S = case
    assert is_feasible_hyper_paths(inst, S) == is_feasible_hyper_cuts(inst, S)


@settings(max_examples=100, deadline=None)
@given(hyper_instances(), st.sets(st.integers(0, 7), min_size=2, max_size=3))
def test_adding_hyperlink_keeps_feasibility(case, extra):
    inst, S = case
    extra = {x for x in extra if x < inst.n}
    if len(extra) < 2 or not is_feasible_hyper(inst, S):
        return
    assert is_feasible_hyper(inst, S + [hyper(extra)])


@pytest.mark.parametrize("seed", range(40))
def test_hyper_feasibility_matches_flow(seed):
    inst = random_srap_seeded(seed, 6, 2, 10)
    hs = generate_hyperlinks(inst, 3).links
    rng = random.Random(seed)
    S = rng.sample(hs, min(len(hs), rng.randint(1, 5)))
    links = realize_solution(S)
    flow = verify_edge_connectivity(ring_edge_list(inst.n) + [l.pair for l in links], inst.terminals, 3)
    from srap.rspecial import full_components
    from srap.model import HyperLink
    joined = [HyperLink(frozenset(x for l in comp for x in l.pair if x < inst.n), sum(l.cost for l in comp))
              for comp in full_components(inst, links)]
    assert is_feasible_hyper(inst, joined) == flow
