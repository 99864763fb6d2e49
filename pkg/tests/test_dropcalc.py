from __future__ import annotations

import random

import pytest

from conftest import PATH_F0, hyper
from srap.completion import complete
from srap.dropcalc import (DropCalculator, artificial_extension, components, drop, drop_connected_lca,
                           responsibility, v_bad_interval)
from srap.generate import random_srap_seeded
from srap.oracle import brute_force_drop, exact_srap, responsible_definitional
from srap.rspecial import two_approx_rspecial
from srap.steiner import generate_hyperlinks


def test_r4s_extension(r4s):
    F0 = [(0, 1), (1, 3)]
    ext = artificial_extension(r4s, F0)
    assert ext.artificial == ((3, 2),)
    assert ext.lca([2, 3]) == 3
    assert ext.lca([1, 3]) == 1
    assert v_bad_interval(r4s, F0, 3) == (2, 3)
    with pytest.raises(ValueError):
        v_bad_interval(r4s, F0, 2)


def test_r4_path_intervals(r4):
    assert v_bad_interval(r4, PATH_F0, 1) == (1, 3)
    assert v_bad_interval(r4, PATH_F0, 3) == (3, 3)


def test_r4_path_interval_and_responsibility(r4):
    from srap.model import DangerousCut
    assert v_bad_interval(r4, PATH_F0, 2) == (2, 3)
    idx = responsibility(r4, PATH_F0)
    assert sorted((c.i, c.j) for c in idx.by_arc[(1, 2)]) == [(2, 2), (2, 3)]
    assert idx.by_cut[DangerousCut(1, 3)] == (0, 1)


def test_r4_path_drops(r4):
    assert drop(r4, PATH_F0, [hyper({1, 3})]) == {(2, 3)}
    assert drop(r4, PATH_F0, [hyper({0, 2})]) == {(1, 2)}
    assert drop(r4, PATH_F0, [hyper({1, 3}), hyper({0, 2})]) == {(0, 1), (1, 2), (2, 3)}
    assert drop(r4, PATH_F0, []) == set()


def test_connected_lca_matches(r4):
    S = [hyper({1, 3}), hyper({0, 2})]
    assert drop_connected_lca(r4, PATH_F0, S) == drop(r4, PATH_F0, S)
    with pytest.raises(ValueError):
        drop_connected_lca(r4, PATH_F0, [hyper({1, 2}), hyper({0, 3}), hyper({5, 6})])


def test_components():
    comps = components([hyper({0, 3}), hyper({2, 4}), hyper({5, 6})])
    assert sorted(sorted(vs) for _, vs in comps) == [[0, 2, 3, 4], [5, 6]]


def test_responsibility_rejects_non_rspecial(r4):
    with pytest.raises(ValueError):
        responsibility(r4, [(0, 1), (0, 2), (0, 3)] + [(1, 2)])


def _case(seed):
    inst = random_srap_seeded(seed, 7, 2, 12, all_terminals=seed % 3 == 0)
    _, links = exact_srap(inst)
    F0 = two_approx_rspecial(inst, complete(inst), links).arcs
    return inst, F0


@pytest.mark.parametrize("seed", range(30))
def test_sweep_responsibility_matches_definition(seed):
    inst, F0 = _case(seed)
    idx = responsibility(inst, F0)
    ref = responsible_definitional(inst, F0)
    assert {C: a for C, a in idx.by_cut.items()} == {C: a for C, a in ref.items()}
    ext = artificial_extension(inst, F0)
    assert responsibility(inst, F0, ext).by_cut == idx.by_cut


@pytest.mark.parametrize("seed", range(30))
def test_sweep_drop_matches_bruteforce(seed):
    inst, F0 = _case(seed)
    calc = DropCalculator(inst, F0)
    hs = list(generate_hyperlinks(inst, 3).links)
    rng = random.Random(seed)
    for _ in range(15):
        K = rng.sample(hs, min(len(hs), rng.randint(1, 4)))
        assert calc.drop(K) == brute_force_drop(inst, F0, K)
        comps = components(K)
        if len(comps) == 1:
            assert calc.drop_connected_lca(K) == calc.drop(K)
