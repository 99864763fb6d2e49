from __future__ import annotations

import pytest

from srap.completion import complete
from srap.feasibility import is_feasible_directed
from srap.generate import random_srap_seeded
from srap.model import Link, build_instance
from srap.oracle import exact_srap
from srap.rspecial import (DirectedCycle, NotFeasible, build_terminal_cycle, check_r_special, euler_cycle,
                           full_components, merge_cycles, r_special_violations, shortcut, two_approx_rspecial)


def test_r6_merge_example():
    merged = merge_cycles(DirectedCycle((0, 3)), DirectedCycle((2, 4)))
    assert merged.seq == (0, 3, 4, 2)


def test_merge_shared_vertex():
    merged = merge_cycles(DirectedCycle((0, 2)), DirectedCycle((2, 4)))
    assert merged.seq == (0, 2, 4, 2)


def test_merge_rejects_non_intersecting():
    with pytest.raises(ValueError):
        merge_cycles(DirectedCycle((0, 1)), DirectedCycle((3, 4)))


def test_shortcut_drops_nonterminals_and_repeats():
    assert shortcut(DirectedCycle((0, 5, 1, 1, 2, 0)), {0, 1, 2}).seq == (0, 1, 2)


def test_full_components_split_at_ring():
    inst = build_instance(4, 2, {0, 1, 2, 3}, [(1, 4, 1), (4, 2, 1), (2, 5, 1), (5, 3, 1), (0, 3, 1)])
    comps = full_components(inst, inst.links)
    assert sorted(sorted(l.pair for l in c) for c in comps) == [[(0, 3)], [(1, 4), (2, 4)], [(2, 5), (3, 5)]]


def test_euler_cycle_of_star():
    inst_links = [Link(1, 4, 1), Link(2, 4, 1), Link(3, 4, 1)]
    assert sorted(euler_cycle(inst_links, 4).nodes) == [1, 2, 3]


def test_r6_terminal_cycle():
    inst = build_instance(6, 0, {0, 2, 3, 4}, [(0, 3, 1), (2, 4, 1)])
    cyc = build_terminal_cycle(inst, complete(inst), inst.links)
    assert cyc.seq == (0, 3, 4, 2)


def test_unreachable_terminal():
    inst = build_instance(4, 0, {0, 1, 2, 3}, [(1, 3, 1), (0, 2, 1)])
    with pytest.raises(NotFeasible):
        build_terminal_cycle(inst, complete(inst), [Link(1, 3, 1)])


def test_r4_two_approx(r4):
    rep = two_approx_rspecial(r4, complete(r4), r4.links)
    assert rep.cost <= 2 * rep.source_cost
    assert check_r_special(r4, rep.arcs)
    assert is_feasible_directed(r4, rep.arcs)


def test_violation_messages(r4):
    assert r_special_violations(r4, [(0, 1), (1, 2), (2, 3)]) == []
    assert "not an arborescence" in r_special_violations(r4, [(0, 1), (1, 2)])
    assert any("cross" in m for m in r_special_violations(r4, [(0, 2), (2, 1), (1, 3)]))
    assert any("two out-arcs" in m for m in r_special_violations(r4, [(0, 1), (1, 2), (1, 3)]))


def test_r4s_endpoint_outside_r(r4s):
    assert "endpoint outside R" in r_special_violations(r4s, [(0, 2), (2, 1), (0, 3)])


@pytest.mark.parametrize("seed", range(40))
def test_sweep_two_approx(seed):
    inst = random_srap_seeded(seed, 7, 2, 12, all_terminals=seed % 2 == 0)
    opt, links = exact_srap(inst)
    ci = complete(inst)
    rep = two_approx_rspecial(inst, ci, links)
    assert rep.cost <= rep.cycle_cost <= 2 * opt
    assert check_r_special(inst, rep.arcs)
    assert is_feasible_directed(inst, rep.arcs)
    for kind, a, b in rep.moves:
        assert kind in ("delete", "shorten")
