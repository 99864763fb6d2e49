"""Potential-driven local search for SRAP when every ring vertex is a terminal.

Each solution link carries a witness set of one or two arcs; the union of the
witness sets is kept feasible and R-special.  All 1/2 and 3/2 factors are
handled by doubling, so every quantity stays an integer.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .completion import CompleteInstance, complete
from .dp import SlackDP
from .feasibility import is_feasible_directed, verify_edge_connectivity
from .greedy import DEFAULT_ALPHA_CAP, greedy_cover, initial_solution
from .model import SrapInstance
from .oracle import DEFAULT_BUDGET, OracleBudget, ring_edge_list
from .rspecial import check_r_special, euler_tour, full_components, make_nonshortenable, _spanning_tree
from .steiner import DEFAULT_GAMMA_CAP, gamma_for, generate_hyperlinks

log = logging.getLogger(__name__)


class NotAllTerminals(ValueError):
    pass


@dataclass
class Witnessed:
    link: object
    W: set


@dataclass
class WitnessMap:
    """Solution links (a multiset) with their witness sets."""

    entries: list = field(default_factory=list)

    def arcs(self) -> set:
        out = set()
        for e in self.entries:
            out |= e.W
        return out

    def owners(self, arc) -> list:
        return [e for e in self.entries if arc in e.W]

    def links(self) -> list:
        return [e.link for e in self.entries]

    def purge(self):
        self.entries = [e for e in self.entries if e.W]

    def check(self):
        for e in self.entries:
            assert 1 <= len(e.W) <= 2, f"witness set of {e.link} has size {len(e.W)}"


def params_for(eps: float) -> tuple[float, int, int]:
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    eps_p = (eps / 2) / (1.5 + eps / 2)
    return eps_p, gamma_for(eps_p), math.ceil(8 / eps)


def _require_all_terminals(instance: SrapInstance):
    if not instance.all_terminals:
        raise NotAllTerminals("local search needs every ring vertex to be a terminal")


def fresh_witnesses(instance: SrapInstance, links) -> list[Witnessed]:
    """Witness sets read off the Euler tour of each full component.

    Links that close a cycle inside a component get no witness and are left out.
    """
    out = []
    for comp in full_components(instance, links):
        tree = _spanning_tree(comp)
        by_pair = {l.pair: l for l in tree}
        order, segments = euler_tour(tree, instance.n)
        k = len(order)
        W = {p: set() for p in by_pair}
        for i, seg in enumerate(segments):
            arc = (order[i], order[(i + 1) % k])
            for p in seg:
                W[p].add(arc)
        for p in sorted(by_pair):
            out.append(Witnessed(by_pair[p], W[p]))
    return out


def _shorten(instance: SrapInstance, ci: CompleteInstance, wm: WitnessMap):
    """Make the witness union R-special; shortened arcs replace the old ones in place."""

    def on_move(kind, a, b):
        for e in wm.entries:
            if a in e.W:
                e.W.discard(a)
                if kind == "shorten":
                    e.W.add(b)

    make_nonshortenable(instance, ci, wm.arcs(), on_move=on_move)
    wm.purge()
    wm.check()


def initial_witnesses(instance: SrapInstance, S, ci: CompleteInstance | None = None) -> tuple[list, WitnessMap]:
    _require_all_terminals(instance)
    ci = ci or complete(instance)
    wm = WitnessMap(fresh_witnesses(instance, S))
    assert is_feasible_directed(instance, wm.arcs()), "initial witness union is infeasible"
    _shorten(instance, ci, wm)
    assert is_feasible_directed(instance, wm.arcs())
    return wm.links(), wm


def potential(wm: WitnessMap) -> int:
    """Twice the potential: 2c(f) for one witness, 3c(f) for two."""
    total = 0
    for e in wm.entries:
        if len(e.W) == 1:
            total += 2 * e.link.cost
        elif len(e.W) == 2:
            total += 3 * e.link.cost
    return total


def witness_cost(wm: WitnessMap) -> dict:
    """Twice the witness cost of every arc: each owner f adds 2c(f)/|W_f|."""
    out = {}
    for e in wm.entries:
        share = 2 * e.link.cost // len(e.W)
        for a in e.W:
            out[a] = out.get(a, 0) + share
    return out


@dataclass
class Move:
    chosen: list
    cost: int
    dropped: list
    value: int  # twice the slack
    phi_before: int
    phi_after: int


@dataclass
class LocalSearchResult:
    links: list
    cost: int
    verified: bool
    params: dict
    start_cost: int
    start_kind: str
    phi_history: list  # doubled potentials, one per applied move plus the start
    moves: list = field(default_factory=list)
    stopped: str = ""

    @property
    def iterations(self) -> int:
        return len(self.moves)


def _accept(phi_new: int, phi_old: int, eps, n: int) -> bool:
    bound = 12 * n
    return phi_new * bound <= (bound - Fraction(eps)) * phi_old


def local_search(instance: SrapInstance, eps: float = 1.0, *, gamma_cap: int = DEFAULT_GAMMA_CAP,
                 alpha: int | None = None, alpha_cap: int = DEFAULT_ALPHA_CAP,
                 budget: OracleBudget = DEFAULT_BUDGET, start: str = "auto",
                 max_iterations: int | None = None) -> LocalSearchResult:
    _require_all_terminals(instance)
    eps_p, gamma_theory, alpha_theory = params_for(eps)
    gamma = max(2, min(gamma_theory, gamma_cap))
    a = alpha if alpha is not None else min(alpha_theory, alpha_cap)
    ci = complete(instance)
    hyper = generate_hyperlinks(instance, gamma, gamma_theory)
    if start == "auto":
        S0, start_kind = initial_solution(instance, hyper.links, budget)
    elif start == "greedy":
        S0, start_kind = greedy_cover(instance, hyper.links), "greedy-cover"
    elif start == "exact":
        S0, start_kind = initial_solution(instance, hyper.links, OracleBudget(max_links=10 ** 9))
    else:
        raise ValueError(f"unknown start {start!r}")
    params = {"epsilon": eps, "epsilon_prime": eps_p, "gamma": gamma, "gamma_theory": gamma_theory,
              "alpha": a, "alpha_theory": alpha_theory, "hyperlinks": len(hyper.links)}

    _, wm = initial_witnesses(instance, S0, ci)
    phi = potential(wm)
    history = [phi]
    moves = []
    base_dp = SlackDP(instance, hyper.links, sorted(wm.arcs()), a)
    stopped = "no improving move"
    while True:
        if max_iterations is not None and len(moves) >= max_iterations:
            stopped = "iteration limit"
            break
        dp = base_dp.rebind(sorted(wm.arcs())) if moves else base_dp
        val, Z = dp.maximize(witness_cost(wm), 3)
        if val <= 0:
            break
        dropped = dp.calc.drop(Z)
        trial = WitnessMap([Witnessed(e.link, e.W - dropped) for e in wm.entries])
        trial.purge()
        for h in Z:
            trial.entries.extend(fresh_witnesses(instance, h.realization))
        assert is_feasible_directed(instance, trial.arcs()), "move broke feasibility"
        _shorten(instance, ci, trial)
        new_phi = potential(trial)
        if not _accept(new_phi, phi, eps, instance.n):
            stopped = "potential decrease below threshold"
            break
        moves.append(Move([h.key() for h in Z], sum(h.cost for h in Z), sorted(dropped), val, phi, new_phi))
        log.debug("move %d: phi %d -> %d", len(moves), phi, new_phi)
        wm, phi = trial, new_phi
        history.append(phi)
        assert check_r_special(instance, sorted(wm.arcs())), "witness union is not R-special"

    links = sorted(set(wm.links()))
    edges = ring_edge_list(instance.n) + [l.pair for l in links]
    verified = verify_edge_connectivity(edges, instance.terminals, 3)
    return LocalSearchResult(links, sum(l.cost for l in links), verified, params,
                             sum(l.cost for l in S0), start_kind, history, moves, stopped)
