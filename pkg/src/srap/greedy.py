"""Relative greedy augmentation against a fixed R-special directed solution."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .completion import CompleteInstance, complete
from .dp import SlackDP, min_ratio_thin_set
from .dropcalc import DropCalculator
from .feasibility import is_feasible_hyper_cuts, is_feasible_mixed, verify_edge_connectivity
from .model import HyperLink, SrapInstance, dangerous_cuts, covers
from .oracle import DEFAULT_BUDGET, OracleBudget, exact_srap, ring_edge_list
from .rspecial import two_approx_rspecial
from .steiner import DEFAULT_GAMMA_CAP, gamma_for, generate_hyperlinks, realize_solution

log = logging.getLogger(__name__)

DEFAULT_ALPHA_CAP = 2


class InfeasibleInstance(ValueError):
    pass


def params_for(eps: float) -> tuple[float, int, int]:
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    eps_p = (eps / 2) / (1 + math.log(2) + eps / 2)
    return eps_p, gamma_for(eps_p), 4 * math.ceil(4 / eps)


def greedy_cover(instance: SrapInstance, hyperlinks) -> list:
    """Cheapest-per-new-cut hyper-link cover, realized and pruned to a minimal link set."""
    cuts = dangerous_cuts(instance)
    todo = set(range(len(cuts)))
    chosen = []
    hyperlinks = list(hyperlinks)
    while todo:
        best = None
        for h in hyperlinks:
            new = sum(1 for i in todo if covers(h, cuts[i]))
            if new == 0:
                continue
            key = (Fraction(h.cost, new), h.key())
            if best is None or key < best[0]:
                best = (key, h)
        if best is None:
            raise InfeasibleInstance("hyper-links cannot cover every dangerous cut")
        h = best[1]
        chosen.append(h)
        todo = {i for i in todo if not covers(h, cuts[i])}
    links = realize_solution(chosen)
    ring = ring_edge_list(instance.n)
    for l in sorted(links, key=lambda l: (-l.cost, l.pair)):
        trial = [x for x in links if x != l]
        if verify_edge_connectivity(ring + [x.pair for x in trial], instance.terminals, 3):
            links = trial
    return links


def initial_solution(instance: SrapInstance, hyperlinks=None, budget: OracleBudget = DEFAULT_BUDGET):
    """Exact optimum when the oracle budget allows, else the greedy cover."""
    if len(instance.links) <= budget.max_links:
        from .oracle import Infeasible
        try:
            return exact_srap(instance, budget)[1], "exact"
        except Infeasible as exc:
            raise InfeasibleInstance(str(exc)) from exc
    if hyperlinks is None:
        hyperlinks = generate_hyperlinks(instance, DEFAULT_GAMMA_CAP).links
    return greedy_cover(instance, hyperlinks), "greedy-cover"


def kappa_hyperlinks(ci: CompleteInstance, arc) -> list[HyperLink]:
    return [HyperLink(frozenset(cl.pair), cl.cost, cl.originals) for cl in ci.kappa(arc)]


@dataclass
class Iteration:
    kind: str  # "dp" or "kappa"
    chosen: list
    cost: int
    dropped: list
    dropped_cost: int
    ratio: Fraction | None


@dataclass
class SolveResult:
    links: list
    cost: int
    verified: bool
    params: dict
    f0_cost: int
    f0_arcs: list
    start_cost: int
    start_kind: str
    iterations: list = field(default_factory=list)


def relative_greedy(instance: SrapInstance, eps: float = 2.0, *, gamma_cap: int = DEFAULT_GAMMA_CAP,
                    alpha: int | None = None, alpha_cap: int = DEFAULT_ALPHA_CAP,
                    budget: OracleBudget = DEFAULT_BUDGET) -> SolveResult:
    eps_p, gamma_theory, alpha_theory = params_for(eps)
    gamma = max(2, min(gamma_theory, gamma_cap))
    a = alpha if alpha is not None else min(alpha_theory, alpha_cap)
    ci = complete(instance)
    hyper = generate_hyperlinks(instance, gamma, gamma_theory)
    start, start_kind = initial_solution(instance, hyper.links, budget)
    report = two_approx_rspecial(instance, ci, start)
    F0 = report.arcs
    arc_cost = {f: ci.cost(*f) for f in F0}
    calc = DropCalculator(instance, F0)
    dp = SlackDP(instance, hyper.links, F0, a, calc)
    params = {"epsilon": eps, "epsilon_prime": eps_p, "gamma": gamma, "gamma_theory": gamma_theory,
              "alpha": a, "alpha_theory": alpha_theory, "hyperlinks": len(hyper.links)}
    if hyper.truncated:
        log.info("gamma truncated from %d to %d", gamma_theory, gamma)

    F_cur = dict(arc_cost)
    S = {}
    iterations = []
    while F_cur:
        K, ratio = min_ratio_thin_set(dp, F_cur)
        kind = "dp"
        if K is None or ratio > 1:
            kind = "kappa"
            f = min(F_cur, key=lambda f: (-(F_cur[f] - sum(cl.cost for cl in ci.kappa(f))), f))
            K = kappa_hyperlinks(ci, f)
            ratio = None
        dropped = sorted(a_ for a_ in calc.drop(K) if a_ in F_cur)
        assert dropped, "iteration made no progress"
        if kind == "kappa":
            assert f in dropped
        d_cost = sum(F_cur[x] for x in dropped)
        for x in dropped:
            del F_cur[x]
        for h in K:
            S.setdefault(h.key(), h)
        assert is_feasible_mixed(instance, list(S.values()), list(F_cur)), "mixed solution lost feasibility"
        iterations.append(Iteration(kind, [h.key() for h in K], sum(h.cost for h in K),
                                    dropped, d_cost, ratio))
        log.debug("iteration %d: %s ratio=%s dropped=%s", len(iterations), kind, ratio, dropped)

    assert is_feasible_hyper_cuts(instance, list(S.values()))
    links = realize_solution(S.values())
    verified = verify_edge_connectivity(ring_edge_list(instance.n) + [l.pair for l in links],
                                        instance.terminals, 3)
    return SolveResult(links, sum(l.cost for l in links), verified, params, report.cost, F0,
                       sum(l.cost for l in start), start_kind, iterations)
