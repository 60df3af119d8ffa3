"""Backward-recursion superhedging on a chosen set of paths.

Working backwards from the payoff on the target set, each level-set group
solves a small LP: the least cash that, together with some holdings in the
assets over the next step, dominates the values already computed for the
group's children.  Chaining the local hedges gives a pathwise superhedge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .constraints import ONE, ZERO, terminal_gain
from .lp import INF, NEG_INF, LinearProgram, format_extended, solve
from .market import DomainError, Market, Payoff, project_support

__all__ = [
    "LocalHedge",
    "HedgePlan",
    "Replication",
    "local_superhedge",
    "superhedge",
    "price",
    "check_replicable",
    "resolve_target",
]


@dataclass(frozen=True)
class LocalHedge:
    """Least cash and holdings dominating a set of one-step targets.

    ``weights`` are the LP multipliers of the constraint rows: a
    probability on the rows under which increments have zero mean and the
    targets average to ``cash``.  They certify that no smaller cash works.
    """

    cash: object
    holdings: tuple
    weights: Optional[tuple] = None


def local_superhedge(increments: Sequence, targets: Sequence, assets: Optional[int] = None) -> LocalHedge:
    """Minimize ``x`` subject to ``x + H . inc_i >= target_i`` for every row.

    Rows whose target is ``-inf`` impose nothing and are dropped.  With no
    rows left the cash is ``-inf``; it is also ``-inf`` when the LP is
    unbounded below.
    """
    if assets is None:
        if not increments:
            raise ValueError("assets is required when there are no increments")
        assets = len(increments[0])
    rows = []
    kept = []
    for k, (inc, tgt) in enumerate(zip(increments, targets)):
        if tgt == INF:
            raise ValueError("infinite target")
        if tgt == NEG_INF:
            continue
        rows.append(([ONE] + list(inc), ">=", tgt))
        kept.append(k)
    zero = (ZERO,) * assets
    if not rows:
        return LocalHedge(NEG_INF, zero)
    obj = [ONE] + [ZERO] * assets
    out = solve(LinearProgram(obj, rows, [(None, None)] * (assets + 1)))
    if out.status == "unbounded":
        return LocalHedge(NEG_INF, zero)
    weights = [ZERO] * len(targets)
    for k, y in zip(kept, out.dual):
        weights[k] = y
    return LocalHedge(out.value, tuple(out.solution[1:]), tuple(weights))


@dataclass(frozen=True)
class HedgePlan:
    """Value function and strategy from the backward recursion.

    ``values[(t, g)]`` is the cash needed on level-set group ``g`` at time
    ``t`` (``-inf`` where the target set does not pass); ``strategy[(t, g)]``
    holds the asset holdings carried over step ``t`` from group ``g`` at
    ``t - 1``; ``supports[t]`` is the projected target set at ``t``.
    """

    market: Market
    payoff: Payoff
    target: frozenset
    values: dict
    strategy: dict
    root_prices: dict
    supports: tuple

    def wealth(self, i: int, t: Optional[int] = None):
        """Root cash plus trading gains up to ``t`` along path ``i``."""
        m = self.market
        t = m.steps if t is None else t
        x0 = self.root_prices[m.levels.group_of[0][i]]
        if x0 == NEG_INF:
            return NEG_INF
        partial = {k: v for k, v in self.strategy.items() if k[0] <= t}
        return x0 + terminal_gain(m, partial, i)

    def verify(self) -> bool:
        """Pathwise dominance on the target set, checked exactly."""
        for i in self.target:
            w = self.wealth(i)
            if w != NEG_INF and w < self.payoff.values[i]:
                return False
        return True


def resolve_target(market: Market, target="omega-star") -> frozenset:
    """Turn ``"omega-star"``, ``"omega-phi"``, ``"all"`` or a set of indices into indices."""
    from .polar import compute_omega_phi, compute_omega_star_iterative

    if isinstance(target, str):
        if target == "all":
            return frozenset(range(market.n_paths))
        if target == "omega-star":
            return compute_omega_star_iterative(market).omega_star
        if target == "omega-phi":
            return compute_omega_phi(market).omega_star
        raise ValueError(f"unknown target {target!r}")
    return frozenset(target)


def superhedge(market: Market, g: Payoff, target) -> HedgePlan:
    """Cheapest dynamic superhedge of ``g`` on the paths in ``target``.

    ``target`` is a set of path indices or one of the names accepted by
    :func:`resolve_target`.
    """
    target = resolve_target(market, target)
    if not target:
        raise DomainError("empty target set")
    if len(g.values) != market.n_paths:
        raise ValueError("payoff length must equal the number of paths")
    levels = market.levels
    T = market.steps
    d = market.assets
    supports = [None] * (T + 1)
    supports[T] = target
    for t in range(T, 0, -1):
        supports[t - 1] = project_support(levels, supports[t], t - 1)

    values = {}
    for c, members in enumerate(levels.groups[T]):
        hit = [g.values[i] for i in members if i in target]
        values[(T, c)] = max(hit) if hit else NEG_INF

    strategy = {}
    zero = (ZERO,) * d
    for t in range(T, 0, -1):
        for grp, members in enumerate(levels.groups[t - 1]):
            live = [i for i in members if i in supports[t]]
            if not live:
                values[(t - 1, grp)] = NEG_INF
                strategy[(t, grp)] = zero
                continue
            kids = sorted({levels.group_of[t][i] for i in live})
            incs = [market.paths[levels.groups[t][c][0]].increment(t) for c in kids]
            local = local_superhedge(incs, [values[(t, c)] for c in kids], d)
            values[(t - 1, grp)] = local.cash
            strategy[(t, grp)] = local.holdings

    roots = {grp: values[(0, grp)] for grp in range(len(levels.groups[0]))}
    _fill_unbounded_nodes(market, values, strategy, roots, supports)
    plan = HedgePlan(market, g, target, values, strategy, roots, tuple(supports))
    if not plan.verify():
        raise ArithmeticError("superhedge failed its own pathwise check")
    return plan


def _fill_unbounded_nodes(market, values, strategy, roots, supports):
    """Pick holdings at ``-inf`` nodes reached with finite wealth.

    Where a local LP is unbounded any cash suffices, but the holdings must
    still be chosen to fit the wealth actually carried into the node.
    """
    levels = market.levels
    d = market.assets
    wealth = {(0, grp): x for grp, x in roots.items() if x != NEG_INF}
    for t in range(1, market.steps + 1):
        for grp, members in enumerate(levels.groups[t - 1]):
            w = wealth.get((t - 1, grp))
            if w is None:
                continue
            live = [i for i in members if i in supports[t]]
            kids = sorted({levels.group_of[t][i] for i in live})
            h = strategy[(t, grp)]
            if values[(t - 1, grp)] == NEG_INF and live:
                rows = []
                for c in kids:
                    if values[(t, c)] == NEG_INF:
                        continue
                    inc = market.paths[levels.groups[t][c][0]].increment(t)
                    rows.append((list(inc), ">=", values[(t, c)] - w))
                if rows:
                    out = solve(LinearProgram([ZERO] * d, rows, [(None, None)] * d))
                    h = tuple(out.solution)
                    strategy[(t, grp)] = h
            for c in kids:
                inc = market.paths[levels.groups[t][c][0]].increment(t)
                wealth[(t, c)] = w + sum((a * b for a, b in zip(h, inc)), ZERO)


def _single_root(market: Market):
    if len(market.levels.groups[0]) != 1:
        raise DomainError("price undefined for non-constant S_0; query root_prices")


def price(market: Market, g: Payoff, target="omega-star"):
    """Superhedging price of ``g``; by default on the martingale support set.

    Returns ``-inf`` when the hedge set is empty (no martingale measure).
    """
    _single_root(market)
    paths = resolve_target(market, target)
    if not paths:
        return NEG_INF
    return superhedge(market, g, paths).root_prices[0]


@dataclass(frozen=True)
class Replication:
    replicable: bool
    cost: object = None
    plan: Optional[HedgePlan] = None
    gap: Optional[Fraction] = None


def check_replicable(market: Market, g: Payoff) -> Replication:
    """Decide whether ``g`` is replicable on the support set."""
    _single_root(market)
    support = resolve_target(market, "omega-star")
    if not support:
        raise DomainError("no martingale measure: support set is empty")
    up = superhedge(market, g, support)
    down = superhedge(market, -g, support)
    gap = up.root_prices[0] + down.root_prices[0]
    if gap != 0:
        return Replication(False, gap=gap)
    for i in support:
        if up.wealth(i) != g.values[i]:
            raise ArithmeticError("replicating plan is not exact on the support set")
    return Replication(True, cost=up.root_prices[0], plan=up)


def plan_to_dict(plan: HedgePlan) -> dict:
    m = plan.market
    levels = m.levels
    steps = []
    for t in range(m.steps + 1):
        groups = []
        for grp, members in enumerate(levels.groups[t]):
            entry = {
                "paths": [m.paths[i].id for i in members],
                "value": format_extended(plan.values[(t, grp)]),
            }
            if t < m.steps:
                entry["holdings"] = [str(v) for v in plan.strategy[(t + 1, grp)]]
            groups.append(entry)
        steps.append({"t": t, "groups": groups})
    return {
        "root_prices": [format_extended(plan.root_prices[k]) for k in sorted(plan.root_prices)],
        "target": [pid for i, pid in enumerate(m.ids) if i in plan.target],
        "steps": steps,
    }
