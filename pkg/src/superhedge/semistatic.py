"""Superhedging with dynamic trading plus static option positions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .constraints import ONE, ZERO, GainLayout, measure_constraints
from .lp import NEG_INF, LinearProgram, format_extended, solve
from .market import DomainError, Market, Payoff
from .primal import HedgePlan, plan_to_dict, resolve_target, superhedge

__all__ = [
    "SemiStaticPlan",
    "HypothesisCheck",
    "semistatic_price",
    "semistatic_via_scan",
    "check_theorem_hypothesis",
    "option_adjusted",
]


@dataclass(frozen=True)
class SemiStaticPlan:
    price: object
    static_positions: tuple
    dynamic_plan: HedgePlan  # hedges g - h . (phi - c)
    hedge_set: frozenset
    payoff: Payoff

    def verify(self) -> bool:
        m = self.dynamic_plan.market
        for i in self.hedge_set:
            w = self.dynamic_plan.wealth(i)
            w += sum((h * o.adjusted[i] for h, o in zip(self.static_positions, m.options)), ZERO)
            if w < self.payoff.values[i]:
                return False
        return True

    def to_dict(self) -> dict:
        m = self.dynamic_plan.market
        return {
            "price": format_extended(self.price),
            "h": [str(v) for v in self.static_positions],
            "dynamic": plan_to_dict(self.dynamic_plan),
            "hedge_set": [pid for i, pid in enumerate(m.ids) if i in self.hedge_set],
        }


def option_adjusted(market: Market, g: Payoff, h: Sequence) -> Payoff:
    """``g - h . (phi - c)``."""
    vals = list(g.values)
    for hj, o in zip(h, market.options):
        if hj:
            vals = [v - hj * a for v, a in zip(vals, o.adjusted)]
    return Payoff(tuple(vals))


def _hedge_set(market: Market, target) -> frozenset:
    from .polar import compute_omega_phi

    if target == "omega-phi":
        paths = compute_omega_phi(market).omega_star
        if not paths:
            raise DomainError("no option-consistent martingale measure")
        return paths
    paths = resolve_target(market, target)
    if not paths:
        raise DomainError("empty hedge set")
    return paths


def semistatic_price(market: Market, g: Payoff, target="omega-phi") -> SemiStaticPlan:
    """Least cost of ``x + (H . S)_T + h . (phi - c) >= g`` on the hedge set.

    The hedge set defaults to the option-consistent support; ``"all"``
    hedges on every path.  Solved as one LP over cash, static positions and
    every trading node; the dynamic part is then rebuilt by backward
    recursion on ``g - h . (phi - c)`` and must reproduce the same cost.
    """
    if len(market.levels.groups[0]) != 1:
        raise DomainError("price undefined for non-constant S_0; query root_prices")
    paths = _hedge_set(market, target)
    k = len(market.options)
    layout = GainLayout(market, paths, offset=1 + k)
    nv = 1 + k + layout.width
    cons = []
    for i in layout.members:
        row = layout.gain_row(i, nv)
        row[0] = ONE
        for j, o in enumerate(market.options):
            row[1 + j] = o.adjusted[i]
        cons.append((row, ">=", g.values[i]))
    obj = [ONE] + [ZERO] * (nv - 1)
    out = solve(LinearProgram(obj, cons, [(None, None)] * nv))
    if not out.optimal:
        # bounded below by the dual whenever the hedge set carries a measure
        x, h = NEG_INF, (ZERO,) * k
    else:
        x, h = out.value, tuple(out.solution[1 : 1 + k])
    dyn = superhedge(market, option_adjusted(market, g, h), paths)
    if out.optimal and dyn.root_prices[0] != x:
        raise ArithmeticError("backward recursion disagrees with the monolithic LP")
    plan = SemiStaticPlan(x, h, dyn, paths, g)
    if x != NEG_INF and not plan.verify():
        raise ArithmeticError("semi-static plan fails its pathwise check")
    return plan


def semistatic_via_scan(market: Market, g: Payoff, h_grid, target="omega-phi"):
    """Minimum over ``h_grid`` of the dynamic-only price of ``g - h . (phi - c)``."""
    paths = _hedge_set(market, target)
    best = None
    for h in h_grid:
        if len(h) != len(market.options):
            raise ValueError("grid point length must equal the number of options")
        p = superhedge(market, option_adjusted(market, g, h), paths).root_prices[0]
        if best is None or p < best:
            best = p
    if best is None:
        raise ValueError("empty grid")
    return best


@dataclass(frozen=True)
class HypothesisCheck:
    holds: bool
    option: Optional[str] = None
    direction: Optional[str] = None  # "max" > 0 or "min" < 0
    value: object = None


def check_theorem_hypothesis(market: Market) -> HypothesisCheck:
    """Do all martingale measures carried by the option support price every option at cost?"""
    from .polar import compute_omega_phi

    support = compute_omega_phi(market).omega_star
    if not support:
        raise DomainError("no option-consistent martingale measure")
    cons = measure_constraints(market, False, support)
    for o in market.options:
        adj = list(o.adjusted)
        for sense in ("max", "min"):
            out = solve(LinearProgram(adj, cons, sense=sense))
            if out.value != 0:
                return HypothesisCheck(False, o.id, sense, out.value)
    return HypothesisCheck(True)
