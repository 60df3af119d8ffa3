"""Expectations over the martingale measure polytope."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .constraints import ZERO, GainLayout, MeasureVector, martingale_rows, measure_constraints
from .lp import NEG_INF, LinearProgram, enumerate_vertices as _vertices, format_extended, solve, solve_feasibility
from .market import DomainError, Market, Payoff

__all__ = [
    "MeasureVector",
    "DualReport",
    "VertexList",
    "dual_value",
    "in_cone",
    "zero_cost_superhedge_exists",
    "enumerate_vertices",
]


@dataclass(frozen=True)
class DualReport:
    value: object
    optimizer: Optional[MeasureVector]
    constrained_by_options: bool

    def to_dict(self, market: Market) -> dict:
        return {
            "value": format_extended(self.value),
            "measure": self.optimizer.as_dict(market) if self.optimizer else {},
            "options_constrained": self.constrained_by_options,
        }


def dual_value(market: Market, g: Payoff, with_options: bool = False, members=None) -> DualReport:
    """Maximize E_Q[g] over martingale measures (optionally pricing the options).

    ``members`` restricts the support of Q; ``-inf`` signals an empty polytope.
    """
    with_options = with_options and bool(market.options)
    out = solve(
        LinearProgram(list(g.values), measure_constraints(market, with_options, members), sense="max")
    )
    if not out.optimal:
        return DualReport(NEG_INF, None, with_options)
    return DualReport(out.value, MeasureVector(out.solution), with_options)


def zero_cost_superhedge_exists(market: Market, g: Payoff, members) -> bool:
    """Is there a strategy with ``(H . S)_T >= g`` on ``members``?"""
    layout = GainLayout(market, members)
    rows = [(layout.gain_row(i, layout.width), ">=", g.values[i]) for i in layout.members]
    return solve_feasibility(rows, layout.width).feasible


def in_cone(market: Market, g: Payoff) -> bool:
    """Whether ``g`` is dominated on the support set by a zero-cost gain.

    Decided through the dual (E_Q[g] <= 0 for every martingale measure) and
    cross-checked against the primal feasibility problem.
    """
    from .polar import compute_omega_star_iterative

    support = compute_omega_star_iterative(market).omega_star
    if not support:
        raise DomainError("cone undefined without martingale measures")
    inside = dual_value(market, g).value <= 0
    if inside != zero_cost_superhedge_exists(market, g, support):
        raise ArithmeticError("dual and primal disagree on cone membership")
    return inside


@dataclass(frozen=True)
class VertexList:
    measures: tuple
    truncated: bool


def enumerate_vertices(market: Market, with_options: bool = False, cap: int = 100) -> VertexList:
    """Vertices of the (option-)martingale polytope, in a deterministic order."""
    with_options = with_options and bool(market.options)
    n = market.n_paths
    A = [[1] * n] + martingale_rows(market, with_options)
    b = [1] + [0] * (len(A) - 1)
    res = _vertices(A, b, cap)
    return VertexList(tuple(MeasureVector(v) for v in res.vertices), res.truncated)
