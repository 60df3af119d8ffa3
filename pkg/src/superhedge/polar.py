"""Paths charged by martingale measures, and arbitrage classification.

The support set (every path some martingale measure charges) is computed
two ways: one LP per path, which is the definition, and iterative removal
of paths that a one-period arbitrage can make strictly profitable.  The two
must agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .constraints import (
    ONE,
    ZERO,
    GainLayout,
    MeasureVector,
    measure_constraints,
    terminal_gain,
)
from .lp import LinearProgram, solve, solve_objectives
from .market import Market

__all__ = [
    "SupportReport",
    "ArbitrageClass",
    "Arbitrage",
    "compute_omega_star",
    "compute_omega_phi",
    "compute_omega_star_iterative",
    "classify",
    "FULLY_ARBITRAGE_FREE",
    "ONE_POINT_ARBITRAGE",
    "NO_MARTINGALE_MEASURE",
]

FULLY_ARBITRAGE_FREE = "fully-arbitrage-free"
ONE_POINT_ARBITRAGE = "one-point-arbitrage"
NO_MARTINGALE_MEASURE = "no-martingale-measure"


@dataclass(frozen=True)
class SupportReport:
    omega_star: frozenset
    polar_set: frozenset
    per_path_witness: dict = field(default_factory=dict)
    uniform_witness: Optional[MeasureVector] = None

    def ids(self, market: Market, which: str = "omega_star") -> list:
        members = getattr(self, which)
        return [pid for i, pid in enumerate(market.ids) if i in members]


@dataclass(frozen=True)
class Arbitrage:
    """A semi-static strategy and its terminal gain on every path.

    ``holdings`` maps ``(t, group at t-1)`` to the asset holdings ``H_t``;
    ``static`` holds one position per option (cost-adjusted payoffs).
    """

    holdings: dict
    static: tuple
    gains: tuple
    strict: bool  # gain > 0 on every path

    def verify(self, market: Market) -> bool:
        for i in range(market.n_paths):
            g = terminal_gain(market, self.holdings, i)
            g += sum((h * o.adjusted[i] for h, o in zip(self.static, market.options) if h), ZERO)
            if g != self.gains[i]:
                return False
        if any(g < 0 for g in self.gains) or not any(g > 0 for g in self.gains):
            return False
        return not self.strict or all(g > 0 for g in self.gains)


@dataclass(frozen=True)
class ArbitrageClass:
    tag: str
    witness: Optional[Arbitrage] = None


def _support(market: Market, with_options: bool) -> SupportReport:
    n = market.n_paths
    cons = measure_constraints(market, with_options)
    members = set()
    witness = {}
    objectives = [[ONE if j == k else ZERO for j in range(n)] for k in range(n)]
    outcomes = solve_objectives(LinearProgram([ZERO] * n, cons, sense="max"), objectives)
    for k, (pid, out) in enumerate(zip(market.ids, outcomes)):
        if out.optimal and out.value > 0:
            members.add(k)
            witness[pid] = MeasureVector(out.solution)
        else:
            witness[pid] = None
    uniform = None
    if members:
        ws = [witness[market.ids[k]].weights for k in sorted(members)]
        m = len(ws)
        uniform = MeasureVector(tuple(sum(col, ZERO) / m for col in zip(*ws)))
    return SupportReport(
        frozenset(members), frozenset(set(range(n)) - members), witness, uniform
    )


def compute_omega_star(market: Market) -> SupportReport:
    """Paths charged by some martingale measure, one LP per path."""
    return _support(market, with_options=False)


def compute_omega_phi(market: Market) -> SupportReport:
    """Like :func:`compute_omega_star` but measures must also price every option at its cost."""
    return _support(market, with_options=bool(market.options))


def _one_period_removal(market: Market, t: int, alive: list):
    """Maximal set of ``alive`` paths a single ``H_t`` can make strictly profitable.

    ``alive`` are surviving paths of one group at ``t - 1``.  Returns the
    paths to remove and the holdings that remove them.
    """
    d = market.assets
    levels = market.levels
    children = {}
    for i in alive:
        children.setdefault(levels.group_of[t][i], []).append(i)
    kids = sorted(children)
    cons = []
    for k, c in enumerate(kids):
        inc = market.paths[children[c][0]].increment(t)
        row = list(inc) + [ZERO] * len(kids)
        row[d + k] = -ONE
        cons.append((row, ">=", ZERO))
    obj = [ZERO] * d + [ONE] * len(kids)
    bounds = [(None, None)] * d + [(ZERO, ONE)] * len(kids)
    out = solve(LinearProgram(obj, cons, bounds, sense="max"))
    if out.value == 0:
        return [], None
    gone = [i for k, c in enumerate(kids) if out.solution[d + k] > 0 for i in children[c]]
    return gone, tuple(out.solution[:d])


def compute_omega_star_iterative(market: Market, return_witness: bool = False):
    """Support set by iterative removal of one-period arbitrage paths.

    Sweeps every time step and level-set group (restricted to surviving
    paths) until nothing more is removed.  With ``return_witness`` also
    returns the first arbitrage found as ``(t, group, holdings)``.
    """
    levels = market.levels
    alive = set(range(market.n_paths))
    first = None
    changed = True
    while changed and alive:
        changed = False
        for t in range(1, market.steps + 1):
            for g, group in enumerate(levels.groups[t - 1]):
                members = [i for i in group if i in alive]
                if not members:
                    continue
                gone, h = _one_period_removal(market, t, members)
                if gone:
                    if first is None:
                        first = (t, g, h)
                    alive.difference_update(gone)
                    changed = True
    report = SupportReport(frozenset(alive), frozenset(set(range(market.n_paths)) - alive))
    return (report, first) if return_witness else report


def _global_arbitrage(market: Market, strict: bool) -> Optional[Arbitrage]:
    """Semi-static arbitrage over all paths, from a single LP.

    ``strict`` maximizes the worst gain (capped at 1); otherwise maximizes
    the number of paths with positive gain (each capped at 1).
    """
    n, k = market.n_paths, len(market.options)
    layout = GainLayout(market, range(n))
    w = layout.width
    if strict:
        nv = w + k + 1
        cons = []
        for i in range(n):
            row = layout.gain_row(i, nv)
            for j, o in enumerate(market.options):
                row[w + j] = o.adjusted[i]
            row[-1] = -ONE
            cons.append((row, ">=", ZERO))
        obj = [ZERO] * (w + k) + [ONE]
        bounds = [(None, None)] * (w + k) + [(None, ONE)]
    else:
        nv = w + k + n
        cons = []
        for i in range(n):
            row = layout.gain_row(i, nv)
            for j, o in enumerate(market.options):
                row[w + j] = o.adjusted[i]
            row[w + k + i] = -ONE
            cons.append((row, ">=", ZERO))
        obj = [ZERO] * (w + k) + [ONE] * n
        bounds = [(None, None)] * (w + k) + [(ZERO, ONE)] * n
    out = solve(LinearProgram(obj, cons, bounds, sense="max"))
    if not out.optimal or out.value <= 0:
        return None
    x = out.solution
    holdings = layout.holdings(x)
    static = tuple(x[w : w + k])
    gains = []
    for i in range(n):
        g = terminal_gain(market, holdings, i)
        g += sum((h * o.adjusted[i] for h, o in zip(static, market.options) if h), ZERO)
        gains.append(g)
    return Arbitrage(holdings, static, tuple(gains), strict and all(g > 0 for g in gains))


def classify(market: Market) -> ArbitrageClass:
    """Classify a market (options included) and exhibit an arbitrage when one exists."""
    if market.options:
        support = compute_omega_phi(market).omega_star
    else:
        support = compute_omega_star_iterative(market).omega_star
    n = market.n_paths
    if len(support) == n:
        return ArbitrageClass(FULLY_ARBITRAGE_FREE)
    if not support:
        witness = _global_arbitrage(market, strict=True) or _global_arbitrage(market, strict=False)
        return ArbitrageClass(NO_MARTINGALE_MEASURE, witness)
    if market.options:
        witness = _global_arbitrage(market, strict=False)
    else:
        _, (t, g, h) = compute_omega_star_iterative(market, return_witness=True)
        holdings = {(t, g): h}
        gains = tuple(terminal_gain(market, holdings, i) for i in range(n))
        witness = Arbitrage(holdings, (), gains, False)
    return ArbitrageClass(ONE_POINT_ARBITRAGE, witness)
