"""Linear structure shared by the pricing modules.

Two row builders live here: the martingale (and option) equalities that
cut the measure polytope out of the simplex, and the gain layout that
turns a predictable strategy into one linear expression per path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .market import Market

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class MeasureVector:
    """Probability weights on the paths of a market."""

    weights: tuple

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, w in enumerate(self.weights) if w > 0)

    def expect(self, values) -> Fraction:
        return sum((w * v for w, v in zip(self.weights, values) if w), ZERO)

    def as_dict(self, market: Market) -> dict:
        return {pid: str(w) for pid, w in zip(market.ids, self.weights) if w}


def martingale_rows(market: Market, with_options: bool = False, members: Optional[Iterable[int]] = None):
    """Equality rows over path weights: zero conditional drift, priced options.

    One row per (time t >= 1, level-set group at t-1, asset), skipping rows
    that are identically zero, then one row per option when requested.
    Weights of paths outside ``members`` are pinned to zero by the caller.
    """
    n = market.n_paths
    keep = set(range(n)) if members is None else set(members)
    levels = market.levels
    rows = []
    for t in range(1, market.steps + 1):
        incs = market.increments(t)
        for group in levels.groups[t - 1]:
            for a in range(market.assets):
                row = [ZERO] * n
                nonzero = False
                for i in group:
                    if i in keep and incs[i][a]:
                        row[i] = incs[i][a]
                        nonzero = True
                if nonzero:
                    rows.append(row)
    if with_options:
        for o in market.options:
            rows.append([v if i in keep else ZERO for i, v in enumerate(o.adjusted)])
    return rows


def measure_constraints(market: Market, with_options: bool = False, members=None):
    """Full constraint list for :class:`~superhedge.lp.LinearProgram` over weights."""
    n = market.n_paths
    keep = set(range(n)) if members is None else set(members)
    cons = [([ONE if i in keep else ZERO for i in range(n)], "=", ONE)]
    cons += [(r, "=", ZERO) for r in martingale_rows(market, with_options, keep)]
    for i in range(n):
        if i not in keep:
            row = [ZERO] * n
            row[i] = ONE
            cons.append((row, "=", ZERO))
    return cons


def is_martingale_measure(market: Market, q: MeasureVector, with_options: bool = False) -> bool:
    w = q.weights
    if len(w) != market.n_paths or any(x < 0 for x in w) or sum(w) != 1:
        return False
    for row in martingale_rows(market, with_options):
        if sum((a * x for a, x in zip(row, w) if a), ZERO) != 0:
            return False
    return True


class GainLayout:
    """Column layout of a predictable strategy restricted to a set of paths.

    A trading node is a pair ``(t, g)``: the holdings ``H_t`` chosen on
    level-set group ``g`` at time ``t - 1``.  Only nodes met by ``members``
    get columns; each owns ``assets`` consecutive columns starting at
    ``offset``.
    """

    def __init__(self, market: Market, members: Iterable[int], offset: int = 0):
        self.market = market
        self.members = sorted(set(members))
        self.offset = offset
        levels = market.levels
        self.nodes = []
        self.column = {}
        col = offset
        for t in range(1, market.steps + 1):
            met = sorted({levels.group_of[t - 1][i] for i in self.members})
            for g in met:
                self.nodes.append((t, g))
                self.column[(t, g)] = col
                col += market.assets
        self.width = col - offset

    def gain_row(self, i: int, total: int) -> list:
        """Coefficients of (H . S)_T at path ``i`` in a row of length ``total``."""
        m = self.market
        row = [ZERO] * total
        for t in range(1, m.steps + 1):
            base = self.column[(t, m.levels.group_of[t - 1][i])]
            inc = m.paths[i].increment(t)
            for a in range(m.assets):
                row[base + a] += inc[a]
        return row

    def holdings(self, solution) -> dict:
        d = self.market.assets
        return {
            node: tuple(solution[c + a] for a in range(d)) for node, c in self.column.items()
        }


def terminal_gain(market: Market, holdings: dict, i: int) -> Fraction:
    """(H . S)_T at path ``i`` for holdings keyed by ``(t, group at t-1)``."""
    total = ZERO
    zero = (ZERO,) * market.assets
    for t in range(1, market.steps + 1):
        h = holdings.get((t, market.levels.group_of[t - 1][i]), zero)
        inc = market.paths[i].increment(t)
        total += sum((a * b for a, b in zip(h, inc) if a), ZERO)
    return total
