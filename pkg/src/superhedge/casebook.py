"""Instance generators and golden cases.

Trees (binomial, trinomial, seeded random) feed the property suites.  The
butterfly/power-option market is a one-period market on a finite grid of
terminal prices carrying two static options; it exhibits the gap between
superhedging on every path and superhedging on the option-consistent
support.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .market import Market, MarketError, Path, Payoff, StaticOption

__all__ = [
    "gen_binomial",
    "gen_trinomial",
    "gen_tree",
    "gen_random_tree",
    "random_payoff",
    "Section4Config",
    "Expectation",
    "GoldenCase",
    "default_section4_config",
    "gen_section4",
    "rational_above_sqrt",
    "call_payoff",
]


def gen_tree(factors: Sequence, s0, steps: int, labels: Optional[Sequence[str]] = None) -> Market:
    """Single-asset multiplicative tree, one path per move sequence (no recombination)."""
    factors = [Fraction(f) for f in factors]
    s0 = Fraction(s0)
    if steps < 1 or not factors or any(f <= 0 for f in factors) or s0 <= 0:
        raise ValueError("need steps >= 1, s0 > 0 and positive factors")
    if len(set(factors)) != len(factors):
        raise ValueError("factors must be distinct")
    labels = labels or [str(k) for k in range(len(factors))]
    paths = []
    for moves in itertools.product(range(len(factors)), repeat=steps):
        prices = [s0]
        for k in moves:
            prices.append(prices[-1] * factors[k])
        paths.append(Path("".join(labels[k] for k in moves), (tuple(prices),)))
    return Market(1, steps, tuple(paths))


def gen_binomial(u, d, s0, steps: int) -> Market:
    if not Fraction(u) > Fraction(d) > 0:
        raise ValueError("need u > d > 0")
    return gen_tree([u, d], s0, steps, labels=["U", "D"])


def gen_trinomial(factors: Sequence, s0, steps: int) -> Market:
    if len(factors) != 3:
        raise ValueError("a trinomial tree takes three factors")
    return gen_tree(sorted(Fraction(f) for f in factors)[::-1], s0, steps, labels=["U", "M", "D"])


def call_payoff(market: Market, strike, asset: int = 0) -> Payoff:
    k = Fraction(strike)
    return Payoff(tuple(max(p.prices[asset][-1] - k, Fraction(0)) for p in market.paths))


def _small_rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 2, 4)))


def gen_random_tree(
    seed: int,
    assets: int,
    steps: int,
    branching: int,
    arbitrage_free: bool = True,
    max_paths: int = 40,
) -> Market:
    """Random non-recombining tree, deterministic in ``seed``.

    Each node gets between 2 and ``branching`` children.  With
    ``arbitrage_free`` the child increments average to zero, so the uniform
    conditional law is a martingale measure charging every path; otherwise
    about half of the nodes draw one-sided increments.
    """
    if branching < 1 or assets < 1 or steps < 1:
        raise ValueError("assets, steps and branching must be positive")
    if branching**steps > max_paths:
        raise ValueError(f"{branching}^{steps} paths exceeds max_paths={max_paths}")
    rng = random.Random(seed)
    root = tuple(Fraction(rng.randint(5, 20)) for _ in range(assets))
    histories = [[root]]
    for _ in range(steps):
        nxt = []
        for hist in histories:
            k = rng.randint(min(2, branching), branching)
            if arbitrage_free or rng.random() < 0.5:
                incs = [
                    tuple(_small_rational(rng, -9, 9) for _ in range(assets)) for _ in range(k - 1)
                ]
                incs.append(tuple(-sum(col, Fraction(0)) for col in zip(*incs)) if incs else (Fraction(0),) * assets)
            else:
                incs = [tuple(_small_rational(rng, -2, 9) for _ in range(assets)) for _ in range(k)]
            for inc in incs:
                nxt.append(hist + [tuple(a + b for a, b in zip(hist[-1], inc))])
        histories = nxt
    paths = []
    for n, hist in enumerate(histories):
        prices = tuple(tuple(col[a] for col in hist) for a in range(assets))
        paths.append(Path(f"p{n}", prices))
    return Market(assets, steps, tuple(paths))


def random_payoff(market: Market, rng: random.Random) -> Payoff:
    """Mix of a random call on a random asset and small rational noise."""
    a = rng.randrange(market.assets)
    strike = Fraction(rng.randint(0, 30))
    base = call_payoff(market, strike, a)
    return Payoff(tuple(v + _small_rational(rng, -9, 9) for v in base.values))


# ---------------------------------------------------------------------------
# Butterfly / power option market
# ---------------------------------------------------------------------------


def rational_above_sqrt(x) -> Fraction:
    """A rational strictly greater than sqrt(x), for rational ``x >= 0``."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    return Fraction(math.isqrt(math.floor(x)) + 1)


@dataclass(frozen=True)
class Section4Config:
    s0: Fraction
    K0: Fraction
    K1: Fraction
    c1: Fraction
    grid: tuple

    def validate(self):
        s0, K0, K1, c1, grid = self.s0, self.K0, self.K1, self.c1, self.grid
        if not s0 > 0:
            raise MarketError("s0 must be positive")
        if not K0 > s0:
            raise MarketError("need K0 > s0")
        if not K1 > (K0 + 2) ** 2:
            raise MarketError("need K1 > (K0 + 2)^2")
        if not c1 > 0:
            raise MarketError("need c1 > 0")
        if list(grid) != sorted(set(grid)) or any(x < 0 for x in grid):
            raise MarketError("grid must be sorted, distinct and nonnegative")
        for name, point in (("0", 0), ("K0", K0), ("K0+1", K0 + 1), ("K0+2", K0 + 2)):
            if point not in grid:
                raise MarketError(f"grid must contain {name} = {point}")
        if not any(K0 < x < K0 + 2 for x in grid):
            raise MarketError(f"grid needs a point strictly inside ({K0}, {K0 + 2})")
        if not any(x >= K0 + 2 and x * x < K1 for x in grid):
            raise MarketError(f"grid needs a point in [{K0 + 2}, sqrt({K1}))")
        if not any(x * x > K1 + c1 for x in grid):
            raise MarketError(
                f"grid needs a point above sqrt(K1 + c1), e.g. {rational_above_sqrt(K1 + c1)}"
            )


def default_section4_config() -> Section4Config:
    F = Fraction
    grid = tuple(F(x) for x in ("0", "1", "2", "5/2", "3", "7/2", "4", "9/2", "24/5", "6"))
    return Section4Config(F(3, 2), F(2), F(25), F(1, 10), grid)


@dataclass(frozen=True)
class Expectation:
    """A golden value with its provenance.

    ``value`` is either a number or ``None`` when the expectation is a
    relation between two computed quantities, described by ``relation``.
    """

    value: object
    provenance: str
    relation: str = ""


@dataclass(frozen=True)
class GoldenCase:
    market: Market
    payoffs: dict
    expected: dict = field(default_factory=dict)


def butterfly(x, K0) -> Fraction:
    pos = lambda v: v if v > 0 else Fraction(0)
    return pos(x - K0) - 2 * pos(x - (K0 + 1)) + pos(x - (K0 + 2))


def power_call(x, K1) -> Fraction:
    return max(x * x - K1, Fraction(0))


def gen_section4(cfg: Optional[Section4Config] = None) -> GoldenCase:
    """One-period market on ``cfg.grid`` with a butterfly (cost 0) and a power call (cost c1)."""
    cfg = cfg or default_section4_config()
    cfg.validate()
    s0, K0, K1 = cfg.s0, cfg.K0, cfg.K1
    paths = tuple(Path(str(x), ((s0, x),)) for x in cfg.grid)
    options = (
        StaticOption("butterfly", tuple(butterfly(x, K0) for x in cfg.grid), Fraction(0)),
        StaticOption("power", tuple(power_call(x, K1) for x in cfg.grid), cfg.c1),
    )
    market = Market(1, 1, paths, options)
    one, zero = Fraction(1), Fraction(0)
    g1 = Payoff(tuple(one if K0 < x < K0 + 2 else zero for x in cfg.grid))
    g2 = Payoff(tuple(one if K0 <= x <= K0 + 2 else zero for x in cfg.grid))
    excluded = tuple(str(x) for x in cfg.grid if K0 < x < K0 + 2)
    expected = {
        "omega_phi_excluded": Expectation(excluded, "PAPER"),
        "semistatic_g1": Expectation(zero, "PAPER"),
        "price_all_g1": Expectation(min(s0 / K0, one), "PAPER"),
        "price_all_g2": Expectation(None, "PAPER", "equals dual value of g2 with options"),
    }
    return GoldenCase(market, {"g1": g1, "g2": g2}, expected)
