"""Instance generation and LP-free oracles shared by the test modules."""
import random
from fractions import Fraction
from itertools import combinations

from superhedge.casebook import gen_random_tree, random_payoff

NEG = float("-inf")

# criterion id -> (passed, detail); printed by the conftest summary hook
ACCEPTANCE = {}


def random_instance(seed, arbitrage_free=None):
    """Seeded market (d <= 3, T <= 3, <= 40 paths) and payoff."""
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    T = rng.randint(1, 3)
    branching = {1: 6, 2: 6, 3: 3}[T]
    if arbitrage_free is None:
        arbitrage_free = seed % 2 == 0
    m = gen_random_tree(seed, d, T, branching, arbitrage_free)
    return m, random_payoff(m, rng)


def one_asset_instance(seed, arbitrage_free=None):
    rng = random.Random(seed)
    T = rng.randint(1, 3)
    branching = {1: 6, 2: 6, 3: 3}[T]
    if arbitrage_free is None:
        arbitrage_free = rng.random() < 0.3
    m = gen_random_tree(seed, 1, T, branching, arbitrage_free)
    return m, random_payoff(m, rng)


def _children(market, t, members):
    """Split ``members`` (paths sharing the prefix up to t) by their price at t + 1."""
    out = {}
    for i in members:
        out.setdefault(market.paths[i].prices[0][t + 1], []).append(i)
    return out


def two_point_value(points):
    """Max expectation over martingale laws on (increment, value) pairs.

    Vertices of the one-dimensional martingale polytope are point masses at
    a zero increment and two-point laws straddling zero.
    """
    best = NEG
    for a, v in points:
        if a == 0:
            best = max(best, v)
    for (a, va), (b, vb) in combinations(points, 2):
        if a > b:
            (a, va), (b, vb) = (b, vb), (a, va)
        if a < 0 < b:
            best = max(best, (b * va - a * vb) / (b - a))
    return best


def oracle_price_1d(market, g):
    """Sup of E_Q[g] over martingale measures for a one-asset tree, by local two-point laws."""

    def value(t, members):
        if t == market.steps:
            return max(g.values[i] for i in members)
        s = market.paths[members[0]].prices[0][t]
        pts = []
        for price, kids in _children(market, t, members).items():
            v = value(t + 1, kids)
            if v != NEG:
                pts.append((price - s, v))
        return two_point_value(pts)

    return value(0, list(range(market.n_paths)))


def oracle_support_1d(market):
    """Paths charged by some martingale measure, one-asset trees, without any LP."""

    def alive(t, members):
        if t == market.steps:
            return set(members)
        s = market.paths[members[0]].prices[0][t]
        sub = {}
        for price, kids in _children(market, t, members).items():
            a = alive(t + 1, kids)
            if a:
                sub[price - s] = a
        signs = {(inc > 0) - (inc < 0) for inc in sub}
        if {-1, 1} <= signs:
            return set().union(*sub.values())
        return sub.get(0, set())

    return frozenset(alive(0, list(range(market.n_paths))))


def expectation(q, values):
    return sum((Fraction(a) * b for a, b in zip(q, values)), Fraction(0))
