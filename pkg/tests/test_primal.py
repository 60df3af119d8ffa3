from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import one_asset_instance, oracle_price_1d, random_instance
from superhedge.casebook import call_payoff, gen_binomial, gen_trinomial
from superhedge.lp import INF, NEG_INF
from superhedge.market import DomainError, Market, Path, Payoff
from superhedge.primal import check_replicable, local_superhedge, price, superhedge


def test_local_two_point_solves_linear_system():
    incs, tgt = [(F(1),), (F(-1, 2),)], [F(1), F(0)]
    x, h = sympy.symbols("x h")
    sol = sympy.solve([x + h - 1, x - h / 2], [x, h])
    lh = local_superhedge(incs, tgt)
    assert lh.cash == F(str(sol[x])) == F(1, 3)
    assert lh.holdings == (F(str(sol[h])),) == (F(2, 3),)
    # multipliers are the martingale weights
    assert lh.weights == (F(1, 3), F(2, 3))


def test_local_drops_neg_inf_rows():
    lh = local_superhedge([(F(1),), (F(-1),), (F(5),)], [F(0), F(0), NEG_INF])
    assert lh.cash == 0


def test_local_all_neg_inf_and_unbounded():
    assert local_superhedge([(F(1),)], [NEG_INF]).cash == NEG_INF
    # one-sided increments: short the asset forever
    assert local_superhedge([(F(1),), (F(2),)], [F(0), F(3)]).cash == NEG_INF


def test_local_rejects_inf():
    with pytest.raises(ValueError):
        local_superhedge([(F(1),)], [INF])


def test_binomial_call():
    m = gen_binomial(2, F(1, 2), 1, 1)
    g = call_payoff(m, 1)
    plan = superhedge(m, g, range(2))
    assert plan.root_prices[0] == F(1, 3)
    assert plan.strategy[(1, 0)] == (F(2, 3),)
    assert plan.verify()
    assert [plan.wealth(i) for i in range(2)] == [1, 0]
    assert price(m, g) == F(1, 3)
    rep = check_replicable(m, g)
    assert rep.replicable and rep.cost == F(1, 3)


def test_trinomial_call_not_replicable():
    m = gen_trinomial([F(1, 2), 1, 2], 1, 1)
    g = call_payoff(m, 1)
    assert price(m, g) == F(1, 3)
    assert price(m, -g) == 0
    rep = check_replicable(m, g)
    assert not rep.replicable and rep.gap == F(1, 3)


def test_two_step_binomial_matches_risk_neutral():
    m = gen_binomial(2, F(1, 2), 4, 2)
    g = call_payoff(m, 4)
    q = F(1, 3)
    expected = sum(
        (q ** s.count("U") * (1 - q) ** s.count("D") * v for s, v in zip(m.ids, g.values)), F(0)
    )
    assert price(m, g) == expected


def test_price_ignores_polar_paths():
    m = Market(1, 1, (Path("up", ((F(1), F(2)),)), Path("flat", ((F(1), F(1)),))))
    g = Payoff.of([100, 7])
    assert price(m, g) == 7
    # hedging every path needs the up move covered
    assert price(m, g, "all") == 7
    g2 = Payoff.of([-100, 7])
    assert price(m, g2, "all") == 7


def test_price_all_unbounded_below():
    m = Market(1, 1, (Path("a", ((F(1), F(2)),)), Path("b", ((F(1), F(3)),))))
    assert price(m, Payoff.of([1, 1]), "all") == NEG_INF
    assert price(m, Payoff.of([1, 1])) == NEG_INF  # no measure at all


def test_multiple_roots_rejected():
    m = Market(1, 1, (Path("a", ((F(1), F(1)),)), Path("b", ((F(2), F(2)),))))
    with pytest.raises(DomainError, match="root_prices"):
        price(m, Payoff.of([0, 0]))
    plan = superhedge(m, Payoff.of([1, 5]), {0, 1})
    assert plan.root_prices == {0: 1, 1: 5}
    # a lone child that moves can be shorted without bound
    m2 = Market(1, 1, (Path("a", ((F(1), F(2)),)), Path("b", ((F(2), F(2)),))))
    assert superhedge(m2, Payoff.of([1, 5]), "all").root_prices == {0: NEG_INF, 1: 5}


def test_empty_target():
    m = gen_binomial(2, F(1, 2), 1, 1)
    with pytest.raises(DomainError):
        superhedge(m, Payoff.of([0, 0]), set())


def test_unbounded_node_plan_still_verifies():
    # the up branch has a one-sided move and is -inf below; the rest is fine
    m = Market(
        1,
        2,
        (
            Path("ua", ((F(1), F(2), F(3)),)),
            Path("ub", ((F(1), F(2), F(4)),)),
            Path("d", ((F(1), F(0), F(0)),)),
        ),
    )
    g = Payoff.of([5, 6, 1])
    plan = superhedge(m, g, {0, 1, 2})
    assert plan.values[(1, 0)] == NEG_INF
    assert plan.root_prices[0] == NEG_INF
    assert plan.verify()


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_price_matches_two_point_oracle(seed):
    m, g = one_asset_instance(seed)
    assert price(m, g) == oracle_price_1d(m, g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_plans_verify(seed):
    m, g = random_instance(seed)
    for target in ("all", "omega-star"):
        try:
            plan = superhedge(m, g, target)
        except DomainError:
            continue
        assert plan.verify()


def test_section4_g1_dynamic_price_on_grid():
    from helpers import two_point_value
    from superhedge.casebook import gen_section4

    case = gen_section4()
    m, g1 = case.market, case.payoffs["g1"]
    s0 = m.paths[0].prices[0][0]
    pts = [(p.prices[0][1] - s0, v) for p, v in zip(m.paths, g1.values)]
    # the cheapest law mixes the drop to 0 with the first grid point above K0
    assert two_point_value(pts) == F(3, 5)
    assert price(m, g1, "all") == F(3, 5)
