from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from helpers import one_asset_instance, oracle_support_1d, random_instance
from superhedge.casebook import gen_binomial, gen_section4, gen_trinomial
from superhedge.constraints import is_martingale_measure
from superhedge.market import Market, Path, load_market
from superhedge.polar import (
    FULLY_ARBITRAGE_FREE,
    NO_MARTINGALE_MEASURE,
    ONE_POINT_ARBITRAGE,
    classify,
    compute_omega_phi,
    compute_omega_star,
    compute_omega_star_iterative,
)


def one_period(*finals, s0=1):
    paths = tuple(Path(f"p{k}", ((F(s0), F(x)),)) for k, x in enumerate(finals))
    return Market(1, 1, paths)


def test_rising_market_has_no_measure():
    m = one_period(2, F(3, 2), F(6, 5))
    rep = compute_omega_star(m)
    assert rep.omega_star == frozenset() and rep.polar_set == {0, 1, 2}
    cls = classify(m)
    assert cls.tag == NO_MARTINGALE_MEASURE
    assert cls.witness.strict and cls.witness.verify(m)


def test_flat_path_survives_one_sided_move():
    # S goes up or stays: only the flat path is charged
    m = one_period(2, 1)
    assert compute_omega_star(m).omega_star == {1}
    cls = classify(m)
    assert cls.tag == ONE_POINT_ARBITRAGE
    assert cls.witness.verify(m)
    assert cls.witness.gains[0] > 0 and cls.witness.gains[1] == 0


def test_binomial_fully_free():
    m = gen_binomial(2, F(1, 2), 1, 2)
    rep = compute_omega_star(m)
    assert rep.omega_star == set(range(4))
    assert is_martingale_measure(m, rep.uniform_witness)
    assert rep.uniform_witness.support == set(range(4))
    assert classify(m).tag == FULLY_ARBITRAGE_FREE


def test_trinomial_support():
    m = gen_trinomial([F(1, 2), 1, 2], 1, 1)
    assert compute_omega_star(m).omega_star == {0, 1, 2}


def test_two_step_dead_subtree():
    # after the up move the asset only rises further, so the up branch is
    # polar and the down branch must then carry S_1 = 1 alone
    m = load_market(
        {
            "assets": 1,
            "steps": 2,
            "paths": [
                {"id": "uu", "prices": [["1", "2", "3"]]},
                {"id": "ux", "prices": [["1", "2", "4"]]},
                {"id": "d0", "prices": [["1", "1/2", "1/2"]]},
                {"id": "m", "prices": [["1", "1", "1"]]},
            ],
        }
    )
    assert compute_omega_star(m).omega_star == {3}
    assert compute_omega_star_iterative(m).omega_star == {3}
    assert oracle_support_1d(m) == {3}
    assert classify(m).tag == ONE_POINT_ARBITRAGE


def test_two_asset_interior():
    # zero lies strictly inside the triangle of increments
    m = Market(
        2,
        1,
        (
            Path("a", ((F(0), F(1)), (F(0), F(0)))),
            Path("b", ((F(0), F(-1)), (F(0), F(1)))),
            Path("c", ((F(0), F(-1)), (F(0), F(-1)))),
        ),
    )
    assert compute_omega_star(m).omega_star == {0, 1, 2}
    # drop c: increments (1,0), (-1,1) leave zero outside their hull
    sub = m.restrict([0, 1])
    assert compute_omega_star(sub).omega_star == frozenset()


def test_section4_option_support():
    case = gen_section4()
    m = case.market
    phi = compute_omega_phi(m)
    excluded = set(case.expected["omega_phi_excluded"].value)
    assert set(phi.ids(m, "polar_set")) == excluded == {"5/2", "3", "7/2"}
    # options do not restrict the plain support
    assert compute_omega_star(m).omega_star == set(range(m.n_paths))
    cls = classify(m)
    assert cls.tag == ONE_POINT_ARBITRAGE
    assert cls.witness.verify(m)
    assert cls.witness.static[0] > 0  # long the zero-cost butterfly


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_support_matches_oracles(seed):
    m, _ = one_asset_instance(seed)
    assert compute_omega_star(m).omega_star == oracle_support_1d(m)
    m, _ = random_instance(seed)
    rep = compute_omega_star(m)
    assert compute_omega_star_iterative(m).omega_star == rep.omega_star
    if rep.omega_star:
        assert is_martingale_measure(m, rep.uniform_witness)
        assert rep.uniform_witness.support == rep.omega_star
    for pid, q in rep.per_path_witness.items():
        if q is not None:
            assert is_martingale_measure(m, q)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_classification_witness(seed):
    m, _ = random_instance(seed)
    cls = classify(m)
    support = compute_omega_star(m).omega_star
    if len(support) == m.n_paths:
        assert cls.tag == FULLY_ARBITRAGE_FREE and cls.witness is None
    else:
        assert cls.tag == (ONE_POINT_ARBITRAGE if support else NO_MARTINGALE_MEASURE)
        assert cls.witness.verify(m)
        # gains vanish on the support set
        assert all(cls.witness.gains[i] == 0 for i in support)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_support_is_a_fixpoint(seed):
    m, _ = random_instance(seed)
    star = compute_omega_star(m).omega_star
    if star:
        sub = m.restrict(star)
        assert compute_omega_star(sub).omega_star == set(range(sub.n_paths))
