"""Exact model-free superhedging on finite path spaces."""
from .dual import DualReport, dual_value, enumerate_vertices, in_cone
from .lp import INF, NEG_INF, LinearProgram, LpOutcome, solve, solve_feasibility
from .market import (
    DomainError,
    Market,
    MarketError,
    Path,
    Payoff,
    StaticOption,
    build_level_sets,
    load_market,
    load_payoff,
    project_support,
    save_report,
)
from .polar import (
    classify,
    compute_omega_phi,
    compute_omega_star,
    compute_omega_star_iterative,
)
from .primal import HedgePlan, check_replicable, local_superhedge, price, superhedge
from .semistatic import check_theorem_hypothesis, semistatic_price, semistatic_via_scan

__version__ = "0.1.0"
