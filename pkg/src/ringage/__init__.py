"""Version age of information on generalized ring gossip networks.

Quantifies the stationary version age three independent ways and
cross-validates them:

* Monte-Carlo simulation of the continuous-time push-gossip process,
* the exact subset-age fixed point for small rings,
* recursive and closed-form upper bounds driven by minimal incoming-edge
  counts.
"""

from .bounds import (
    BoundReport,
    DominationCriterion,
    Rates,
    RiemannCheck,
    closed_form_bound,
    domination_threshold,
    range_sum_x,
    range_sum_y,
    range_sum_z,
    recursive_bound,
    riemann_gaussian_check,
    scaling_exponent,
    special_case_bound,
)
from .exact import ExactSolution, exact_v1, solve_exact
from .experiments import (
    ExperimentSpec,
    ResultRow,
    run_animal_sweep,
    run_bound_compare,
    run_experiment,
    run_fig4,
    run_oracle_matrix,
    run_table1,
)
from .ring import (
    NeighborFunction,
    RingTopology,
    brute_force_min_incoming,
    eval_f,
    min_incoming_edges_formula,
)
from .sim import AgeEstimate, SimConfig, SweepResult, simulate, simulate_sweep

__version__ = "0.1.0"

__all__ = [
    "AgeEstimate",
    "BoundReport",
    "DominationCriterion",
    "ExactSolution",
    "ExperimentSpec",
    "NeighborFunction",
    "Rates",
    "ResultRow",
    "RiemannCheck",
    "RingTopology",
    "SimConfig",
    "SweepResult",
    "brute_force_min_incoming",
    "closed_form_bound",
    "domination_threshold",
    "eval_f",
    "exact_v1",
    "min_incoming_edges_formula",
    "range_sum_x",
    "range_sum_y",
    "range_sum_z",
    "recursive_bound",
    "riemann_gaussian_check",
    "run_animal_sweep",
    "run_bound_compare",
    "run_experiment",
    "run_fig4",
    "run_oracle_matrix",
    "run_table1",
    "scaling_exponent",
    "simulate",
    "simulate_sweep",
    "solve_exact",
    "special_case_bound",
    "__version__",
]
