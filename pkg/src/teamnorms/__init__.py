"""Team search on correlated NK(C,S) landscapes with descriptive social norms.

A team of P agents hill-climbs an M-bit decision problem split into P blocks.
Contribution tables couple tasks within and across blocks, agent landscapes
are correlated through a Gaussian copula, compensation mixes own and residual
performance, and agents also weigh conformity with the social bits their
peers shared over a ring network.  Runs are seed-deterministic and normalized
by the exhaustively enumerated global optimum.
"""

from .engine import (RunState, RunTrace, ScenarioParams, derive_run_seed,
                     init_run, replicate, run, run_streams, step)
from .errors import CapabilityError, ParameterError
from .experiments import (AggregateSeries, CellResult, ScenarioGrid, aggregate,
                          figure_grids, load_config, run_figure, run_grid,
                          scenario_id, write_csv)
from .landscape import (ENUM_BUDGET_BITS, InteractionStructure, Landscape,
                        TeamConfig, agent_performance, build_interaction_structure,
                        build_landscape, contribution, copula_tables,
                        enumerate_global_max, load_landscape, save_landscape,
                        team_performance, validate_structure)
from .norms import NormMemory, SocialNetwork, compliance, expire, ring_network, share
from .team import (DecisionWeights, IncentiveScheme, choose, incentive_payoff,
                   propose_flip, residual_performance)

__version__ = "0.1.0"

__all__ = [
    "AggregateSeries", "CapabilityError", "CellResult", "DecisionWeights",
    "ENUM_BUDGET_BITS", "IncentiveScheme", "InteractionStructure", "Landscape",
    "NormMemory", "ParameterError", "RunState", "RunTrace", "ScenarioGrid",
    "ScenarioParams", "SocialNetwork", "TeamConfig", "agent_performance",
    "aggregate", "build_interaction_structure", "build_landscape", "choose",
    "compliance", "contribution", "copula_tables", "derive_run_seed",
    "enumerate_global_max", "expire", "figure_grids", "incentive_payoff",
    "init_run", "load_config", "load_landscape", "propose_flip", "replicate",
    "residual_performance", "ring_network", "run", "run_figure", "run_grid",
    "run_streams", "save_landscape", "scenario_id", "share", "step",
    "team_performance", "validate_structure", "write_csv",
]
