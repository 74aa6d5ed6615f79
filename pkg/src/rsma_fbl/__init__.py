"""Finite-blocklength rate-splitting multiple access for the two-user uplink."""

from .channel import (DecodeOrder, OmaFraction, OmaScheme, PowerAllocation, SystemParams,
                      db_to_linear, linear_to_db, noma_sinrs, oma_sinrs, rsma_sinrs)
from .errors import DomainError, InfeasibleError, ScenarioError
from .fbl import (channel_dispersion, dispersion_penalty, fbl_rate, fbl_rate_clamped,
                  inverse_q, q_function, shannon_capacity)
from .oracle import GridSpec, oracle_feasible, oracle_min_blocklength
from .region import (RatePoint, RegionBoundary, ibl_mac_pentagon, noma_fbl_points,
                     oma_fbl_points, region_contains, rsma_fbl_boundary)
from .reliability import (StreamReliability, ThroughputTargets, noma_effective_throughput,
                          noma_message_errors, oma_effective_throughput, rsma_effective_throughput,
                          rsma_message_errors)
from .scenario import Scenario, load_scenario, parse_scenario
from .solver import (SolveReport, SolverConfig, exact_constraints_satisfied, minimize_blocklength,
                     minimize_blocklength_noma, minimize_blocklength_oma, minimize_blocklength_rsma)

__version__ = "0.1.0"
