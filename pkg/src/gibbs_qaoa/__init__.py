"""Exact state-vector simulation and variational optimization for standard
and Gibbs-targeting alternating-operator circuits on small Ising instances.
"""

from .eigensolver import EigenDecomposition, EigenSolverError, eigh
from .evolution import (
    CircuitSimulator,
    CostKind,
    apply_diagonal_phase,
    apply_mixer,
    apply_sbo_phase,
    plus_state,
    probabilities,
    run_circuit,
)
from .ising import (
    GibbsDistribution,
    GroundSet,
    InstanceError,
    InstanceFormatError,
    IsingInstance,
    classical_energy,
    energy_table,
    gibbs_amplitudes,
    gibbs_distribution,
    ground_set,
    parse_instance,
    render_instance,
    toy_instance,
)
from .metrics import (
    FairnessReport,
    fairness_gap,
    fairness_report,
    ground_state_probability,
    orbit_probabilities,
    total_variation_distance,
)
from .operators import (
    DiagonalOperator,
    SboOperator,
    alpha,
    apply_operator,
    build_sbo,
    densify,
    expectation,
    ising_diagonal,
    local_diagonal,
)
from .powell import ObjectiveError, OptResult, PowellOptions, powell_minimize
from .variational import (
    AngleSchedule,
    LinearParams,
    QaoaProblem,
    linear_to_schedule,
    objective,
    optimize_qaoa,
    tqa_linear_init,
    tqa_schedule,
)

__version__ = "0.1.0"
