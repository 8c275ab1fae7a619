"""Ground-state search by resonant star-shaped sinusoidal drives.

Simulates N-state systems under a diagonal Hamiltonian plus a star-sparse
sinusoidal potential, runs the one- and two-phase search procedures with
seeded measurements, and cross-checks the closed forms through reduced
systems, exact s-domain inversion, and an order-gap survey.
"""

from ._backend import BACKEND_NAME, COMPILED
from .dynamics import (
    StepPolicy,
    evolve,
    first_peak,
    major_peak_times,
    peak_scan,
    population,
    rotating_frame,
)
from .errors import (
    ConfigError,
    DegeneratePoleError,
    DimensionMismatchError,
    NormDriftError,
    PropertyViolationError,
    QsearchError,
    StepCapExceededError,
)
from .laplace import (
    Polynomial,
    RationalFunction,
    b1_s_opt,
    b1_s_star,
    b1_s_trial,
    exponential_modes,
    inverse_transform,
)
from .model import (
    HamiltonianSpec,
    PerturbationKind,
    PerturbationSpec,
    StarEntry,
    StateVector,
    Trajectory,
    apply_potential,
    basis_state,
    build_grover_hamiltonian,
    energy_complexity,
    potential_entry,
    potential_matrix,
    uniform_state,
)
from .ordergap import (
    AlphaCoeff,
    GradedRational,
    LambdaTerm,
    OrderGapReport,
    build_lambda,
    lambda1_terms,
    lambda2_terms,
    order_gap,
    random_term_list,
)
from .reduced import (
    ComplexityReport,
    RabiParams,
    ReducedOptState,
    ReducedSeries,
    ReducedTrialState,
    ResonanceParams,
    approx_b1,
    complexity_report,
    evolve_reduced_opt,
    evolve_reduced_trial,
    oscillation_period,
    peak_probability,
    peak_time,
    rabi_population,
)
from .search import (
    MeasurementRecord,
    SearchOutcome,
    Step,
    SuccessEstimate,
    Timing,
    clopper_pearson,
    estimate_success,
    measure,
    measurement_time,
    run_algorithm1,
    run_algorithm2,
    run_search,
    trial_rng,
)

__version__ = "0.1.0"
