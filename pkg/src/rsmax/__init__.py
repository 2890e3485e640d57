"""Robust monotone submodular maximization.

Maximize a monotone submodular function subject to a cardinality (or
general independence-system) constraint so that the chosen set keeps its
value even after an adversary deletes up to tau elements. The package
bundles the algorithms, exact brute-force reference computations,
adversarial instance generators, and an experiment harness with a CLI
(`rsmax`).
"""

from .algorithms import (
    BruteForceMultiObjectiveSolver,
    RobustResult,
    TraceStep,
    beta,
    biobjective_robust,
    blocks_greedy,
    brute_multiobjective_solver,
    constant_tau_scheme,
    copies_block,
    copies_geometric,
    general_robust,
    generalized_greedy,
    greedy,
    greedy_threshold,
    ignore_first,
    naive_topk,
    three_phase,
    two_copy,
)
from .bitsets import elements, full_mask, mask_of
from .bruteforce import (
    MinimizerResult,
    TupleCertificate,
    check_opt_removal_chain,
    conjecture_scan,
    minimizer,
    opt_plain,
    opt_robust,
    pareto_subset,
    prune_set,
    robust_value,
)
from .constraints import (
    IndependenceSystem,
    cardinality_system,
    knapsack_system,
    partition_matroid,
    restrict_system,
    system_greedy,
)
from .errors import (
    BudgetExceededError,
    InconsistentBoundsError,
    InfeasibleTargetsError,
    OutOfDomainError,
    PreconditionError,
)
from .harness import ExperimentConfig, RunRecord, bound_table, run_experiment
from .instances import (
    CopyMap,
    Instance,
    augment_with_copies,
    gen_greedy_failure,
    gen_hardness_augment,
    gen_partial_copies,
    gen_random_coverage,
    instance_from_json,
    instance_to_json,
    load_instance,
    partial_copies_layout,
    save_instance,
)
from .oracle import (
    EPS_CMP,
    CoverageFunction,
    ExplicitFunction,
    MinOfFamily,
    ModularFunction,
    SetFunction,
    SubmodularOracle,
    check_exhaustive,
    check_monotone_submodular,
    min_of_family,
    restrict,
)

__version__ = "0.1.0"
