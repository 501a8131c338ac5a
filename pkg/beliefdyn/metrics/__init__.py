from beliefdyn.metrics.agreement import accuracy, cohen_kappa, confusion_matrix, macro_f1
from beliefdyn.metrics.distributions import (
    convergence_round,
    distribution_delta,
    mean_distribution,
    summarize,
    tercile_distributions,
    terminal_distribution,
    trajectory,
)
from beliefdyn.metrics.divergence import js_divergence, kl_divergence
from beliefdyn.metrics.persistence import paired_deltas, persistence_effect
from beliefdyn.metrics.transitions import (
    attractor,
    inflow,
    pool_transitions,
    transition_matrix,
    transition_matrix_from_sequences,
)
