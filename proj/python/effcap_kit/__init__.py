"""Python bindings for the effcap-kit C++ core."""

from ._effcap import (  # noqa: F401
    EffCapResult,
    EstimateStats,
    LinkConfig,
    MinBitEnergy,
    QosSpec,
    TailEstimate,
    TrainingSolution,
    WidebandAsymptotics,
    __version__,
    asymptotics_numeric_check,
    asymptotics_sparse_bounded,
    bit_energy,
    classify_scenario,
    effective_capacity_at,
    effective_capacity_theta0,
    effective_snr,
    min_bit_energy_numeric,
    nominal_snr,
    optimal_rate,
    optimal_training,
    outage_threshold,
    poisson_binomial,
    run_sweep,
    simulate_queue,
    spectral_efficiency,
    uniform_transition_probabilities,
)
