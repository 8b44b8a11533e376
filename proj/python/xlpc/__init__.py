"""Energy-efficient power control games with finite-buffer queues."""

from ._core import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    SystemParams,
    __version__,
    ee_crosslayer,
    ee_fixedcost,
    ee_goodman,
    folk_thresholds,
    goodman_mode,
    loss_probability,
    optimal_sinr,
    run_scenario,
    sample_channel,
    scenarios,
    simulate_queue,
    solve_ne,
    solve_op,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "InfeasibleError",
    "SystemParams",
    "__version__",
    "ee_crosslayer",
    "ee_fixedcost",
    "ee_goodman",
    "folk_thresholds",
    "goodman_mode",
    "loss_probability",
    "optimal_sinr",
    "run_scenario",
    "sample_channel",
    "scenarios",
    "simulate_queue",
    "solve_ne",
    "solve_op",
]
