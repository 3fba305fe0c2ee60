"""Implicit CDF solver for random genetic drift models.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    CdfState,
    DiagnosticsReport,
    FixationEstimate,
    GridSpec,
    TimeSpec,
    build_initial_cdf,
    convergence_order,
    delta_at_zero,
    discrete_expectation,
    discrete_theta_moment,
    eval_diffusion,
    eval_drift,
    fixation_errors,
    gaussian_pdf,
    local_error,
    one_way,
    power_law_exponents,
    pure_drift,
    recover_pdf,
    selection,
    simulate_fixation,
    solve,
    steady_state_two_way,
    step,
    theta,
    two_way,
    uniform_pdf,
)

__version__ = "0.1.0"
