"""Output entropy of one-mode Gaussian channels in truncated Fock space."""

from ._core import (
    ChannelClass,
    ChannelSpec,
    GmoeError,
    apply_channel,
    conjectured_minimum,
    entropy,
    entropy_rate,
    evolve,
    g,
    g_inverse,
    gaussian_output_entropy,
    gibbs_cutoff,
    gibbs_state,
    infimum_table,
    infinitesimal_check,
    mean_photon,
    minimize_output_entropy,
    predicted_output_photons,
    relative_entropy,
    relative_entropy_check,
    run_cascade,
    sample_fixed_entropy_state,
    scan,
    sufficient_condition_scan,
    trace_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
