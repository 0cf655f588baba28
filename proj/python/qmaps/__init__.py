"""Noisy quantum map simulator: compiled torus maps, fidelity-decay Monte
Carlo, and closed-form decay predictions."""

from ._core import (
    StateVector,
    compile_map_step,
    csv_header,
    dump_map_step,
    fidelity_bound,
    fidelity_std_ratio,
    forward_backward,
    haar_analytic_I2,
    haar_analytic_J2,
    haar_mc,
    hilbert_factor,
    mean_fidelity,
    predict,
    run_cell,
    sigma_star_sq,
)

__version__ = "1.0.0"

__all__ = [
    "StateVector",
    "compile_map_step",
    "csv_header",
    "dump_map_step",
    "fidelity_bound",
    "fidelity_std_ratio",
    "forward_backward",
    "haar_analytic_I2",
    "haar_analytic_J2",
    "haar_mc",
    "hilbert_factor",
    "mean_fidelity",
    "predict",
    "run_cell",
    "sigma_star_sq",
]
