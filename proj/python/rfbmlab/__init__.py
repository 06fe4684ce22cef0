"""Simulation and verification toolkit for fractional processes with
time-varying and state-responsive regularity."""

from ._core import (
    attention,
    covariance,
    gamma_fn,
    hyp2f1,
    lamperti,
    ldp_ratio,
    mills_bounds,
    normal_tail,
    simulate,
    solve,
    suite_names,
    variance_mc,
    verify,
)

__all__ = [
    "attention",
    "covariance",
    "gamma_fn",
    "hyp2f1",
    "lamperti",
    "ldp_ratio",
    "mills_bounds",
    "normal_tail",
    "simulate",
    "solve",
    "suite_names",
    "variance_mc",
    "verify",
]
