"""Spectra, bases and checks for two singular-oscillator superintegrable systems."""

from ._core import (
    BranchError,
    DomainError,
    Error,
    LabelingError,
    elliptic_separation_constants,
    energy_v1,
    energy_v2,
    interbasis_matrix,
    niven_lambdas,
    parabolic_separation_constants,
    run_cli,
    solve_parabolic,
)

__all__ = [
    "BranchError",
    "DomainError",
    "Error",
    "LabelingError",
    "elliptic_separation_constants",
    "energy_v1",
    "energy_v2",
    "interbasis_matrix",
    "niven_lambdas",
    "parabolic_separation_constants",
    "run_cli",
    "solve_parabolic",
]
