"""Python bindings for the sparsepot C++ library."""

from ._sparsepot import (  # noqa: F401
    BumpReport,
    ContourError,
    ConvergenceError,
    DomainError,
    Error,
    Parity,
    PiecewisePotential,
    PoleError,
    SchemaError,
    Sheet,
    SheetError,
    StepBump,
    TargetError,
    bessel_j,
    build_sparse_report,
    census,
    construct_bump,
    eigenvalues,
    energy,
    global_secular,
    hankel1,
    kappa_tilde,
    lambert_w,
    physical_sheet,
    secular,
    secular_regular,
    sep,
    solve_for_v0,
    sqrt_upper,
    winding_count,
)

__version__ = "0.1.0"
