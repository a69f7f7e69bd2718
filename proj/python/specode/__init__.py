"""Python bindings for the specode frequency-coded biphoton simulator."""

from ._core import (
    ContrastReport,
    CycleDetected,
    DegenerateMatrix,
    InvalidArgument,
    Overflow,
    PairShift,
    PhysicalParams,
    SpecodeError,
    UnderResolvedGrid,
    __version__,
    alamouti,
    contrasts,
    dynamics_check,
    g2_matrix,
    jsa,
    make_c_geometric,
    make_c_linear,
    multichannel_levels,
    run_command,
    schmidt_spectrum,
    staircase_report,
    unit_g2,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
