"""Wall-crossing route: canonical wall structure of the cylinder chart."""

from .chart import AffineChart
from .engine import (
    ConsistencyError,
    ks_complete,
    loop_product,
    verify_consistency,
    verify_grading,
)
from .fout import SupportError, extract_nd_scattering, f_out
from .svg import render_diagram
from .walls import (
    GradingError,
    Monomial,
    Wall,
    WallStructure,
    monodromy_transport,
    wall_cross,
)

__all__ = [
    "AffineChart",
    "ConsistencyError",
    "GradingError",
    "Monomial",
    "SupportError",
    "Wall",
    "WallStructure",
    "extract_nd_scattering",
    "f_out",
    "ks_complete",
    "loop_product",
    "monodromy_transport",
    "render_diagram",
    "verify_consistency",
    "verify_grading",
    "wall_cross",
]
