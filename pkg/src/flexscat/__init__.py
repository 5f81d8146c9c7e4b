"""flexscat: flexural plate-wave scattering and obstacle reconstruction.

A Nystroem boundary-integral solver for time-harmonic flexural waves
scattered by clamped obstacles, plus spectral indicator functions (Picard-
series and eigenvalue-count types) that recover obstacle shapes from the
discrete far-field operator.
"""

from .experiment import (ExperimentConfig, ShapeSpec, add_noise,
                         builtin_example, load_config, run_experiment)
from .forward import (BoundarySystem, DensityPair, FarFieldMatrix, assemble,
                      direction_grid, disk_series_far_field,
                      far_field_matrix, far_field_vector,
                      far_identity_residual, solve_plane_wave,
                      unitarity_residual)
from .geometry import (ObstacleScene, ParametricCurve, QuadratureLayout,
                       contains, make_shape, outward_normal,
                       quadrature_layout)
from .grid import Grid, make_grid
from .indicators import (IndicatorField, ProbeMatrix, TestVector, fm_field,
                         fsharp, mm_field, probe_gram, test_vector)

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig", "ShapeSpec", "add_noise", "builtin_example",
    "load_config", "run_experiment",
    "BoundarySystem", "DensityPair", "FarFieldMatrix", "assemble",
    "direction_grid", "disk_series_far_field", "far_field_matrix",
    "far_field_vector", "far_identity_residual", "solve_plane_wave",
    "unitarity_residual",
    "ObstacleScene", "ParametricCurve", "QuadratureLayout", "contains",
    "make_shape", "outward_normal", "quadrature_layout",
    "Grid", "make_grid",
    "IndicatorField", "ProbeMatrix", "TestVector", "fm_field", "fsharp",
    "mm_field", "probe_gram", "test_vector",
    "__version__",
]
