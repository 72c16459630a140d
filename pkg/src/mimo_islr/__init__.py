"""MIMO radar waveform design trading spatial ISLR against range ISLR.

The optimizer is cyclic coordinate descent over the entries of the
``Mt x N`` waveform matrix, with an exact single-entry minimizer for each
of four constraint sets: total energy, peak-to-average power ratio,
continuous phase and MPSK.
"""

from importlib.metadata import PackageNotFoundError, version

from .coeffs import CoefficientBuilder, EntryCoefficients, entry_coefficients
from .engine import ParetoPoint, RunRecord, init_waveform, pareto_sweep, run
from .metrics import (IslrReport, beampattern, correlations, objective, range_islr,
                      spatial_islr)
from .model import (AngleScenario, ConfigError, Constraint, ConstraintError, ConstraintSpec,
                    DegenerateError, DimensionError, RunConfig, ScenarioError, WaveformSet)
from .solvers import (PolarSolution, grid_oracle, solve, solve_continuous, solve_discrete,
                      solve_energy, solve_par)

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "AngleScenario", "CoefficientBuilder", "ConfigError", "Constraint", "ConstraintError",
    "ConstraintSpec", "DegenerateError", "DimensionError", "EntryCoefficients", "IslrReport",
    "ParetoPoint", "PolarSolution", "RunConfig", "RunRecord", "ScenarioError", "WaveformSet",
    "beampattern", "correlations", "entry_coefficients", "grid_oracle", "init_waveform",
    "objective", "pareto_sweep", "range_islr", "run", "solve", "solve_continuous",
    "solve_discrete", "solve_energy", "solve_par", "spatial_islr",
]
