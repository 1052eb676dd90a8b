"""One-dimensional completed scattering: subprocess decomposition, characteristic times, wave packets."""
from .barriers import (DoubleRectangular, KGrid, Rectangular, SpatialGrid, TabulatedSymmetric,
                       read_barrier_csv, validate_barrier)
from .constants import PhysicalConstants, electron_constants
from .stationary import (StationarySolution, evaluate_total, phase_spectra, solve, solve_rectangular,
                         solve_symmetric_numeric)

__version__ = "0.1.0"
