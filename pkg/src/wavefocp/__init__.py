"""Taylor-wavelet solver for linear-quadratic fractional optimal control."""

from .basis import WaveletParams
from .opmats import OperationalMatrices, build_operational_matrices
from .quadrature import SingularMatrixError
from .solver import FocpProblem, FocpSolution, solve_focp

__all__ = [
    "WaveletParams",
    "OperationalMatrices",
    "build_operational_matrices",
    "SingularMatrixError",
    "FocpProblem",
    "FocpSolution",
    "solve_focp",
]
