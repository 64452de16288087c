"""Exact loop-constraint qudit states on the Sierpinski gasket."""

from .constraints import build_system, count_solutions, count_with_assignment, enumerate_solutions, sample_solution
from .errors import (
    ConventionViolation,
    InvalidArgument,
    LREError,
    NoSolution,
    ResourceLimit,
    UnsupportedGeneration,
)
from .lattice import Lattice, build_lattice
from .scalar import ExactScalar
from .states import (
    LocalOperator,
    build_phi,
    build_psi,
    connected_correlation,
    expectation,
    materialize,
    matrix_element,
)

__version__ = "0.1.0"

__all__ = [
    "ConventionViolation",
    "ExactScalar",
    "InvalidArgument",
    "LREError",
    "Lattice",
    "LocalOperator",
    "NoSolution",
    "ResourceLimit",
    "UnsupportedGeneration",
    "build_lattice",
    "build_phi",
    "build_psi",
    "build_system",
    "connected_correlation",
    "count_solutions",
    "count_with_assignment",
    "enumerate_solutions",
    "expectation",
    "materialize",
    "matrix_element",
    "sample_solution",
]
