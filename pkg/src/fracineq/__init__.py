"""Numerical verification of fractional Hermite-Hadamard inequalities.

Modules
-------
specfun     gamma, beta, incomplete beta and Gauss 2F1 with error estimates
fracquad    adaptive quadrature and Riemann-Liouville integrals
preinvex    function library, invexity maps and grid certification
identities  both sides of the first- and second-derivative identities
bounds      printed bounds, quadrature oracles and remark reductions
harness     configs, sweeps, falsification, reports and the ``fracineq`` CLI
"""

__version__ = "0.1.0"

from . import bounds, fracquad, identities, preinvex, specfun  # noqa: E402
from .errors import (  # noqa: E402
    CapabilityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    FracIneqError,
    PoleError,
    PreconditionError,
)

__all__ = [
    "__version__",
    "bounds",
    "fracquad",
    "identities",
    "preinvex",
    "specfun",
    "CapabilityError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "FracIneqError",
    "PoleError",
    "PreconditionError",
]
