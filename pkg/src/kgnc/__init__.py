"""Klein-Gordon Coulomb spectrum in non-commutative space.

Closed-form bound states, the first-order non-commutative energy shift
and its magnetic splitting, cross-checked against Gauss-Laguerre
quadrature and a finite-difference eigensolver.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DomainError,
    EvaluationError,
    GridError,
    KGError,
    OracleError,
    SingularFormulaError,
)
from .spectrum_core import (  # noqa: E402
    PhysicalParams,
    QuantumNumbers,
    RadialState,
    energy_unperturbed,
    make_radial_state,
    varsigma,
)
from .nc_perturbation import nc_energy_shift, split_level  # noqa: E402
