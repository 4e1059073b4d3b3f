"""Maximal teleportation fidelity and fidelity deviation for two-qubit states."""

from .canonical import CanonicalForm, canonicalize, correlation_spectrum, verify_canonical
from .errors import (
    DerivationMismatch,
    InvalidMatrix,
    InvalidParameter,
    InvalidState,
    NotAState,
    NotARotation,
    NotCanonical,
    StateFileError,
    TelefidError,
)
from .figures import (
    Branch,
    TeleportationReport,
    classify,
    fef,
    fef_oracle,
    fidelity_deviation,
    max_fidelity,
    mean_fidelity_diagonal,
    second_moment_diagonal,
    universal_state_for_fidelity,
)
from .simulator import (
    SimulationStats,
    bilateral_twirl,
    monte_carlo_stats,
    teleport_fidelity_exact,
    verify_schur_integrals,
)
from .state import (
    BlochDecomposition,
    DensityMatrix,
    bell_diagonal,
    example1,
    example2,
    hs_compose,
    hs_decompose,
    pure_schmidt,
    random_density_matrix,
    werner,
)

__version__ = "0.1.0"
