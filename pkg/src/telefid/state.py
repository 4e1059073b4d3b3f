"""Two-qubit density matrices, Hilbert-Schmidt (Bloch) decomposition and state families.

Basis ordering is |00>, |01>, |10>, |11> with the first tensor factor held by
Alice.  The Bell basis used throughout is

    Psi_0 = (|01> - |10>)/sqrt2   (singlet)
    Psi_1 = (|00> - |11>)/sqrt2
    Psi_2 = (|00> + |11>)/sqrt2
    Psi_3 = (|01> + |10>)/sqrt2
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, InvalidState, NotAState
from .linalg import PAULI_BASIS, PAULIS, STRUCT_TOL, I2

_S2 = 1 / np.sqrt(2)
BELL_VECTORS = (
    np.array([0, _S2, -_S2, 0], dtype=complex),
    np.array([_S2, 0, 0, -_S2], dtype=complex),
    np.array([_S2, 0, 0, _S2], dtype=complex),
    np.array([0, _S2, _S2, 0], dtype=complex),
)
SINGLET = BELL_VECTORS[0]

# sigma_i (x) sigma_j for i, j in 0..3 (0 = identity).
_PAULI_PRODUCTS = np.array(
    [[np.kron(a, b) for b in PAULI_BASIS] for a in PAULI_BASIS]
)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated 4x4 two-qubit density matrix.

    Construction checks Hermiticity, unit trace and positive semidefiniteness
    (smallest eigenvalue >= -tol).  Non-PSD input raises :class:`NotAState`.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidState(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("density matrix has non-finite entries")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > STRUCT_TOL:
            raise InvalidState(f"density matrix is not Hermitian (max |A - A^+| = {herm_err:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > STRUCT_TOL:
            raise InvalidState(f"density matrix trace is {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -STRUCT_TOL:
            raise NotAState(
                f"matrix is not positive semidefinite (smallest eigenvalue {min_eig:.6e})",
                min_eig,
            )
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __array__(self, dtype=None, copy=None):
        return self.m if dtype is None else self.m.astype(dtype)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.m)

    def conjugate_by(self, u: np.ndarray) -> "DensityMatrix":
        """Return ``u rho u^+`` for a 4x4 unitary ``u``."""
        return DensityMatrix(u @ self.m @ u.conj().T)

    def local_unitary(self, u1: np.ndarray, u2: np.ndarray) -> "DensityMatrix":
        return self.conjugate_by(np.kron(u1, u2))


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors ``r`` (Alice), ``s`` (Bob) and correlation matrix ``t``."""

    r: np.ndarray
    s: np.ndarray
    t: np.ndarray


def as_density_matrix(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def hs_decompose(rho) -> BlochDecomposition:
    """Hilbert-Schmidt coefficients ``R_i = Tr(rho s_i x I)``, ``S_i``, ``T_ij``."""
    rho = as_density_matrix(rho)
    # coeffs[i, j] = Tr(rho sigma_i (x) sigma_j)
    coeffs = np.einsum("ijab,ba->ij", _PAULI_PRODUCTS, rho.m)
    if np.max(np.abs(coeffs.imag)) > STRUCT_TOL:
        raise InvalidState("Hilbert-Schmidt coefficients are not real")
    c = coeffs.real
    return BlochDecomposition(r=c[1:, 0].copy(), s=c[0, 1:].copy(), t=c[1:, 1:].copy())


def hs_matrix(r, s, t) -> np.ndarray:
    """Assemble ``(I + R.s x I + I x S.s + sum T_ij s_i x s_j) / 4`` without validation."""
    c = np.zeros((4, 4))
    c[0, 0] = 1.0
    c[1:, 0] = np.asarray(r, dtype=float)
    c[0, 1:] = np.asarray(s, dtype=float)
    c[1:, 1:] = np.asarray(t, dtype=float)
    return 0.25 * np.einsum("ij,ijab->ab", c, _PAULI_PRODUCTS)


def hs_compose(b: BlochDecomposition) -> DensityMatrix:
    """Inverse of :func:`hs_decompose`; raises :class:`NotAState` if the triple is unphysical."""
    return DensityMatrix(hs_matrix(b.r, b.s, b.t))


def pure_state_density(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if psi.shape != (4,) or abs(norm - 1.0) > 1e-12:
        raise InvalidParameter("pure state must be a unit-norm 4-vector")
    return DensityMatrix(np.outer(psi, psi.conj()))


def pure_schmidt(a: float, b: float) -> DensityMatrix:
    """Density matrix of ``a|00> + b|11>`` with ``a >= b >= 0`` and ``a^2 + b^2 = 1``."""
    if not (a >= b >= 0):
        raise InvalidParameter(f"need a >= b >= 0, got a={a}, b={b}")
    if abs(a * a + b * b - 1.0) > 1e-12:
        raise InvalidParameter(f"a^2 + b^2 = {a * a + b * b!r}, expected 1")
    return pure_state_density(np.array([a, 0, 0, b], dtype=complex))


def pure_from_b2(b2: float) -> DensityMatrix:
    """Schmidt pure state parametrised by ``b^2`` in [0, 1/2]."""
    if not 0 <= b2 <= 0.5:
        raise InvalidParameter(f"b^2 must lie in [0, 0.5], got {b2}")
    return pure_schmidt(float(np.sqrt(1 - b2)), float(np.sqrt(b2)))


def bell_projector(k: int) -> np.ndarray:
    v = BELL_VECTORS[k]
    return np.outer(v, v.conj())


def bell_diagonal(p0: float, p1: float, p2: float, p3: float) -> DensityMatrix:
    """Mixture ``sum_k p_k |Psi_k><Psi_k|`` of the four Bell states."""
    p = np.array([p0, p1, p2, p3], dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise InvalidParameter(f"Bell weights must be a probability vector, got {p.tolist()}")
    m = sum(pk * bell_projector(k) for k, pk in enumerate(p))
    return DensityMatrix(m)


def werner(p0: float) -> DensityMatrix:
    if not 0 <= p0 <= 1:
        raise InvalidParameter(f"Werner weight must lie in [0, 1], got {p0}")
    q = (1 - p0) / 3
    return bell_diagonal(p0, q, q, q)


def _check_open_unit(p: float, name: str):
    if not 0 < p < 1:
        raise InvalidParameter(f"{name} parameter must lie in (0, 1), got {p}")


def example1(p: float) -> DensityMatrix:
    """Rank-3 X-state ``p|Psi_0><Psi_0| + (1-p)/2 (|00><00| + |01><01|)``."""
    _check_open_unit(p, "example1")
    m = p * bell_projector(0)
    m = m + np.diag([(1 - p) / 2, (1 - p) / 2, 0, 0])
    return DensityMatrix(m)


def example2(p: float) -> DensityMatrix:
    """Rank-4 X-state ``p|Psi_0><Psi_0| + (1-p)/4 (|00><00| + |11><11|) + (1-p)/2 |01><01|``."""
    _check_open_unit(p, "example2")
    m = p * bell_projector(0)
    m = m + np.diag([(1 - p) / 4, (1 - p) / 2, 0, (1 - p) / 4])
    return DensityMatrix(m)


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4) / 4)


def singlet() -> DensityMatrix:
    return bell_diagonal(1, 0, 0, 0)


def random_density_matrix(seed=None, rank: int = 4) -> DensityMatrix:
    """Ginibre-induced random state ``G G^+ / Tr(G G^+)``, ``G`` a 4 x rank complex Gaussian."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def product_state(rho_a, rho_b) -> DensityMatrix:
    return DensityMatrix(np.kron(np.asarray(rho_a), np.asarray(rho_b)))


FAMILIES = {
    "werner": (werner, ("p0",)),
    "bell_diagonal": (bell_diagonal, ("p0", "p1", "p2", "p3")),
    "pure_schmidt": (pure_schmidt, ("a", "b")),
    "pure": (pure_from_b2, ("b2",)),
    "example1": (example1, ("p",)),
    "example2": (example2, ("p",)),
}


def from_family(name: str, params: dict) -> DensityMatrix:
    """Build a named family member from keyword parameters."""
    try:
        fn, names = FAMILIES[name]
    except KeyError:
        raise InvalidParameter(
            f"unknown family {name!r}; choose from {sorted(FAMILIES)}"
        ) from None
    missing = [n for n in names if n not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise InvalidParameter(
            f"family {name!r} takes parameters {list(names)}; missing {missing}, unexpected {extra}"
        )
    return fn(*(float(params[n]) for n in names))


__all__ = [
    "BELL_VECTORS",
    "SINGLET",
    "BlochDecomposition",
    "DensityMatrix",
    "I2",
    "PAULIS",
    "as_density_matrix",
    "bell_diagonal",
    "bell_projector",
    "example1",
    "example2",
    "from_family",
    "hs_compose",
    "hs_decompose",
    "hs_matrix",
    "maximally_mixed",
    "product_state",
    "pure_from_b2",
    "pure_schmidt",
    "pure_state_density",
    "random_density_matrix",
    "singlet",
    "werner",
]
