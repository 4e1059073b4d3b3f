"""Small dense matrix helpers: Pauli algebra, 3x3 SVD and the SO(3) -> SU(2) lift.

Conventions
-----------
Pauli matrices are ``sigma_1 = X``, ``sigma_2 = Y``, ``sigma_3 = Z``.  A 2x2
unitary ``U`` and a rotation ``R`` correspond when

    U (n . sigma) U^dagger = (R n) . sigma

for every real 3-vector ``n`` (column-vector action).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidMatrix, NotARotation

STRUCT_TOL = 1e-10
RESIDUAL_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (X, Y, Z)
# PAULI_BASIS[0] is the identity, PAULI_BASIS[k] is sigma_k.
PAULI_BASIS = (I2, X, Y, Z)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a, tol: float = STRUCT_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_unitary(a, tol: float = STRUCT_TOL) -> bool:
    a = np.asarray(a)
    eye = np.eye(a.shape[-1])
    return bool(np.max(np.abs(dagger(a) @ a - eye)) <= tol)


def is_orthogonal(a, tol: float = STRUCT_TOL) -> bool:
    a = np.asarray(a, dtype=float)
    return bool(np.max(np.abs(a.T @ a - np.eye(a.shape[0]))) <= tol)


def is_rotation(a, tol: float = STRUCT_TOL) -> bool:
    a = np.asarray(a, dtype=float)
    return is_orthogonal(a, tol) and abs(np.linalg.det(a) - 1.0) <= tol


def dot_sigma(n) -> np.ndarray:
    """Return ``n . sigma`` for a real 3-vector ``n``."""
    n = np.asarray(n, dtype=float)
    return n[0] * X + n[1] * Y + n[2] * Z


def _as_real3x3(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.shape != (3, 3):
        raise InvalidMatrix(f"{name} must be 3x3, got shape {a.shape}")
    if np.iscomplexobj(a):
        if np.max(np.abs(a.imag)) > STRUCT_TOL:
            raise InvalidMatrix(f"{name} has non-negligible imaginary part")
        a = a.real
    a = a.astype(float)
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return a


def svd3(t):
    """Singular value decomposition of a real 3x3 matrix.

    Returns ``(o1, sigma, o2)`` with ``t = o1 @ diag(sigma) @ o2.T``, ``o1`` and
    ``o2`` orthogonal (not necessarily proper) and ``sigma`` sorted descending.
    """
    t = _as_real3x3(t, "T")
    u, s, vh = np.linalg.svd(t)
    return u, s, vh.T


def make_proper(o1, sigma, o2):
    """Turn an SVD triple into rotations, pushing reflections into the diagonal.

    A reflection in either factor is removed by negating its last column, which
    negates the last (smallest) diagonal entry.  The result satisfies
    ``t = r1 @ diag(d) @ r2.T`` with ``det r1 = det r2 = +1`` and ``|d| = sigma``.
    """
    r1 = np.array(o1, dtype=float, copy=True)
    r2 = np.array(o2, dtype=float, copy=True)
    d = np.array(sigma, dtype=float, copy=True)
    if np.linalg.det(r1) < 0:
        r1[:, -1] *= -1
        d[-1] *= -1
    if np.linalg.det(r2) < 0:
        r2[:, -1] *= -1
        d[-1] *= -1
    return r1, d, r2


def so3_to_su2(r) -> np.ndarray:
    """Lift a proper rotation to a 2x2 unitary with ``U (n.s) U^+ = (R n).s``.

    The sign ambiguity of the double cover (and any global phase) is fixed by
    making the first nonzero entry of ``U`` real and positive.
    """
    r = _as_real3x3(r, "R")
    if not is_rotation(r, tol=1e-9):
        raise NotARotation("matrix is not a proper rotation (orthogonal, det +1)")
    # Shepperd's method: pick the largest of the four quaternion-squared terms.
    tr = np.trace(r)
    candidates = np.array([tr, r[0, 0], r[1, 1], r[2, 2]])
    k = int(np.argmax(candidates))
    if k == 0:
        w = 0.5 * np.sqrt(1.0 + tr)
        x = (r[2, 1] - r[1, 2]) / (4 * w)
        y = (r[0, 2] - r[2, 0]) / (4 * w)
        z = (r[1, 0] - r[0, 1]) / (4 * w)
    elif k == 1:
        x = 0.5 * np.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
        w = (r[2, 1] - r[1, 2]) / (4 * x)
        y = (r[0, 1] + r[1, 0]) / (4 * x)
        z = (r[0, 2] + r[2, 0]) / (4 * x)
    elif k == 2:
        y = 0.5 * np.sqrt(1.0 - r[0, 0] + r[1, 1] - r[2, 2])
        w = (r[0, 2] - r[2, 0]) / (4 * y)
        x = (r[0, 1] + r[1, 0]) / (4 * y)
        z = (r[1, 2] + r[2, 1]) / (4 * y)
    else:
        z = 0.5 * np.sqrt(1.0 - r[0, 0] - r[1, 1] + r[2, 2])
        w = (r[1, 0] - r[0, 1]) / (4 * z)
        x = (r[0, 2] + r[2, 0]) / (4 * z)
        y = (r[1, 2] + r[2, 1]) / (4 * z)
    q = np.array([w, x, y, z])
    q /= np.linalg.norm(q)
    u = q[0] * I2 - 1j * (q[1] * X + q[2] * Y + q[3] * Z)
    return fix_phase(u)


def fix_phase(u: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Multiply by a global phase so the first nonzero entry is real positive."""
    flat = u.ravel()
    idx = int(np.argmax(np.abs(flat) > tol))
    z = flat[idx]
    return u * (np.conj(z) / abs(z))


def su2_to_so3(u) -> np.ndarray:
    """Adjoint rotation of a 2x2 unitary: ``R_ij = Tr(sigma_i U sigma_j U^+) / 2``."""
    u = np.asarray(u, dtype=complex)
    ud = dagger(u)
    r = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            r[i, j] = 0.5 * np.trace(si @ u @ sj @ ud).real
    return r


def eig3_symmetric(a) -> np.ndarray:
    """Eigenvalues of a real symmetric 3x3 matrix, descending."""
    a = _as_real3x3(a, "A")
    if np.max(np.abs(a - a.T)) > STRUCT_TOL:
        raise InvalidMatrix("matrix is not symmetric")
    return np.linalg.eigvalsh(a)[::-1]


def haar_su2(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random 2x2 unitaries via QR of a complex Ginibre matrix.

    Returns one matrix of shape (2, 2) when ``size`` is None, otherwise an
    array of shape (size, 2, 2).
    """
    shape = (2, 2) if size is None else (size, 2, 2)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    # Q @ diag(phases) removes the QR sign/phase bias.
    return q * phases[..., None, :]
