"""Canonical local-unitary representative of a two-qubit state.

The canonical form has a diagonal correlation matrix ``diag(lambda_i |t_ii|)``
with ``|t_11| >= |t_22| >= |t_33|`` and signs

* ``det T <= 0``: every ``lambda_i = -1``;
* ``det T > 0``:  ``lambda = (-1, -1, +1)``, the ``+1`` on the smallest magnitude.

It is reached with a product unitary ``U1 (x) U2``; on the Bloch side this acts as
``T -> Q1 T Q2^T`` for the rotations ``Q1``, ``Q2`` of ``U1``, ``U2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import make_proper, so3_to_su2, svd3
from .state import DensityMatrix, as_density_matrix, hs_decompose

DET_TOL = 1e-12
SIGN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Result of :func:`canonicalize`.

    ``varrho = (u1 (x) u2) rho (u1 (x) u2)^+`` and ``diag`` is the signed diagonal
    of its correlation matrix.  ``eigenvalues`` holds the (possibly complex)
    eigenvalues of the raw ``T`` for diagnostics only.
    """

    rho: DensityMatrix
    varrho: DensityMatrix
    u1: np.ndarray
    u2: np.ndarray
    diag: np.ndarray
    det_t: float
    singular_values: np.ndarray
    eigenvalues: np.ndarray

    @property
    def det_positive(self) -> bool:
        return self.det_t > DET_TOL


@dataclass(frozen=True)
class CanonicalCheck:
    max_offdiag: float
    diag_mismatch: float
    conjugation_residual: float
    sign_pattern_ok: bool

    def ok(self, tol: float = 1e-8) -> bool:
        return (
            self.sign_pattern_ok
            and self.max_offdiag <= tol
            and self.diag_mismatch <= tol
            and self.conjugation_residual <= tol
        )


def correlation_spectrum(rho) -> tuple[np.ndarray, float]:
    """Singular values (descending) and determinant of the correlation matrix.

    These are the local-unitary invariants every figure of merit is built from.
    """
    t = hs_decompose(as_density_matrix(rho)).t
    return np.linalg.svd(t, compute_uv=False), float(np.linalg.det(t))


def target_signs(det_t: float) -> np.ndarray:
    if det_t > DET_TOL:
        return np.array([-1.0, -1.0, 1.0])
    return -np.ones(3)


def _already_canonical(t: np.ndarray, det_t: float, tol: float = 1e-14) -> bool:
    # Keeps U1 = U2 = I for states that need no rotation (singlet, Werner, ...).
    off = t - np.diag(np.diag(t))
    return bool(np.max(np.abs(off)) <= tol and sign_pattern_ok(np.diag(t), det_t, tol))


def canonicalize(rho) -> CanonicalForm:
    """Find ``U1 (x) U2`` bringing ``rho`` to canonical form."""
    rho = as_density_matrix(rho)
    t = hs_decompose(rho).t
    det_t = float(np.linalg.det(t))
    o1, sigma, o2 = svd3(t)
    if _already_canonical(t, det_t):
        eye = np.eye(2, dtype=complex)
        return CanonicalForm(
            rho=rho,
            varrho=rho,
            u1=eye,
            u2=eye.copy(),
            diag=np.diag(t).copy(),
            det_t=det_t,
            singular_values=sigma.copy(),
            eigenvalues=np.linalg.eigvals(t),
        )
    r1, d, r2 = make_proper(o1, sigma, o2)

    lam = target_signs(det_t)
    flips = lam * np.where(d >= 0, 1.0, -1.0)
    if np.prod(flips) < 0:
        # Only reachable when |det T| <= DET_TOL, i.e. the smallest value is ~0.
        flips[-1] *= -1
    # diag(flips) has det +1, so q1 stays a proper rotation.
    q1 = flips[:, None] * r1.T
    q2 = r2.T
    u1 = so3_to_su2(q1)
    u2 = so3_to_su2(q2)
    varrho = rho.local_unitary(u1, u2)
    return CanonicalForm(
        rho=rho,
        varrho=varrho,
        u1=u1,
        u2=u2,
        diag=flips * d,
        det_t=det_t,
        singular_values=sigma.copy(),
        eigenvalues=np.linalg.eigvals(t),
    )


def sign_pattern_ok(diag, det_t: float, tol: float = SIGN_TOL) -> bool:
    diag = np.asarray(diag, dtype=float)
    mags = np.abs(diag)
    if np.any(np.diff(mags) > tol):
        return False
    lam = target_signs(det_t)
    significant = mags > tol
    return bool(np.all(np.sign(diag[significant]) == lam[significant]))


def verify_canonical(cf: CanonicalForm) -> CanonicalCheck:
    """Residuals of a canonical form against its defining properties."""
    t = hs_decompose(cf.varrho).t
    off = t - np.diag(np.diag(t))
    expected = np.kron(cf.u1, cf.u2) @ cf.rho.m @ np.kron(cf.u1, cf.u2).conj().T
    return CanonicalCheck(
        max_offdiag=float(np.max(np.abs(off))),
        diag_mismatch=float(np.max(np.abs(np.diag(t) - cf.diag))),
        conjugation_residual=float(np.max(np.abs(cf.varrho.m - expected))),
        sign_pattern_ok=sign_pattern_ok(cf.diag, cf.det_t),
    )
