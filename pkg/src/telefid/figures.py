"""Closed-form teleportation figures of merit.

Everything here is a function of the singular values ``s1 >= s2 >= s3`` of the
correlation matrix and the sign of ``det T``:

* fully entangled fraction and maximal fidelity ``F = (2 FEF + 1) / 3``;
* fidelity deviation, the standard deviation of the teleportation fidelity over
  Haar-uniform inputs once the state is in canonical form;
* the useful (``F > 2/3``) and universal (zero deviation) flags.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .canonical import DET_TOL, correlation_spectrum, target_signs
from .errors import InvalidParameter
from .linalg import PAULIS, haar_su2
from .state import SINGLET, DensityMatrix, as_density_matrix, werner

UNIVERSAL_TOL = 1e-10
EQUAL_SV_TOL = 1e-9
CLASSICAL_FIDELITY = 2 / 3

_DEV_SCALE = 1 / (3 * math.sqrt(10))


class Branch(str, enum.Enum):
    DET_NON_POSITIVE = "DetNonPositive"
    DET_POSITIVE = "DetPositive"


def branch_of(det_t: float) -> Branch:
    return Branch.DET_POSITIVE if det_t > DET_TOL else Branch.DET_NON_POSITIVE


def canonical_diagonal(singular_values, det_t: float) -> np.ndarray:
    """Signed canonical diagonal ``lambda_i |t_ii|`` from sorted singular values."""
    return target_signs(det_t) * np.asarray(singular_values, dtype=float)


# -- diagonal-T moments ------------------------------------------------------


def mean_fidelity_diagonal(t_diag) -> float:
    """Average fidelity ``(1 - Tr T / 3) / 2`` of a state with diagonal ``T``."""
    t = np.asarray(t_diag, dtype=float)
    return float(0.5 * (1 - t.sum() / 3))


def second_moment_diagonal(t_diag) -> float:
    """Input-averaged squared fidelity for diagonal ``T``."""
    t = np.asarray(t_diag, dtype=float)
    tr = t.sum()
    sq = np.dot(t, t)
    return float(0.25 * (1 - 2 * tr / 3 + (tr * tr + 2 * sq) / 15))


def deviation_diagonal(t_diag) -> float:
    """Standard deviation of the fidelity for diagonal ``T``.

    Uses the pairwise-difference form, which is never negative under rounding.
    """
    t = np.asarray(t_diag, dtype=float)
    pair = (t[0] - t[1]) ** 2 + (t[0] - t[2]) ** 2 + (t[1] - t[2]) ** 2
    return _DEV_SCALE * math.sqrt(pair)


def deviation_trace_form(t_diag) -> float:
    """Same quantity written as ``sqrt(Tr T^2 - (Tr T)^2 / 3) / sqrt(30)``."""
    t = np.asarray(t_diag, dtype=float)
    val = np.dot(t, t) - t.sum() ** 2 / 3
    return math.sqrt(max(val, 0.0)) / math.sqrt(30)


def deviation_branch_form(singular_values, det_t: float) -> float:
    """Deviation from the case split on ``sign(det T)``.

    For ``det T > 0`` the minimum over which magnitude carries the ``+1`` sign
    is taken explicitly rather than assumed.
    """
    s = np.asarray(singular_values, dtype=float)
    if det_t <= DET_TOL:
        return _DEV_SCALE * math.sqrt(
            (s[0] - s[1]) ** 2 + (s[0] - s[2]) ** 2 + (s[1] - s[2]) ** 2
        )
    best = math.inf
    for k in range(3):
        i, j = (x for x in range(3) if x != k)
        val = (s[i] - s[j]) ** 2 + (s[i] + s[k]) ** 2 + (s[j] + s[k]) ** 2
        best = min(best, val)
    return _DEV_SCALE * math.sqrt(best)


def schur_quadratic(t) -> float:
    """Sphere average of ``a^T T a``: ``Tr T / 3``."""
    return float(np.trace(np.asarray(t, dtype=float))) / 3


def schur_quartic(t) -> float:
    """Sphere average of ``(a^T T a)^2``: ``[(Tr T)^2 + Tr(T T^T) + Tr(T^2)] / 15``."""
    t = np.asarray(t, dtype=float)
    tr = np.trace(t)
    return float(tr * tr + np.trace(t @ t.T) + np.trace(t @ t)) / 15


# -- state-level figures -----------------------------------------------------


def fef(rho) -> float:
    """Fully entangled fraction (maximal overlap with a maximally entangled state)."""
    s, det_t = correlation_spectrum(rho)
    if det_t > DET_TOL:
        return float(0.25 * (1 + s[0] + s[1] - s[2]))
    return float(0.25 * (1 + s.sum()))


def max_fidelity(rho) -> float:
    """Maximal average teleportation fidelity over local-unitary strategies."""
    s, det_t = correlation_spectrum(rho)
    if det_t > DET_TOL:
        return float(0.5 * (1 + (s[0] + s[1] - s[2]) / 3))
    return float(0.5 * (1 + s.sum() / 3))


def fidelity_deviation(rho) -> float:
    """Fidelity deviation of the optimal (canonical-form) protocol."""
    s, det_t = correlation_spectrum(rho)
    return deviation_diagonal(canonical_diagonal(s, det_t))


@dataclass(frozen=True)
class TeleportationReport:
    max_fidelity: float
    fidelity_deviation: float
    fully_entangled_fraction: float
    det_t: float
    singular_values: tuple[float, float, float]
    useful: bool
    universal: bool
    branch: Branch

    def to_dict(self, digits: int = 15) -> dict:
        def r(x):
            return float(f"{x:.{digits}g}")

        return {
            "max_fidelity": r(self.max_fidelity),
            "fidelity_deviation": r(self.fidelity_deviation),
            "fef": r(self.fully_entangled_fraction),
            "det_t": r(self.det_t),
            "singular_values": [r(x) for x in self.singular_values],
            "useful": self.useful,
            "universal": self.universal,
            "branch": self.branch.value,
        }


def classify(rho) -> TeleportationReport:
    s, det_t = correlation_spectrum(rho)
    diag = canonical_diagonal(s, det_t)
    if det_t > DET_TOL:
        frac = 0.25 * (1 + s[0] + s[1] - s[2])
    else:
        frac = 0.25 * (1 + s.sum())
    dev = deviation_diagonal(diag)
    return TeleportationReport(
        max_fidelity=float(mean_fidelity_diagonal(diag)),
        fidelity_deviation=float(dev),
        fully_entangled_fraction=float(frac),
        det_t=det_t,
        singular_values=tuple(float(x) for x in s),
        useful=bool(s.sum() > 1),
        universal=bool(dev <= UNIVERSAL_TOL),
        branch=branch_of(det_t),
    )


def universal_state_for_fidelity(fidelity: float) -> DensityMatrix:
    """Werner state with ``|t_ii| = 2F - 1`` on every axis, i.e. maximal fidelity ``F`` and zero deviation."""
    if not CLASSICAL_FIDELITY < fidelity <= 1:
        raise InvalidParameter(f"fidelity must lie in (2/3, 1], got {fidelity}")
    t = 2 * fidelity - 1
    # Werner diagonal is -(4 p0 - 1) / 3 on each axis.
    p0 = min((3 * t + 1) / 4, 1.0)
    return werner(p0)


# -- numerical oracle --------------------------------------------------------


def _su2_exp(x) -> np.ndarray:
    """``exp(-i x.sigma / 2)`` for a real 3-vector ``x``."""
    theta = float(np.linalg.norm(x))
    if theta < 1e-15:
        return np.eye(2, dtype=complex)
    n = np.asarray(x) / theta
    ns = n[0] * PAULIS[0] + n[1] * PAULIS[1] + n[2] * PAULIS[2]
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * ns


def fef_oracle(rho, n_samples: int = 200, seed=0, refine: int = 5) -> float:
    """Brute-force fully entangled fraction.

    Evaluates ``<Psi|rho|Psi>`` for ``n_samples`` Haar-random ``Psi = (U (x) V)|Psi_0>``,
    then polishes the ``refine`` best candidates with BFGS over local
    rotations.  Returns the best overlap found, a lower bound on the true value.
    """
    if n_samples < 1:
        raise InvalidParameter("n_samples must be >= 1")
    m = as_density_matrix(rho).m
    rng = np.random.default_rng(seed)
    us = haar_su2(rng, n_samples)
    vs = haar_su2(rng, n_samples)
    # psi[n] = (U_n (x) V_n) singlet, singlet reshaped as a 2x2 coefficient matrix.
    c0 = SINGLET.reshape(2, 2)
    psis = np.einsum("nab,bc,ndc->nad", us, c0, vs).reshape(n_samples, 4)
    vals = np.einsum("na,ab,nb->n", psis.conj(), m, psis).real
    order = np.argsort(vals)[::-1][: max(1, min(refine, n_samples))]
    best = float(vals[order[0]])

    for idx in order:
        u0, v0 = us[idx], vs[idx]

        def neg_overlap(x, u0=u0, v0=v0):
            u = _su2_exp(x[:3]) @ u0
            v = _su2_exp(x[3:]) @ v0
            psi = (u @ c0 @ v.T).reshape(4)
            return -float(np.vdot(psi, m @ psi).real)

        res = minimize(neg_overlap, np.zeros(6), method="BFGS", options={"gtol": 1e-10})
        best = max(best, -float(res.fun))
    return best
