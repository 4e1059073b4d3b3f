"""Monte Carlo oracle for the standard teleportation protocol.

The protocol is simulated by operator algebra on the three-qubit state
``|psi><psi| (x) rho`` (input qubit, Alice's half, Bob's half): Bell-basis
projection on the first two qubits, Pauli correction ``sigma_k`` on Bob's
qubit, partial trace, overlap with the input.  Averages over inputs are Monte
Carlo estimates with Haar-uniform Bloch vectors.  None of this code uses the
closed forms in :mod:`telefid.figures`; the closed-form fidelity
``(1 - a^T T a) / 2`` is only used as an in-line cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DerivationMismatch, InvalidParameter, NotCanonical
from .linalg import PAULI_BASIS, PAULIS, haar_su2
from .state import (
    BELL_VECTORS,
    DensityMatrix,
    as_density_matrix,
    bell_projector,
    hs_decompose,
    werner,
)

DIAG_TOL = 1e-9
MISMATCH_TOL = 1e-10
PROB_TOL = 1e-12
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class BellBasis:
    projectors: tuple[np.ndarray, ...]
    t_matrices: tuple[np.ndarray, ...]
    corrections: tuple[np.ndarray, ...]


def _build_bell_basis() -> BellBasis:
    projectors = tuple(bell_projector(k) for k in range(4))
    t_mats = tuple(hs_decompose(p).t for p in projectors)
    return BellBasis(projectors=projectors, t_matrices=t_mats, corrections=PAULI_BASIS)


BELL = _build_bell_basis()


def bloch_projector(a) -> np.ndarray:
    """``(I + a . sigma) / 2``; accepts shape (3,) or (n, 3)."""
    a = np.asarray(a, dtype=float)
    sig = np.stack(PAULIS)
    return 0.5 * (np.eye(2) + np.tensordot(a, sig, axes=([-1], [0])))


def _require_diagonal(varrho: DensityMatrix):
    b = hs_decompose(varrho)
    off = b.t - np.diag(np.diag(b.t))
    if np.max(np.abs(off)) > DIAG_TOL:
        raise NotCanonical(
            f"resource state correlation matrix is not diagonal (max off-diagonal {np.max(np.abs(off)):.3e})"
        )
    return b


def _check_unit(a: np.ndarray, tol: float = 1e-12):
    norms = np.linalg.norm(a, axis=-1)
    if np.any(np.abs(norms - 1) > tol):
        raise InvalidParameter("Bloch vector must have unit length")


def teleport_fidelity_exact(varrho, a, return_probabilities: bool = False):
    """Teleportation fidelity for input Bloch vector ``a`` via explicit protocol algebra.

    Builds the 8x8 operator ``|psi><psi| (x) varrho``, projects qubits 1-2 onto
    each Bell state, corrects Bob's qubit with ``sigma_k``, traces out Alice
    and sums the overlaps ``p_k <psi|varsigma_k|psi>``.  The value is checked
    against ``(1 - a^T T a) / 2``; disagreement raises :class:`DerivationMismatch`.
    """
    varrho = as_density_matrix(varrho)
    a = np.asarray(a, dtype=float)
    _check_unit(a)
    b = _require_diagonal(varrho)

    psi = bloch_projector(a)
    joint = np.kron(psi, varrho.m)
    fid = 0.0
    probs = np.empty(4)
    for k in range(4):
        proj = np.kron(BELL.projectors[k], np.eye(2))
        post = proj @ joint @ proj
        probs[k] = np.trace(post).real
        bob = np.einsum("ijkijl->kl", post.reshape(2, 2, 2, 2, 2, 2))
        corr = BELL.corrections[k]
        bob = corr @ bob @ corr.conj().T
        fid += np.trace(psi @ bob).real
    if abs(probs.sum() - 1) > PROB_TOL:
        raise DerivationMismatch(f"outcome probabilities sum to {probs.sum()!r}")
    closed = 0.5 * (1 - a @ b.t @ a)
    if abs(fid - closed) > MISMATCH_TOL:
        raise DerivationMismatch(
            f"protocol fidelity {fid!r} differs from closed form {closed!r}"
        )
    return (fid, probs) if return_probabilities else fid


def _outcome_maps(m: np.ndarray) -> np.ndarray:
    """Linear maps ``vec(psi) -> vec(p_k varsigma_k)`` for the four outcomes.

    Row-major vectorisation, so ``vec(X A Y) = kron(X, Y^T) vec(A)``.  For
    outcome ``k`` the map is: contract the input with the Bell coefficient
    matrix ``B_k`` (Alice's projection), push through the resource state to
    Bob's qubit, then conjugate by the correction ``sigma_k``.
    """
    # r2[(b, b'), (a, a')] = rho[a, b, a', b']
    r2 = m.reshape(2, 2, 2, 2).transpose(1, 3, 0, 2).reshape(4, 4)
    maps = np.empty((4, 4, 4), dtype=complex)
    for k in range(4):
        bk = BELL_VECTORS[k].reshape(2, 2)
        corr = BELL.corrections[k]
        project = np.kron(bk.conj().T, bk.T)
        correct = np.kron(corr, corr.conj())
        maps[k] = correct @ r2 @ project
    return maps


def _protocol_batch(m: np.ndarray, psi: np.ndarray):
    """Vectorised protocol: fidelities and outcome probabilities for a batch of inputs.

    ``psi`` has shape (n, 2, 2).  Same algebra as :func:`teleport_fidelity_exact`,
    composed into one 4x4 map per measurement outcome.
    """
    n = psi.shape[0]
    vec = psi.reshape(n, 4)
    bob = np.einsum("kij,nj->nki", _outcome_maps(m), vec)
    probs = (bob[:, :, 0] + bob[:, :, 3]).real
    # Tr(psi bob) = sum_ij psi[j, i] bob[i, j]
    vec_t = np.swapaxes(psi, 1, 2).reshape(n, 4)
    fid = np.einsum("ni,nki->n", vec_t, bob).real
    return fid, probs


def protocol_fidelities(varrho, a) -> np.ndarray:
    """Batched :func:`teleport_fidelity_exact` for Bloch vectors of shape (n, 3)."""
    varrho = as_density_matrix(varrho)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    _check_unit(a)
    b = _require_diagonal(varrho)
    fid, probs = _protocol_batch(varrho.m, bloch_projector(a))
    if np.max(np.abs(probs.sum(axis=1) - 1)) > PROB_TOL:
        raise DerivationMismatch("outcome probabilities do not sum to 1")
    closed = 0.5 * (1 - np.einsum("ni,ij,nj->n", a, b.t, a))
    err = np.max(np.abs(fid - closed))
    if err > MISMATCH_TOL:
        raise DerivationMismatch(f"protocol fidelity differs from closed form by {err:.3e}")
    return fid


def sample_bloch_uniform(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform points on the unit sphere from normalised 3D Gaussians."""
    shape = (3,) if size is None else (size, 3)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def cross_term(a, x) -> float:
    """``sum_k a^T T_k x``, the local-vector term that drops out of the fidelity."""
    total = sum(BELL.t_matrices)
    return float(np.asarray(a) @ total @ np.asarray(x))


@dataclass(frozen=True)
class SimulationStats:
    n_samples: int
    mean_fidelity: float
    std_fidelity: float
    stderr_mean: float
    stderr_std: float
    seed: int

    def z_scores(self, mean_expected: float, std_expected: float, floor: float = 1e-10):
        """Deviations from expected values in standard errors.

        ``floor`` absorbs rounding when the fidelity is constant and the
        standard errors vanish.
        """
        return (
            _zscore(self.mean_fidelity - mean_expected, self.stderr_mean, floor),
            _zscore(self.std_fidelity - std_expected, self.stderr_std, floor),
        )

    def agrees_with(self, mean_expected: float, std_expected: float, k: float = 4.0) -> bool:
        zm, zs = self.z_scores(mean_expected, std_expected)
        return abs(zm) <= k and abs(zs) <= k


def _zscore(diff: float, stderr: float, floor: float) -> float:
    if abs(diff) <= floor:
        return 0.0
    if stderr == 0:
        return math.copysign(math.inf, diff)
    return diff / stderr


def _summarise(samples: np.ndarray, seed: int) -> SimulationStats:
    n = samples.size
    mean = float(samples.mean())
    centred = samples - mean
    m2 = float(np.mean(centred**2))
    m4 = float(np.mean(centred**4))
    std = math.sqrt(m2)
    sample_std = math.sqrt(m2 * n / (n - 1))
    # Delta method: Var(s) ~ (m4 - m2^2) / (4 m2 n).
    stderr_std = math.sqrt(max(m4 - m2 * m2, 0.0) / n) / (2 * std) if std > 0 else 0.0
    return SimulationStats(
        n_samples=n,
        mean_fidelity=mean,
        std_fidelity=std,
        stderr_mean=sample_std / math.sqrt(n),
        stderr_std=stderr_std,
        seed=seed,
    )


def _chunk_streams(seed: int, n: int, chunk: int):
    """Independent per-chunk generators derived from the root seed."""
    n_chunks = max(1, -(-n // chunk))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i, child in enumerate(children):
        size = min(chunk, n - i * chunk)
        yield np.random.default_rng(child), size


def monte_carlo_stats(varrho, n: int, seed: int, chunk: int = DEFAULT_CHUNK) -> SimulationStats:
    """Mean and (population) standard deviation of the protocol fidelity over random inputs.

    Inputs are split into chunks, each with its own stream spawned from ``seed``,
    so results do not depend on how chunks might be distributed across workers.
    """
    if n < 2:
        raise InvalidParameter("need at least 2 samples")
    varrho = as_density_matrix(varrho)
    parts = [
        protocol_fidelities(varrho, sample_bloch_uniform(rng, size))
        for rng, size in _chunk_streams(seed, n, chunk)
    ]
    return _summarise(np.concatenate(parts), seed)


@dataclass(frozen=True)
class SchurReport:
    n_samples: int
    quadratic_mc: float
    quadratic_exact: float
    quadratic_stderr: float
    quartic_mc: float
    quartic_exact: float
    quartic_stderr: float

    @property
    def quadratic_z(self) -> float:
        return _zscore(self.quadratic_mc - self.quadratic_exact, self.quadratic_stderr, 1e-12)

    @property
    def quartic_z(self) -> float:
        return _zscore(self.quartic_mc - self.quartic_exact, self.quartic_stderr, 1e-12)

    def passed(self, k: float = 4.0) -> bool:
        return abs(self.quadratic_z) <= k and abs(self.quartic_z) <= k


def verify_schur_integrals(t, n: int, seed: int) -> SchurReport:
    """Compare sphere averages of ``a^T T a`` and its square against the group-integral formulas."""
    if n < 1000:
        raise InvalidParameter("need at least 1000 samples")
    t = np.asarray(t, dtype=float)
    rng = np.random.default_rng(seed)
    a = sample_bloch_uniform(rng, n)
    q = np.einsum("ni,ij,nj->n", a, t, a)
    q2 = q * q
    tr = np.trace(t)
    return SchurReport(
        n_samples=n,
        quadratic_mc=float(q.mean()),
        quadratic_exact=float(tr / 3),
        quadratic_stderr=float(q.std(ddof=1) / math.sqrt(n)),
        quartic_mc=float(q2.mean()),
        quartic_exact=float((tr * tr + np.trace(t @ t.T) + np.trace(t @ t)) / 15),
        quartic_stderr=float(q2.std(ddof=1) / math.sqrt(n)),
    )


def bilateral_twirl(rho, n: int, seed: int) -> DensityMatrix:
    """Average of ``(U (x) U) rho (U (x) U)^+`` over ``n`` Haar-random single-qubit ``U``.

    The singlet is invariant under every ``U (x) U``, so the singlet overlap is
    preserved exactly; the Haar limit is the Werner state with that overlap.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    rho = as_density_matrix(rho)
    us = haar_su2(np.random.default_rng(seed), n)
    w = np.einsum("nab,ncd->nacbd", us, us).reshape(n, 4, 4)
    out = np.einsum("nij,jk,nlk->il", w, rho.m, w.conj()) / n
    return DensityMatrix(0.5 * (out + out.conj().T))


def twirl_limit(rho) -> DensityMatrix:
    """Exact Haar-twirl result: Werner state with the same singlet weight."""
    rho = as_density_matrix(rho)
    p0 = float(np.vdot(BELL_VECTORS[0], rho.m @ BELL_VECTORS[0]).real)
    return werner(min(max(p0, 0.0), 1.0))


__all__ = [
    "BELL",
    "BellBasis",
    "SchurReport",
    "SimulationStats",
    "bilateral_twirl",
    "bloch_projector",
    "cross_term",
    "haar_su2",
    "monte_carlo_stats",
    "protocol_fidelities",
    "sample_bloch_uniform",
    "teleport_fidelity_exact",
    "twirl_limit",
    "verify_schur_integrals",
]
