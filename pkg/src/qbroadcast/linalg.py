"""Dense complex linear algebra for small operators.

Matrices are numpy complex128 arrays in row-major layout; nothing here is
tuned for size (the largest operator in the pipeline is 256 x 256). The
eigensolver is a cyclic Jacobi iteration written in-package so results are
deterministic across platforms; numpy is used for array plumbing only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HERM_TOL, PSD_FAIL
from .errors import ContractError

__all__ = [
    "EigenDecomposition",
    "kron",
    "eig_hermitian",
    "sqrt_psd",
    "det_complex",
    "fidelity",
    "dagger",
    "hermitian_defect",
]


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def hermitian_defect(a: np.ndarray) -> float:
    """Largest entrywise deviation of a from its conjugate transpose."""
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, left factor most significant."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigensystem of a Hermitian matrix.

    values are real and ascending; vectors holds the matching orthonormal
    eigenvectors as columns, so a = vectors @ diag(values) @ vectors^dagger.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ dagger(self.vectors)


def _check_square(a: np.ndarray, op: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"{op}: expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ContractError(f"{op}: matrix has non-finite entries")
    return a


def eig_hermitian(a: np.ndarray, tol: float = HERM_TOL) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Args:
        a: square Hermitian matrix (defect above tol is rejected; symmetrize
           with (a + a^dagger)/2 before calling if needed).
        tol: largest accepted Hermiticity defect.

    Returns:
        EigenDecomposition with ascending real eigenvalues.
    """
    a = _check_square(a, "eig_hermitian")
    if hermitian_defect(a) > tol:
        raise ContractError(
            f"eig_hermitian: matrix is not Hermitian (defect {hermitian_defect(a):.3e})"
        )
    n = a.shape[0]
    # Work on an exactly Hermitian copy so roundoff cannot accumulate a drift.
    w = (a + dagger(a)) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1:
        return EigenDecomposition(values=w.real.diagonal().copy(), vectors=v)

    scale = max(1.0, float(np.max(np.abs(w.diagonal().real))))
    stop = 1e-15 * scale
    for _ in range(100):
        off = np.abs(w - np.diag(w.diagonal()))
        if off.max() <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                r = abs(apq)
                if r <= stop:
                    continue
                app = w[p, p].real
                aqq = w[q, q].real
                phase = apq.conjugate() / r
                tau = (aqq - app) / (2.0 * r)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # Plane unitary J = [[c, s], [-phase*s, phase*c]] on (p, q).
                colp = w[:, p].copy()
                colq = w[:, q].copy()
                w[:, p] = c * colp - phase * s * colq
                w[:, q] = s * colp + phase * c * colq
                rowp = w[p, :].copy()
                rowq = w[q, :].copy()
                w[p, :] = c * rowp - phase.conjugate() * s * rowq
                w[q, :] = s * rowp + phase.conjugate() * c * rowq
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = w[p, p].real
                w[q, q] = w[q, q].real
                colp = v[:, p].copy()
                colq = v[:, q].copy()
                v[:, p] = c * colp - phase * s * colq
                v[:, q] = s * colp + phase * c * colq
    else:
        raise ContractError("eig_hermitian: Jacobi sweep limit reached without convergence")

    values = w.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values=values[order], vectors=v[:, order])


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-PSD_FAIL, 0) are treated as roundoff and clamped to 0;
    anything lower raises, since the input was not PSD to begin with.
    """
    eig = eig_hermitian(a)
    lo = float(eig.values[0])
    if lo < -PSD_FAIL:
        raise ContractError(f"sqrt_psd: matrix is not PSD (min eigenvalue {lo:.3e})")
    vals = np.where(eig.values < 0.0, 0.0, eig.values)
    return (eig.vectors * np.sqrt(vals)) @ dagger(eig.vectors)


def det_complex(a: np.ndarray) -> complex:
    """Determinant by Gaussian elimination with partial pivoting."""
    a = _check_square(a, "det_complex").copy()
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) == 0.0:
            return 0.0 + 0.0j
        if piv != k:
            a[[k, piv], :] = a[[piv, k], :]
            det = -det
        det *= a[k, k]
        a[k + 1:, k:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k:])
    return complex(det)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = _check_square(rho, "fidelity")
    sigma = _check_square(sigma, "fidelity")
    if rho.shape != sigma.shape:
        raise ContractError(f"fidelity: shape mismatch {rho.shape} vs {sigma.shape}")
    root = sqrt_psd(rho)
    inner = root @ sigma @ root
    inner = (inner + dagger(inner)) / 2.0
    eig = eig_hermitian(inner)
    if float(eig.values[0]) < -PSD_FAIL:
        raise ContractError("fidelity: inner operator not PSD; are both inputs states?")
    vals = np.where(eig.values < 0.0, 0.0, eig.values)
    return float(np.sum(np.sqrt(vals)) ** 2)
