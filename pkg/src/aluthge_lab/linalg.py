"""Dense complex factorizations: Hermitian eigendecomposition and canonical polar form.

Matrices are plain ``numpy`` complex128 arrays; the dataclasses below only
bundle the factors that the rest of the package consumes.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceFailure, NotHermitian
from .validation import check_matrix, scale

#: Singular values below ``RANK_CUT * sigma_max`` are treated as zero.
RANK_CUT = 1e-12


@dataclass(frozen=True)
class SpectralData:
    """Eigenpairs of a Hermitian matrix, ``A = W @ diag(s) @ W^H``.

    Attributes
    ----------
    eigenvectors : ndarray of shape (m, m)
        Unitary matrix whose columns are eigenvectors.
    eigenvalues : ndarray of shape (m,)
        Real eigenvalues in ascending order.
    """

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    def reconstruct(self):
        W = self.eigenvectors
        return (W * self.eigenvalues) @ W.conj().T


@dataclass(frozen=True)
class PolarParts:
    """Canonical polar decomposition ``T = U |T|``.

    ``isometry`` is a partial isometry whose initial space is the range of
    ``positive``; it is unitary only when ``T`` is invertible.
    """

    isometry: np.ndarray
    positive: np.ndarray
    rank: int

    @property
    def support_projection(self):
        """``U^H U``, the orthogonal projection onto ``range(|T|)``."""
        U = self.isometry
        return U.conj().T @ U


def hermitian_eig(A):
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    Raises
    ------
    NotHermitian
        If ``||A - A^H||_F > 1e-10 ||A||_F``.
    ConvergenceFailure
        If LAPACK does not converge.
    """
    A = check_matrix(A, name="A")
    defect = np.linalg.norm(A - A.conj().T)
    if defect > 1e-10 * scale(np.linalg.norm(A)):
        raise NotHermitian(f"matrix is not Hermitian (defect {defect:.3e})")
    H = (A + A.conj().T) / 2
    try:
        s, W = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return SpectralData(eigenvectors=W, eigenvalues=s)


def _svd(T):
    try:
        return np.linalg.svd(T)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def polar_decompose(T):
    """Canonical polar decomposition of a square matrix via its SVD.

    With ``T = P diag(sigma) Q^H`` we take ``|T| = Q diag(sigma) Q^H`` and
    ``U = P Q^H`` restricted to the singular vectors whose singular value
    exceeds ``RANK_CUT * sigma_max``. Columns belonging to the kernel are
    dropped so that ``U^H U`` projects onto ``range(|T|)``.
    """
    T = check_matrix(T)
    P, sigma, Qh = _svd(T)
    smax = sigma[0] if sigma.size else 0.0
    rank = int(np.count_nonzero(sigma > RANK_CUT * smax)) if smax > 0 else 0
    P_r, s_r, Qh_r = P[:, :rank], sigma[:rank], Qh[:rank]
    U = P_r @ Qh_r
    absT = (Qh_r.conj().T * s_r) @ Qh_r
    absT = (absT + absT.conj().T) / 2
    return PolarParts(isometry=U, positive=absT, rank=rank)


def frobenius_norm(A):
    return float(np.linalg.norm(np.asarray(A)))


def spectral_norm(A):
    """Largest singular value."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def trace(A):
    return complex(np.trace(check_matrix(A, name="A")))


def normality_defect(A):
    """``||A^H A - A A^H||_F``; zero exactly when ``A`` is normal."""
    A = check_matrix(A, name="A")
    Ah = A.conj().T
    return float(np.linalg.norm(Ah @ A - A @ Ah))


def matrix_power_psd(A, p, rank_cut=RANK_CUT):
    """``A**p`` for a positive semidefinite ``A`` by functional calculus.

    Eigenvalues below ``rank_cut * lambda_max`` count as zero, and ``0**p``
    is taken to be 0 for every ``p`` (so ``A**0`` is the support projection).
    """
    eig = hermitian_eig(A)
    s = np.clip(eig.eigenvalues, 0.0, None)
    smax = s.max() if s.size else 0.0
    keep = s > rank_cut * smax if smax > 0 else np.zeros_like(s, dtype=bool)
    powered = np.zeros_like(s)
    powered[keep] = s[keep] ** p
    W = eig.eigenvectors
    return (W * powered) @ W.conj().T


def random_unitary(m, rng):
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))
