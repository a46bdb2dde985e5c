"""Iterated transforms and the arithmetic-mean limit.

For invertible ``T`` the arithmetic-mean iteration has the binomial closed form
``U 2^-n sum_k C(n, k) (U^H)^k |T| U^k``. Diagonalizing ``U = Z D Z^H``, the
positive part becomes a Schur product with ``((1 + e^{i(th_j - th_i)})/2)^n``,
whose entries vanish unless the two phases coincide. That gives the limit
``N = U Z (E o Z^H |T| Z) Z^H`` with ``E`` the phase-coincidence pattern.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import schur
from scipy.special import gammaln

from .exceptions import KernelConditionViolated
from .linalg import normality_defect, polar_decompose, spectral_norm
from .transform import require_invertible, aluthge_transform
from .validation import check_matrix, scale

PHASE_TOL = 1e-8
_EXACT_BINOMIAL_MAX = 60


@dataclass
class IterationTrace:
    """Record of ``Delta^n(T)`` for ``n = 1 .. steps``.

    ``defects[n-1]`` and ``traces[n-1]`` belong to the n-th iterate and
    ``step_deltas[n-1] = ||Delta^n - Delta^(n-1)||_F``. ``rate`` is the median
    ratio of consecutive step deltas over the last 20 steps, a rough
    geometric convergence rate.
    """

    iterates: list = field(repr=False)
    defects: np.ndarray
    step_deltas: np.ndarray
    traces: np.ndarray
    converged: bool
    limit: Optional[np.ndarray] = field(default=None, repr=False)
    rate: Optional[float] = None

    @property
    def steps(self):
        return int(self.step_deltas.size)

    @property
    def last(self):
        return self.iterates[-1]


def _rate_estimate(deltas, window=20):
    d = np.asarray(deltas[-(window + 1):])
    d = d[d > 0]
    if d.size < 3:
        return None
    return float(np.median(d[1:] / d[:-1]))


def iterate(T, mean, max_steps=2000, tol=1e-10, keep_iterates=True):
    """Apply the transform until ``||Delta^(n+1) - Delta^n||_F <= tol ||T||``.

    Parameters
    ----------
    T : array_like of shape (m, m)
    mean : OperatorMean
    max_steps : int
    tol : float
        Relative to the spectral norm of ``T``.
    keep_iterates : bool
        When false only the final iterate is kept in ``iterates``.

    Returns
    -------
    IterationTrace
    """
    T = check_matrix(T)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    threshold = tol * scale(spectral_norm(T))
    current = T
    iterates, defects, deltas, traces = [], [], [], []
    converged = False
    for _ in range(max_steps):
        nxt = aluthge_transform(current, mean).delta
        deltas.append(float(np.linalg.norm(nxt - current)))
        defects.append(normality_defect(nxt))
        traces.append(complex(np.trace(nxt)))
        if keep_iterates:
            iterates.append(nxt)
        current = nxt
        if deltas[-1] <= threshold:
            converged = True
            break
    if not keep_iterates:
        iterates = [current]
    return IterationTrace(
        iterates=iterates,
        defects=np.array(defects),
        step_deltas=np.array(deltas),
        traces=np.array(traces),
        converged=converged,
        limit=current if converged else None,
        rate=_rate_estimate(deltas),
    )


def binomial_weights(n, p=0.5):
    """``C(n, k) (1-p)^(n-k) p^k`` for ``k = 0..n``.

    Exact integer binomials up to ``n = 60``, log-domain beyond.
    """
    k = np.arange(n + 1)
    if n <= _EXACT_BINOMIAL_MAX:
        coeffs = np.array([math.comb(n, int(j)) for j in k], dtype=float)
        return coeffs * (1.0 - p) ** (n - k) * p**k
    logs = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    with np.errstate(divide="ignore"):
        logs = logs + (n - k) * np.log1p(-p) + k * np.log(p)
    return np.exp(logs)


def check_kernel_condition(T, tol=1e-8):
    """Raise unless ``null(T^H)`` is contained in ``null(T)``.

    For square ``T`` that is the same as ``range(T) == range(T^H)``, i.e. the
    initial and final projections of the polar factor agree.
    """
    polar = polar_decompose(T)
    U = polar.isometry
    gap = np.linalg.norm(U @ U.conj().T - U.conj().T @ U)
    if gap > tol * max(1.0, math.sqrt(T.shape[0])):
        raise KernelConditionViolated(f"null(T^H) is not inside null(T) (projection gap {gap:.2e})")
    return polar


def arithmetic_iterate_closed_form(T, n):
    """``U 2^-n sum_k C(n, k) (U^H)^k |T| U^k``, the n-th arithmetic-mean iterate."""
    T = check_matrix(T)
    if n < 0:
        raise ValueError("n must be >= 0")
    polar = check_kernel_condition(T)
    U, A = polar.isometry, polar.positive
    Uh = U.conj().T
    weights = binomial_weights(n, 0.5)
    acc = np.zeros_like(A)
    X = A
    for k in range(n + 1):
        acc += weights[k] * X
        X = Uh @ X @ U
    return U @ acc


def _phase_clusters(phases, tol=PHASE_TOL):
    """Union-find labels of phases whose circular distance is within ``tol``."""
    m = phases.size
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            d = abs(phases[i] - phases[j]) % (2 * np.pi)
            if min(d, 2 * np.pi - d) <= tol:
                parent[find(i)] = find(j)
    return np.array([find(i) for i in range(m)])


def unitary_phases(U):
    """Schur form ``U = Z D Z^H`` and the phases of ``D`` in ``[0, 2 pi)``."""
    R, Z = schur(U, output="complex")
    return np.mod(np.angle(np.diagonal(R)), 2 * np.pi), Z


def phase_gap(T, tol=PHASE_TOL):
    """Smallest circular gap between unitary-factor phases that do not coincide.

    Returns ``inf`` when all phases coincide (within ``tol``).
    """
    T = check_matrix(T)
    require_invertible(T)
    phases, _ = unitary_phases(polar_decompose(T).isometry)
    gap = np.inf
    for i in range(phases.size):
        for j in range(i + 1, phases.size):
            d = abs(phases[i] - phases[j]) % (2 * np.pi)
            d = min(d, 2 * np.pi - d)
            if d > tol:
                gap = min(gap, d)
    return float(gap)


def predict_arithmetic_limit(T):
    """Limit of the arithmetic-mean iteration for invertible ``T``.

    Raises
    ------
    SingularInput
        If ``T`` is numerically singular.
    """
    T = check_matrix(T)
    require_invertible(T)
    polar = polar_decompose(T)
    U = polar.isometry
    phases, Z = unitary_phases(U)
    labels = _phase_clusters(phases)
    E = (labels[:, None] == labels[None, :]).astype(float)
    P = Z.conj().T @ polar.positive @ Z
    P0 = Z @ (E * P) @ Z.conj().T
    return U @ P0
