"""Numerical range boundaries and support-function inclusion tests.

For each angle ``theta`` the top eigenvector ``x`` of the Hermitian part
``(e^{-i theta} T + e^{i theta} T^H) / 2`` gives a boundary point
``<T x, x>`` and the support value ``lambda_max``. Two convex compact sets
sampled on the same angle grid are compared through their support values.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import GridMismatch
from .linalg import spectral_norm
from .transform import aluthge_transform
from .validation import check_matrix, scale

DEFAULT_ANGLES = 720


@dataclass(frozen=True)
class RangeBoundary:
    points: np.ndarray
    angles: np.ndarray
    support_values: np.ndarray

    def __post_init__(self):
        if not (self.points.size == self.angles.size == self.support_values.size >= 3):
            raise ValueError("boundary arrays must share a length >= 3")

    def convexity_violation(self):
        """Largest excess of any boundary point over any supporting half-plane.

        Point ``p`` lies in the half-plane of angle ``theta`` when
        ``Re(e^{-i theta} p) <= h(theta)``.
        """
        proj = np.real(np.exp(-1j * self.angles)[:, None] * self.points[None, :])
        return float(max(0.0, np.max(proj - self.support_values[:, None])))


def angle_grid(n_angles):
    return 2 * np.pi * np.arange(n_angles) / n_angles


def numerical_range(T, n_angles=DEFAULT_ANGLES):
    """Boundary of ``W(T)`` sampled at ``n_angles`` uniformly spaced angles."""
    T = check_matrix(T)
    if n_angles < 16:
        raise ValueError("n_angles must be >= 16")
    theta = angle_grid(n_angles)
    rot = np.exp(-1j * theta)[:, None, None] * T[None]
    H = (rot + np.conj(np.swapaxes(rot, 1, 2))) / 2
    vals, vecs = np.linalg.eigh(H)
    x = vecs[:, :, -1]
    points = np.einsum("ki,ij,kj->k", x.conj(), T, x)
    return RangeBoundary(points=points, angles=theta, support_values=vals[:, -1].copy())


@dataclass(frozen=True)
class Inclusion:
    included: bool
    max_violation: float


def range_included(inner, outer, tol=0.0):
    """Support-function test of ``inner`` inside ``outer`` on a shared angle grid."""
    if inner.angles.shape != outer.angles.shape or not np.allclose(
        inner.angles, outer.angles, rtol=0, atol=1e-12
    ):
        raise GridMismatch("boundaries were sampled on different angle grids")
    excess = inner.support_values - outer.support_values
    worst = float(np.max(excess))
    return Inclusion(included=bool(worst <= tol), max_violation=worst)


def norm_probe(T, mean_f, mean_g, lambdas):
    """Worst ``||Delta_f(T) - l I|| - ||Delta_g(T) - l I||`` over sampled ``l``.

    Non-positive values are consistent with ``mean_f`` being dominated by
    ``mean_g``.
    """
    T = check_matrix(T)
    Df = aluthge_transform(T, mean_f).delta
    Dg = aluthge_transform(T, mean_g).delta
    eye = np.eye(T.shape[0])
    diffs = [spectral_norm(Df - l * eye) - spectral_norm(Dg - l * eye) for l in np.ravel(lambdas)]
    return float(max(diffs))


def range_of_transform_report(T, means, n_angles=DEFAULT_ANGLES, tol=1e-7):
    """Boundaries of ``W(T)`` and of ``W(Delta_mean(T))`` per mean, plus inclusions.

    ``inclusion[i][j]`` tells whether range ``i`` sits inside range ``j``; index 0
    is ``W(T)`` itself and indices ``1..`` follow ``means``. The tolerance is
    relative to ``||T||``.
    """
    T = check_matrix(T)
    if not means:
        raise ValueError("means must be non-empty")
    atol = tol * scale(spectral_norm(T))
    labels = ["T"] + [m.label for m in means]
    bounds = [numerical_range(T, n_angles)]
    bounds += [numerical_range(aluthge_transform(T, m).delta, n_angles) for m in means]
    k = len(bounds)
    included = [[False] * k for _ in range(k)]
    violations = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            res = range_included(bounds[i], bounds[j], atol)
            included[i][j] = res.included
            violations[i][j] = res.max_violation
    return {
        "labels": labels,
        "n_angles": n_angles,
        "tolerance": atol,
        "boundaries": bounds,
        "inclusion": included,
        "max_violation": violations,
    }
