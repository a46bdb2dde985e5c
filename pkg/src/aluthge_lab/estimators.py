"""scikit-learn style wrappers.

Each "sample" is a whole square matrix, so ``X`` is either one ``(m, m)``
matrix or a stack of shape ``(n, m, m)``. ``fit`` only validates the
hyperparameters (and, for the iteration, runs it); nothing is learned across
samples.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dynamics import iterate
from .means import make_mean
from .numrange import DEFAULT_ANGLES, numerical_range
from .transform import aluthge_transform
from .validation import check_matrix, check_matrix_batch


def _build_mean(kind, weight, exponent):
    return make_mean(kind, weight, exponent=exponent)


class AluthgeTransformer(TransformerMixin, BaseEstimator):
    """Generalized Aluthge transform as a stateless transformer.

    Parameters
    ----------
    mean : str
        ``"arithmetic"``, ``"geometric"``, ``"harmonic"``, ``"power"`` or
        ``"logarithmic"``.
    weight : float
        The mean's weight ``f'(1)``.
    exponent : float, optional
        Only for ``mean="power"``.

    Examples
    --------
    >>> import numpy as np
    >>> T = np.array([[0, 1], [2, 0]])
    >>> AluthgeTransformer("geometric").fit_transform(T).real.round(6)
    array([[0.      , 1.414214],
           [1.414214, 0.      ]])
    """

    def __init__(self, mean="geometric", weight=0.5, exponent=None):
        self.mean = mean
        self.weight = weight
        self.exponent = exponent

    def fit(self, X=None, y=None):
        self.mean_ = _build_mean(self.mean, self.weight, self.exponent)
        if X is not None:
            stack, _ = check_matrix_batch(X)
            self.n_features_in_ = stack.shape[-1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        stack, single = check_matrix_batch(X)
        out = np.stack([aluthge_transform(T, self.mean_).delta for T in stack])
        return out[0] if single else out


class AluthgeIteration(BaseEstimator):
    """Iterate the transform on one matrix; ``predict`` returns the final iterate."""

    def __init__(self, mean="arithmetic", weight=0.5, exponent=None, max_steps=2000, tol=1e-10):
        self.mean = mean
        self.weight = weight
        self.exponent = exponent
        self.max_steps = max_steps
        self.tol = tol

    def fit(self, X, y=None):
        T = check_matrix(X)
        self.mean_ = _build_mean(self.mean, self.weight, self.exponent)
        self.trace_ = iterate(T, self.mean_, self.max_steps, self.tol, keep_iterates=False)
        self.converged_ = self.trace_.converged
        self.limit_ = self.trace_.last
        self.n_steps_ = self.trace_.steps
        return self

    def predict(self, X=None):
        check_is_fitted(self, "limit_")
        return self.limit_


class NumericalRange(BaseEstimator):
    """Sample the boundary of the numerical range of one matrix."""

    def __init__(self, n_angles=DEFAULT_ANGLES):
        self.n_angles = n_angles

    def fit(self, X, y=None):
        self.boundary_ = numerical_range(check_matrix(X), self.n_angles)
        return self

    def predict(self, X=None):
        """Boundary points as a complex array."""
        check_is_fitted(self, "boundary_")
        return self.boundary_.points
