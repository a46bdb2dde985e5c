"""Weighted unilateral shifts modelled by their weight sequences.

The transform of ``W_alpha`` (``W e_k = alpha_k e_{k+1}``) is again a weighted
shift, with weights ``P(alpha_{k+1}, alpha_k)``. Everything here works on finite
prefixes of the weight sequence: each step consumes one trailing weight.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import binomial_weights
from .exceptions import SearchBudgetExceeded, TooShort
from .means import make_mean
from .validation import check_weight

SEARCH_CAP = 10**6


@dataclass(frozen=True)
class WeightSequence:
    weights: np.ndarray
    level: int = 0
    mean_name: str = ""

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D array")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and positive")
        if self.level < 0:
            raise ValueError("level must be >= 0")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size


def step_weights(seq, mean):
    """One transform step: ``w'[k] = P(w[k+1], w[k])``; the prefix shrinks by one."""
    if not isinstance(seq, WeightSequence):
        seq = WeightSequence(seq)
    w = seq.weights
    if w.size < 2:
        raise TooShort("need at least two weights for a step")
    return WeightSequence(mean.perspective(w[1:], w[:-1]), seq.level + 1, mean.label)


def iterate_weights(alpha, mean, n):
    """First weights ``gamma_0^(k)`` for ``k = 0..n`` by repeated stepping."""
    seq = WeightSequence(alpha)
    if len(seq) < n + 1:
        raise TooShort(f"need {n + 1} weights for {n} steps, got {len(seq)}")
    firsts = [seq.weights[0]]
    for _ in range(n):
        seq = step_weights(seq, mean)
        firsts.append(seq.weights[0])
    return np.array(firsts)


def first_weight_closed_form(alpha, n, lam, kind):
    """First weight after ``n`` arithmetic or harmonic steps of weight ``lam``.

    arithmetic: ``sum_j C(n, j) lam^(n-j) (1-lam)^j alpha_j``
    harmonic:   the same binomial average of ``1/alpha``, inverted.
    """
    lam = check_weight(lam, open_interval=True)
    alpha = np.asarray(alpha, dtype=float)
    if n < 0:
        raise ValueError("n must be >= 0")
    if alpha.size < n + 1:
        raise TooShort(f"need {n + 1} weights, got {alpha.size}")
    b = binomial_weights(n, 1.0 - lam)
    head = alpha[: n + 1]
    if kind == "arithmetic":
        return float(b @ head)
    if kind == "harmonic":
        return float(1.0 / (b @ (1.0 / head)))
    raise ValueError(f"kind must be 'arithmetic' or 'harmonic', got {kind!r}")


@dataclass(frozen=True)
class OscillatingWeights:
    """Weight prefix whose iterated first weights alternate between two targets.

    ``switch_points[k-1]`` is the iteration count ``n_k`` at which both the
    arithmetic and harmonic first weights are within ``2^-k`` of
    ``targets[k-1]``.
    """

    weights: np.ndarray
    switch_points: np.ndarray
    targets: np.ndarray
    lam: float


def build_oscillating_weights(a, b, levels, lam=0.5):
    """Greedy block construction of a non-converging weight sequence.

    Starting from ``(a, b, b, ...)``, find the first ``n_1`` at which both
    first weights are within ``1/2`` of ``b``; freeze entries ``0..n_1`` and
    continue the sequence with ``a``; find ``n_2 > n_1`` within ``1/4`` of
    ``a``; and so on for ``levels`` blocks.

    Entries up to index ``n_k`` are frozen before the next block starts, so
    later blocks cannot disturb the first weight at ``n_k``.
    """
    a, b = float(a), float(b)
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if a == b:
        raise ValueError("a and b must differ")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    lam = check_weight(lam, open_interval=True)

    prefix = [a]
    switch_points, targets = [], []
    last = 0
    for k in range(1, levels + 1):
        letter = b if k % 2 == 1 else a
        bound = 2.0**-k
        n = last + 1
        while True:
            if n - last > SEARCH_CAP:
                raise SearchBudgetExceeded(f"level {k}: no switch point within {SEARCH_CAP} steps")
            alpha = np.concatenate([prefix, np.full(n + 1 - len(prefix), letter)])
            ar = first_weight_closed_form(alpha, n, lam, "arithmetic")
            hm = first_weight_closed_form(alpha, n, lam, "harmonic")
            if abs(ar - letter) < bound and abs(hm - letter) < bound:
                break
            n += 1
        prefix = list(alpha)
        switch_points.append(n)
        targets.append(letter)
        last = n
    return OscillatingWeights(
        weights=np.array(prefix),
        switch_points=np.array(switch_points, dtype=int),
        targets=np.array(targets),
        lam=lam,
    )


@dataclass(frozen=True)
class SandwichTrace:
    gamma0: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def violation(self):
        """Largest breach of ``lower <= gamma0 <= upper`` (0 when it holds)."""
        return float(max(0.0, np.max(self.lower - self.gamma0), np.max(self.gamma0 - self.upper)))


def sandwich_trace(alpha, mean, n):
    """First weights of ``mean`` bracketed by the harmonic and arithmetic ones.

    The bounds use the closed forms at the same weight as ``mean``.
    """
    lam = check_weight(mean.weight, open_interval=True)
    alpha = np.asarray(alpha, dtype=float)
    gamma0 = iterate_weights(alpha, mean, n)
    lower = np.array([first_weight_closed_form(alpha, k, lam, "harmonic") for k in range(n + 1)])
    upper = np.array([first_weight_closed_form(alpha, k, lam, "arithmetic") for k in range(n + 1)])
    return SandwichTrace(gamma0=gamma0, lower=lower, upper=upper)


def shift_matrix(weights):
    """``L x L`` truncation of ``W_alpha``: entry ``(k+1, k)`` is ``weights[k]``."""
    w = np.asarray(weights, dtype=float)
    L = w.size
    S = np.zeros((L, L), dtype=np.complex128)
    S[np.arange(1, L), np.arange(L - 1)] = w[: L - 1]
    return S


def shift_weights_of(matrix):
    """Read back the subdiagonal of a truncated shift."""
    return np.real(np.diagonal(np.asarray(matrix), offset=-1)).copy()


def oscillation_table(a, b, lam, levels, mean=None):
    """Rows ``(n, gamma0, lower, upper, block_target)`` for ``n = 0..n_K``."""
    mean = make_mean("geometric", lam) if mean is None else mean
    osc = build_oscillating_weights(a, b, levels, lam)
    n_max = int(osc.switch_points[-1])
    sw = sandwich_trace(osc.weights, mean, n_max)
    target = np.empty(n_max + 1)
    start = 0
    for n_k, t in zip(osc.switch_points, osc.targets):
        target[start : n_k + 1] = t
        start = n_k + 1
    rows = [
        (n, float(sw.gamma0[n]), float(sw.lower[n]), float(sw.upper[n]), float(target[n]))
        for n in range(n_max + 1)
    ]
    return osc, sw, rows
