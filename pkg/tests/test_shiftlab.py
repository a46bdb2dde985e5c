import numpy as np
import pytest

from aluthge_lab.exceptions import TooShort
from aluthge_lab.means import make_mean
from aluthge_lab.shiftlab import (
    WeightSequence,
    build_oscillating_weights,
    first_weight_closed_form,
    iterate_weights,
    oscillation_table,
    sandwich_trace,
    shift_matrix,
    shift_weights_of,
    step_weights,
)
from aluthge_lab.transform import aluthge_transform, default_means

A = make_mean("arithmetic", 0.5)
H = make_mean("harmonic", 0.5)
G = make_mean("geometric", 0.5)


def test_step_examples():
    assert np.allclose(step_weights([1, 2, 2], A).weights, [1.5, 2])
    assert np.allclose(step_weights([1, 2, 2], H).weights, [4 / 3, 2])
    for mean in default_means():
        assert np.allclose(step_weights([0.7] * 5, mean).weights, 0.7)
    with pytest.raises(TooShort):
        step_weights([1.0], A)
    with pytest.raises(ValueError):
        WeightSequence([1.0, -1.0])


def test_first_weight_closed_form_examples():
    alpha = np.array([1.0] + [2.0] * 10)
    assert first_weight_closed_form(alpha, 3, 0.5, "arithmetic") == pytest.approx(1.875)
    assert first_weight_closed_form(alpha, 1, 0.5, "harmonic") == pytest.approx(4 / 3)
    assert first_weight_closed_form(alpha, 0, 0.5, "harmonic") == 1.0
    for n in range(10):
        assert first_weight_closed_form(alpha, n, 0.5, "arithmetic") == pytest.approx(2 - 2.0**-n, rel=1e-14)
    with pytest.raises(TooShort):
        first_weight_closed_form(alpha, 20, 0.5, "arithmetic")


def test_closed_form_matches_stepping(rng):
    alpha = rng.uniform(0.5, 3.0, 40)
    for lam in (0.3, 0.5, 0.8):
        for kind in ("arithmetic", "harmonic"):
            stepped = iterate_weights(alpha, make_mean(kind, lam), 39)
            closed = [first_weight_closed_form(alpha, n, lam, kind) for n in range(40)]
            assert np.max(np.abs(stepped - closed) / np.asarray(closed)) <= 1e-12


def test_truncated_shift_agrees_with_matrix_transform(rng):
    w = rng.uniform(0.5, 2.0, 10)
    for mean in default_means():
        D = aluthge_transform(shift_matrix(w), mean).delta
        got = shift_weights_of(D)[:8]
        assert np.max(np.abs(got - step_weights(w, mean).weights[:8])) <= 1e-9


def test_shift_matrix_layout():
    S = shift_matrix([1.0, 2.0, 3.0])
    assert np.array_equal(S.real, [[0, 0, 0], [1, 0, 0], [0, 2, 0]])


def test_oscillating_two_levels():
    osc = build_oscillating_weights(1, 2, 2)
    n1 = osc.switch_points[0]
    alpha = np.array([1.0] + [2.0] * (n1 + 1))
    # arithmetic alone needs n >= 2; harmonic decides the first n where both hold
    hm = [first_weight_closed_form(alpha, n, 0.5, "harmonic") for n in range(n1 + 1)]
    both = [n for n in range(1, n1 + 1) if abs(2 - 2.0**-n - 2) < 0.5 and abs(hm[n] - 2) < 0.5]
    assert both[0] == n1 and n1 >= 2


def test_oscillating_six_levels():
    osc = build_oscillating_weights(1, 2, 6)
    assert np.all(np.diff(osc.switch_points) > 0)
    assert list(osc.targets) == [2, 1, 2, 1, 2, 1]
    n_max = int(osc.switch_points[-1])
    ar = iterate_weights(osc.weights, A, n_max)
    hm = iterate_weights(osc.weights, H, n_max)
    for k, (n_k, target) in enumerate(zip(osc.switch_points, osc.targets), start=1):
        assert abs(ar[n_k] - target) < 2.0**-k
        assert abs(hm[n_k] - target) < 2.0**-k


def test_oscillating_rejects_bad_input():
    with pytest.raises(ValueError):
        build_oscillating_weights(1, 1, 3)
    with pytest.raises(ValueError):
        build_oscillating_weights(1, 2, 1)


def test_sandwich():
    alpha = np.array([1.0] + [2.0] * 5)
    assert sandwich_trace(alpha, G, 4).violation() == 0.0
    sw = sandwich_trace(alpha, A, 4)
    assert np.array_equal(sw.gamma0, sw.upper)
    sw = sandwich_trace(alpha, H, 4)
    assert np.allclose(sw.gamma0, sw.lower, rtol=1e-15)
    with pytest.raises(TooShort):
        sandwich_trace(alpha, G, 10)


def test_oscillation_table_rows():
    osc, sw, rows = oscillation_table(1, 2, 0.5, 3)
    assert len(rows) == osc.switch_points[-1] + 1
    assert rows[0][:2] == (0, 1.0)
    assert all(lo <= g * (1 + 1e-12) and g <= up * (1 + 1e-12) for _, g, lo, up, _ in rows)
