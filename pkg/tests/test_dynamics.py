import numpy as np
import pytest

from aluthge_lab.corpus import generate_corpus
from aluthge_lab.dynamics import (
    arithmetic_iterate_closed_form,
    binomial_weights,
    check_kernel_condition,
    iterate,
    phase_gap,
    predict_arithmetic_limit,
    unitary_phases,
)
from aluthge_lab.exceptions import KernelConditionViolated, SingularInput
from aluthge_lab.linalg import normality_defect, polar_decompose, spectral_norm
from aluthge_lab.means import make_mean

ARITH = make_mean("arithmetic", 0.5)


def test_normal_converges_immediately():
    T = generate_corpus("normal", 4, 1, 0)[0]
    tr = iterate(T, make_mean("geometric", 0.3))
    assert tr.converged and tr.steps == 1
    assert np.allclose(tr.limit, T, atol=1e-12)


def test_iteration_preserves_trace_and_shrinks_norm():
    T = generate_corpus("invertible", 5, 1, 4)[0]
    nT = spectral_norm(T)
    tr = iterate(T, ARITH, max_steps=50, tol=1e-300)
    norms = [nT] + [spectral_norm(X) for X in tr.iterates]
    assert np.all(np.diff(norms) <= 1e-9 * nT)
    assert np.max(np.abs(tr.traces - np.trace(T))) <= 1e-9 * nT * 5
    assert not tr.converged and tr.steps == 50


def test_arithmetic_limit_hand_example(jordan_swap):
    # U has phases {0, pi}; Z^H |T| Z = [[1.5, .5], [.5, 1.5]] and E = I
    N = predict_arithmetic_limit(jordan_swap)
    assert np.allclose(N, [[0, 1.5], [1.5, 0]])
    tr = iterate(jordan_swap, ARITH)
    assert tr.converged
    assert np.allclose(tr.limit, N, atol=1e-12)


def test_positive_definite_limit_is_itself(rng):
    G = rng.standard_normal((4, 4))
    T = G @ G.T + np.eye(4)
    assert np.allclose(predict_arithmetic_limit(T), T, atol=1e-12)


def test_random_limit_matches_prediction():
    T = None
    for seed in range(100):
        cand = generate_corpus("invertible", 5, 1, seed)[0]
        if phase_gap(cand) >= 0.5:
            T = cand
            break
    nT = spectral_norm(T)
    tr = iterate(T, ARITH, max_steps=2000, tol=1e-10, keep_iterates=False)
    assert tr.converged
    assert normality_defect(tr.limit) <= 1e-6 * nT**2
    assert abs(np.trace(tr.limit) - np.trace(T)) <= 1e-8 * nT * 5
    assert np.linalg.norm(tr.limit - predict_arithmetic_limit(T)) <= 1e-5 * nT
    assert tr.rate is not None and 0 < tr.rate < 1


def test_closed_form_small_n(jordan_swap):
    T = generate_corpus("invertible", 4, 1, 5)[0]
    assert np.allclose(arithmetic_iterate_closed_form(T, 0), T, atol=1e-12)
    p = polar_decompose(T)
    U, A = p.isometry, p.positive
    assert np.allclose(arithmetic_iterate_closed_form(T, 1), (U @ A + A @ U) / 2, atol=1e-12)
    tr = iterate(T, ARITH, max_steps=6, tol=1e-300)
    assert np.linalg.norm(arithmetic_iterate_closed_form(T, 6) - tr.iterates[5]) <= 1e-8 * spectral_norm(T)


def test_kernel_condition():
    with pytest.raises(KernelConditionViolated):
        arithmetic_iterate_closed_form(np.array([[0, 1], [0, 0]], dtype=complex), 2)
    T = np.diag([2.0, 0.0]).astype(complex)
    check_kernel_condition(T)
    assert np.allclose(arithmetic_iterate_closed_form(T, 3), T)


def test_prediction_rejects_singular():
    with pytest.raises(SingularInput):
        predict_arithmetic_limit(np.diag([1.0, 0.0]))


def test_binomial_weights():
    for n in (0, 1, 10, 60, 61, 200):
        for p in (0.3, 0.5):
            w = binomial_weights(n, p)
            assert w.size == n + 1
            assert abs(w.sum() - 1.0) <= 1e-12
    assert np.allclose(binomial_weights(3, 0.5), [1 / 8, 3 / 8, 3 / 8, 1 / 8])


def test_unitary_phases(jordan_swap):
    phases, Z = unitary_phases(polar_decompose(jordan_swap).isometry)
    assert np.allclose(np.sort(phases), [0, np.pi])
    assert phase_gap(jordan_swap) == pytest.approx(np.pi)


def test_iterate_argument_checks(jordan_swap):
    with pytest.raises(ValueError):
        iterate(jordan_swap, ARITH, max_steps=0)
    with pytest.raises(ValueError):
        iterate(jordan_swap, ARITH, tol=0)
