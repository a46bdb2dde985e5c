import numpy as np
import pytest

from aluthge_lab.exceptions import GridMismatch
from aluthge_lab.linalg import spectral_norm
from aluthge_lab.means import dominance_chain, make_mean
from aluthge_lab.numrange import angle_grid, norm_probe, numerical_range, range_included, range_of_transform_report

from conftest import ginibre


def test_segment():
    b = numerical_range(np.diag([0.0, 1.0]), 64)
    assert b.support_values[0] == pytest.approx(1.0)
    assert np.all(np.abs(b.points.imag) < 1e-12)
    assert b.points.real.min() >= -1e-12 and b.points.real.max() <= 1 + 1e-12


def test_jordan_disk():
    b = numerical_range(np.array([[0, 1], [0, 0]]), 128)
    assert np.allclose(b.support_values, 0.5)
    assert np.allclose(np.abs(b.points), 0.5)


def test_identity_point():
    b = numerical_range(np.eye(3), 32)
    assert np.allclose(b.points, 1.0)


def test_inclusion_basics():
    d_half = numerical_range(np.array([[0, 1], [0, 0]]), 64)
    d_one = numerical_range(np.array([[0, 2], [0, 0]]), 64)
    assert range_included(d_half, d_half).included
    assert range_included(d_half, d_half).max_violation <= 0
    assert range_included(d_half, d_one).included
    assert not range_included(d_one, d_half).included
    with pytest.raises(GridMismatch):
        range_included(d_half, numerical_range(np.eye(2), 32))


def test_convexity_and_translation(rng):
    for m in (3, 6):
        T = ginibre(rng, m)
        c = complex(*rng.standard_normal(2))
        b = numerical_range(T)
        assert b.convexity_violation() <= 1e-9 * spectral_norm(T)
        shifted = numerical_range(T + c * np.eye(m))
        expected = b.support_values + np.real(np.exp(-1j * angle_grid(720)) * c)
        assert np.max(np.abs(shifted.support_values - expected)) <= 1e-10 * (spectral_norm(T) + abs(c))


def test_transitivity(rng):
    T = ginibre(rng, 5)
    rep = range_of_transform_report(T, dominance_chain())
    inc = rep["inclusion"]
    k = len(inc)
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if inc[a][b] and inc[b][c]:
                    assert inc[a][c]


def test_chain_nesting(rng):
    for _ in range(5):
        m = int(rng.integers(3, 9))
        T = ginibre(rng, m)
        rep = range_of_transform_report(T, dominance_chain())
        for i in range(1, 4):
            assert rep["inclusion"][i][i + 1]
        assert rep["inclusion"][2][0]  # geometric inside W(T)


def test_normal_ranges_identical():
    V = np.linalg.qr(ginibre(np.random.default_rng(1), 4))[0]
    T = V @ np.diag([1, 2j, -1, 0.5 + 0.5j]) @ V.conj().T
    rep = range_of_transform_report(T, [make_mean("arithmetic", 0.3), make_mean("geometric", 0.5)])
    assert all(all(row) for row in rep["inclusion"])


def test_norm_probe(rng):
    T = ginibre(rng, 4)
    H, A = make_mean("harmonic", 0.5), make_mean("arithmetic", 0.5)
    lams = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    assert norm_probe(T, H, A, lams) <= 1e-9 * spectral_norm(T)


def test_angle_minimum():
    with pytest.raises(ValueError):
        numerical_range(np.eye(2), 8)
