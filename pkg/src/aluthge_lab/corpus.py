"""Seeded random matrix corpora."""

import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .exceptions import ConfigError
from .linalg import random_unitary
from .matrix_io import write_matrix
from .shiftlab import shift_matrix

KINDS = ("invertible", "singular", "normal", "nearly-normal", "shift-truncation", "mixed")


def _ginibre(rng, m):
    return (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)


def _invertible(rng, m):
    # Singular values in [0.1, 1] keep the condition number <= 10.
    sigma = rng.uniform(0.1, 1.0, m)
    sigma[0] = 1.0
    return (random_unitary(m, rng) * sigma) @ random_unitary(m, rng).conj().T


def _singular(rng, m):
    rank = int(rng.integers(1, m))
    sigma = np.zeros(m)
    sigma[:rank] = rng.uniform(0.1, 1.0, rank)
    return (random_unitary(m, rng) * sigma) @ random_unitary(m, rng).conj().T


def _normal(rng, m):
    V = random_unitary(m, rng)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return (V.conj().T * z) @ V


def _nearly_normal(rng, m):
    N = _normal(rng, m)
    return N + 1e-4 * np.linalg.norm(N, 2) * _ginibre(rng, m)


def _shift(rng, m):
    return shift_matrix(rng.uniform(0.5, 2.0, m))


_BUILDERS = {
    "invertible": _invertible,
    "singular": _singular,
    "normal": _normal,
    "nearly-normal": _nearly_normal,
    "shift-truncation": _shift,
}


def generate_corpus(kind, m, count, seed):
    """Return ``count`` matrices of size ``m`` drawn deterministically from ``seed``.

    ``"mixed"`` alternates invertible and singular draws.
    """
    if kind not in KINDS:
        raise ConfigError(f"unknown corpus kind {kind!r}; choose from {KINDS}")
    if m < 2:
        raise ConfigError("matrix size must be >= 2")
    if count < 1:
        raise ConfigError("count must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "mixed":
        return [(_invertible if i % 2 == 0 else _singular)(rng, m) for i in range(count)]
    build = _BUILDERS[kind]
    return [build(rng, m) for _ in range(count)]


def write_corpus(directory, kind, m, count, seed, fmt="json"):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, A in enumerate(generate_corpus(kind, m, count, seed)):
        path = directory / f"{kind}_{m}x{m}_{i:04d}.{fmt}"
        write_matrix(path, A)
        paths.append(path)
    return paths


def thread_cap():
    """Worker cap from ``ALUTHGE_LAB_THREADS`` (default: CPU count)."""
    raw = os.environ.get("ALUTHGE_LAB_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"ALUTHGE_LAB_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)


def parallel_map(func, items):
    """Ordered map over ``items`` using at most ``thread_cap()`` threads."""
    items = list(items)
    workers = min(thread_cap(), len(items)) or 1
    if workers == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
