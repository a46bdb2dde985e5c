"""Numerical verification suites for the structural properties of the transform.

Each suite returns a list of check records::

    {"tag": ..., "statement": ..., "residual": r, "tolerance": t,
     "comparison": "<=", "<" or ">", "passed": bool}

Residuals are maxima (or minima, for ``">"`` checks) over the whole corpus,
already divided by the relevant norm scale.
"""

import numpy as np

from .corpus import generate_corpus, parallel_map
from .dynamics import (
    arithmetic_iterate_closed_form,
    iterate,
    phase_gap,
    predict_arithmetic_limit,
)
from .linalg import normality_defect, random_unitary, spectral_norm
from .means import check_mean_axioms, dominance_chain, dominance_check, make_mean
from .numrange import numerical_range, range_included
from .shiftlab import (
    build_oscillating_weights,
    first_weight_closed_form,
    iterate_weights,
    sandwich_trace,
    shift_matrix,
    shift_weights_of,
)
from .transform import (
    aluthge_closed_form,
    aluthge_quadrature_oracle,
    aluthge_transform,
    default_means,
    shift_identity_check,
)

SCHEMA_VERSION = 1


def _record(tag, statement, residual, tolerance, comparison="<="):
    residual = float(residual)
    passed = {"<=": residual <= tolerance, "<": residual < tolerance, ">": residual > tolerance}[comparison]
    return {
        "tag": tag,
        "statement": statement,
        "residual": residual,
        "tolerance": float(tolerance),
        "comparison": comparison,
        "passed": bool(passed),
    }


def _rel(x, T):
    return float(x) / max(spectral_norm(T), 1e-14)


def _delta(T, mean):
    return aluthge_transform(T, mean).delta


def _structural_residuals(args):
    T, mean, seed = args
    rng = np.random.default_rng(seed)
    D = _delta(T, mean)
    alpha = complex(rng.standard_normal(), rng.standard_normal())
    V = random_unitary(T.shape[0], rng)
    Vh = V.conj().T
    out = {
        "homogeneity": np.linalg.norm(_delta(alpha * T, mean) - alpha * D) / abs(alpha),
        "unitary-covariance": np.linalg.norm(_delta(Vh @ T @ V, mean) - Vh @ D @ V),
        "norm-contraction": max(0.0, spectral_norm(D) - spectral_norm(T)),
        "trace-preservation": abs(np.trace(D) - np.trace(T)),
    }
    out = {k: _rel(v, T) for k, v in out.items()}
    if np.linalg.matrix_rank(T) == T.shape[0]:
        shift = max(
            shift_identity_check(T, mean, a) / (spectral_norm(T) + abs(a))
            for a in (0.0, 1 + 1j, alpha)
        )
        out["shift-identity"] = shift
    if mean.name in ("geometric", "arithmetic"):
        out["closed-form"] = _rel(np.linalg.norm(D - aluthge_closed_form(T, mean.name, mean.weight)), T)
    return out


_STATEMENTS = {
    "homogeneity": "Delta(a T) = a Delta(T)",
    "unitary-covariance": "Delta(V^H T V) = V^H Delta(T) V",
    "norm-contraction": "||Delta(T)|| <= ||T||",
    "trace-preservation": "trace Delta(T) = trace T",
    "shift-identity": "Phi(U - a|T|^-1) = Delta(T) - a I",
    "closed-form": "Hadamard form equals |T|^(1-w) U |T|^w resp. (1-w)|T|U + w U^H U U|T|",
}


def transform_suite(seed):
    corpus = generate_corpus("mixed", 6, 20, seed) + generate_corpus("invertible", 4, 10, seed + 1)
    checks = []
    for mean in default_means():
        jobs = [(T, mean, seed + 1000 + i) for i, T in enumerate(corpus)]
        results = parallel_map(_structural_residuals, jobs)
        for key in _STATEMENTS:
            vals = [r[key] for r in results if key in r]
            if vals:
                checks.append(_record(f"{key}[{mean.label}]", _STATEMENTS[key], max(vals), 1e-9))

    normals = generate_corpus("normal", 5, 10, seed + 2)
    movers = [T for T in generate_corpus("invertible", 5, 10, seed + 3)]
    for mean in default_means():
        fixed = max(_rel(np.linalg.norm(_delta(T, mean) - T), T) for T in normals)
        checks.append(
            _record(f"fixed-point-normal[{mean.label}]", "normal T is a fixed point", fixed, 1e-8)
        )
        moved = min(_rel(np.linalg.norm(_delta(T, mean) - T), T) for T in movers)
        checks.append(
            _record(
                f"non-normal-moves[{mean.label}]",
                "non-normal invertible T is not a fixed point",
                moved,
                1e-6,
                comparison=">",
            )
        )
    return checks


def quadrature_suite(seed):
    corpus = generate_corpus("invertible", 4, 5, seed + 10)
    checks = []
    for mean in (
        make_mean("harmonic", 0.5),
        make_mean("arithmetic", 0.5),
        make_mean("geometric", 0.5),
        make_mean("geometric", 0.3),
    ):
        worst = max(
            _rel(np.linalg.norm(aluthge_quadrature_oracle(T, mean) - _delta(T, mean)), T) for T in corpus
        )
        checks.append(
            _record(f"quadrature-oracle[{mean.label}]", "double-integral form equals Hadamard form", worst, 1e-5)
        )
    return checks


def _well_separated(seed, m, count, min_gap):
    rng_seed = seed
    found = []
    while len(found) < count:
        T = generate_corpus("invertible", m, 1, rng_seed)[0]
        rng_seed += 1
        if phase_gap(T) >= min_gap:
            found.append(T)
    return found


def dynamics_suite(seed):
    mean = make_mean("arithmetic", 0.5)
    corpus = _well_separated(seed + 20, 4, 5, 0.5)
    conv, defect, trace_err, limit_err = [], [], [], []
    for T in corpus:
        tr = iterate(T, mean, max_steps=2000, tol=1e-10, keep_iterates=False)
        conv.append(0.0 if tr.converged else 1.0)
        N = tr.last
        nT = spectral_norm(T)
        defect.append(normality_defect(N) / nT**2)
        trace_err.append(abs(np.trace(N) - np.trace(T)) / (nT * T.shape[0]))
        limit_err.append(_rel(np.linalg.norm(N - predict_arithmetic_limit(T)), T))
    checks = [
        _record("arithmetic-iteration-converges", "iteration stops before 2000 steps", max(conv), 0.0),
        _record("arithmetic-limit-normal", "normality defect of the limit / ||T||^2", max(defect), 1e-6),
        _record("arithmetic-limit-trace", "trace of the limit equals trace T", max(trace_err), 1e-8),
        _record("arithmetic-limit-prediction", "limit equals U Z (E o Z^H|T|Z) Z^H", max(limit_err), 1e-5),
    ]
    closed = 0.0
    for T in generate_corpus("invertible", 4, 5, seed + 21):
        tr = iterate(T, mean, max_steps=10, tol=1e-300)
        for n in range(0, 11):
            ref = T if n == 0 else tr.iterates[n - 1]
            closed = max(closed, _rel(np.linalg.norm(arithmetic_iterate_closed_form(T, n) - ref), T))
    checks.append(_record("binomial-closed-form", "n-th iterate equals the binomial sum, n <= 10", closed, 1e-8))
    return checks


def shift_suite(seed, a=1.0, b=2.0, lam=0.5, levels=6):
    osc = build_oscillating_weights(a, b, levels, lam)
    A, H, G = make_mean("arithmetic", lam), make_mean("harmonic", lam), make_mean("geometric", lam)
    n_max = int(osc.switch_points[-1])
    ar = iterate_weights(osc.weights, A, n_max)
    hm = iterate_weights(osc.weights, H, n_max)
    excess, agree = [], []
    for k, (n_k, target) in enumerate(zip(osc.switch_points, osc.targets), start=1):
        excess.append(max(abs(ar[n_k] - target), abs(hm[n_k] - target)) - 2.0**-k)
    for n in range(n_max + 1):
        ca = first_weight_closed_form(osc.weights, n, lam, "arithmetic")
        ch = first_weight_closed_form(osc.weights, n, lam, "harmonic")
        agree.append(max(abs(ar[n] - ca) / ca, abs(hm[n] - ch) / ch))
    sw = sandwich_trace(osc.weights, G, n_max)

    rng = np.random.default_rng(seed + 30)
    w = rng.uniform(0.5, 2.0, 12)
    trunc = 0.0
    for mean in (A, H, G, make_mean("logarithmic")):
        D = _delta(shift_matrix(w), mean)
        expected = mean.perspective(w[1:], w[:-1])
        trunc = max(trunc, np.max(np.abs(shift_weights_of(D)[: w.size - 2] - expected[: w.size - 2])))
    return [
        _record("oscillation-switch-points", "first weights within 2^-k of the block targets", max(excess), 0.0, "<"),
        _record("first-weight-closed-form", "binomial closed form equals stepped recursion", max(agree), 1e-12),
        _record("first-weight-sandwich", "harmonic <= geometric <= arithmetic first weights", sw.violation(), 1e-12),
        _record("shift-truncation", "matrix transform of a truncated shift steps the weights", trunc, 1e-9),
    ]


def _nesting(args):
    T, n_angles = args
    chain = dominance_chain()
    atol_scale = spectral_norm(T)
    bounds = [numerical_range(_delta(T, m), n_angles) for m in chain]
    worst = max(range_included(bounds[i], bounds[i + 1]).max_violation for i in range(len(chain) - 1))
    wt = range_included(bounds[1], numerical_range(T, n_angles)).max_violation
    return worst / atol_scale, wt / atol_scale


def numrange_suite(seed, count=10, n_angles=720):
    rng = np.random.default_rng(seed + 40)
    mats = []
    for _ in range(count):
        m = int(rng.integers(3, 9))
        mats.append((rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2))
    results = parallel_map(_nesting, [(T, n_angles) for T in mats])
    return [
        _record("range-nesting-chain", "W(D_H) in W(D_G) in W(D_L) in W(D_A)", max(r[0] for r in results), 1e-7),
        _record("range-geometric-inside-T", "W(D_G) in W(T)", max(r[1] for r in results), 1e-7),
    ]


def dominance_suite(seed, count=100):
    rng = np.random.default_rng(seed + 50)
    chain = dominance_chain()
    worst, refute = -np.inf, np.inf
    for _ in range(count):
        s = rng.uniform(0.05, 10.0, int(rng.integers(2, 7)))
        for lo, hi in zip(chain, chain[1:]):
            res = dominance_check(lo, hi, s)
            worst = max(worst, -res.min_eigenvalue / res.ratio_norm)
        refute = min(refute, dominance_check(chain[-1], chain[0], s).min_eigenvalue)
    axioms = 0.0
    for mean in default_means():
        axioms = max(axioms, *check_mean_axioms(mean).values())
    return [
        _record("dominance-chain", "adjacent ratio matrices H<=G<=L<=A are PSD", worst, 1e-10),
        _record("dominance-refutes", "A over H has a negative eigenvalue", refute, -1e-6, "<"),
        _record("mean-axioms", "f(1)=1, f monotone, weight sandwich on a grid", axioms, 1e-12),
    ]


SUITES = {
    "transform": transform_suite,
    "quadrature": quadrature_suite,
    "dynamics": dynamics_suite,
    "shift": shift_suite,
    "numrange": numrange_suite,
    "dominance": dominance_suite,
}


def run_verification(suite="all", seed=42):
    names = list(SUITES) if suite == "all" else [suite]
    checks = []
    for name in names:
        for rec in SUITES[name](seed):
            rec["suite"] = name
            checks.append(rec)
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "seed": seed,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
