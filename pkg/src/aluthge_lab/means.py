"""Kubo-Ando operator means encoded by their representing functions.

A mean is stored through its representing function ``f`` (``f(1) = 1``) and
the perspective ``P(s, t) = s f(t / s)``. The perspective is extended to the
boundary of the closed quadrant by continuity:

    P(s, 0) = s * lim_{x -> 0+} f(x)
    P(0, t) = t * lim_{x -> oo} f(x) / x
    P(0, 0) = 0

Each built-in mean supplies those two limits in closed form. Means that admit
an integral representation

    f(x) = int_0^1 [1 - lam + lam / x]^{-1} dmu(lam)

carry a :class:`RepresentingMeasure`, which the quadrature oracle in
:mod:`aluthge_lab.transform` consumes.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .exceptions import InvalidExponent, InvalidMeasure, InvalidWeight, ZeroDenominator
from .validation import check_nonnegative, check_weight

MASS_TOL = 1e-10

# Below this relative gap the logarithmic mean switches to its midpoint series.
_LOG_SERIES_GAP = 1e-3


# --------------------------------------------------------------------------
# Representing measures
# --------------------------------------------------------------------------


def _density_rule(density, endpoint_exponents, n):
    """Nodes and weights integrating ``density`` over ``(0, 1)``."""
    if endpoint_exponents is not None:
        a, b = endpoint_exponents
        with np.errstate(invalid="ignore", divide="ignore"):
            x, w = roots_jacobi(n, b, a)
        lam = (1.0 + x) / 2.0
        smooth = density(lam) / (lam**a * (1.0 - lam) ** b)
        return lam, 2.0 ** (-a - b - 1.0) * w * smooth
    x, w = leggauss(n)
    u = (x + 1.0) / 2.0
    lam = np.sin(np.pi * u / 2.0) ** 2
    jac = (np.pi / 2.0) * np.sin(np.pi * u)
    return lam, (w / 2.0) * jac * density(lam)


@dataclass(frozen=True)
class RepresentingMeasure:
    """Probability measure on ``[0, 1]``: point masses plus an optional density.

    Parameters
    ----------
    atoms : tuple of (location, mass)
        Point masses; locations in ``[0, 1]`` and masses ``> 0``.
    density : callable, optional
        Density on ``(0, 1)``. It is integrated with a fixed ``n_nodes`` rule:
        Gauss-Legendre after the substitution ``lam = sin(pi u / 2)**2`` by
        default, or Gauss-Jacobi when ``endpoint_exponents = (a, b)`` declares
        that ``density / (lam**a (1 - lam)**b)`` is smooth.
    """

    atoms: tuple = ()
    density: Optional[Callable] = None
    endpoint_exponents: Optional[tuple] = None
    n_nodes: int = 64

    def __post_init__(self):
        atoms = tuple((float(loc), float(mass)) for loc, mass in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for loc, mass in atoms:
            if not (0.0 <= loc <= 1.0) or not math.isfinite(loc):
                raise InvalidMeasure(f"atom location {loc} outside [0, 1]")
            if not (mass > 0) or not math.isfinite(mass):
                raise InvalidMeasure(f"atom mass {mass} must be positive")
        if not atoms and self.density is None:
            raise InvalidMeasure("measure needs atoms or a density")
        _, weights = self.discretize()
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise InvalidMeasure("density must be finite and non-negative")
        total = float(weights.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidMeasure(f"total mass is {total!r}, expected 1")

    def discretize(self, n_nodes=None):
        """Return ``(locations, weights)`` approximating the measure."""
        n = self.n_nodes if n_nodes is None else int(n_nodes)
        locs = [loc for loc, _ in self.atoms]
        masses = [mass for _, mass in self.atoms]
        locs, masses = np.array(locs, dtype=float), np.array(masses, dtype=float)
        if self.density is not None:
            lam, w = _density_rule(self.density, self.endpoint_exponents, n)
            locs = np.concatenate([locs, lam])
            masses = np.concatenate([masses, np.asarray(w, dtype=float)])
        return locs, masses

    def atom_mass_at(self, location):
        return sum(mass for loc, mass in self.atoms if loc == location)

    def representing_function(self, x):
        """``int [1 - lam + lam / x]^{-1} dmu(lam)`` for ``x > 0``."""
        x = np.asarray(x, dtype=float)
        lam, w = self.discretize()
        xs = x[..., None]
        return np.sum(w * xs / ((1.0 - lam) * xs + lam), axis=-1)

    def perspective(self, s, t):
        """``int [(1 - lam)/s + lam/t]^{-1} dmu(lam)`` for ``s, t > 0``."""
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        lam, w = self.discretize()
        ss, tt = s[..., None], t[..., None]
        return np.sum(w * ss * tt / ((1.0 - lam) * tt + lam * ss), axis=-1)

    @classmethod
    def from_file(cls, path):
        """Load ``{"atoms": [[loc, mass], ...], "density": {...}}`` from JSON.

        ``density`` holds ``{"lambda": [...], "values": [...]}`` samples that
        are linearly interpolated; set ``"normalize": true`` to rescale the
        whole measure to unit mass.
        """
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidMeasure(f"cannot read measure file {path}: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {"atoms", "density", "normalize"}
        if unknown:
            raise InvalidMeasure(f"unknown measure keys: {sorted(unknown)}")
        try:
            atoms = [(float(a), float(b)) for a, b in data.get("atoms", [])]
        except (TypeError, ValueError) as exc:
            raise InvalidMeasure(f"atoms must be [location, mass] pairs: {exc}") from exc
        density = None
        if "density" in data:
            grid = np.asarray(data["density"].get("lambda", []), dtype=float)
            vals = np.asarray(data["density"].get("values", []), dtype=float)
            if grid.ndim != 1 or grid.shape != vals.shape or grid.size < 2:
                raise InvalidMeasure("density needs matching 'lambda' and 'values' arrays")
            if np.any(np.diff(grid) <= 0):
                raise InvalidMeasure("density 'lambda' samples must increase")

            def density(lam, grid=grid, vals=vals):
                return np.interp(lam, grid, vals)

        if data.get("normalize"):
            total = sum(mass for _, mass in atoms)
            if density is not None:
                total += float(_density_rule(density, None, 64)[1].sum())
            if not total > 0:
                raise InvalidMeasure("measure has zero mass")
            atoms = [(loc, mass / total) for loc, mass in atoms]
            if density is not None:
                raw = density

                def density(lam, raw=raw, total=total):
                    return raw(lam) / total

        return cls(atoms=tuple(atoms), density=density)


def arithmetic_measure(weight):
    atoms = [(0.0, 1.0 - weight), (1.0, weight)]
    return RepresentingMeasure(atoms=tuple((loc, m) for loc, m in atoms if m > 0))


def harmonic_measure(weight):
    return RepresentingMeasure(atoms=((weight, 1.0),))


def geometric_measure(weight):
    """Beta(w, 1 - w) law; the arcsine density when ``w = 1/2``."""
    if weight in (0.0, 1.0):
        return RepresentingMeasure(atoms=((weight, 1.0),))
    c = math.sin(math.pi * weight) / math.pi

    def density(lam):
        return c * lam ** (weight - 1.0) * (1.0 - lam) ** (-weight)

    if weight == 0.5:
        return RepresentingMeasure(density=density)
    return RepresentingMeasure(density=density, endpoint_exponents=(weight - 1.0, -weight))


# --------------------------------------------------------------------------
# Operator means
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorMean:
    """A Kubo-Ando mean given by its representing function.

    Attributes
    ----------
    name : str
        Family name (``"geometric"``, ``"power"``, ...).
    weight : float
        ``f'(1)``, in ``[0, 1]``.
    func : callable
        Representing function on ``(0, oo)``.
    interior : callable
        Perspective on the open quadrant ``s, t > 0``.
    f_at_zero : float
        ``lim_{x -> 0+} f(x)``.
    slope_at_infinity : float
        ``lim_{x -> oo} f(x) / x``.
    measure : RepresentingMeasure or None
    exponent : float or None
        Power-mean exponent, when applicable.
    """

    name: str
    weight: float
    func: Callable = field(repr=False)
    interior: Callable = field(repr=False)
    f_at_zero: float = 0.0
    slope_at_infinity: float = 0.0
    measure: Optional[RepresentingMeasure] = field(default=None, repr=False)
    exponent: Optional[float] = None

    @property
    def label(self):
        if self.name == "logarithmic":
            return "logarithmic"
        if self.name == "power":
            return f"power:{self.weight:g}:t={self.exponent:g}"
        return f"{self.name}:{self.weight:g}"

    def f(self, x):
        return self.func(np.asarray(x, dtype=float))

    def perspective(self, s, t):
        """``P(s, t) = s f(t / s)`` on ``[0, oo)^2`` with the boundary extension."""
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        out = np.zeros(s.shape, dtype=float)
        inner = (s > 0) & (t > 0)
        if np.any(inner):
            out[inner] = self.interior(s[inner], t[inner])
        left = (s > 0) & (t == 0)
        out[left] = s[left] * self.f_at_zero
        right = (s == 0) & (t > 0)
        out[right] = t[right] * self.slope_at_infinity
        if out.ndim == 0:
            return float(out)
        return out


def _logarithmic_interior(s, t):
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    m = (s + t) / 2.0
    e = (s - t) / (s + t)
    out = np.empty(s.shape)
    near = np.abs(s - t) < _LOG_SERIES_GAP * np.maximum(s, t)
    e2 = e[near] ** 2
    out[near] = m[near] * (1.0 - e2 / 3.0 - 4.0 * e2**2 / 45.0)
    far = ~near
    out[far] = (s[far] - t[far]) / (np.log(s[far]) - np.log(t[far]))
    return out


def _power_interior(weight, p):
    def interior(s, t):
        return ((1.0 - weight) * s**p + weight * t**p) ** (1.0 / p)

    return interior


def make_mean(kind, weight=0.5, *, exponent=None, measure=None):
    """Build an :class:`OperatorMean`.

    Parameters
    ----------
    kind : {"arithmetic", "geometric", "harmonic", "power", "logarithmic", "measure"}
    weight : float
        ``f'(1)`` in ``[0, 1]``. The logarithmic mean only exists for 1/2.
        Ignored for ``"measure"``, whose weight is derived from the measure.
    exponent : float, optional
        Power-mean exponent ``t`` in ``[-1, 1]``; ``t = 0`` gives the geometric mean.
    measure : RepresentingMeasure, optional
        Required for ``kind="measure"``.
    """
    kind = {"from_measure": "measure"}.get(kind, kind)
    if kind != "measure":
        weight = check_weight(weight)
    lam = weight

    if kind == "arithmetic":
        return OperatorMean(
            name="arithmetic",
            weight=lam,
            func=lambda x: 1.0 - lam + lam * x,
            interior=lambda s, t: (1.0 - lam) * s + lam * t,
            f_at_zero=1.0 - lam,
            slope_at_infinity=lam,
            measure=arithmetic_measure(lam),
        )
    if kind == "geometric":
        return OperatorMean(
            name="geometric",
            weight=lam,
            func=lambda x: x**lam,
            interior=lambda s, t: s ** (1.0 - lam) * t**lam,
            f_at_zero=1.0 if lam == 0 else 0.0,
            slope_at_infinity=1.0 if lam == 1 else 0.0,
            measure=geometric_measure(lam),
        )
    if kind == "harmonic":
        return OperatorMean(
            name="harmonic",
            weight=lam,
            func=lambda x: x / ((1.0 - lam) * x + lam),
            interior=lambda s, t: s * t / ((1.0 - lam) * t + lam * s),
            f_at_zero=1.0 if lam == 0 else 0.0,
            slope_at_infinity=1.0 if lam == 1 else 0.0,
            measure=harmonic_measure(lam),
        )
    if kind == "power":
        if exponent is None:
            raise InvalidExponent("power mean needs an exponent")
        p = float(exponent)
        if not -1.0 <= p <= 1.0:
            raise InvalidExponent(f"power exponent must lie in [-1, 1], got {p}")
        if p == 0.0:
            return make_mean("geometric", lam)
        if lam in (0.0, 1.0):
            base = make_mean("geometric", lam)
            return OperatorMean(
                name="power", weight=lam, func=base.func, interior=base.interior,
                f_at_zero=base.f_at_zero, slope_at_infinity=base.slope_at_infinity,
                measure=base.measure, exponent=p,
            )
        measure_for = {1.0: arithmetic_measure, -1.0: harmonic_measure}.get(p)
        return OperatorMean(
            name="power",
            weight=lam,
            func=lambda x: (1.0 - lam + lam * x**p) ** (1.0 / p),
            interior=_power_interior(lam, p),
            f_at_zero=(1.0 - lam) ** (1.0 / p) if p > 0 else 0.0,
            slope_at_infinity=lam ** (1.0 / p) if p > 0 else 0.0,
            measure=measure_for(lam) if measure_for else None,
            exponent=p,
        )
    if kind == "logarithmic":
        if lam != 0.5:
            raise InvalidWeight("the logarithmic mean is only defined for weight 1/2")

        def log_f(x):
            x = np.asarray(x, dtype=float)
            return _logarithmic_interior(np.ones_like(x), x)

        return OperatorMean(
            name="logarithmic",
            weight=0.5,
            func=log_f,
            interior=_logarithmic_interior,
        )
    if kind == "measure":
        if not isinstance(measure, RepresentingMeasure):
            raise InvalidMeasure("kind='measure' requires a RepresentingMeasure")
        locs, masses = measure.discretize()
        # f'(1) = int lam dmu(lam)
        derived = float(np.sum(locs * masses))
        return OperatorMean(
            name="measure",
            weight=min(max(derived, 0.0), 1.0),
            func=measure.representing_function,
            interior=measure.perspective,
            f_at_zero=measure.atom_mass_at(0.0),
            slope_at_infinity=measure.atom_mass_at(1.0),
            measure=measure,
        )
    raise ValueError(f"unknown mean kind {kind!r}")


def parse_mean(descriptor):
    """Parse a CLI descriptor such as ``"geometric:0.5"`` or ``"power:0.5:t=-1"``.

    ``"measure:FILE.json"`` loads a :class:`RepresentingMeasure` from disk.
    """
    parts = descriptor.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "measure":
            if len(parts) < 2:
                raise ValueError("measure descriptor needs a file path")
            return make_mean("measure", measure=RepresentingMeasure.from_file(":".join(parts[1:])))
        if kind == "logarithmic":
            weight = float(parts[1]) if len(parts) > 1 else 0.5
            return make_mean("logarithmic", weight)
        weight = float(parts[1]) if len(parts) > 1 and parts[1] else 0.5
        if kind == "power":
            opts = dict(p.split("=", 1) for p in parts[2:])
            if "t" not in opts:
                raise InvalidExponent("power descriptor needs t=<exponent>")
            return make_mean("power", weight, exponent=float(opts["t"]))
        if len(parts) > 2:
            raise ValueError(f"unexpected trailing fields in {descriptor!r}")
        return make_mean(kind, weight)
    except (InvalidWeight, InvalidExponent, InvalidMeasure):
        raise
    except ValueError as exc:
        raise ValueError(f"bad mean descriptor {descriptor!r}: {exc}") from exc


def perspective_at_boundary(mean, s, t):
    """Perspective value at a single point of the closed quadrant."""
    if s < 0 or t < 0:
        raise ValueError("perspective needs s, t >= 0")
    return float(mean.perspective(float(s), float(t)))


def perspective_matrix(mean, s, t=None):
    """``M[i, j] = P(s_i, t_j)``; ``t`` defaults to ``s``."""
    s = check_nonnegative(s)
    t = s if t is None else check_nonnegative(t, name="t")
    return mean.perspective(s[:, None], t[None, :])


@dataclass(frozen=True)
class DominanceResult:
    dominated: bool
    min_eigenvalue: float
    ratio_norm: float


def dominance_check(mean_f, mean_g, s, tol=1e-10):
    """Test ``mean_f <= mean_g`` on one tuple: is ``[P_f(s_i,s_j)/P_g(s_i,s_j)]`` PSD?

    A single tuple can refute the relation but never prove it. The ratio
    matrix is symmetrized before the eigenvalue test; it is already symmetric
    for means of weight 1/2.

    Returns
    -------
    DominanceResult
        ``dominated`` is ``min_eigenvalue >= -tol``.
    """
    s = check_nonnegative(s, strict=True)
    Pf = perspective_matrix(mean_f, s)
    Pg = perspective_matrix(mean_g, s)
    if np.any(Pg == 0):
        raise ZeroDenominator("denominator perspective vanishes")
    R = Pf / Pg
    R = (R + R.T) / 2
    min_eig = float(np.linalg.eigvalsh(R)[0])
    return DominanceResult(
        dominated=min_eig >= -tol,
        min_eigenvalue=min_eig,
        ratio_norm=float(np.linalg.norm(R, 2)),
    )


def check_mean_axioms(mean, grid=None):
    """Grid spot-checks of normalization, monotonicity and the weight sandwich.

    Returns a dict of maximal violations (all should be ~0).
    """
    x = np.logspace(-4, 4, 401) if grid is None else np.asarray(grid, dtype=float)
    fx = mean.f(x)
    report = {
        "normalization": abs(float(mean.f(np.array([1.0]))[0]) - 1.0),
        "monotonicity": float(max(0.0, -np.min(np.diff(fx)))),
    }
    lam = mean.weight
    if 0.0 < lam < 1.0:
        lower = 1.0 / (1.0 - lam + lam / x)
        upper = 1.0 - lam + lam * x
        scale_ = np.maximum(1.0, np.abs(upper))
        report["sandwich"] = float(
            max(0.0, np.max((lower - fx) / scale_), np.max((fx - upper) / scale_))
        )
    return report


#: Non-weighted means in increasing order of the dominance chain.
def dominance_chain():
    return [
        make_mean("harmonic", 0.5),
        make_mean("geometric", 0.5),
        make_mean("logarithmic"),
        make_mean("arithmetic", 0.5),
    ]
