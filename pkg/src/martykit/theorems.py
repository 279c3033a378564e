"""Scenario-level convergence, boundedness and sharpness checks.

The checks operationalise limit statements on concrete rational families:

* ``check_vanishing_family``: for holomorphic g_n -> 0 whose zeros all
  have multiplicity >= m, the quotient (g_n^(k))^m / g_n^(m-k) is
  holomorphic and tends to 0.  Families violating the multiplicity bound
  produce a deliberate pole (HolomorphyError), which is the sharpness
  demonstration path.
* ``check_diverging_family``: for meromorphic f_n -> oo whose poles all
  have multiplicity >= p, the quotient (f_n^(k))^p / f_n^(p+k) is
  holomorphic and tends to 0.
* ``scan_marty_quotient``: per-index sup of the Marty quotient over a
  disk for a family expected to be normal there, with the required pole
  multiplicity ceil(k/(alpha-1)) flagged.
* ``sharpness_exponent``: measures the power-law divergence rate of the
  quotient near a pole of 1/z^p (slope (alpha-1)p - k) and the lower
  bound (n-k)^k |z-3|^(n(1-alpha)-k) / 2 for the shifted powers (z-3)^n
  when alpha <= 1.
* ``estimate_chain_check`` / ``harnack_check``: pointwise margins of the
  product bounds on |g^k [(g'/g)^(k-1)]^m| obtained through the Blaschke
  splitting, and of the positive-harmonic comparison for log(1/|h|).

Limits are replaced by finite-index surrogates: "-> 0" means the sup grid
drops below ``zero_threshold`` or fits a negative log-log slope over at
least four indices, "-> oo" means the min grid exceeds ``inf_threshold``
at the largest index.  Verdicts are three-valued; trend detection never
overclaims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .blaschke import (
    BlaschkeSplit,
    DiskGeometry,
    build_split,
    smallness_threshold,
)
from .errors import (
    HolomorphyError,
    MultiplicityError,
    PreconditionError,
)
from .marty import MartyParams, marty_quotient, sup_on_disk
from .rational import (
    RationalFunction,
    log_derivative_at,
)

__all__ = [
    "ConvergenceReport",
    "EstimateChainReport",
    "FamilySpec",
    "ScanReport",
    "SharpnessReport",
    "check_diverging_family",
    "check_vanishing_family",
    "estimate_chain_check",
    "harnack_check",
    "scan_marty_quotient",
    "sharpness_exponent",
]

FAMILY_KINDS = ("power_pole", "shifted_power", "scaled_zero", "scaled_pole", "custom")

# default surrogates for the limit statements
ZERO_THRESHOLD = 1e-8
INF_THRESHOLD = 1e6
SLOPE_CUTOFF = 0.02
MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class FamilySpec:
    """A parameterised sequence of rational functions.

    kinds: power_pole (f = 1/z^p, index-independent), shifted_power
    (f_n = (z-3)^n), scaled_zero (g_n = z^(m-1)/n), scaled_pole
    (f_n = n/z^(p-1)), custom (explicit functions per index).
    """

    kind: str
    params: Mapping
    index_range: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if not self.index_range or any(n < 1 for n in self.index_range):
            raise ValueError("index_range must be positive integers")
        if list(self.index_range) != sorted(set(self.index_range)):
            raise ValueError("index_range must be strictly increasing")

    def function(self, n: int) -> RationalFunction:
        kind = self.kind
        if kind == "power_pole":
            p = int(self.params["p"])
            return RationalFunction.from_roots(poles=[(0.0, p)])
        if kind == "shifted_power":
            return RationalFunction.from_roots(zeros=[(3.0, n)])
        if kind == "scaled_zero":
            m = int(self.params["m"])
            if m < 2:
                raise ValueError("scaled_zero needs m >= 2")
            return RationalFunction.from_roots(zeros=[(0.0, m - 1)], leading=1.0 / n)
        if kind == "scaled_pole":
            p = int(self.params["p"])
            if p < 2:
                raise ValueError("scaled_pole needs p >= 2")
            return RationalFunction.from_roots(poles=[(0.0, p - 1)], leading=float(n))
        functions = self.params["functions"]
        f = functions(n) if callable(functions) else functions[n]
        if not isinstance(f, RationalFunction):
            raise TypeError("custom family must yield RationalFunction values")
        return f

    # convenience constructors -------------------------------------------
    @classmethod
    def power_pole(cls, p: int, indices=(1,)) -> "FamilySpec":
        return cls("power_pole", {"p": p}, tuple(indices))

    @classmethod
    def shifted_power(cls, indices) -> "FamilySpec":
        return cls("shifted_power", {}, tuple(indices))

    @classmethod
    def scaled_zero(cls, m: int, indices) -> "FamilySpec":
        return cls("scaled_zero", {"m": m}, tuple(indices))

    @classmethod
    def scaled_pole(cls, p: int, indices) -> "FamilySpec":
        return cls("scaled_pole", {"p": p}, tuple(indices))

    @classmethod
    def custom(cls, functions, indices) -> "FamilySpec":
        return cls("custom", {"functions": functions}, tuple(indices))


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-index sup norms with a fitted decay rate and a verdict."""

    indices: tuple[int, ...]
    sup_norms: tuple[float, ...]
    slope: float | None
    verdict: str  # converges_to_zero | diverges | inconclusive
    quantity: str

    def __post_init__(self):
        if any(v < 0 for v in self.sup_norms):
            raise ValueError("sup norms must be nonnegative")


@dataclass(frozen=True)
class ScanReport:
    """Per-index Marty-quotient sups with the multiplicity bookkeeping."""

    indices: tuple[int, ...]
    sup_norms: tuple[float, ...]
    verdict: str  # bounded | unbounded | inconclusive
    p_required: int
    flagged: tuple[tuple[int, complex, int], ...]
    equality_poles: tuple[tuple[int, complex, int], ...]


@dataclass(frozen=True)
class SharpnessReport:
    kind: str
    abscissae: tuple[float, ...]  # radii or indices
    values: tuple[float, ...]
    predicted_slope: float | None = None
    fitted_slope: float | None = None
    lower_bounds: tuple[float, ...] = ()
    bound_satisfied: bool | None = None
    diverges: bool | None = None

    @property
    def ok(self) -> bool:
        if self.kind == "power_pole":
            return (
                self.fitted_slope is not None
                and abs(self.fitted_slope - self.predicted_slope)
                <= 0.02 * abs(self.predicted_slope)
            )
        return bool(self.bound_satisfied) and bool(self.diverges)


@dataclass(frozen=True)
class EstimateChainReport:
    """Grid margins (bound minus exact value) for the product bounds.

    margins keys: "log_derivative" for the factorised bound on
    |(g'/g)^(k-1)| (absent for zero-free g), "pointwise" and "uniform"
    for the two disk bounds on |g^k [(g'/g)^(k-1)]^m|, "zero_free" for
    the sharper bound available when g has no zero inside |z| < s.
    ``ratios`` holds the matching min of bound/value over the grid, the
    scale-free slack of each estimate.
    """

    margins: dict
    ratios: dict
    lhs_scale: float
    zero_free: bool
    points_used: int
    threshold: float


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _fit_slope(xs, ys) -> float | None:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < MIN_FIT_POINTS or np.any(ys <= 0.0):
        return None
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _convergence_verdict(indices, sups, zero_threshold) -> tuple[str, float | None]:
    sups = list(sups)
    slope = _fit_slope(indices, sups)
    if sups[-1] <= zero_threshold:
        return "converges_to_zero", slope
    if slope is not None:
        if slope <= -SLOPE_CUTOFF and sups[-1] < sups[0]:
            return "converges_to_zero", slope
        if slope >= SLOPE_CUTOFF and sups[-1] > sups[0]:
            return "diverges", slope
    return "inconclusive", slope


def _boundary_points(center: complex, radius: float, count: int) -> np.ndarray:
    ts = 2.0 * np.pi * np.arange(count) / count
    return center + radius * np.exp(1j * ts)


def _disk_points(center: complex, radius: float, resolution: int) -> np.ndarray:
    radii = np.linspace(0.0, radius, resolution)
    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    pts = center + np.outer(radii[1:], np.exp(1j * angles)).ravel()
    return np.concatenate(([center], pts))


def _power_quotient(f: RationalFunction, k: int, up: int, down: int) -> RationalFunction:
    """(f^(k))^up / f^down with integer ``down`` of either sign."""
    top = f.derivative(k) ** up
    if down == 0:
        return top
    if down > 0:
        return top / (f**down)
    return top * (f ** (-down))


def _poles_in_disk(f: RationalFunction, center: complex, radius: float):
    return [
        (b, m) for b, m in f.poles() if abs(b - center) <= radius * (1 + 1e-12) + 1e-15
    ]


def _require_vanishing(indices, sups, quantity, zero_threshold):
    verdict, _ = _convergence_verdict(indices, sups, zero_threshold)
    if verdict != "converges_to_zero" and not (
        len(sups) >= 2 and sups[-1] < sups[0]
    ):
        raise PreconditionError(
            f"{quantity} does not tend to 0 on the disk boundary "
            f"(first {sups[0]:.3g}, last {sups[-1]:.3g})"
        )


# ---------------------------------------------------------------------------
# family checks
# ---------------------------------------------------------------------------


def _holomorphy_guard(q: RationalFunction, center: complex, radius: float,
                      bad_zero=None, required=None):
    """Raise on poles of the quotient in the disk; otherwise surface any
    multiplicity violation found earlier.  Ordered this way the
    deliberate sharpness families always report the pole they create."""
    q_poles = _poles_in_disk(q, center, radius)
    if q_poles:
        b, m = q_poles[0]
        raise HolomorphyError(
            f"quotient has a pole of order {m} at {b:.6g} inside the disk",
            location=b,
        )
    if bad_zero is not None:
        a, mult = bad_zero
        raise MultiplicityError(
            f"zero at {a:.6g} has multiplicity {mult} < required {required}",
            location=a, multiplicity=mult, required=required,
        )


def check_vanishing_family(
    family: FamilySpec,
    k: int,
    m: int,
    disk: tuple[complex, float],
    *,
    boundary_count: int = 256,
    zero_threshold: float = ZERO_THRESHOLD,
) -> ConvergenceReport:
    """Sup norms of (g_n^(k))^m / g_n^(m-k) for a vanishing holomorphic family.

    Each g_n must be holomorphic on the disk with every zero inside of
    multiplicity at least m, and the boundary sups of |g_n| must tend
    to 0.  The quotient is built as a reduced rational function and must
    be pole-free on the disk; the scaled_zero sharpness family fails that
    check by construction.
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive integers")
    center, radius = complex(disk[0]), float(disk[1])
    ring = _boundary_points(center, radius, boundary_count)
    sups_g, sups_q = [], []
    for n in family.index_range:
        g = family.function(n)
        if g.is_zero:
            raise PreconditionError("family members must not be identically zero")
        if _poles_in_disk(g, center, radius):
            raise PreconditionError(
                f"member {n} is not holomorphic on the disk (pole inside)"
            )
        bad = None
        for a, mult in g.zeros():
            if abs(a - center) <= radius * (1 + 1e-12) and mult < m:
                bad = (a, mult)
                break
        q = _power_quotient(g, k, up=m, down=m - k)
        _holomorphy_guard(q, center, radius, bad_zero=bad, required=m)
        sups_g.append(float(np.max(np.abs(g.values(ring)))))
        # q is holomorphic on the closed disk, so the boundary carries its max
        sups_q.append(float(np.max(np.abs(q.values(ring)))))
    _require_vanishing(family.index_range, sups_g, "sup |g_n|", zero_threshold)
    verdict, slope = _convergence_verdict(family.index_range, sups_q, zero_threshold)
    return ConvergenceReport(
        indices=family.index_range,
        sup_norms=tuple(sups_q),
        slope=slope,
        verdict=verdict,
        quantity="(g^(k))^m / g^(m-k)",
    )


def check_diverging_family(
    family: FamilySpec,
    k: int,
    p: int,
    disk: tuple[complex, float],
    *,
    boundary_count: int = 256,
    interior_resolution: int = 16,
    zero_threshold: float = ZERO_THRESHOLD,
    inf_threshold: float = INF_THRESHOLD,
) -> ConvergenceReport:
    """Sup norms of (f_n^(k))^p / f_n^(p+k) for a family diverging to oo.

    Poles inside the disk must have multiplicity at least p and the
    minimal |f_n| over a disk grid must exceed ``inf_threshold`` at the
    largest index.  The scaled_pole sharpness family trips the
    holomorphy guard with its deliberate pole at 0.
    """
    if k < 1 or p < 1:
        raise ValueError("k and p must be positive integers")
    center, radius = complex(disk[0]), float(disk[1])
    ring = _boundary_points(center, radius, boundary_count)
    grid = _disk_points(center, radius, interior_resolution)
    sups_d, mins_f = [], []
    for n in family.index_range:
        f = family.function(n)
        if f.is_zero:
            raise PreconditionError("family members must not be identically zero")
        bad = None
        for b, mult in _poles_in_disk(f, center, radius):
            if mult < p:
                bad = (b, mult)
                break
        d = _power_quotient(f, k, up=p, down=p + k)
        _holomorphy_guard(d, center, radius, bad_zero=bad, required=p)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            fv = np.abs(f.values(grid))
        mins_f.append(float(np.nanmin(np.where(np.isnan(fv), np.inf, fv))))
        sups_d.append(float(np.max(np.abs(d.values(ring)))))
    if mins_f[-1] < inf_threshold:
        raise PreconditionError(
            f"min |f_n| = {mins_f[-1]:.3g} at the largest index is below the "
            f"divergence surrogate {inf_threshold:g}"
        )
    verdict, slope = _convergence_verdict(family.index_range, sups_d, zero_threshold)
    return ConvergenceReport(
        indices=family.index_range,
        sup_norms=tuple(sups_d),
        slope=slope,
        verdict=verdict,
        quantity="(f^(k))^p / f^(p+k)",
    )


def scan_marty_quotient(
    family: FamilySpec,
    k: int,
    alpha: float,
    disk: tuple[complex, float],
    *,
    resolution: int = 32,
) -> ScanReport:
    """Per-index sup of the Marty quotient over a disk, with the pole
    multiplicities compared against ceil(k/(alpha-1))."""
    if not alpha > 1.0:
        raise ValueError("alpha must exceed 1")
    center, radius = complex(disk[0]), float(disk[1])
    params = MartyParams(k=k, alpha=float(alpha))
    p_required = math.ceil(k / (alpha - 1.0) - 1e-12)
    sups = []
    flagged = []
    equality = []
    for n in family.index_range:
        f = family.function(n)
        for b, mult in _poles_in_disk(f, center, radius):
            if mult < p_required:
                flagged.append((n, b, mult))
            if abs((alpha - 1.0) * mult - k) <= 1e-12:
                equality.append((n, b, mult))
        sups.append(sup_on_disk(f, params, center, radius, resolution))
    finite = [v for v in sups if math.isfinite(v)]
    if len(finite) < len(sups):
        verdict = "unbounded"
    elif len(sups) == 1:
        verdict = "bounded"
    else:
        half = max(1, len(sups) // 2)
        head, tail = sups[:half], sups[half:]
        slope = _fit_slope(family.index_range, sups) if min(sups) > 0 else 0.0
        if max(tail) <= 1.05 * max(max(head), 1e-300) or (
            slope is not None and slope <= SLOPE_CUTOFF
        ):
            verdict = "bounded"
        else:
            verdict = "inconclusive"
    return ScanReport(
        indices=family.index_range,
        sup_norms=tuple(sups),
        verdict=verdict,
        p_required=p_required,
        flagged=tuple(flagged),
        equality_poles=tuple(equality),
    )


def sharpness_exponent(
    example: str,
    k: int,
    alpha: float,
    *,
    p: int | None = None,
    radii: tuple[float, ...] | None = None,
    indices: tuple[int, ...] | None = None,
    points: int = 10,
    eval_radius: float = 0.8,
) -> SharpnessReport:
    """Measured against predicted blow-up of the Marty quotient.

    power_pole: evaluates |f^(k)|/(1+|f|^alpha) for f = 1/z^p at small
    radii and fits the log-log slope, to be compared with
    (alpha-1)p - k < 0 (requires p < k/(alpha-1)).

    shifted_power: for f_n = (z-3)^n with 0 < alpha <= 1, checks the
    values at ``points`` grid points against the lower bound
    (n-k)^k |z-3|^(n(1-alpha)-k) / 2 and that they diverge in n.
    """
    if example == "power_pole":
        if p is None or p < 1:
            raise ValueError("power_pole needs a positive p")
        if not alpha > 1.0:
            raise PreconditionError("power_pole sharpness needs alpha > 1")
        if (alpha - 1.0) * p >= k:
            raise PreconditionError(
                "need p < k/(alpha-1) so the quotient blows up at the pole"
            )
        radii = tuple(radii) if radii else tuple(10.0 ** -j for j in range(1, 7))
        f = RationalFunction.from_roots(poles=[(0.0, p)])
        params = MartyParams(k=k, alpha=alpha)
        vals = tuple(marty_quotient(f, params, complex(r)) for r in radii)
        slope = _fit_slope(radii, vals)
        return SharpnessReport(
            kind="power_pole",
            abscissae=radii,
            values=vals,
            predicted_slope=(alpha - 1.0) * p - k,
            fitted_slope=slope,
        )

    if example == "shifted_power":
        if not 0.0 < alpha <= 1.0:
            raise PreconditionError("shifted_power sharpness needs 0 < alpha <= 1")
        indices = tuple(indices) if indices else tuple(range(k + 1, 41))
        if any(n <= k for n in indices):
            raise ValueError("indices must exceed k")
        zs = _boundary_points(0.0, eval_radius, points)
        params = MartyParams(k=k, alpha=alpha)
        vals, bounds = [], []
        ok = True
        for n in indices:
            f = RationalFunction.from_roots(zeros=[(3.0, n)])
            worst = math.inf
            worst_bound = 0.0
            for z in zs:
                v = marty_quotient(f, params, complex(z))
                w = abs(complex(z) - 3.0)
                bound = 0.5 * (n - k) ** k * w ** (n * (1.0 - alpha) - k)
                if v <= bound:
                    ok = False
                if v < worst:
                    worst, worst_bound = v, bound
            vals.append(worst)
            bounds.append(worst_bound)
        growth = _fit_slope([float(n) for n in indices], vals)
        diverges = vals[-1] > vals[0] and (
            (growth is not None and growth > SLOPE_CUTOFF)
            or vals[-1] > 2.0 * vals[0]
        )
        return SharpnessReport(
            kind="shifted_power",
            abscissae=tuple(float(n) for n in indices),
            values=tuple(vals),
            lower_bounds=tuple(bounds),
            bound_satisfied=ok,
            diverges=diverges,
        )

    raise ValueError(f"unknown sharpness example {example!r}")


# ---------------------------------------------------------------------------
# product-bound margins
# ---------------------------------------------------------------------------


def estimate_chain_check(
    g: RationalFunction,
    k: int,
    m: int,
    geom: DiskGeometry,
    grid: int = 24,
) -> EstimateChainReport:
    """Margins of the splitting bounds over a polar grid of |z| <= r.

    The exact left sides |(g'/g)^(k-1)| and |g^k [(g'/g)^(k-1)]^m| come
    from rational calculus; the right sides are assembled from the
    splitting h = g B.  Preconditions: g holomorphic on the closed unit
    disk, zeros inside |z| < s of multiplicity >= m, and sup|g| <= the
    smallness threshold on |z| <= 1 (callers rescale g to arrange that).
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive integers")
    if grid < 8:
        raise ValueError("grid resolution must be at least 8")
    for b, _ in g.poles():
        if abs(b) <= 1.0 + 1e-9:
            raise PreconditionError(f"g has a pole at {b:.6g} in the closed unit disk")
    for a, mult in g.zeros():
        if abs(a) < geom.s and mult < m:
            raise MultiplicityError(
                f"zero at {a:.6g} has multiplicity {mult} < m = {m}",
                location=a, multiplicity=mult, required=m,
            )
    x0 = smallness_threshold(k, m, geom)
    unit_ring = _boundary_points(0.0, 1.0, 512)
    sup_g = float(np.max(np.abs(g.values(unit_ring))))
    if sup_g > x0:
        raise PreconditionError(
            f"sup |g| = {sup_g:.3g} exceeds the smallness threshold {x0:.3g}; rescale g"
        )

    split = build_split(g, geom)
    h = split.h
    n_inner = split.inner_count
    gap = geom.gap
    kfact = math.factorial(k)
    h0 = abs(complex(h(0.0)))
    log_h0 = math.log(1.0 / h0)

    pts = _disk_points(0.0, geom.r, grid)
    keep = np.ones(len(pts), dtype=bool)
    for a, _ in g.zeros():
        keep &= np.abs(pts - a) > 1e-9
    pts = pts[keep]

    wv = np.abs(log_derivative_at(g, k, pts))  # (g'/g)^(k-1), factored form
    gv = np.abs(g.values(pts))
    hv = np.abs(h.values(pts))
    lhs_short = wv
    lhs_full = gv**k * wv**m
    log_hz = np.log(1.0 / hv)

    margins: dict[str, float] = {}
    ratios: dict[str, float] = {}

    def _ratio(rhs, lhs):
        mask = lhs > 0
        if not mask.any():
            return math.inf
        return float(np.min(rhs[mask] / lhs[mask]))

    if n_inner == 0:
        rhs_free = hv**k * (2.0 * kfact / gap ** (k + 1) * log_h0) ** m
        margins["zero_free"] = float(np.min(rhs_free - lhs_full))
        ratios["zero_free"] = _ratio(rhs_free, lhs_full)
    else:
        zero_sum = np.zeros(len(pts))
        for fac in split.factors:
            zero_sum += fac.multiplicity / np.abs(pts - fac.a) ** k
        rhs_short = (
            6.0 * kfact * 2.0**k / gap ** (k + 1) * log_h0 * n_inner * zero_sum
        )
        margins["log_derivative"] = float(np.min(rhs_short - lhs_short))
        ratios["log_derivative"] = _ratio(rhs_short, lhs_short)
    rhs_point = (
        hv**k
        * (6.0 * kfact * 2.0**k / gap ** (2 * k + 1) * log_h0) ** m
        * (m + log_hz / gap**2) ** (2 * m)
    )
    margins["pointwise"] = float(np.min(rhs_point - lhs_full))
    ratios["pointwise"] = _ratio(rhs_point, lhs_full)
    rhs_unif = (
        hv**k
        * (12.0 * geom.s * kfact * 2.0**k / gap ** (2 * k + 2) * log_hz) ** m
        * (m + log_hz / gap**2) ** (2 * m)
    )
    margins["uniform"] = float(np.min(rhs_unif - lhs_full))
    ratios["uniform"] = _ratio(rhs_unif, lhs_full)
    return EstimateChainReport(
        margins=margins,
        ratios=ratios,
        lhs_scale=float(max(1.0, np.max(lhs_full))),
        zero_free=n_inner == 0,
        points_used=len(pts),
        threshold=x0,
    )


def harnack_check(
    h: RationalFunction | BlaschkeSplit,
    geom: DiskGeometry,
    grid: int = 16,
) -> float:
    """Min over |z| <= r of (s+r)/(s-r) log(1/|h(z)|) - log(1/|h(0)|).

    h must be zero-free and holomorphic on |z| <= s with |h| < 1 there,
    so that log(1/|h|) is positive harmonic and the margin is
    nonnegative up to rounding.
    """
    if isinstance(h, BlaschkeSplit):
        h = h.h
    if grid < 8:
        raise ValueError("grid resolution must be at least 8")
    s, r = geom.s, geom.r
    for a, _ in h.zeros():
        if abs(a) <= s + 1e-9:
            raise HolomorphyError(
                f"h has a zero at {a:.6g} inside |z| <= s", location=a
            )
    for b, _ in h.poles():
        if abs(b) <= s + 1e-9:
            raise PreconditionError(f"h has a pole at {b:.6g} inside |z| <= s")
    ring = _boundary_points(0.0, s, 512)
    sup_h = float(np.max(np.abs(h.values(ring))))
    if sup_h >= 1.0:
        raise PreconditionError(
            f"need |h| < 1 on |z| = s (found sup {sup_h:.3g}); rescale h"
        )
    pts = _disk_points(0.0, r, grid)
    hv = np.abs(h.values(pts))
    h0 = abs(complex(h(0.0)))
    margins = (s + r) / (s - r) * np.log(1.0 / hv) - math.log(1.0 / h0)
    return float(np.min(margins))
