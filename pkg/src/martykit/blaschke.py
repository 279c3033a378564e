"""Blaschke-type factors, zero splittings and the smallness threshold.

For a splitting circle |z| = s the factor

    G_a(z) = (s^2 - conj(a) z) / (s (z - a)),      |a| < s,

is unimodular on |z| = s, has modulus >= 1 inside and <= 1 outside.
Multiplying a holomorphic g by the product B of such factors over the
zeros of g inside the circle yields h = g B, holomorphic and zero-free in
|z| < s with |h| = |g| on |z| = s.  Because h is then zero-free, the
boundary values of log|h| recover the higher logarithmic derivatives:

    (h'/h)^(k-1)(z) = (k!/2pi) Int_0^2pi log|h(s e^it)| * 2 s e^it / (s e^it - z)^(k+1) dt.

The module also provides the closed-form logarithmic derivatives of a
single factor, the nearest-zero reduction used to trade the full product
for one with a lowered multiplicity at the zero closest to a base point,
and the threshold on sup|g| below which the weight

    (x/y)^k (m + log(y/x)/(s-r)^2)^(2m)

is non-increasing in y on [1, oo).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import (
    ClearanceError,
    ContractError,
    MultiplicityError,
    PreconditionError,
)
from .nevanlinna import DEFAULT_QUADRATURE, QuadratureSpec, trapezoid_doubling
from .rational import POLE, Polynomial, RationalFunction, RootList

__all__ = [
    "BlaschkeFactor",
    "BlaschkeSplit",
    "DiskGeometry",
    "NearestZeroReduction",
    "build_split",
    "factor_eval",
    "factor_log_derivative",
    "log_derivative_sup_bound",
    "nearest_zero_reduction",
    "poisson_log_derivative",
    "smallness_threshold",
    "smallness_threshold_scan",
    "weight_function",
]

BOUNDARY_CLEARANCE = 1e-9


@dataclass(frozen=True)
class DiskGeometry:
    """Radii 0 < r < s < R < 1 with s the exact midpoint of r and R."""

    r: float
    s: float
    R: float

    def __post_init__(self):
        if not (0.0 < self.r < self.s < self.R < 1.0):
            raise ValueError("need 0 < r < s < R < 1")
        if self.s != 0.5 * (self.r + self.R):
            raise ValueError("s must equal (r + R)/2 exactly")

    @classmethod
    def from_radii(cls, r: float, R: float) -> "DiskGeometry":
        return cls(r, 0.5 * (r + R), R)

    @property
    def gap(self) -> float:
        return self.s - self.r


@dataclass(frozen=True)
class BlaschkeFactor:
    """One factor G_a for the circle |z| = s, with a multiplicity."""

    a: complex
    s: float
    multiplicity: int = 1

    def __post_init__(self):
        if not abs(self.a) < self.s:
            raise ValueError("factor location must satisfy |a| < s")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")


def factor_eval(factor: BlaschkeFactor, z: complex):
    """(s^2 - conj(a) z) / (s (z - a)); POLE at z = a."""
    a, s = factor.a, factor.s
    if z == a:
        return POLE
    return (s * s - a.conjugate() * z) / (s * (z - a))


def _factor_values(factor: BlaschkeFactor, zs: np.ndarray) -> np.ndarray:
    a, s = factor.a, factor.s
    with np.errstate(divide="ignore", invalid="ignore"):
        return (s * s - a.conjugate() * zs) / (s * (zs - a))


def product_values(factors, zs: np.ndarray) -> np.ndarray:
    """The full product over factors (with multiplicities) on an array."""
    zs = np.asarray(zs, dtype=complex)
    out = np.ones_like(zs)
    for fac in factors:
        out = out * _factor_values(fac, zs) ** fac.multiplicity
    return out


def factor_log_derivative(factor: BlaschkeFactor, k: int, z: complex):
    """(G_a'/G_a)^(k-1)(z) in closed form for a single copy of the factor.

    (k-1)! * ( -conj(a)^k / (s^2 - conj(a) z)^k + (-1)^k / (z - a)^k );
    POLE at z = a and at the reflected point s^2/conj(a).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a, s = factor.a, factor.s
    ac = a.conjugate()
    first_den = s * s - ac * z
    if z == a or first_den == 0:
        return POLE
    fact = math.factorial(k - 1)
    return fact * (-(ac**k) / first_den**k + (-1) ** k / (z - a) ** k)


@dataclass(frozen=True)
class BlaschkeSplit:
    """g together with its factor list and the zero-free product h = g B."""

    g: RationalFunction
    geom: DiskGeometry
    factors: tuple[BlaschkeFactor, ...]
    h: RationalFunction

    @property
    def inner_count(self) -> int:
        """Multiplicity-weighted number of divided-out zeros, n(s, 0, g)."""
        return sum(f.multiplicity for f in self.factors)

    def B(self, z: complex):
        """The factor product at a point; POLE on a factor location."""
        out = 1.0 + 0j
        for fac in self.factors:
            v = factor_eval(fac, z)
            if v is POLE:
                return POLE
            out *= v**fac.multiplicity
        return out

    def B_values(self, zs: np.ndarray) -> np.ndarray:
        return product_values(self.factors, zs)

    def log_derivative_B(self, k: int, z: complex):
        """(B'/B)^(k-1)(z) as the multiplicity-weighted factor sum."""
        out = 0j
        for fac in self.factors:
            v = factor_log_derivative(fac, k, z)
            if v is POLE:
                return POLE
            out += fac.multiplicity * v
        return out


def build_split(
    g: RationalFunction,
    geom: DiskGeometry,
    *,
    boundary_clearance: float = BOUNDARY_CLEARANCE,
) -> BlaschkeSplit:
    """Divide out the zeros of g inside |z| < s.

    g must be holomorphic on |z| <= R (no poles there) and not
    identically zero; zeros too close to the splitting circle are
    rejected.  h is assembled at the polynomial level, deflating the
    inner zeros out of the numerator, so no near-singular floating
    products ever appear.
    """
    if g.is_zero:
        raise ValueError("cannot split the zero function")
    s = geom.s
    for b, _ in g.poles():
        if abs(b) <= geom.R + boundary_clearance:
            raise PreconditionError(
                f"g has a pole at {b:.6g} inside |z| <= R = {geom.R:g}"
            )
    inner: list[tuple[complex, int]] = []
    for a, m in g.zeros():
        if abs(abs(a) - s) < boundary_clearance:
            raise ClearanceError(
                f"zero at {a:.6g} is within {boundary_clearance:g} of |z| = s = {s:g}",
                location=a, kind="zero",
            )
        if abs(a) < s:
            inner.append((a, m))

    if not inner:
        return BlaschkeSplit(g=g, geom=geom, factors=(), h=g)

    num = g.num
    reflected = []
    scale = 1.0
    for a, m in inner:
        num = num.deflate(a, m)
        num = num * Polynomial([s * s, -a.conjugate()]) ** m
        if a != 0:  # a zero at the origin reflects to infinity
            reflected.append((s * s / a.conjugate(), m))
        scale *= float(s) ** m
    num = num.scaled(1.0 / scale)

    outer_zeros = [(a, m) for a, m in g.zeros() if abs(a) >= s]
    zero_entries = outer_zeros + reflected
    # a zero of g at the origin reflects to the factor s^2/conj(a) -> oo,
    # i.e. the numerator degree drops; the entry list just omits it
    h = RationalFunction._reduced(
        num, g.den,
        zeros=RootList(zero_entries) if _distinct(zero_entries) else None,
        poles=g.poles(),
    )
    factors = tuple(BlaschkeFactor(a, s, m) for a, m in inner)
    return BlaschkeSplit(g=g, geom=geom, factors=factors, h=h)


def _distinct(entries) -> bool:
    locs = [a for a, _ in entries]
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            if abs(locs[i] - locs[j]) <= 1e-9 * max(1.0, abs(locs[i])):
                return False
    return True


def poisson_log_derivative(
    split: BlaschkeSplit,
    k: int,
    z: complex,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> complex:
    """(h'/h)^(k-1)(z) from boundary values of log|h| on |z| = s.

    Valid for |z| <= r; the exact rational-calculus counterpart is
    ``rational.log_derivative(split.h, k)`` evaluated at z.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    z = complex(z)
    geom = split.geom
    if abs(z) > geom.r + 1e-12:
        raise PreconditionError(f"|z| = {abs(z):g} must be <= r = {geom.r:g}")
    s = geom.s
    h = split.h

    def integrand(ts: np.ndarray) -> np.ndarray:
        w = s * np.exp(1j * ts)
        with np.errstate(divide="ignore", invalid="ignore"):
            lh = np.log(np.abs(h.values(w)))
        return lh * 2.0 * w / (w - z) ** (k + 1)

    value, _, _, _ = trapezoid_doubling(integrand, spec)
    return math.factorial(k) * value


def log_derivative_sup_bound(split: BlaschkeSplit, k: int) -> float:
    """-2 k!/(s-r)^(k+1) * log|h(0)|, an upper bound for |(h'/h)^(k-1)|
    on |z| <= r whenever |h| <= 1 on the closed disk |z| <= s."""
    h0 = split.h(0.0)
    if h0 is POLE:
        raise PreconditionError("h has a pole at the origin")
    a0 = abs(h0)
    if a0 >= 1.0:
        raise PreconditionError("the bound needs |h(0)| < 1 (rescale g)")
    geom = split.geom
    return -2.0 * math.factorial(k) / geom.gap ** (k + 1) * math.log(a0)


@dataclass(frozen=True)
class NearestZeroReduction:
    """Product with the nearest zero's multiplicity lowered by m.

    ``factors`` is the reduced factor list, ``quotient`` the function
    h / (reduced product) = g * G_nearest^m, ``boundary_sup`` its largest
    modulus on the |z| = R grid and ``reference_sup`` the corresponding
    grid bound for |g| that certifies it.
    """

    factors: tuple[BlaschkeFactor, ...]
    quotient: RationalFunction
    nearest_zero: complex
    boundary_sup: float
    reference_sup: float
    product_floor: float


def nearest_zero_reduction(
    split: BlaschkeSplit,
    geom: DiskGeometry,
    z0: complex,
    m: int,
    *,
    boundary_points: int = 512,
) -> NearestZeroReduction:
    """Lower the multiplicity of the zero nearest to z0 by m.

    Preconditions: g(z0) != 0, g has a zero in |z| < s, and every zero of
    g has multiplicity at least m.  Ties between equidistant zeros are
    broken lexicographically by (real, imaginary) part.  The returned
    quotient satisfies |quotient| <= sup|g| for |z| <= R (checked on a
    boundary grid) and the reduced product has modulus >= 1 at z0.
    """
    if geom != split.geom:
        raise PreconditionError("geometry does not match the split")
    if m < 1:
        raise ValueError("m must be >= 1")
    g = split.g
    gz0 = g(complex(z0))
    if gz0 is POLE or gz0 == 0:
        raise PreconditionError("z0 must not be a zero (or pole) of g")
    if not split.factors:
        raise PreconditionError("g has no zero in |z| < s to reduce")
    for a, mult in g.zeros():
        if mult < m:
            raise MultiplicityError(
                f"zero at {a:.6g} has multiplicity {mult} < m = {m}",
                location=a, multiplicity=mult, required=m,
            )

    z0 = complex(z0)
    candidates = sorted(
        split.factors,
        key=lambda fac: (abs(z0 - fac.a), fac.a.real, fac.a.imag),
    )
    nearest = candidates[0]
    s = geom.s

    reduced: list[BlaschkeFactor] = []
    for fac in split.factors:
        if fac is nearest:
            if fac.multiplicity - m > 0:
                reduced.append(BlaschkeFactor(fac.a, s, fac.multiplicity - m))
        else:
            reduced.append(fac)

    # quotient = h / reduced product = g * G_nearest^m, assembled by
    # deflating m copies of the nearest zero out of g's numerator
    num = g.num.deflate(nearest.a, m)
    num = num * Polynomial([s * s, -nearest.a.conjugate()]) ** m
    num = num.scaled(1.0 / float(s) ** m)
    quotient = RationalFunction._reduced(num, g.den, poles=g.poles())

    ts = 2.0 * np.pi * np.arange(boundary_points) / boundary_points
    ring_R = geom.R * np.exp(1j * ts)
    ring_s = s * np.exp(1j * ts)
    bsup = float(np.max(np.abs(quotient.values(ring_R))))
    ref = float(
        max(np.max(np.abs(g.values(ring_R))), np.max(np.abs(g.values(ring_s))))
    )
    if bsup > ref * (1.0 + 1e-9):
        raise ContractError(
            "max principle violated: |quotient| exceeds the sup of |g| on the grids",
            value=bsup, bound=ref,
        )
    floor_val = 1.0
    for fac in reduced:
        v = factor_eval(fac, z0)
        if v is POLE:
            raise PreconditionError("z0 coincides with a factor location")
        floor_val *= abs(v) ** fac.multiplicity
    if floor_val < 1.0 - 1e-12:
        raise ContractError(
            "reduced product modulus at z0 fell below 1",
            value=floor_val, bound=1.0,
        )
    return NearestZeroReduction(
        factors=tuple(reduced),
        quotient=quotient,
        nearest_zero=nearest.a,
        boundary_sup=bsup,
        reference_sup=ref,
        product_floor=floor_val,
    )


# ---------------------------------------------------------------------------
# smallness threshold for the monotone weight
# ---------------------------------------------------------------------------


def weight_function(x: float, y: float, k: int, m: int, geom: DiskGeometry) -> float:
    """(x/y)^k * (m + log(y/x)/(s-r)^2)^(2m)."""
    if x <= 0 or y <= 0:
        raise ValueError("x and y must be positive")
    c = 1.0 / geom.gap**2
    return (x / y) ** k * (m + c * math.log(y / x)) ** (2 * m)


def smallness_threshold(k: int, m: int, geom: DiskGeometry) -> float:
    """Largest x0 <= 1/e such that y -> weight_function(x, y) is
    non-increasing on [1, oo) for every x <= x0.

    Differentiating in y shows the weight decreases at y exactly when
    log(y/x) >= 2m/k - m (s-r)^2, so the binding case y = 1 gives
    x0 = exp(m (s-r)^2 - 2m/k), capped at 1/e.  A coarse scan double
    checks monotonicity just inside the returned threshold.
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive integers")
    x0 = min(1.0 / math.e, math.exp(m * geom.gap**2 - 2.0 * m / k))
    x_test = x0 * (1.0 - 1e-9)
    ys = np.geomspace(1.0, 100.0, 200)
    vals = [weight_function(x_test, float(y), k, m, geom) for y in ys]
    for lo, hi in zip(vals, vals[1:]):
        if hi > lo * (1.0 + 1e-12):
            raise ContractError(
                "internal scan found an increase below the derived threshold",
                value=x_test, bound=x0,
            )
    return x0


def _scan_violates(x, k, m, geom, ladder) -> bool:
    """mpmath check: does the weight increase anywhere on the y ladder."""
    c = mpmath.mpf(1) / (mpmath.mpf(geom.s) - mpmath.mpf(geom.r)) ** 2
    xm = mpmath.mpf(x)

    def H(y):
        return (xm / y) ** k * (m + c * mpmath.log(y / xm)) ** (2 * m)

    prev = H(ladder[0])
    for y in ladder[1:]:
        cur = H(y)
        if cur > prev * (1 + mpmath.mpf(10) ** (-mpmath.mp.dps + 5)):
            return True
        prev = cur
    return False


def smallness_threshold_scan(
    k: int,
    m: int,
    geom: DiskGeometry,
    *,
    tol: float = 1e-10,
    dps: int = 40,
) -> float:
    """Threshold recovered by a high-precision monotonicity scan.

    Bisection on x against a scan of y in [1, 100]; the ladder is densest
    just above 1, where a violation first appears.  Independent of the
    closed form in ``smallness_threshold``.
    """
    with mpmath.workdps(dps):
        ladder = [mpmath.mpf(1)]
        step = mpmath.mpf(10) ** -14
        while ladder[-1] + step < 2:
            ladder.append(1 + step)
            step *= 10
        y = mpmath.mpf(2)
        while y <= 100:
            ladder.append(y)
            y *= 2
        ladder.append(mpmath.mpf(100))

        cap = mpmath.e ** -1
        if not _scan_violates(cap, k, m, geom, ladder):
            return float(cap)
        lo, hi = mpmath.mpf(10) ** -12, cap
        while hi - lo > tol / 4:
            mid = (lo + hi) / 2
            if _scan_violates(mid, k, m, geom, ladder):
                hi = mid
            else:
                lo = mid
        return float((lo + hi) / 2)
