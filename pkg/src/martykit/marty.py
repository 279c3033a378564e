"""Spherical derivative and the generalised Marty quotient.

The quotient |f^(k)| / (1 + |f|^alpha) is extended continuously into the
poles of f.  For a pole of multiplicity p with Laurent leading coefficient
c the quotient behaves like

    rising(p, k) * |c|^(1-alpha) * |z - b|^((alpha-1)p - k),

so the extension is 0 when (alpha-1)p > k, the finite constant
rising(p, k) * |c|^(1-alpha) in the equality case, and +inf when
(alpha-1)p < k.  math.inf is the +inf marker of the ExtendedValue type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rational import POLE, RationalFunction, derivative_ratio_at

__all__ = [
    "ExtendedValue",
    "MartyParams",
    "marty_quotient",
    "pole_extension",
    "spherical_derivative",
    "sup_on_disk",
]

# Nonnegative real with math.inf marking divergence at a pole.
ExtendedValue = float

# Within this relative distance of a detected pole, direct evaluation is
# replaced by the continuous extension value.
NEAR_POLE = 1e-9
# Tolerance for deciding the pole trichotomy sign of (alpha-1)p - k.
CASE_TOL = 1e-12


@dataclass(frozen=True)
class MartyParams:
    """Derivative order k >= 1 and exponent alpha > 0 of the quotient."""

    k: int
    alpha: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


def _rising(p: int, k: int) -> float:
    """p (p+1) ... (p+k-1)."""
    out = 1.0
    for i in range(k):
        out *= p + i
    return out


def _nearest_pole(f: RationalFunction, z: complex):
    best = None
    for b, m in f.poles():
        d = abs(z - b)
        if best is None or d < best[0]:
            best = (d, b, m)
    return best


def spherical_derivative(f: RationalFunction, z: complex) -> float:
    """|f'(z)| / (1 + |f(z)|^2), computed through 1/f at and near poles."""
    near = _nearest_pole(f, z)
    if near is not None and near[0] <= NEAR_POLE * max(1.0, abs(near[1])):
        g = f.reciprocal()
        gv = g(z)
        gd = g.derivative()(z)
        return abs(gd) / (1.0 + abs(gv) ** 2)
    fv = f(z)
    if fv is POLE:
        return spherical_derivative(f.reciprocal(), z)
    fd = f.derivative()(z)
    if fd is POLE:  # unreachable for reduced f, defensive
        return math.inf
    return abs(fd) / (1.0 + abs(fv) ** 2)


def pole_extension(f: RationalFunction, params: MartyParams, pole: complex,
                   multiplicity: int) -> tuple[float, str]:
    """Continuous extension value of the quotient at a pole, with its case.

    Returns (value, case) where case is one of "vanishes", "equality",
    "diverges" according to the sign of (alpha-1)*multiplicity - k.
    """
    t = (params.alpha - 1.0) * multiplicity - params.k
    if t > CASE_TOL:
        return 0.0, "vanishes"
    if t < -CASE_TOL:
        return math.inf, "diverges"
    # Laurent leading coefficient: f = c/(z-b)^p * (1 + O(z-b)).
    q = f.den.deflate(pole, multiplicity)
    c = f.num(pole) / q(pole)
    return _rising(multiplicity, params.k) * abs(c) ** (1.0 - params.alpha), "equality"


def marty_quotient(f: RationalFunction, params: MartyParams, z: complex) -> ExtendedValue:
    """|f^(k)(z)| / (1 + |f(z)|^alpha), extended continuously into poles."""
    near = _nearest_pole(f, z)
    if near is not None and near[0] <= NEAR_POLE * max(1.0, abs(near[1])):
        value, _ = pole_extension(f, params, near[1], near[2])
        return value
    fv = f(z)
    if fv is POLE:  # a pole not in the root list cannot occur; defensive
        return math.inf
    # |f^(k)(z)| as |f^(k)/f| * |f|: the factored-form ratio is stable
    # near poles where the expanded numerator of f^(k) cancels badly
    if fv == 0:
        top = abs(f.derivative(params.k)(z))
    else:
        top = abs(derivative_ratio_at(f, params.k, z) * fv)
    bottom = 1.0 + abs(fv) ** params.alpha
    if math.isinf(bottom) or math.isinf(top):
        return 0.0 if math.isinf(bottom) else math.inf
    return top / bottom


def _quotient_grid(f: RationalFunction, params: MartyParams, zs: np.ndarray) -> np.ndarray:
    """Vectorised quotient over an array of points with pole guards."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        fv = f.values(zs)
        top = np.abs(derivative_ratio_at(f, params.k, zs) * fv)
        bottom = 1.0 + np.abs(fv) ** params.alpha
        out = top / bottom
    for b, m in f.poles():
        mask = np.abs(zs - b) <= NEAR_POLE * max(1.0, abs(b))
        if mask.any():
            out[mask] = pole_extension(f, params, b, m)[0]
    bad = ~np.isfinite(out)
    if bad.any():
        flat = out.ravel()
        zflat = zs.ravel()
        for i in np.nonzero(~np.isfinite(flat))[0]:
            flat[i] = marty_quotient(f, params, complex(zflat[i]))
    return out


def _polar_grid(center: complex, radius: float, resolution: int) -> np.ndarray:
    radii = np.linspace(0.0, radius, resolution)
    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    pts = center + np.outer(radii[1:], np.exp(1j * angles)).ravel()
    return np.concatenate(([center], pts))


def sup_on_disk(
    f: RationalFunction,
    params: MartyParams,
    center: complex,
    radius: float,
    resolution: int,
) -> ExtendedValue:
    """Grid estimate of sup of the Marty quotient over a closed disk.

    A polar grid plus one local refinement pass around the grid maximum;
    the result is a lower bound for the true supremum.  Returns math.inf
    as soon as some pole inside the disk has (alpha-1)*mult < k.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = complex(center)

    best = 0.0
    for b, m in f.poles():
        if abs(b - center) <= radius * (1.0 + 1e-12) + 1e-15:
            value, case = pole_extension(f, params, b, m)
            if case == "diverges":
                return math.inf
            best = max(best, value)

    pts = _polar_grid(center, radius, resolution)
    vals = _quotient_grid(f, params, pts)
    idx = int(np.argmax(vals))
    best = max(best, float(vals[idx]))

    # one refinement pass around the grid maximum, clipped to the disk
    spacing = radius / (resolution - 1)
    local = _polar_grid(complex(pts[idx]), 1.5 * spacing, resolution)
    keep = np.abs(local - center) <= radius + 1e-15
    if keep.any():
        lv = _quotient_grid(f, params, local[keep])
        best = max(best, float(np.max(lv)))
    return best
