"""Poisson-weighted proximity, counting and characteristic functions.

For a rational f, a base point alpha with |alpha| < r and a circle |z| = r
free of zeros and poles of f:

    m_alpha(r, f) = (1/2pi) Int_0^2pi log+|f(r e^it)| Re((re^it + alpha)/(re^it - alpha)) dt
    N_alpha(r, f) = sum over poles |b| < r of  mult * log |(r^2 - conj(b) alpha) / (r (alpha - b))|
    T_alpha(r, f) = m_alpha + N_alpha

The proximity integral is evaluated by the trapezoidal rule on equispaced
nodes with node doubling until two successive values agree to the
requested tolerance; log+ has kinks where |f| crosses 1, which the
doubling criterion absorbs without kink detection.  The characteristic
satisfies T_alpha(r, 1/f) = T_alpha(r, f) + log(1/|f(alpha)|) whenever
alpha is neither a zero nor a pole of f, and the pole count n(r, f) obeys

    n(r, f) (R - r)(R - |alpha|) / (R^2 + r |alpha|) <= N_alpha(R, f) - N_alpha(r, f).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClearanceError, PreconditionError, QuadratureError
from .rational import POLE, RationalFunction

__all__ = [
    "NevanlinnaEval",
    "QuadratureSpec",
    "characteristic_T_alpha",
    "check_counting_inequality",
    "check_first_fundamental",
    "count_n",
    "counting_N_alpha",
    "proximity_m_alpha",
]

# alpha (or an evaluation point) closer than this to a singularity is an error
POINT_GUARD = 1e-9


@dataclass(frozen=True)
class QuadratureSpec:
    """Node-doubling trapezoidal quadrature parameters.

    ``circle_clearance`` is the minimal allowed distance of any zero or
    pole from an evaluation circle; None means 1e-3 * r.
    """

    initial_nodes: int = 64
    tolerance: float = 1e-9
    max_doublings: int = 16
    circle_clearance: float | None = None

    def __post_init__(self):
        if self.initial_nodes < 4:
            raise ValueError("initial_nodes must be at least 4")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be positive")
        if self.circle_clearance is not None and not self.circle_clearance > 0:
            raise ValueError("circle_clearance must be positive")

    def clearance_at(self, r: float) -> float:
        return self.circle_clearance if self.circle_clearance is not None else 1e-3 * r


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class NevanlinnaEval:
    """One (m, N, T) evaluation with its quadrature error estimate."""

    m_alpha: float
    n_alpha: float
    t_alpha: float
    quad_error_estimate: float
    nodes_used: int

    def __post_init__(self):
        if self.t_alpha != self.m_alpha + self.n_alpha:
            raise ValueError("t_alpha must equal m_alpha + n_alpha exactly")
        if self.m_alpha < 0 or self.n_alpha < 0:
            raise ValueError("proximity and counting terms must be nonnegative")
        if self.quad_error_estimate < 0 or self.nodes_used < 1:
            raise ValueError("invalid quadrature metadata")


def _check_circle_clearance(f: RationalFunction, r: float, clearance: float,
                            poles_only: bool = False):
    for kind, roots in (("zero", () if poles_only else f.zeros()), ("pole", f.poles())):
        for w, _ in roots:
            if abs(abs(w) - r) < clearance:
                raise ClearanceError(
                    f"{kind} at {w:.6g} is within {clearance:g} of the circle |z| = {r:g}",
                    location=w,
                    kind=kind,
                )


def trapezoid_doubling(fn, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Mean of a 2pi-periodic sampled function with node doubling.

    ``fn`` maps an array of angles to (real or complex) values.  Returns
    (value, last_difference, nodes_used, differences).  Raises
    QuadratureError carrying the best estimate when max_doublings is
    exhausted.
    """
    n = spec.initial_nodes
    t = 2.0 * np.pi * np.arange(n) / n
    est = complex(np.mean(fn(t)))
    diffs: list[float] = []
    for _ in range(spec.max_doublings):
        mids = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        mid_mean = complex(np.mean(fn(mids)))
        new = 0.5 * (est + mid_mean)
        diff = abs(new - est)
        diffs.append(diff)
        est = new
        n *= 2
        if diff < spec.tolerance:
            return est, diff, n, diffs
    raise QuadratureError(
        f"trapezoid did not reach tolerance {spec.tolerance:g} after "
        f"{spec.max_doublings} doublings (last diff {diffs[-1]:.3g})",
        best=est,
        estimate=diffs[-1],
    )


def _proximity_detail(
    f: RationalFunction,
    r: float,
    alpha: complex,
    spec: QuadratureSpec,
) -> tuple[float, float, int]:
    alpha = complex(alpha)
    if not 0 < r:
        raise ValueError("r must be positive")
    if abs(alpha) >= r:
        raise PreconditionError(f"|alpha| = {abs(alpha):g} must be < r = {r:g}")
    _check_circle_clearance(f, r, spec.clearance_at(r))

    def integrand(ts: np.ndarray) -> np.ndarray:
        z = r * np.exp(1j * ts)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            mag = np.abs(f.values(z))
            logplus = np.where(mag > 1.0, np.log(np.maximum(mag, 1e-300)), 0.0)
        kernel = ((z + alpha) / (z - alpha)).real
        return logplus * kernel

    value, diff, nodes, _ = trapezoid_doubling(integrand, spec)
    return value.real, diff, nodes


def proximity_m_alpha(
    f: RationalFunction,
    r: float,
    alpha: complex,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """(m_alpha(r, f), quadrature error estimate)."""
    value, diff, _ = _proximity_detail(f, r, alpha, spec)
    return value, diff


def _counting_term(b: complex, r: float, alpha: complex) -> float:
    return math.log(abs((r * r - b.conjugate() * alpha) / (r * (alpha - b))))


def counting_N_alpha(
    f: RationalFunction,
    r: float,
    alpha: complex,
    *,
    clearance: float | None = None,
) -> float:
    """Sum of log |(r^2 - conj(b) alpha)/(r (alpha - b))| over poles |b| < r."""
    alpha = complex(alpha)
    if abs(alpha) >= r:
        raise PreconditionError(f"|alpha| = {abs(alpha):g} must be < r = {r:g}")
    clearance = 1e-3 * r if clearance is None else clearance
    total = 0.0
    for b, m in f.poles():
        if abs(abs(b) - r) < clearance:
            raise ClearanceError(
                f"pole at {b:.6g} is ambiguous on the circle |z| = {r:g}",
                location=b, kind="pole",
            )
        if abs(b) < r:
            if abs(alpha - b) <= POINT_GUARD * max(1.0, abs(b)):
                raise PreconditionError(
                    f"alpha = {alpha:.6g} coincides with the pole at {b:.6g}"
                )
            total += m * _counting_term(b, r, alpha)
    return total


def characteristic_T_alpha(
    f: RationalFunction,
    r: float,
    alpha: complex,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> NevanlinnaEval:
    """T_alpha(r, f) = m_alpha(r, f) + N_alpha(r, f)."""
    m, err, nodes = _proximity_detail(f, r, alpha, spec)
    n = counting_N_alpha(f, r, alpha, clearance=spec.clearance_at(r))
    m = max(m, 0.0)  # trapezoid of a nonnegative integrand, clip FP dust
    return NevanlinnaEval(
        m_alpha=m,
        n_alpha=n,
        t_alpha=m + n,
        quad_error_estimate=err,
        nodes_used=nodes,
    )


def check_first_fundamental(
    f: RationalFunction,
    r: float,
    alpha: complex,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Residual T_alpha(r, 1/f) - T_alpha(r, f) - log(1/|f(alpha)|).

    alpha must be neither a zero nor a pole of f; both f and 1/f must
    clear the evaluation circle.
    """
    alpha = complex(alpha)
    for kind, roots in (("zero", f.zeros()), ("pole", f.poles())):
        for w, _ in roots:
            if abs(alpha - w) <= POINT_GUARD * max(1.0, abs(w)):
                raise PreconditionError(
                    f"alpha = {alpha:.6g} sits on a {kind} of f at {w:.6g}"
                )
    fa = f(alpha)
    if fa is POLE or fa == 0:
        raise PreconditionError("alpha must be neither a zero nor a pole of f")
    t_f = characteristic_T_alpha(f, r, alpha, spec)
    t_rec = characteristic_T_alpha(f.reciprocal(), r, alpha, spec)
    return t_rec.t_alpha - t_f.t_alpha - math.log(1.0 / abs(fa))


def count_n(
    f: RationalFunction,
    r: float,
    c: complex | None = None,
    *,
    clearance: float = POINT_GUARD,
) -> int:
    """Multiplicity count of poles of f (or of 1/(f - c)) in |z| <= r."""
    if c is None:
        roots = f.poles()
        what = "pole"
    else:
        g = f - complex(c)
        if g.is_zero:
            raise PreconditionError("f is identically equal to c")
        roots = g.zeros()
        what = "c-point"
    total = 0
    for w, m in roots:
        if abs(abs(w) - r) < clearance:
            raise ClearanceError(
                f"{what} at {w:.6g} is ambiguous on the circle |z| = {r:g}",
                location=w, kind=what,
            )
        if abs(w) <= r:
            total += m
    return total


def check_counting_inequality(
    f: RationalFunction,
    r: float,
    R: float,
    alpha: complex,
    *,
    clearance: float | None = None,
) -> float:
    """Margin (N_alpha(R, f) - N_alpha(r, f)) - n(r, f) (R-r)(R-|alpha|)/(R^2 + r|alpha|).

    The difference of counting functions is computed term by term with the
    (alpha - b) factors of inner poles cancelled analytically, so alpha
    may even coincide with a pole inside |z| < r.
    """
    alpha = complex(alpha)
    if not (abs(alpha) < r < R < 1.0):
        raise PreconditionError("need |alpha| < r < R < 1")
    clearance = min(1e-3 * r, 1e-3 * (R - r)) if clearance is None else clearance
    delta = 0.0
    n_inner = 0
    for b, m in f.poles():
        for rad in (r, R):
            if abs(abs(b) - rad) < clearance:
                raise ClearanceError(
                    f"pole at {b:.6g} is within {clearance:g} of the circle |z| = {rad:g}",
                    location=b, kind="pole",
                )
        ab = abs(b)
        if ab < r:
            n_inner += m
            delta += m * (
                math.log(abs(R * R - b.conjugate() * alpha) / R)
                - math.log(abs(r * r - b.conjugate() * alpha) / r)
            )
        elif ab < R:
            delta += m * _counting_term(b, R, alpha)
    lhs = n_inner * (R - r) * (R - abs(alpha)) / (R * R + r * abs(alpha))
    return delta - lhs
