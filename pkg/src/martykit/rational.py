"""Complex polynomial and rational-function calculus.

Polynomials carry ascending complex coefficients; rational functions are
kept in reduced form (no shared roots between numerator and denominator,
denominator monic).  Reduction happens at root level rather than through
coefficient gcds: shared roots are located, paired within a clustering
tolerance and divided out by synthetic deflation, which is far more
stable for floating coefficients.

Root finding uses companion-matrix eigenvalues (``numpy.roots``) followed
by Newton polishing and multiplicity-aware clustering: eigenvalues of an
m-fold root scatter like eps**(1/m), so clusters are grown with an
escalating radius and every escalated merge must be certified by the
smallness of the first m-1 derivatives at the refined centre.

Everything here is immutable and pure; values can be shared freely
between threads.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import RootFindingError

__all__ = [
    "POLE",
    "Polynomial",
    "RationalFunction",
    "RootList",
    "derivative",
    "derivative_ratio_at",
    "evaluate",
    "find_roots",
    "log_derivative",
    "log_derivative_at",
    "zeros_poles",
]

# Relative radius used both for multiple-root clustering and for pairing
# numerator/denominator roots during reduction.
CLUSTER_RADIUS = 1e-6
# Residual acceptance for find_roots: |p(root)| <= tol * sum_i |c_i| |root|^i.
ROOT_RESIDUAL_TOL = 1e-8
# Relative threshold below which leading coefficients are trimmed away.
TRIM_REL = 1e-12
# Escalated cluster merges must pass a derivative-smallness certificate at
# this relative level; it separates true m-fold roots (residuals ~1e-13)
# from genuinely distinct roots more than ~1e-4 apart.
CERT_TOL = 1e-9
# Assumed coefficient-level backward error driving the eigenvalue scatter.
EPS_POLY = 1e-13


class _PoleMarker:
    """Singleton returned when a rational function is evaluated at a pole."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"


POLE = _PoleMarker()


def _as_complex_tuple(coeffs) -> tuple[complex, ...]:
    return tuple(complex(c) for c in coeffs)


class Polynomial:
    """Immutable polynomial with ascending complex coefficients.

    The zero polynomial is the empty coefficient tuple and has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        cs = list(_as_complex_tuple(coeffs))
        if cs:
            top = max(abs(c) for c in cs)
            cut = TRIM_REL * top
            while cs and abs(cs[-1]) <= cut:
                cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ---------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    # -- evaluation ------------------------------------------------------
    def __call__(self, z):
        if isinstance(z, np.ndarray):
            if not self.coeffs:
                return np.zeros_like(z, dtype=complex)
            return np.polynomial.polynomial.polyval(
                z.astype(complex), np.asarray(self.coeffs, dtype=complex)
            )
        if not self.coeffs:
            return 0j
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def abs_eval(self, z) -> float:
        """sum_i |c_i| |z|^i, the backward-error scale at ``z``."""
        az = abs(z)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * az + abs(c)
        return acc

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = other if isinstance(other, Polynomial) else Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, Polynomial) else Polynomial([other])
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial([other]) + (-self)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            prod = np.convolve(
                np.asarray(self.coeffs, dtype=complex),
                np.asarray(other.coeffs, dtype=complex),
            )
            return Polynomial(prod)
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial([c * factor for c in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial powers are not defined")
        out = Polynomial([1.0])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus --------------------------------------------------------
    def derivative(self, order: int = 1) -> "Polynomial":
        p = self
        for _ in range(order):
            p = Polynomial([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def deflate(self, root: complex, multiplicity: int = 1) -> "Polynomial":
        """Divide by (z - root)**multiplicity, discarding the remainder."""
        desc = list(self.coeffs[::-1])
        for _ in range(multiplicity):
            out = [desc[0]]
            for c in desc[1:-1]:
                out.append(c + root * out[-1])
            desc = out
        return Polynomial(desc[::-1])

    @classmethod
    def from_roots(cls, roots: Iterable[complex], leading: complex = 1.0) -> "Polynomial":
        acc = np.array([1.0 + 0j])
        for a in roots:
            acc = np.convolve(acc, np.array([-complex(a), 1.0 + 0j]))
        return cls(acc * complex(leading))


class RootList:
    """Roots with multiplicities, sorted by (real, imaginary) location."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[complex, int]] = ()):
        es = sorted(
            ((complex(a), int(m)) for a, m in entries),
            key=lambda e: (e[0].real, e[0].imag),
        )
        if any(m < 1 for _, m in es):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "entries", tuple(es))

    def __setattr__(self, name, value):
        raise AttributeError("RootList is immutable")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, RootList):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RootList({list(self.entries)!r})"

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def locations(self) -> tuple[complex, ...]:
        return tuple(a for a, _ in self.entries)

    def scaled_multiplicity(self, factor: int) -> "RootList":
        return RootList((a, m * factor) for a, m in self.entries)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------


def _newton_polish(p: Polynomial, dp: Polynomial, z: complex, iters: int = 8) -> complex:
    best = z
    best_err = abs(p(z)) / max(p.abs_eval(z), 1e-300)
    for _ in range(iters):
        d = dp(z)
        if abs(d) == 0.0:
            break
        z = z - p(z) / d
        err = abs(p(z)) / max(p.abs_eval(z), 1e-300)
        if err < best_err:
            best, best_err = z, err
        else:
            break
    return best


def _refine_multiple(p: Polynomial, center: complex, mult: int) -> complex:
    """Newton on p^(mult-1), where an exact mult-fold root is simple."""
    if mult <= 1:
        return center
    q = p.derivative(mult - 1)
    dq = q.derivative()
    z = center
    for _ in range(50):
        d = dq(z)
        if abs(d) == 0.0:
            break
        step = q(z) / d
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def _certify_multiple(p: Polynomial, center: complex, mult: int) -> tuple[bool, complex]:
    """Accept ``center`` as a mult-fold root if p, p', ..., p^(mult-1) are
    all relatively tiny there."""
    c = _refine_multiple(p, center, mult)
    q = p
    for _ in range(mult):
        scale = q.abs_eval(c)
        if scale == 0.0:
            return False, c
        if abs(q(c)) > CERT_TOL * scale:
            return False, c
        q = q.derivative()
    return True, c


def _chain_clusters(points: Sequence[complex], radius_of) -> list[list[int]]:
    """Union points whose pairwise distance is below radius_of(i, j)."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= radius_of(i, j):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def find_roots(
    p: Polynomial | Sequence[complex],
    tol: float = ROOT_RESIDUAL_TOL,
    cluster_radius: float = CLUSTER_RADIUS,
) -> RootList:
    """All roots of ``p`` with multiplicities recovered by clustering.

    Raises RootFindingError (carrying the roots that did validate) when
    the eigenvalue iteration fails or a reported root has backward error
    above ``tol``.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero:
        raise ValueError("the zero polynomial has no well-defined root list")
    if p.degree == 0:
        return RootList(())
    if tol <= 0:
        raise ValueError("tol must be positive")

    # Exact zero coefficients at the bottom give an exact root at 0.
    coeffs = list(p.coeffs)
    origin_mult = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        origin_mult += 1
    work = Polynomial(coeffs)

    raw: list[complex] = []
    if work.degree == 1:
        raw = [-work.coeffs[0] / work.coeffs[1]]
    elif work.degree >= 2:
        try:
            raw = [complex(z) for z in np.roots(np.asarray(work.coeffs[::-1]))]
        except np.linalg.LinAlgError as exc:
            raise RootFindingError(
                f"companion-matrix eigenvalues did not converge: {exc}",
                partial=RootList(()),
            ) from exc

    dp = p.derivative()
    raw = [_newton_polish(p, dp, z) for z in raw]

    # Fold eigenvalues sitting at the (exact) origin root into it.
    if origin_mult:
        kept = []
        for z in raw:
            if abs(z) <= cluster_radius:
                origin_mult += 1
            else:
                kept.append(z)
        raw = kept

    def base_radius(i, j):
        scale = max(1.0, abs(raw[i]), abs(raw[j]))
        return cluster_radius * scale

    clusters = [
        {"points": [raw[i] for i in grp], "center": None}
        for grp in _chain_clusters(raw, base_radius)
    ]

    # Escalating merges: an m-fold root scatters its eigenvalues over a
    # radius ~EPS_POLY**(1/m), so allow larger radii for larger target
    # sizes but demand the derivative certificate for every such merge.
    max_level = min(p.degree, 12)
    for level in range(2, max_level + 1):
        rho = max(cluster_radius, 8.0 * EPS_POLY ** (1.0 / level))
        rho = min(rho, 1e-2)
        merged = True
        while merged:
            merged = False
            centers = [
                c["center"] if c["center"] is not None else _mean(c["points"])
                for c in clusters
            ]
            n = len(clusters)
            done = False
            for i in range(n):
                if done:
                    break
                for j in range(i + 1, n):
                    scale = max(1.0, abs(centers[i]), abs(centers[j]))
                    if abs(centers[i] - centers[j]) > rho * scale:
                        continue
                    pts = clusters[i]["points"] + clusters[j]["points"]
                    ok, refined = _certify_multiple(p, _mean(pts), len(pts))
                    if ok:
                        clusters[i] = {"points": pts, "center": refined}
                        del clusters[j]
                        merged = True
                        done = True
                        break

    entries: list[tuple[complex, int]] = []
    failures: list[complex] = []
    if origin_mult:
        entries.append((0.0 + 0j, origin_mult))
    for c in clusters:
        mult = len(c["points"])
        center = c["center"]
        if center is None:
            center = _refine_multiple(p, _mean(c["points"]), mult)
            if mult == 1:
                center = _newton_polish(p, dp, center)
        scale = max(p.abs_eval(center), 1e-300)
        if abs(p(center)) <= tol * scale:
            entries.append((center, mult))
        else:
            failures.append(center)
    if failures:
        raise RootFindingError(
            f"{len(failures)} root(s) failed the residual check at tol={tol:g}: "
            + ", ".join(f"{z:.6g}" for z in failures[:5]),
            partial=RootList(entries),
        )
    return RootList(entries)


def _mean(points: Sequence[complex]) -> complex:
    return sum(points) / len(points)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def _match_common_roots(zn: RootList, zd: RootList):
    """Pairs of (numerator entry, denominator entry) within CLUSTER_RADIUS."""
    pairs = []
    used = set()
    for a, ma in zn:
        best = None
        for idx, (b, mb) in enumerate(zd):
            if idx in used:
                continue
            scale = max(1.0, abs(a), abs(b))
            if abs(a - b) <= CLUSTER_RADIUS * scale:
                if best is None or abs(a - b) < abs(a - zd.entries[best][0]):
                    best = idx
        if best is not None:
            used.add(best)
            pairs.append(((a, ma), zd.entries[best]))
    return pairs


class RationalFunction:
    """Quotient of two polynomials in reduced form with a monic denominator.

    Reduction cancels shared roots at construction; the zero function is
    represented as 0/1.  Zero and pole lists are cached once computed, and
    derivatives are built through a pole-aware fast path that never has to
    re-discover the denominator roots.
    """

    __slots__ = ("num", "den", "_zeros", "_poles", "_deriv")

    def __init__(self, num, den=(1.0,), *, _skip_reduce: bool = False):
        num = num if isinstance(num, Polynomial) else Polynomial(num if _is_seq(num) else [num])
        den = den if isinstance(den, Polynomial) else Polynomial(den if _is_seq(den) else [den])
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        zeros = poles = None
        if num.is_zero:
            num, den = Polynomial(), Polynomial([1.0])
            zeros, poles = RootList(()), RootList(())
        elif not _skip_reduce and num.degree >= 1 and den.degree >= 1:
            zn = find_roots(num)
            zd = find_roots(den)
            pairs = _match_common_roots(zn, zd)
            if pairs:
                nmap = {a: m for a, m in zn}
                dmap = {b: m for b, m in zd}
                for (a, ma), (b, mb) in pairs:
                    mu = min(ma, mb)
                    num = num.deflate(a, mu)
                    den = den.deflate(b, mu)
                    nmap[a] -= mu
                    dmap[b] -= mu
                zeros = RootList((a, m) for a, m in nmap.items() if m > 0)
                poles = RootList((b, m) for b, m in dmap.items() if m > 0)
                if num.is_zero:  # full cancellation cannot occur, guard anyway
                    num, den = Polynomial(), Polynomial([1.0])
            else:
                zeros, poles = zn, zd
        lead = den.coeffs[-1]
        if lead != 1.0:
            num = num.scaled(1.0 / lead)
            den = den.scaled(1.0 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_zeros", zeros)
        object.__setattr__(self, "_poles", poles)
        object.__setattr__(self, "_deriv", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def _reduced(cls, num, den, zeros=None, poles=None) -> "RationalFunction":
        """Trusted constructor: caller guarantees num/den share no roots."""
        f = cls(num, den, _skip_reduce=True)
        if zeros is not None:
            object.__setattr__(f, "_zeros", zeros)
        if poles is not None:
            object.__setattr__(f, "_poles", poles)
        return f

    @classmethod
    def from_roots(cls, zeros=(), poles=(), leading: complex = 1.0) -> "RationalFunction":
        """Build from explicit (location, multiplicity) factor lists."""
        zl = RootList(zeros)
        pl = RootList(poles)
        num = Polynomial.from_roots(
            [a for a, m in zl for _ in range(m)], leading=leading
        )
        den = Polynomial.from_roots([b for b, m in pl for _ in range(m)])
        return cls._reduced(num, den, zeros=zl, poles=pl)

    @classmethod
    def constant(cls, value: complex) -> "RationalFunction":
        return cls._reduced(Polynomial([value]), Polynomial([1.0]),
                            zeros=RootList(()), poles=RootList(()))

    # -- queries ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({list(self.num.coeffs)!r}, {list(self.den.coeffs)!r})"

    def zeros(self) -> RootList:
        if self._zeros is None:
            zl = RootList(()) if self.num.degree < 1 else find_roots(self.num)
            object.__setattr__(self, "_zeros", zl)
        return self._zeros

    def poles(self) -> RootList:
        if self._poles is None:
            pl = RootList(()) if self.den.degree < 1 else find_roots(self.den)
            object.__setattr__(self, "_poles", pl)
        return self._poles

    # -- evaluation ------------------------------------------------------
    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z: complex):
        """num(z)/den(z); the POLE marker when the denominator vanishes."""
        dv = self.den(z)
        if dv == 0:
            return POLE
        return self.num(z) / dv

    def values(self, zs: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; poles come out as inf/nan, callers keep
        their evaluation sets away from singularities."""
        zs = np.asarray(zs, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.num(zs) / self.den(zs)

    # -- algebra ---------------------------------------------------------
    def scaled(self, factor: complex) -> "RationalFunction":
        """factor * f, keeping the cached zero/pole structure."""
        factor = complex(factor)
        if factor == 0:
            return RationalFunction.constant(0.0)
        return RationalFunction._reduced(
            self.num.scaled(factor), self.den, zeros=self._zeros, poles=self._poles
        )

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of the zero function")
        lead = self.num.coeffs[-1]
        num = self.den.scaled(1.0 / lead)
        den = self.num.scaled(1.0 / lead)
        return RationalFunction._reduced(num, den, zeros=self._poles, poles=self._zeros)

    def __add__(self, other):
        other = _as_rational(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._reduced(-self.num, self.den,
                                         zeros=self._zeros, poles=self._poles)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) + (-self)

    def __mul__(self, other):
        other = _as_rational(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rational(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return RationalFunction.constant(1.0)
        if n < 0:
            return self.reciprocal() ** (-n)
        zeros = self._zeros.scaled_multiplicity(n) if self._zeros is not None else None
        poles = self._poles.scaled_multiplicity(n) if self._poles is not None else None
        return RationalFunction._reduced(self.num**n, self.den**n,
                                         zeros=zeros, poles=poles)

    # -- calculus --------------------------------------------------------
    def derivative(self, order: int = 1) -> "RationalFunction":
        """Exact derivative in reduced form.

        The pole structure of f' is known from the pole structure of f
        (each pole order grows by one), so the reduction is a deflation at
        the known pole locations rather than a fresh root search.
        """
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        f = self
        for _ in range(order):
            f = f._derivative_once()
        return f

    def _derivative_once(self) -> "RationalFunction":
        if self._deriv is not None:
            return self._deriv
        n, d = self.num, self.den
        if d.degree < 1:
            out = RationalFunction._reduced(n.derivative(), Polynomial([1.0]),
                                            poles=RootList(()))
        else:
            # With d = prod (z - b_i)^(m_i) the product rule gives
            #   f' = [n' q - n sum_i m_i q_i] / (d q),
            # q = prod (z - b_i), q_i = q/(z - b_i): the numerator is built
            # from the pole locations directly, with no deflation step to
            # accumulate error along derivative chains.
            poles = self.poles()
            locs = poles.locations()
            q = Polynomial.from_roots(locs)
            top = n.derivative() * q
            for i, (b, m) in enumerate(poles):
                q_i = Polynomial.from_roots(locs[:i] + locs[i + 1:])
                top = top - (n * q_i).scaled(float(m))
            if top.is_zero:
                out = RationalFunction.constant(0.0)
            else:
                out = RationalFunction._reduced(
                    top, d * q,
                    poles=RootList((b, m + 1) for b, m in poles),
                )
        object.__setattr__(self, "_deriv", out)
        return out


def _is_seq(x) -> bool:
    return isinstance(x, (list, tuple, np.ndarray))


def _as_rational(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction._reduced(x, Polynomial([1.0]), poles=RootList(()))
    return RationalFunction.constant(complex(x))


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def derivative(f: RationalFunction, order: int) -> RationalFunction:
    """The exact ``order``-th derivative of ``f`` in reduced form."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return f.derivative(order)


def evaluate(f: RationalFunction, z: complex):
    """f(z), or the POLE marker when the denominator vanishes at z."""
    return f.evaluate(z)


def zeros_poles(f: RationalFunction) -> tuple[RootList, RootList]:
    """(zeros of the numerator, roots of the denominator)."""
    if f.is_zero:
        raise ValueError("the zero function has no reduced zero/pole lists")
    return f.zeros(), f.poles()


def log_derivative(f: RationalFunction, k: int) -> RationalFunction:
    """(f'/f)^(k-1) as a reduced rational function."""
    if k < 1:
        raise ValueError("k must be >= 1")
    w = f.derivative() / f
    return w.derivative(k - 1)


def derivative_ratio_at(f: RationalFunction, k: int, z):
    """f^(k)(z)/f(z) through the factored form of f.

    Uses the complete Bell recurrence on the log-derivative values
    w_i = (f'/f)^(i-1)(z):

        Y_0 = 1,  Y_n = sum_{i=0}^{n-1} C(n-1, i) Y_{n-1-i} w_{i+1},

    with f^(k)/f = Y_k.  The expanded coefficient form of a high
    derivative cancels catastrophically near poles; this path only ever
    combines stable per-root sums.  Accepts a scalar or ndarray of
    points; the points must avoid the zeros and poles of f.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return np.ones(z.shape, dtype=complex) if isinstance(z, np.ndarray) else 1.0 + 0j
    w = [log_derivative_at(f, i, z) for i in range(1, k + 1)]
    one = np.ones(z.shape, dtype=complex) if isinstance(z, np.ndarray) else 1.0 + 0j
    bell = [one]
    for n in range(1, k + 1):
        acc = 0j
        for i in range(n):
            acc = acc + math.comb(n - 1, i) * bell[n - 1 - i] * w[i]
        bell.append(acc)
    return bell[k]


def log_derivative_at(f: RationalFunction, k: int, z):
    """(f'/f)^(k-1) evaluated through the factored form of f.

    f'/f = sum m_a/(z-a) - sum m_b/(z-b) over zeros and poles, so the
    (k-1)-th derivative is (-1)^(k-1) (k-1)! times the same sums with
    k-th powers.  Accepts a scalar or an ndarray of points; much better
    conditioned than differentiating the coefficient form k-1 times.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if f.is_zero:
        raise ZeroDivisionError("log-derivative of the zero function")
    sign = (-1.0) ** (k - 1) * math.factorial(k - 1)
    if isinstance(z, np.ndarray):
        total = np.zeros(z.shape, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            for a, m in f.zeros():
                total += m / (z - a) ** k
            for b, m in f.poles():
                total -= m / (z - b) ** k
        return sign * total
    total = 0j
    for a, m in f.zeros():
        total += m / (z - a) ** k
    for b, m in f.poles():
        total -= m / (z - b) ** k
    return sign * total
