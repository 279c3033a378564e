"""Seeded random function corpora for suites and golden runs.

All generators take a ``numpy.random.Generator`` (or a seed) and are
deterministic given it.  Singularities are kept away from evaluation
circles and from each other so that every generated configuration is
well inside the operating assumptions of the checks it feeds.
"""

from __future__ import annotations

import math

import numpy as np

from .blaschke import DiskGeometry, smallness_threshold
from .rational import POLE, RationalFunction

__all__ = [
    "blaschke_corpus",
    "counting_configurations",
    "first_fundamental_corpus",
    "multiplicity_polynomials",
    "random_rational",
    "zero_free_corpus",
]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sample_point(
    rng,
    box: float,
    keepout_radii=(),
    keepout: float = 0.0,
    existing=(),
    min_sep: float = 0.0,
    max_tries: int = 200,
) -> complex:
    for _ in range(max_tries):
        w = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        if abs(w) > box:
            continue
        if any(abs(abs(w) - rad) < keepout for rad in keepout_radii):
            continue
        if any(abs(w - e) < min_sep for e in existing):
            continue
        return w
    raise RuntimeError("could not place a point under the keepout constraints")


def random_rational(
    seed,
    max_degree: int = 5,
    *,
    keepout_radii=(),
    keepout: float = 0.05,
    min_sep: float = 0.05,
    box: float = 1.3,
) -> RationalFunction:
    """A reduced rational function with well-separated random roots."""
    rng = _rng(seed)
    deg_num = int(rng.integers(0, max_degree + 1))
    deg_den = int(rng.integers(0, max_degree + 1))
    placed: list[complex] = []
    zeros, poles = [], []
    for _ in range(deg_num):
        w = _sample_point(rng, box, keepout_radii, keepout, placed, min_sep)
        placed.append(w)
        zeros.append((w, 1))
    for _ in range(deg_den):
        w = _sample_point(rng, box, keepout_radii, keepout, placed, min_sep)
        placed.append(w)
        poles.append((w, 1))
    lead = math.exp(rng.uniform(-1.0, 1.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return RationalFunction.from_roots(zeros=zeros, poles=poles, leading=complex(lead))


def first_fundamental_corpus(
    seed,
    size: int = 20,
    *,
    r: float = 0.7,
    clearance: float = 0.05,
    max_degree: int = 5,
) -> list[tuple[RationalFunction, complex]]:
    """(f, alpha) pairs safe for the characteristic identity check.

    Singularities clear the circle |z| = r by at least ``clearance``;
    alpha stays well inside, away from every zero and pole, and f(alpha)
    is kept within [1e-3, 1e3] in modulus so the log term is tame.
    """
    rng = _rng(seed)
    out = []
    while len(out) < size:
        f = random_rational(
            rng, max_degree, keepout_radii=(r,), keepout=clearance
        )
        sing = [w for w, _ in f.zeros()] + [w for w, _ in f.poles()]
        alpha = None
        for _ in range(100):
            cand = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
            if abs(cand) >= r - 2 * clearance:
                continue
            if any(abs(cand - w) < clearance for w in sing):
                continue
            fa = f(cand)
            if fa is POLE or not 1e-3 <= abs(fa) <= 1e3:
                continue
            alpha = cand
            break
        if alpha is None:
            continue
        out.append((f, alpha))
    return out


def counting_configurations(
    seed,
    size: int = 100,
    *,
    max_inner: int = 3,
) -> list[tuple[RationalFunction, float, float, complex]]:
    """(f, r, R, alpha) tuples for the pole-count growth inequality."""
    rng = _rng(seed)
    out = []
    while len(out) < size:
        r = float(rng.uniform(0.35, 0.55))
        R = float(rng.uniform(r + 0.2, 0.95))
        n_inner = int(rng.integers(0, max_inner + 1))
        n_mid = int(rng.integers(0, 3))
        n_outer = int(rng.integers(0, 2))
        poles: list[tuple[complex, int]] = []
        placed: list[complex] = []
        ok = True
        try:
            for count, (lo, hi) in (
                (n_inner, (0.0, r - 0.05)),
                (n_mid, (r + 0.05, R - 0.05)),
                (n_outer, (R + 0.05, 1.2)),
            ):
                for _ in range(count):
                    if hi <= lo:
                        ok = False
                        break
                    rad = float(rng.uniform(max(lo, 1e-3), hi))
                    ang = float(rng.uniform(0, 2 * np.pi))
                    w = rad * np.exp(1j * ang)
                    if any(abs(w - e) < 0.02 for e in placed):
                        continue
                    placed.append(w)
                    poles.append((w, int(rng.integers(1, 3))))
        except RuntimeError:
            ok = False
        if not ok:
            continue
        alpha = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        alpha *= (r - 0.05) / max(abs(alpha), 1.0) * rng.uniform(0.0, 0.9)
        if any(abs(alpha - w) < 1e-3 for w, _ in poles):
            continue
        deg = sum(m for _, m in poles)
        zeros = []
        if deg and rng.uniform() < 0.5:
            zeros = [(complex(rng.uniform(1.1, 1.5)), 1)]
        f = RationalFunction.from_roots(zeros=zeros, poles=poles,
                                        leading=complex(rng.uniform(0.5, 2.0)))
        out.append((f, r, R, alpha))
    return out


def blaschke_corpus(seed, size: int, geom: DiskGeometry) -> list[RationalFunction]:
    """Polynomials with zero clusters inside |z| < s, for splitting tests."""
    rng = _rng(seed)
    out = []
    for _ in range(size):
        n_clusters = int(rng.integers(1, 4))
        zeros = []
        placed: list[complex] = []
        for _ in range(n_clusters):
            w = _sample_point(
                rng, 0.8 * geom.s, keepout_radii=(geom.s,), keepout=0.05,
                existing=placed, min_sep=0.1,
            )
            placed.append(w)
            zeros.append((w, int(rng.integers(1, 4))))
        out.append(RationalFunction.from_roots(
            zeros=zeros, leading=complex(rng.uniform(0.5, 2.0))
        ))
    return out


def zero_free_corpus(
    seed,
    size: int,
    geom: DiskGeometry,
    *,
    sup_cap: float = 1.0 / math.e,
) -> list[RationalFunction]:
    """Rational functions zero- and pole-free on |z| <= s, rescaled so
    sup|h| over the closed unit disk is 0.9 * sup_cap (log|h| then has a
    definite sign on every circle the checks evaluate)."""
    rng = _rng(seed)
    ts = 2.0 * np.pi * np.arange(512) / 512
    ring = np.exp(1j * ts)
    out = []
    while len(out) < size:
        deg_num = int(rng.integers(0, 4))
        deg_den = int(rng.integers(0, 3))
        zeros = []
        poles = []
        placed: list[complex] = []
        try:
            for _ in range(deg_num):
                w = _sample_point(rng, 3.0, existing=placed, min_sep=0.1)
                if abs(w) <= geom.s + 0.1:
                    raise RuntimeError("inside")
                placed.append(w)
                zeros.append((w, 1))
            for _ in range(deg_den):
                w = _sample_point(rng, 3.0, existing=placed, min_sep=0.1)
                if abs(w) <= geom.R + 0.1:
                    raise RuntimeError("inside")
                placed.append(w)
                poles.append((w, 1))
        except RuntimeError:
            continue
        f = RationalFunction.from_roots(zeros=zeros, poles=poles, leading=1.0)
        sup = float(np.max(np.abs(f.values(ring))))
        out.append(f.scaled(0.9 * sup_cap / sup))
    return out


def multiplicity_polynomials(
    seed,
    size: int,
    m: int,
    k: int,
    geom: DiskGeometry,
) -> list[RationalFunction]:
    """Polynomials whose zeros all have multiplicity m, rescaled so that
    sup|g| over |z| <= 1 stays below the smallness threshold."""
    rng = _rng(seed)
    x0 = smallness_threshold(k, m, geom)
    ts = 2.0 * np.pi * np.arange(512) / 512
    unit_ring = np.exp(1j * ts)
    out = []
    for _ in range(size):
        n_clusters = int(rng.integers(1, 3))
        placed: list[complex] = []
        zeros = []
        for _ in range(n_clusters):
            w = _sample_point(
                rng, 0.8 * geom.s, keepout_radii=(geom.s,), keepout=0.05,
                existing=placed, min_sep=0.15,
            )
            placed.append(w)
            zeros.append((w, m))
        g = RationalFunction.from_roots(zeros=zeros, leading=1.0)
        sup = float(np.max(np.abs(g.values(unit_ring))))
        out.append(g.scaled(0.9 * x0 / sup))
    return out
