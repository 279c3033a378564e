import numpy as np
import pytest

from martykit.corpus import random_rational
from martykit.rational import Polynomial, RationalFunction


def rf(num, den=(1.0,)):
    return RationalFunction(Polynomial(num), Polynomial(den))


@pytest.fixture(scope="session")
def mixed_corpus():
    """20 seeded reduced rationals of degree <= 5 for reuse across tests."""
    rng = np.random.default_rng(20240817)
    out = []
    while len(out) < 20:
        f = random_rational(rng, max_degree=5)
        if f.num.degree >= 1 or f.den.degree >= 1:
            out.append(f)
    return out


@pytest.fixture(scope="session")
def sample_points():
    rng = np.random.default_rng(99)
    pts = rng.uniform(-1.0, 1.0, size=(200, 2))
    return [complex(a, b) for a, b in pts]


def far_points(f, points, count, min_dist=0.05):
    """Points from ``points`` at distance >= min_dist from all roots of f."""
    roots = [w for w, _ in f.zeros()] + [w for w, _ in f.poles()]
    out = []
    for z in points:
        if all(abs(z - w) >= min_dist for w in roots):
            out.append(z)
        if len(out) == count:
            break
    return out
