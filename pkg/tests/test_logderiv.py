import json
import os

import numpy as np
import pytest

from martykit.errors import ContractError
from martykit.logderiv import (
    ExpansionTable,
    check_identity,
    correction_term,
    expansion_coefficients,
)
from martykit.rational import POLE, RationalFunction, log_derivative

from conftest import far_points, rf

DATA = os.path.join(os.path.dirname(__file__), "data")


def test_table_k1_empty():
    assert expansion_coefficients(1).terms == ()


def test_table_k2_exact():
    assert expansion_coefficients(2).terms == ((2, (1, 1), 1),)


def test_table_k3_hand_check():
    # g'''/g = (g'/g)'' + 3 (g'/g)(g''/g) - 2 (g'/g)^3
    assert expansion_coefficients(3).terms == ((2, (1, 2), 3), (3, (1, 1, 1), -2))


def test_table_parts_compose_k():
    for k in range(2, 9):
        for l, parts, coeff in expansion_coefficients(k).terms:
            assert sum(parts) == k and len(parts) == l and 2 <= l <= k
            assert coeff == int(coeff) and coeff != 0


def test_table_golden_k4():
    with open(os.path.join(DATA, "expansion_k4.json")) as fh:
        golden = ExpansionTable.from_json(fh.read())
    assert expansion_coefficients(4) == golden


def test_json_round_trip():
    table = expansion_coefficients(5)
    assert ExpansionTable.from_json(table.to_json()) == table


def test_correction_k1_zero():
    g = rf([-2, 1])
    assert correction_term(g, 1, 0.3) == 0


def test_correction_k2_linear_factor():
    # g = z - 2: correction is (g'/g)^2 = 1/(z-2)^2, at 0 = 1/4
    g = rf([-2, 1])
    assert abs(correction_term(g, 2, 0.0) - 0.25) < 1e-14


def test_correction_matches_identity_rearrangement(mixed_corpus, sample_points):
    # k = 4: correction = g''''/g - (g'/g)''' with both terms through the
    # symbolic coefficient chain, an independent code path; the chain
    # conditioning caps the achievable agreement, so keep the points well
    # clear of the roots and allow for its rounding
    k = 4
    for g in mixed_corpus[:4]:
        head = log_derivative(g, k)
        for z in far_points(g, sample_points, 50, min_dist=0.25):
            gz = g(z)
            if abs(gz) < 1e-2:
                continue
            expected = g.derivative(k)(z) / gz - head(z)
            got = correction_term(g, k, z)
            assert abs(got - expected) <= 1e-6 * max(1.0, abs(expected))


def test_correction_pole_marker_at_zero_of_g():
    g = rf([0, 1])
    assert correction_term(g, 2, 0.0) is POLE


def test_identity_polynomial_degree_below_k():
    g = rf([1.0, 2.0])  # degree 1, k = 3: g''' = 0
    for z in (0.3, -0.2 + 0.4j):
        assert check_identity(g, 3, z, 1e-10) <= 1e-10


def test_identity_monomial_hand_expansion():
    # g = z^m: g''/g = m(m-1)/z^2, (g'/g)' = -m/z^2, (g'/g)^2 = m^2/z^2
    m = 5
    g = rf([0] * m + [1])
    z = 0.4 + 0.3j
    lhs = g.derivative(2)(z) / g(z)
    assert abs(lhs - m * (m - 1) / z**2) < 1e-10
    assert check_identity(g, 2, z, 1e-10) <= 1e-10


def test_identity_seeded_corpus(mixed_corpus, sample_points):
    for g in mixed_corpus:
        pts = far_points(g, sample_points, 100)
        for k in range(1, 7):
            for z in pts[:20]:
                if abs(g(z)) < 1e-3:
                    continue
                assert check_identity(g, k, z, 1e-8) <= 1e-8


def test_identity_contract_violation_raises():
    g = rf([1.0, 0.4], [2.0, 1.0])
    with pytest.raises(ContractError):
        check_identity(g, 6, 0.3 + 0.2j, 1e-30)


def test_universality_structurally_different_functions(sample_points):
    rng = np.random.default_rng(17)
    functions = []
    for deg in range(1, 6):
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        functions.append(rf(list(coeffs)))
        functions.append(rf(list(coeffs), [1.5, 1.0]))
        functions.append(rf([1.0], list(coeffs)))
        functions.append(RationalFunction.from_roots(zeros=[(0.3, deg)], leading=2.0))
    assert len(functions) == 20
    for g in functions:
        for z in far_points(g, sample_points, 3):
            if abs(g(z)) < 1e-3:
                continue
            for k in (2, 3, 5):
                assert check_identity(g, k, z, 1e-8) <= 1e-8


def test_scaling_invariance(mixed_corpus, sample_points):
    g = mixed_corpus[4]
    for lam in (2.0, -0.3 + 1.1j, 1e3):
        scaled = g.scaled(lam)
        for z in far_points(g, sample_points, 10):
            if abs(g(z)) < 1e-3:
                continue
            a = correction_term(g, 4, z)
            b = correction_term(scaled, 4, z)
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_triangle_bound_pointwise(mixed_corpus, sample_points):
    # |correction| |g|^(k/m) <= sum |c| prod |(g^(j))^m / g^(m-j)|^(1/m)
    k, m = 3, 2
    table = expansion_coefficients(k)
    for g in mixed_corpus[:5]:
        for z in far_points(g, sample_points, 10):
            gz = g(z)
            if abs(gz) < 1e-3:
                continue
            lhs = abs(correction_term(g, k, z)) * abs(gz) ** (k / m)
            rhs = 0.0
            for _, parts, coeff in table.terms:
                prod = abs(coeff)
                for j in parts:
                    prod *= abs(
                        g.derivative(j)(z) ** m / gz ** (m - j)
                    ) ** (1.0 / m)
                rhs += prod
            assert lhs <= rhs * (1 + 1e-9)


def test_order_cap():
    with pytest.raises(ValueError):
        expansion_coefficients(13)
    with pytest.raises(ValueError):
        expansion_coefficients(0)
