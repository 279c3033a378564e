import numpy as np
import pytest

from martykit.errors import RootFindingError
from martykit.rational import (
    POLE,
    Polynomial,
    RationalFunction,
    RootList,
    derivative,
    evaluate,
    find_roots,
    log_derivative,
    log_derivative_at,
    zeros_poles,
)

from conftest import far_points, rf


def test_derivative_power_rule():
    f = rf([0, 0, 1])  # z^2
    df = derivative(f, 1)
    assert df.num.coeffs == (0j, 2 + 0j)
    assert df.den.degree == 0


def test_derivative_quotient_rule():
    f = rf([1], [0, 1])  # 1/z
    df = derivative(f, 1)
    assert df.num.coeffs == (-1 + 0j,)
    assert df.den.coeffs == (0j, 0j, 1 + 0j)


@pytest.mark.parametrize("p,k", [(1, 1), (2, 3), (3, 2), (4, 4)])
def test_derivative_inverse_power_closed_form(p, k):
    # oracle: repeated single differentiation through the module-level op
    f = rf([1], [0] * p + [1])
    g = f
    for _ in range(k):
        g = derivative(g, 1)
    rising = 1.0
    for i in range(k):
        rising *= p + i
    expected_num = (-1) ** k * rising
    assert g.num.degree == 0
    assert abs(g.num.coeffs[0] - expected_num) <= 1e-12 * rising
    assert g.den.degree == p + k
    assert derivative(f, k) == g  # order-k call is the same chain


def test_derivative_linearity(mixed_corpus, sample_points):
    f, g = mixed_corpus[0], mixed_corpus[1]
    lhs = derivative(f + g, 1)
    rhs = derivative(f, 1) + derivative(g, 1)
    pts = far_points(f + g, sample_points, 40, min_dist=0.25)
    checked = 0
    for z in far_points(rhs, pts, 20, min_dist=0.25):
        a, b = lhs(z), rhs(z)
        assert a is not POLE and b is not POLE
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))
        checked += 1
    assert checked >= 10


def test_find_roots_simple():
    roots = find_roots(Polynomial([-1, 0, 1]))
    assert roots == RootList([(-1.0, 1), (1.0, 1)])


def test_find_roots_triple_cluster():
    p = Polynomial([-0.125, 0.75, -1.5, 1.0])  # (z - 0.5)^3 expanded
    roots = find_roots(p)
    assert len(roots) == 1
    (loc, mult), = roots
    assert mult == 3
    assert abs(loc - 0.5) < 1e-9


def test_find_roots_constant_and_zero():
    assert len(find_roots(Polynomial([7.0]))) == 0
    with pytest.raises(ValueError):
        find_roots(Polynomial())


def test_find_roots_residual_contract():
    # absurd tolerance forces the residual gate; partial results survive
    with pytest.raises(RootFindingError) as exc:
        find_roots(Polynomial([1, 2, 3, 4, 5, 6, 7]), tol=1e-300)
    assert isinstance(exc.value.partial, RootList)


def test_find_roots_monomial_exact():
    roots = find_roots(Polynomial([0, 0, 0, 0, 1.0]))
    assert roots == RootList([(0.0, 4)])


def test_evaluate_basic():
    f = rf([0, 1], [-1, 1])  # z/(z-1)
    assert f(0) == 0
    assert rf([1], [0, 1])(0) is POLE
    g = rf([-2, 1], [2, 1])  # (z-2)/(z+2)
    z = 2j
    assert abs(evaluate(g, z) - (z - 2) / (z + 2)) < 1e-14


def test_zeros_poles_basic():
    f = rf([0, 0, 1], [-1, 1])  # z^2/(z-1)
    zs, ps = zeros_poles(f)
    assert zs == RootList([(0.0, 2)])
    assert ps == RootList([(1.0, 1)])
    g = rf([1], [0, 0, 0, 1])  # 1/z^3
    zs, ps = zeros_poles(g)
    assert len(zs) == 0 and ps == RootList([(0.0, 3)])


def test_zeros_poles_synthetic_product():
    rng = np.random.default_rng(4)
    zeros = [(complex(w[0], w[1]), 1) for w in rng.uniform(-1, 1, size=(5, 2))]
    poles = [(complex(w[0], w[1]) + 2.5, 1) for w in rng.uniform(-1, 1, size=(5, 2))]
    f = RationalFunction.from_roots(zeros=zeros, poles=poles, leading=1.7)
    zs, ps = zeros_poles(f)
    for (found, m), (true, mt) in zip(zs, RootList(zeros)):
        assert m == mt and abs(found - true) < 1e-8
    for (found, m), (true, mt) in zip(ps, RootList(poles)):
        assert m == mt and abs(found - true) < 1e-8


def test_root_reconstruction_invariant(mixed_corpus):
    for f in mixed_corpus[:10]:
        zs, ps = zeros_poles(f)
        num = Polynomial.from_roots(
            [a for a, m in zs for _ in range(m)], leading=f.num.coeffs[-1]
        )
        den = Polynomial.from_roots([b for b, m in ps for _ in range(m)])
        for rebuilt, original in ((num, f.num), (den, f.den)):
            scale = max(abs(c) for c in original.coeffs)
            assert rebuilt.degree == original.degree
            for a, b in zip(rebuilt.coeffs, original.coeffs):
                assert abs(a - b) <= 1e-8 * scale


def test_reciprocal_swaps_zeros_poles_exactly(mixed_corpus):
    for f in mixed_corpus:
        zs, ps = zeros_poles(f)
        rzs, rps = zeros_poles(f.reciprocal())
        assert rzs == ps and rps == zs


def test_reduction_cancels_shared_roots():
    f = RationalFunction(Polynomial([-1, 0, 1]), Polynomial([-1, 1]))  # (z^2-1)/(z-1)
    assert f.den.degree == 0
    assert abs(f(0) - 1) < 1e-12  # reduced to z + 1
    assert abs(f(2) - 3) < 1e-12


def test_multiple_pole_derivative_reduces():
    f = rf([1], [0.25, -1, 1])  # 1/(z-1/2)^2
    df = f.derivative()
    assert df.den.degree == 3
    (b, m), = df.poles()
    assert m == 3 and abs(b - 0.5) < 1e-10


def test_monic_denominator_normalization():
    f = RationalFunction(Polynomial([2.0]), Polynomial([0, 4.0]))
    assert f.den.coeffs[-1] == 1.0
    assert abs(f(1) - 0.5) < 1e-15


def test_pow_and_divide_cancellation():
    f = rf([0, 1])  # z
    q = (f**3) / (f**2)
    assert q.num.degree == 1 and q.den.degree == 0
    one = f / f
    assert one.num.degree == 0 and abs(one(0.3) - 1) < 1e-12


def test_log_derivative_paths_agree(mixed_corpus, sample_points):
    for f in mixed_corpus[:5]:
        w = log_derivative(f, 3)
        for z in far_points(f, sample_points, 5):
            chain = w(z)
            direct = log_derivative_at(f, 3, z)
            assert chain is not POLE
            assert abs(chain - direct) <= 1e-8 * max(1.0, abs(direct))


def test_vectorized_values_match_scalar(mixed_corpus, sample_points):
    f = mixed_corpus[0]
    pts = far_points(f, sample_points, 20)
    arr = f.values(np.array(pts))
    for z, v in zip(pts, arr):
        assert abs(f(z) - v) < 1e-12 * max(1.0, abs(v))


def test_root_multiplicities_sum_to_degree(mixed_corpus):
    for f in mixed_corpus:
        if f.num.degree >= 1:
            assert f.zeros().total_multiplicity == f.num.degree
        if f.den.degree >= 1:
            assert f.poles().total_multiplicity == f.den.degree
