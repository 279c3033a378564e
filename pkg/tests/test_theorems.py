import math

import pytest

from martykit.blaschke import DiskGeometry, build_split, smallness_threshold
from martykit.corpus import multiplicity_polynomials, zero_free_corpus
from martykit.errors import (
    HolomorphyError,
    MultiplicityError,
    PreconditionError,
)
from martykit.marty import MartyParams, marty_quotient
from martykit.rational import RationalFunction, log_derivative_at
from martykit.theorems import (
    FamilySpec,
    check_diverging_family,
    check_vanishing_family,
    estimate_chain_check,
    harnack_check,
    scan_marty_quotient,
    sharpness_exponent,
)

from conftest import rf

GEOM = DiskGeometry.from_radii(0.5, 0.9)
DISK = (0.0, 0.5)
BIG = (10**6, 2 * 10**6, 4 * 10**6, 8 * 10**6)


def monomial_family(m, indices):
    return FamilySpec.custom(
        {n: RationalFunction.from_roots(zeros=[(0.0, m)], leading=1.0 / n)
         for n in indices},
        indices,
    )


def pole_family(p, indices):
    return FamilySpec.custom(
        {n: RationalFunction.from_roots(poles=[(0.0, p)], leading=float(n))
         for n in indices},
        indices,
    )


# ---------------------------------------------------------------------------
# family kinds
# ---------------------------------------------------------------------------


def test_family_kinds_produce_expected_functions():
    f = FamilySpec.power_pole(2).function(5)
    assert f.poles().entries == ((0j, 2),)
    g = FamilySpec.shifted_power((3,)).function(3)
    assert abs(g(4.0) - 1.0) < 1e-12  # (4-3)^3
    h = FamilySpec.scaled_zero(3, (2,)).function(2)
    assert abs(h(1.0) - 0.5) < 1e-12  # z^2/2 at 1
    k = FamilySpec.scaled_pole(3, (2,)).function(2)
    assert abs(k(1.0) - 2.0) < 1e-12  # 2/z^2 at 1


def test_family_validation():
    with pytest.raises(ValueError):
        FamilySpec("bogus", {}, (1,))
    with pytest.raises(ValueError):
        FamilySpec.shifted_power((3, 2))
    with pytest.raises(ValueError):
        FamilySpec.shifted_power((0,))


# ---------------------------------------------------------------------------
# vanishing holomorphic families
# ---------------------------------------------------------------------------


def test_vanishing_family_monomial_rate():
    # g_n = z^m/n with k = 1: quotient is the constant m^m / n
    m = 3
    indices = (1, 2, 4, 8, 16)
    rep = check_vanishing_family(monomial_family(m, indices), 1, m, DISK)
    assert rep.verdict == "converges_to_zero"
    assert abs(rep.slope - (-1.0)) < 1e-6
    for n, sup in zip(indices, rep.sup_norms):
        assert abs(sup - m**m / n) <= 1e-9 * m**m / n


def test_vanishing_family_sharpness_pole():
    # g_n = z^(m-1)/n with k < m leaves a pole of order k at 0
    fam = FamilySpec.scaled_zero(3, (1, 2, 4, 8))
    with pytest.raises(HolomorphyError) as exc:
        check_vanishing_family(fam, 2, 3, DISK)
    assert abs(exc.value.location) < 1e-9


def test_vanishing_family_m_at_most_k_trivial_case():
    # m <= k: quotient has only nonnegative powers of g, always holomorphic
    fam = monomial_family(2, (1, 2, 4, 8))
    rep = check_vanishing_family(fam, 3, 2, DISK)
    assert rep.verdict == "converges_to_zero"


def test_vanishing_family_precondition_not_vanishing():
    indices = (1, 2, 4, 8)
    fam = FamilySpec.custom(
        {n: rf([0, 0, float(n)]) for n in indices}, indices  # n z^2 grows
    )
    with pytest.raises(PreconditionError):
        check_vanishing_family(fam, 1, 2, DISK)


def test_vanishing_family_rejects_poles_in_disk():
    indices = (1, 2, 4, 8)
    fam = FamilySpec.custom(
        {n: rf([1.0 / n], [-0.2, 1]) for n in indices}, indices
    )
    with pytest.raises(PreconditionError):
        check_vanishing_family(fam, 1, 2, DISK)


# ---------------------------------------------------------------------------
# diverging meromorphic families
# ---------------------------------------------------------------------------


def test_diverging_family_constants():
    fam = FamilySpec.custom({n: rf([float(n)]) for n in BIG}, BIG)
    rep = check_diverging_family(fam, 1, 2, DISK)
    assert rep.verdict == "converges_to_zero"
    assert all(s == 0.0 for s in rep.sup_norms)


@pytest.mark.parametrize("p,k", [(1, 1), (2, 2), (3, 1)])
def test_diverging_family_pole_rate(p, k):
    rep = check_diverging_family(pole_family(p, BIG), k, p, DISK)
    rising = 1.0
    for i in range(k):
        rising *= p + i
    for n, sup in zip(BIG, rep.sup_norms):
        expected = rising**p / n**k
        assert abs(sup - expected) <= 1e-9 * expected
    assert abs(rep.slope - (-k)) <= 0.01 * k


def test_diverging_family_affine_functions():
    # f_n = n (z - 3): no poles, d_n = n^p / (n (z-3))^(p+1) -> 0
    p, k = 2, 1
    indices = (10**5, 2 * 10**5, 4 * 10**5, 8 * 10**5)
    fam = FamilySpec.custom(
        {n: rf([-3.0 * n, float(n)]) for n in indices}, indices
    )
    rep = check_diverging_family(fam, k, p, DISK)
    assert rep.verdict == "converges_to_zero"
    n, sup = indices[0], rep.sup_norms[0]
    # max over |z| <= 1/2 at z = 1/2 where |z - 3| = 2.5
    assert abs(sup - n**p / (n * 2.5) ** (p + 1)) <= 1e-6 * sup


def test_diverging_family_sharpness_pole():
    fam = FamilySpec.scaled_pole(3, BIG)
    with pytest.raises(HolomorphyError) as exc:
        check_diverging_family(fam, 1, 3, DISK)
    assert abs(exc.value.location) < 1e-9


def test_diverging_family_divergence_precondition():
    fam = pole_family(2, (1, 2, 4, 8))  # min |f_n| = n 2^p stays tiny
    with pytest.raises(PreconditionError):
        check_diverging_family(fam, 1, 2, DISK)


def test_reciprocal_path_reproduces_pole_quantity():
    # k = 1: the vanishing-family quotient of g = 1/f equals |d| pointwise
    p = 2
    pts = [0.1 + 0.2j, -0.3, 0.25j]
    for n in (10, 100):
        f = RationalFunction.from_roots(poles=[(0.0, p)], leading=float(n))
        g = f.reciprocal()
        d = (f.derivative() ** p) / (f ** (p + 1))
        q = (g.derivative() ** p) / (g ** (p - 1))
        for z in pts:
            assert abs(abs(d(z)) - abs(q(z))) <= 1e-10 * max(1.0, abs(d(z)))


def test_reciprocal_path_log_derivative_sign():
    # (g'/g)^(k-1) = -(f'/f)^(k-1) for g = 1/f, through both root lists
    f = rf([1.0, 0.3, 0.1], [0.2, 1.0])
    g = f.reciprocal()
    for k in (1, 2, 3):
        for z in (0.4 + 0.1j, -0.6):
            a = log_derivative_at(f, k, z)
            b = log_derivative_at(g, k, z)
            assert abs(a + b) <= 1e-10 * max(1.0, abs(a))


def test_case3_pointwise_bound():
    # wherever |f| >= 1 and (alpha-1)p >= k:
    # quotient^p <= |d| |f|^(k + (1-alpha)p)
    p, k, alpha = 2, 2, 2.0
    params = MartyParams(k, alpha)
    f = RationalFunction.from_roots(poles=[(0.0, p)], leading=50.0)
    d = (f.derivative(k) ** p) / (f ** (p + k))
    for z in (0.1, 0.2 + 0.1j, 0.05j, 0.4):
        fz = abs(f(z))
        if fz < 1.0:
            continue
        q = marty_quotient(f, params, z)
        bound = (abs(d(z)) * fz ** (k + (1 - alpha) * p)) ** (1.0 / p)
        assert q <= bound * (1 + 1e-12)


# ---------------------------------------------------------------------------
# Marty-quotient scans
# ---------------------------------------------------------------------------


def test_scan_holomorphic_powers_bounded():
    indices = tuple(range(4, 40, 4))
    fam = FamilySpec.custom(
        {n: RationalFunction.from_roots(zeros=[(0.0, n)]) for n in indices},
        indices,
    )
    rep = scan_marty_quotient(fam, 2, 1.5, DISK, resolution=16)
    assert rep.verdict == "bounded"
    assert rep.p_required == 4
    assert not rep.flagged


def test_scan_pole_at_required_multiplicity():
    # p = k/(alpha-1) exactly: finite sup through the equality extension
    rep = scan_marty_quotient(FamilySpec.power_pole(2, (1,)), 2, 2.0, DISK,
                              resolution=16)
    assert rep.verdict == "bounded"
    assert rep.equality_poles
    assert all(math.isfinite(s) for s in rep.sup_norms)


def test_scan_flags_low_multiplicity():
    # p = 1 < k/(alpha-1) = 4: diverging quotient, flagged pole
    rep = scan_marty_quotient(FamilySpec.power_pole(1, (1,)), 2, 1.5, DISK,
                              resolution=16)
    assert rep.verdict == "unbounded"
    assert rep.flagged and rep.flagged[0][2] == 1
    assert rep.p_required == 4


def test_scan_rejects_alpha_at_most_one():
    with pytest.raises(ValueError):
        scan_marty_quotient(FamilySpec.power_pole(1, (1,)), 1, 1.0, DISK)


# ---------------------------------------------------------------------------
# sharpness
# ---------------------------------------------------------------------------


def test_sharpness_power_pole_slope():
    rep = sharpness_exponent("power_pole", 2, 1.5, p=3)
    assert abs(rep.predicted_slope - (-0.5)) < 1e-12
    assert rep.ok
    assert abs(rep.fitted_slope - rep.predicted_slope) <= 0.02 * 0.5


def test_sharpness_power_pole_fit_stability():
    base = sharpness_exponent("power_pole", 2, 1.5, p=3)
    finer = sharpness_exponent(
        "power_pole", 2, 1.5, p=3,
        radii=tuple(10.0**-j for j in range(1, 8)),
    )
    assert abs(finer.fitted_slope - base.fitted_slope) <= 0.01 * abs(base.fitted_slope)


def test_sharpness_power_pole_regime_guard():
    with pytest.raises(PreconditionError):
        sharpness_exponent("power_pole", 2, 2.0, p=3)  # (alpha-1)p >= k


def test_sharpness_shifted_power_alpha_one():
    rep = sharpness_exponent("shifted_power", 1, 1.0,
                             indices=tuple(range(2, 41)))
    assert rep.bound_satisfied and rep.diverges and rep.ok


def test_sharpness_shifted_power_divergence_value():
    # spot value at z = 0: n 3^(n-1) / (1 + 3^n) with k = 1, alpha = 1
    n = 20
    f = RationalFunction.from_roots(zeros=[(3.0, n)])
    got = marty_quotient(f, MartyParams(1, 1.0), 0.0)
    expected = n * 3.0 ** (n - 1) / (1.0 + 3.0**n)
    assert abs(got - expected) <= 1e-12 * expected
    assert got >= 0.5 * (n - 1) * 3.0 ** (-1)


def test_sharpness_shifted_power_regime_guard():
    with pytest.raises(PreconditionError):
        sharpness_exponent("shifted_power", 1, 1.5)


# ---------------------------------------------------------------------------
# product-bound margins and the harmonic comparison
# ---------------------------------------------------------------------------


def test_estimate_chain_zero_free_strong_bound():
    geom = GEOM
    for h in zero_free_corpus(41, 3, geom, sup_cap=smallness_threshold(2, 2, geom)):
        rep = estimate_chain_check(h, 2, 2, geom)
        assert rep.zero_free
        assert rep.margins["zero_free"] >= -1e-9 * rep.lhs_scale
        assert rep.margins["pointwise"] >= -1e-9 * rep.lhs_scale
        assert rep.margins["uniform"] >= -1e-9 * rep.lhs_scale


def test_estimate_chain_small_monomial():
    k = m = 2
    x0 = smallness_threshold(k, m, GEOM)
    g = rf([0, 0, 0.5 * x0])  # eps z^2 with eps small enough
    rep = estimate_chain_check(g, k, m, GEOM)
    assert not rep.zero_free
    for name in ("log_derivative", "pointwise", "uniform"):
        assert rep.margins[name] >= -1e-9 * rep.lhs_scale


def test_estimate_chain_two_clusters():
    for g in multiplicity_polynomials(53, 3, 2, 2, GEOM):
        rep = estimate_chain_check(g, 2, 2, GEOM)
        for margin in rep.margins.values():
            assert margin >= -1e-9 * rep.lhs_scale


def test_estimate_chain_multiplicity_guard():
    g = rf([0, 0.001])  # simple zero, m = 2 demanded
    with pytest.raises(MultiplicityError):
        estimate_chain_check(g, 1, 2, GEOM)


def test_estimate_chain_rescale_guard():
    g = rf([0, 0, 2.0])  # sup on the unit circle is 2 > threshold
    with pytest.raises(PreconditionError):
        estimate_chain_check(g, 2, 2, GEOM)


def test_estimate_chain_slack_improves_when_smaller():
    # shrinking sup|g| gains log factors on the bound side, so the
    # worst-case bound/value ratio grows monotonically
    k = m = 2
    x0 = smallness_threshold(k, m, GEOM)
    rel = []
    for scale in (0.9, 0.3, 0.05):
        g = rf([0, 0, scale * x0])
        rep = estimate_chain_check(g, k, m, GEOM)
        rel.append(rep.ratios["pointwise"])
    assert rel[0] < rel[1] < rel[2]


def test_harnack_constant_margin():
    c = 0.2
    margin = harnack_check(rf([c]), GEOM)
    expected = ((GEOM.s + GEOM.r) / (GEOM.s - GEOM.r) - 1.0) * math.log(1.0 / c)
    assert abs(margin - expected) < 1e-12
    assert margin > 0


def test_harnack_linear_function():
    geom = DiskGeometry.from_radii(0.3, 0.7)  # s = 0.5
    margin = harnack_check(rf([-0.5, 0.25]), geom, grid=16)  # (z - 2)/4
    assert margin >= 0.0


def test_harnack_equality_approach():
    # the comparison is exact at the centre, so the margin vanishes as
    # r -> 0 and grows (the bound slackens) as r approaches s
    h = rf([-0.5, 0.25])
    margins = []
    for r in (0.001, 0.1, 0.35, 0.45):
        geom = DiskGeometry.from_radii(r, 2 * 0.475 - r)  # s fixed at 0.475
        margins.append(harnack_check(h, geom, grid=16))
    assert margins[0] < margins[1] < margins[2] < margins[3]
    assert margins[0] < 1e-2


def test_harnack_guards():
    with pytest.raises(HolomorphyError):
        harnack_check(rf([0, 0.1]), GEOM)  # zero at origin
    with pytest.raises(PreconditionError):
        harnack_check(rf([2.0]), GEOM)  # |h| >= 1


def test_harnack_split_corpus():
    for g in multiplicity_polynomials(67, 4, 2, 2, GEOM):
        split = build_split(g, GEOM)
        assert harnack_check(split, GEOM) >= -1e-12


def test_report_slope_needs_four_indices():
    indices = (1, 2, 4)
    rep = check_vanishing_family(monomial_family(2, indices), 1, 2, DISK)
    assert rep.slope is None
