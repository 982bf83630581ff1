import numpy as np
import pytest

from mixnorm_lab.anisotropy import (
    AnisotropyVector,
    aniso_dilate,
    aniso_norm,
    bracket,
    euclid_comparison,
)


def test_vector_derived_quantities():
    a = AnisotropyVector((1.0, 2.0, 1.5))
    assert a.a_m == 1.0
    assert a.a_M == 2.0
    assert a.nu == 4.5
    assert a.n == 3


def test_vector_rejects_entries_below_one():
    with pytest.raises(ValueError):
        AnisotropyVector((0.5, 1.0))


def test_dilate_identity():
    out = aniso_dilate(1.0, (1.0, 2.0), (3.0, -2.0))
    assert np.array_equal(out, [3.0, -2.0])


def test_dilate_direct_exponentiation():
    assert np.allclose(aniso_dilate(2.0, (1.0, 2.0), (1.0, 1.0)), [2.0, 4.0])


def test_dilate_isotropic_scaling():
    assert np.allclose(aniso_dilate(0.5, (1.0, 1.0), (4.0, 4.0)), [2.0, 2.0])


def test_dilate_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        aniso_dilate(0.0, (1.0,), (1.0,))
    with pytest.raises(ValueError):
        aniso_dilate(-2.0, (1.0,), (1.0,))


def test_norm_of_zero_is_exactly_zero():
    assert aniso_norm(np.zeros(3), (1.0, 2.0, 3.0)) == 0.0


def test_norm_isotropic_is_euclidean():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(200, 2)) * 10.0 ** rng.uniform(-3, 3, size=(200, 1))
    got = aniso_norm(x, (1.0, 1.0))
    want = np.linalg.norm(x, axis=-1)
    assert np.max(np.abs(got - want) / want) < 1e-9


def test_norm_single_nonzero_coordinate():
    # |x|_a = |x_k|^(1/a_k) when only coordinate k is nonzero
    assert aniso_norm(np.array([0.0, 4.0]), (1.0, 2.0)) == pytest.approx(2.0, rel=1e-11)


def test_norm_scaling_law_random():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        a = 1.0 + 2.0 * rng.random(n)
        x = rng.normal(size=(300, n)) * 10.0 ** rng.uniform(-2, 2, size=(300, 1))
        lam = np.exp(rng.uniform(-3, 3, size=300))
        lhs = aniso_norm(x * np.power(lam[:, None], a), a)
        rhs = lam * aniso_norm(x, a)
        assert np.max(np.abs(lhs - rhs) / rhs) < 1e-9


def test_norm_symmetry_exact():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(50, 2)) * 5
    a = (1.0, 1.7)
    assert np.array_equal(aniso_norm(x, a), aniso_norm(-x, a))


def test_norm_huge_coordinates_no_overflow():
    # log-domain evaluation keeps extreme magnitudes finite
    x = np.array([1e200, 1e-180])
    a = (1.0, 3.0)
    v = aniso_norm(x, a)
    assert np.isfinite(v)
    assert v == pytest.approx(1e200, rel=1e-9)


def test_norm_rejects_bad_tol():
    with pytest.raises(ValueError):
        aniso_norm(np.ones(2), (1.0, 1.0), tol=0.0)


def test_bracket_at_origin_is_one():
    assert bracket(np.zeros(2), (1.0, 2.0)) == pytest.approx(1.0, abs=1e-11)


def test_bracket_isotropic_closed_form():
    # oracle: |(1, x)|_2 = sqrt(1 + |x|^2) for the isotropic extension
    rng = np.random.default_rng(11)
    x = rng.normal(size=(100, 3)) * 4
    got = bracket(x, (1.0, 1.0, 1.0))
    want = np.sqrt(1.0 + np.sum(x**2, axis=-1))
    assert np.max(np.abs(got - want) / want) < 1e-10


def test_bracket_monotone_along_dilation_rays():
    # brute-force comparison through aniso_norm on the extended points
    rng = np.random.default_rng(13)
    a = (1.0, 2.0)
    x = rng.normal(size=(100, 2)) * 3
    dilated = x * np.array([2.0**1.0, 2.0**2.0])
    assert np.all(bracket(dilated, a) >= bracket(x, a) - 1e-12)


def test_bracket_at_least_one_and_even():
    rng = np.random.default_rng(17)
    x = rng.normal(size=(200, 2)) * 50
    b = bracket(x, (1.5, 2.5))
    assert np.all(b >= 1.0)
    flip = x.copy()
    flip[:, 0] *= -1
    assert np.allclose(bracket(flip, (1.5, 2.5)), b, rtol=1e-12)


def test_euclid_comparison_isotropic_attains_one():
    rng = np.random.default_rng(19)
    x = rng.normal(size=(100, 2))
    c1, c2 = euclid_comparison((1.0, 1.0), x)
    # (1+|x|) == (1+|x|_a)^1 exactly, so both constants sit at 1
    assert c1 == pytest.approx(1.0, rel=1e-9)
    assert c2 == pytest.approx(1.0, rel=1e-9)


def test_euclid_comparison_axis_samples_bracket_one():
    # on the x2-axis with a=(1,2): 1+|x| = 1+x2, 1+|x|_a = 1+sqrt(x2)
    t = np.linspace(0.5, 20, 40)
    samples = np.stack([np.zeros_like(t), t], axis=-1)
    c1, c2 = euclid_comparison((1.0, 2.0), samples)
    ratio_m = (1 + t) / (1 + np.sqrt(t)) ** 1.0
    ratio_M = (1 + t) / (1 + np.sqrt(t)) ** 2.0
    assert c1 == pytest.approx(np.min(ratio_m), rel=1e-9)
    assert c2 == pytest.approx(np.max(ratio_M), rel=1e-9)
    assert c1 <= 1.0 + 1e-9 or c2 >= 1.0 - 1e-9


def test_euclid_comparison_two_sided_consistency():
    # the origin pins both ratios at 1, forcing c1 <= 1 <= c2
    rng = np.random.default_rng(23)
    for a in ((1.0,), (1.0, 2.0), (2.0, 1.0, 3.0)):
        x = rng.normal(size=(150, len(a))) * 10.0 ** rng.uniform(-1, 2, size=(150, 1))
        x = np.vstack([x, np.zeros((1, len(a)))])
        c1, c2 = euclid_comparison(a, x)
        assert 0 < c1 <= c2 < np.inf


def test_euclid_comparison_rejects_empty():
    with pytest.raises(ValueError):
        euclid_comparison((1.0, 2.0), np.zeros((0, 2)))


def test_scaling_invariant_with_dilate_roundtrip():
    # |dilate(lam, x)|_a tracks lam |x|_a within the documented slack
    rng = np.random.default_rng(29)
    a = (1.0, 2.0)
    tol = 1e-12
    for _ in range(100):
        x = rng.normal(size=2) * 10.0 ** rng.uniform(-2, 2)
        lam = float(np.exp(rng.uniform(-3, 3)))
        lhs = aniso_norm(aniso_dilate(lam, a, x), a, tol=tol)
        rhs = lam * aniso_norm(x, a, tol=tol)
        assert abs(lhs - rhs) <= 10 * tol * (1 + rhs)


def test_bracket_power_derivative_bound_finite():
    # finite-difference partials of <xi>^alpha up to order 2 admit a single
    # constant against (1+|xi|_a)^(alpha - a.gamma) over a sampled box
    a = np.array([1.0, 2.0])
    alpha = 1.5
    h = 1e-5
    rng = np.random.default_rng(31)
    pts = rng.uniform(-8, 8, size=(200, 2))
    base = 1.0 + aniso_norm(pts, tuple(a))

    def m(p):
        return bracket(p, tuple(a), tol=1e-15) ** alpha

    recorded = {}
    for gamma in [(1, 0), (0, 1), (2, 0), (0, 2), (1, 1)]:
        shift = np.zeros((1, 2))
        if gamma in ((1, 0), (0, 1)):
            axis = gamma.index(1)
            e = np.zeros(2)
            e[axis] = h
            der = (m(pts + e) - m(pts - e)) / (2 * h)
        elif gamma == (1, 1):
            e0 = np.array([h, 0.0])
            e1 = np.array([0.0, h])
            der = (
                m(pts + e0 + e1) - m(pts + e0 - e1) - m(pts - e0 + e1) + m(pts - e0 - e1)
            ) / (4 * h * h)
        else:
            axis = gamma.index(2)
            e = np.zeros(2)
            e[axis] = h
            der = (m(pts + e) - 2 * m(pts) + m(pts - e)) / (h * h)
        weight = base ** (alpha - float(np.dot(a, gamma)))
        c_gamma = np.max(np.abs(der) / weight)
        recorded[gamma] = c_gamma
        assert np.isfinite(c_gamma)
    # first-order constants should be modest; record-only for order two
    assert recorded[(1, 0)] < 50 and recorded[(0, 1)] < 50
