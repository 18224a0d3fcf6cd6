import numpy as np
import pytest
from hypothesis import given, strategies as st

from sigma3.abel_jacobi import abel_jacobi, random_curve_point
from sigma3.errors import OnThetaDivisor
from sigma3.identities import LEADING_TAYLOR_TERMS, taylor_section
from sigma3.theta_sigma import (REFERENCE_CHARACTERISTICS, MultiIndex, ThetaCharacteristics, L_form,
                                chi_closed_form, even_characteristics, quasi_period_factor, sigma,
                                sigma_jet, theta_char, truncation_radius, weight_mask, wp)


def random_u(rng, ctx, scale=0.5):
    a, b = rng.uniform(-scale, scale, 3), rng.uniform(-scale, scale, 3)
    return ctx.periods.omega1 @ a + ctx.periods.omega2 @ b


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# truncation radius

def test_truncation_radius_identity():
    assert truncation_radius(1j * np.eye(3), 1e-12) <= 4


def test_truncation_radius_monotone():
    Z = 1j * np.eye(3)
    radii = [truncation_radius(Z, t) for t in (1e-4, 1e-8, 1e-12, 1e-16)]
    assert radii == sorted(radii)
    by_lmin = [truncation_radius(lm * Z, 1e-12) for lm in (0.3, 1.0, 3.0)]
    assert by_lmin == sorted(by_lmin, reverse=True)


def test_truncation_radius_needs_positive_imaginary_part():
    with pytest.raises(ValueError):
        truncation_radius(-1j * np.eye(3), 1e-12)


# characteristics and multi-indices

def test_characteristics_are_reduced_mod_one():
    assert REFERENCE_CHARACTERISTICS.delta1 == (0.0, 0.5, 0.0)
    assert ThetaCharacteristics((1.5, -0.5, 2.0), (0, 0, 0)).delta1 == (0.5, 0.5, 0.0)


def test_even_characteristics():
    chars = even_characteristics()
    assert len(chars) == 36 and all(c.is_even for c in chars)


def test_multi_index():
    assert MultiIndex.of(1, 3, 3).orders == (1, 0, 2)
    assert MultiIndex.of(1, 3, 3).indices == (0, 2, 2)
    with pytest.raises(ValueError):
        MultiIndex((2, 2, 0))


# theta series

def test_theta_shift_by_integer_vector(ctx, rng):
    z = ctx.W @ random_u(rng, ctx)
    for k in range(3):
        e = np.eye(3)[k]
        want = np.exp(2j * np.pi * ctx.chars.d2[k]) * theta_char(z, ctx)
        assert rel(theta_char(z + e, ctx), want) < 1e-10


def test_theta_shift_by_period_vector(ctx, rng):
    z = ctx.W @ random_u(rng, ctx, 0.2)
    for k in range(3):
        factor = np.exp(-1j * np.pi * ctx.Z[k, k] - 2j * np.pi * (z[k] + ctx.chars.d1[k]))
        assert rel(theta_char(z + ctx.Z[:, k], ctx), factor * theta_char(z, ctx)) < 1e-9


def test_theta_derivative_against_differences(ctx, rng):
    z = ctx.W @ random_u(rng, ctx, 0.3)
    h = 1e-5
    for k in range(3):
        e = np.eye(3)[k] * h
        fd = (theta_char(z + e, ctx) - theta_char(z - e, ctx)) / (2 * h)
        o = [0, 0, 0]
        o[k] = 1
        assert rel(theta_char(z, ctx, MultiIndex(tuple(o))), fd) < 1e-6


# sigma: normalisation and local structure

def test_normalisation(ctx):
    s0, s1, s2 = sigma_jet(np.zeros(3), ctx, 2, use_series=False)
    assert abs(s0) < 1e-10
    assert np.max(np.abs(s1)) < 1e-10
    assert abs(s2[0, 2] - 1) < 1e-10 and abs(s2[1, 1] + 2) < 1e-8
    for j, k in [(0, 0), (0, 1), (1, 2), (2, 2)]:
        assert abs(s2[j, k]) < 1e-8


def test_characteristic_is_even_with_vanishing_theta_constant(ctx):
    assert ctx.chars.is_even
    assert abs(theta_char(np.zeros(3), ctx)) < 1e-12


def test_schur_polynomial_leading_terms(ctx):
    # the lambda-free part of the expansion
    want = {(1, 0, 1): 1, (0, 2, 0): -1, (0, 1, 3): -1 / 3, (0, 0, 6): 1 / 45}
    for p, v in want.items():
        assert abs(ctx.series.coefficient(p) - v) < 1e-10


def test_series_coefficients_match_cauchy_integrals(generic_ctx):
    sec = taylor_section(generic_ctx)
    assert sec.max_rel_residual < 1e-9
    for powers, fn in LEADING_TAYLOR_TERMS.items():
        want = complex(fn(generic_ctx.curve.lam))
        assert abs(generic_ctx.series.coefficient(powers) - want) < 1e-9


def test_weight_mask(curves):
    m = weight_mask(curves["x7p1"], 8)
    assert m[1, 0, 1] and m[0, 2, 0] and not m[1, 0, 0] and not m[0, 0, 2]
    # only lambda_0 is non-zero: the extra weight must be a multiple of 14
    assert not m[0, 0, 7] and m[0, 0, 6]
    full = weight_mask(curves["real_roots"], 8)
    assert full.sum() > m.sum()


def test_series_agrees_with_lattice_sum(ctx, rng):
    from sigma3.theta_sigma import default_taylor_radii
    r = default_taylor_radii(ctx)
    for _ in range(5):
        u = r * 0.2 ** np.array([5, 3, 1]) * np.exp(2j * np.pi * rng.uniform(size=3))
        a = sigma_jet(u, ctx, 3, use_series=True)
        b = sigma_jet(u, ctx, 3, use_series=False)
        for k in range(4):
            assert np.max(np.abs(a[k] - b[k])) <= 1e-9 * max(1.0, np.max(np.abs(b[k])))


def test_jet_against_differences(ctx, rng):
    u = random_u(rng, ctx, 0.3)
    h = 1e-5
    jet = sigma_jet(u, ctx, 3)
    for order in (1, 2, 3):
        for j in range(3):
            e = np.zeros(3, complex)
            e[j] = h
            lo = sigma_jet(u - e, ctx, order - 1)[order - 1]
            hi = sigma_jet(u + e, ctx, order - 1)[order - 1]
            fd = (hi - lo) / (2 * h)
            got = np.moveaxis(jet[order], -1, 0)[j] if order > 1 else jet[1][j]
            assert np.max(np.abs(got - fd)) <= 1e-6 * max(1.0, np.max(np.abs(jet[order])))


def test_sigma_is_even(ctx, rng):
    for _ in range(10):
        u = random_u(rng, ctx)
        assert rel(sigma(u, ctx), sigma(-u, ctx)) < 1e-8
        d = MultiIndex.of(3)
        assert rel(sigma(u, ctx, d), -sigma(-u, ctx, d)) < 1e-8


def test_sigma_scales_with_constant(ctx, rng):
    u = random_u(rng, ctx)
    assert rel(sigma(u, ctx.with_constant(2 * ctx.c)), 2 * sigma(u, ctx)) < 1e-14


# quasi-periodicity

@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6), st.integers(0, 2 ** 32 - 1))
def test_quasi_periodicity(contexts, ab, seed):
    for ctx in contexts.values():
        rng = np.random.default_rng(seed)
        u = random_u(rng, ctx, 0.3)
        a, b = np.array(ab[:3]), np.array(ab[3:])
        l = ctx.periods.lattice_point(a, b)
        chi, factor = quasi_period_factor(u, (a, b), ctx)
        assert chi == chi_closed_form((a, b), ctx)
        assert rel(sigma(u + l, ctx), chi * sigma(u, ctx) * factor) < 1e-8


def test_chi_of_zero(ctx):
    z = np.zeros(3, int)
    assert chi_closed_form((z, z), ctx) == 1
    assert quasi_period_factor(np.ones(3), (z, z), ctx) == (1, 1)


def test_L_is_linear_in_u(ctx, rng):
    ab = (np.array([1, 0, -1]), np.array([0, 2, 1]))
    u, v = random_u(rng, ctx), random_u(rng, ctx)
    assert abs(L_form(u + v, ab, ctx) - L_form(u, ab, ctx) - L_form(v, ab, ctx)) < 1e-10


@given(st.lists(st.integers(-2, 2), min_size=12, max_size=12))
def test_L_antisymmetry_is_quantised(contexts, n):
    # L(l1, l2) - L(l2, l1) = 2 pi i (a2.b1 - a1.b2) by the Legendre relation
    ctx = contexts["real_roots"]
    a1, b1, a2, b2 = (np.array(n[i:i + 3]) for i in range(0, 12, 3))
    l1 = ctx.periods.lattice_point(a1, b1)
    l2 = ctx.periods.lattice_point(a2, b2)
    got = L_form(l1, (a2, b2), ctx) - L_form(l2, (a1, b1), ctx)
    assert abs(got - 2j * np.pi * (a2 @ b1 - a1 @ b2)) < 1e-9 * (1 + abs(got))


# wp functions

def test_wp_symmetric_and_even(ctx, rng):
    u = random_u(rng, ctx)
    for j, k in [(1, 2), (1, 3), (2, 3)]:
        assert rel(wp(u, ctx, (j, k)), wp(u, ctx, (k, j))) < 1e-10
    for j, k in [(1, 1), (2, 3), (3, 3)]:
        assert rel(wp(u, ctx, (j, k)), wp(-u, ctx, (j, k))) < 1e-7
    assert rel(wp(u, ctx, (3, 3, 3)), -wp(-u, ctx, (3, 3, 3))) < 1e-7
    assert rel(wp(u, ctx, (1, 2, 3)), wp(u, ctx, (3, 1, 2))) < 1e-10


def test_wp_is_periodic(ctx, rng):
    u = random_u(rng, ctx)
    for ab in [((1, 0, 0), (0, 0, 0)), ((0, 0, 0), (0, 1, 0)), ((1, -1, 0), (0, 1, 1))]:
        l = ctx.periods.lattice_point(*ab)
        for idx in [(3, 3), (1, 3), (2, 3, 3)]:
            assert rel(wp(u + l, ctx, idx), wp(u, ctx, idx)) < 1e-7


def test_wp3_is_derivative_of_wp2(ctx, rng):
    u = random_u(rng, ctx, 0.3)
    h = 1e-5
    e = np.array([0, 0, h])
    fd = (wp(u + e, ctx, (2, 3)) - wp(u - e, ctx, (2, 3))) / (2 * h)
    assert rel(wp(u, ctx, (3, 2, 3)), fd) < 1e-6


def test_wp_rejects_bad_indices(ctx):
    with pytest.raises(ValueError):
        wp(np.ones(3), ctx, (1,))


def test_theta_divisor_is_detected(ctx):
    # sums of two points lie on the theta divisor
    curve = ctx.curve
    P = random_curve_point(curve, 1)
    Q = random_curve_point(curve, 2)
    u = abel_jacobi(P, curve).u + abel_jacobi(Q, curve).u
    with pytest.raises(OnThetaDivisor):
        wp(u, ctx, (3, 3), check=True)


def test_with_config_shares_cached_data(ctx, rng):
    ctx.series  # make sure the expansion exists
    other = ctx.with_config(ctx.config.replace(identity_tol=1e-3))
    assert other.config.identity_tol == 1e-3
    assert other.series is ctx.series
    u = random_u(rng, ctx)
    assert sigma(u, other) == sigma(u, ctx)


@given(st.lists(st.integers(-2, 2), min_size=12, max_size=12))
def test_chi_composition(contexts, n):
    # applying the translation formula twice:
    # chi(l1 + l2) = chi(l1) chi(l2) exp((L(l1, l2) - L(l2, l1)) / 2)
    ctx = contexts["x7p1"]
    a1, b1, a2, b2 = (np.array(n[i:i + 3]) for i in range(0, 12, 3))
    l1 = ctx.periods.lattice_point(a1, b1)
    l2 = ctx.periods.lattice_point(a2, b2)
    phase = np.exp((L_form(l1, (a2, b2), ctx) - L_form(l2, (a1, b1), ctx)) / 2)
    chi12 = chi_closed_form((a1 + a2, b1 + b2), ctx)
    assert abs(chi12 - chi_closed_form((a1, b1), ctx) * chi_closed_form((a2, b2), ctx) * phase) < 1e-8
    assert quasi_period_factor(np.zeros(3), (a1 + a2, b1 + b2), ctx)[0] == chi12
