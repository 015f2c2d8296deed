from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from treeharm.boundary import spherical_via_boundary
from treeharm.errors import ClassificationUnavailableError, InvalidParameterError
from treeharm.spectra import (
    arc_image,
    closed_form_endpoints,
    critical_lower_bound,
    full_spectrum,
    lp_spectrum,
    nesting_report,
    preimage,
    restricted_arcs,
    sampled_image,
)
from treeharm.spherical import gamma, gamma_real, param_set_P, top_height
from treeharm.tree import make_tree_params

PRESETS = [make_tree_params(3, 3, 1), make_tree_params(2, 3, 2), make_tree_params(4, 5, 2)]
PS = [2.0, 2.5, 3.0, 4.0, 10.0, math.inf]
ULP_SLACK = 64 * np.finfo(float).eps


# -- examples -----------------------------------------------------------------------------

def test_full_spectrum_examples():
    u = full_spectrum(make_tree_params(3, 3, 1))
    assert u.to_list() == [[-1.0, 1.0]]
    u = full_spectrum(make_tree_params(2, 3, 2))
    assert abs(u.lo + 0.5) <= 1e-12 and abs(u.hi - 1) <= 1e-12
    u = full_spectrum(make_tree_params(4, 5, 2))
    assert abs(u.lo + 5 / 8) <= 1e-12 and abs(u.hi - 1) <= 1e-12


def test_lp_spectrum_examples(homog3):
    u = lp_spectrum(homog3, 2)
    assert len(u) == 1
    assert u.lo == pytest.approx(-2 * math.sqrt(2) / 3, abs=1e-12)
    assert u.hi == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-12)
    assert lp_spectrum(homog3, math.inf).to_list() == full_spectrum(homog3).to_list()
    # independent oracle: the boundary integral at radius 1 equals the eigenvalue
    g = spherical_via_boundary(homog3, 1 / 3, 1).real
    assert g == pytest.approx((2 ** (1 / 3) + 2 ** (2 / 3)) / 3, abs=1e-14)
    u = lp_spectrum(homog3, 3)
    assert (u.lo, u.hi) == pytest.approx((-g, g), abs=1e-12)


def test_p_two_is_the_critical_segment(preset):
    T = top_height(preset)
    crit = arc_image(preset, lambda t: complex(0.5, t), 0.0, T)
    u = lp_spectrum(preset, 2)
    assert len(u) == 1
    assert (u.lo, u.hi) == pytest.approx((crit.lo, crit.hi), abs=1e-9)
    assert critical_lower_bound(preset).to_list() == u.to_list()


def test_full_spectrum_equals_p_infinity(preset):
    a, b = full_spectrum(preset), lp_spectrum(preset, math.inf)
    np.testing.assert_allclose(a.to_list(), b.to_list(), rtol=0, atol=1e-12)


def test_no_independence_raises(preset):
    with pytest.raises(ClassificationUnavailableError):
        full_spectrum(preset, tits_independence=False)
    with pytest.raises(ClassificationUnavailableError):
        lp_spectrum(preset, 3, tits_independence=False)
    with pytest.raises(ClassificationUnavailableError):
        nesting_report(preset, [2, 3], tits_independence=False)


@pytest.mark.parametrize("p", [1.0, 1.5, 1.999, -3, float("nan")])
def test_p_below_two_rejected(homog3, p):
    with pytest.raises(InvalidParameterError):
        lp_spectrum(homog3, p)


# -- invariants -----------------------------------------------------------------------------

@pytest.mark.parametrize("p", PS)
def test_max_is_gamma_at_inverse_p(preset, p):
    s = 0.0 if math.isinf(p) else 1 / p
    assert abs(lp_spectrum(preset, p).hi - gamma_real(preset, s)) <= 1e-12


@pytest.mark.parametrize("p", PS)
def test_closed_form_matches_arc_sampling(preset, p):
    lo, hi = closed_form_endpoints(preset, p)
    images = [arc_image(preset, f, a, b) for _, f, a, b in restricted_arcs(preset, p)]
    assert min(im.lo for im in images) == pytest.approx(lo, abs=1e-9)
    assert max(im.hi for im in images) == pytest.approx(hi, abs=1e-9)


@pytest.mark.parametrize("p", PS)
def test_arcs_are_monotone(preset, p):
    for name, f, a, b in restricted_arcs(preset, p):
        assert arc_image(preset, f, a, b, name).monotone, name


@given(st.sampled_from(PRESETS), st.floats(2, 50), st.floats(2, 50))
def test_monotone_in_p(params, p, q):
    if p == q:
        return
    q, p = sorted((p, q))
    inner, outer = lp_spectrum(params, q), lp_spectrum(params, p)
    assert inner.is_strict_subset(outer, tol=0.0) or abs(p - q) < 1e-6


@pytest.mark.parametrize("p", PS)
def test_homogeneous_symmetry(homog3, p):
    u = lp_spectrum(homog3, p)
    flipped = sorted([-hi, -lo] for lo, hi in u.to_list())
    np.testing.assert_allclose(flipped, u.to_list(), rtol=0, atol=1e-12)


@pytest.mark.parametrize("p", [2.0, 3.0, math.inf])
def test_hausdorff_sampling(preset, p):
    u = lp_spectrum(preset, p)
    scale = max(abs(u.lo), abs(u.hi))
    d = u.hausdorff_to_points(sampled_image(preset, p, 10_000))
    assert d <= 1e-4 + ULP_SLACK * scale
    assert u.hausdorff_to_points(sampled_image(preset, p, 40_000)) < d


def test_hausdorff_is_optimal_cell_width(homog3):
    u = lp_spectrum(homog3, math.inf)
    for n in (10, 100, 1000):
        d = u.hausdorff_to_points(sampled_image(homog3, math.inf, n))
        assert d == pytest.approx(2 / (2 * n), rel=1e-9)


def test_sampled_image_rejects_bad_n(homog3):
    with pytest.raises(InvalidParameterError):
        sampled_image(homog3, 2, 0)


@pytest.mark.parametrize("p", [2.0, 3.0, 10.0, math.inf])
def test_preimages_realize_spectrum(preset, p):
    u = lp_spectrum(preset, p)
    s_lo = 0.0 if math.isinf(p) else 1 / p
    P = param_set_P(preset)
    for value in np.linspace(u.lo, u.hi, 25):
        z = preimage(preset, float(value), p)
        assert abs(gamma(preset, z) - value) <= 1e-9
        assert s_lo - 1e-12 <= z.real <= 0.5 + 1e-12
        assert P.contains(z, tol=1e-9) or abs(z.real - 0.5) < 1e-12


def test_preimage_outside_spectrum_raises(homog3):
    with pytest.raises(InvalidParameterError):
        preimage(homog3, 0.99, 2)


# -- nesting --------------------------------------------------------------------------------

def test_nesting_examples(homog3):
    rep = nesting_report(homog3, [2, math.inf])
    assert rep.all_strict and len(rep.steps) == 1
    assert rep.steps[0].witness_gamma == pytest.approx(1.0, abs=1e-12)
    assert not rep.steps[0].inner.contains(1.0)

    rep = nesting_report(homog3, [2, 3, 4, math.inf])
    assert len(rep.steps) == 3 and rep.all_strict
    oracle = spherical_via_boundary(homog3, 1 / 3, 1).real - 2 * math.sqrt(2) / 3
    assert rep.steps[0].margin_hi == pytest.approx(oracle, abs=1e-12)
    assert rep.steps[0].margin_hi == pytest.approx(0.0062983, abs=1e-7)

    rep = nesting_report(make_tree_params(2, 3, 2), [2, math.inf])
    assert rep.all_strict and rep.steps[0].margin_lo > 1e-9 and rep.steps[0].margin_hi > 1e-9

    rep = nesting_report(make_tree_params(4, 5, 2), [2, 3, 4, 6, math.inf])
    assert len(rep.steps) == 4 and rep.all_strict

    assert nesting_report(homog3, [2]).steps == ()


def test_nesting_witness_is_in_outer_not_inner(preset):
    rep = nesting_report(preset, [2, 2.5, 3, 4, 10, math.inf])
    for step in rep.steps:
        assert step.strict
        assert step.outer.contains(step.witness_gamma, 1e-12)
        assert not step.inner.contains(step.witness_gamma, 1e-9)
        assert step.margin_hi > 0


@pytest.mark.parametrize("ps", [[3, 2], [2, 2], [1.5, 3]])
def test_nesting_rejects_bad_grids(homog3, ps):
    with pytest.raises(InvalidParameterError):
        nesting_report(homog3, ps)
