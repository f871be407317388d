import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coneslice.ambient import cone_constraint
from coneslice.embedding import lambda_map, sample_chart_point
from coneslice.errors import ContractViolation, OutOfDomainError
from coneslice.flrw import (
    NULL_BAND,
    SliceKind,
    build_flrw,
    flrw_metric_residual,
    osculating_slice,
    standard_slice,
)
from coneslice.homogeneous import ScaleFactor, check_homogeneity
from coneslice.slices import SlicePoint, minkowski_null_chart, scalar_curvature


def ads_point(n, H, rng):
    # H y^n = 1 on the cone, with y^{n+1} free and y^0 solving the constraint
    while True:
        y = rng.uniform(-1.5, 1.5, n + 2)
        y[n] = 1.0 / H
        rest = np.sum(y[1 : n + 1] ** 2) - y[n + 1] ** 2
        if rest > 0.05:
            y[0] = math.sqrt(rest)
            return y


@pytest.mark.parametrize("H", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_standard_gradient_norms(n, H):
    assert standard_slice("deSitter", n, H).gradient_norm_sq == pytest.approx(H * H, rel=1e-15)
    assert standard_slice("antiDeSitter", n, H).gradient_norm_sq == pytest.approx(-H * H, rel=1e-15)
    assert standard_slice("minkowskiNull", n, H).gradient_norm_sq == 0.0


def test_standard_slice_rejects_bad_input():
    with pytest.raises(ContractViolation):
        standard_slice("deSitter", 3, 0.0)
    with pytest.raises(ValueError):
        standard_slice("sphere", 3)


def test_classification_of_standard_slices():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4):
        for H in (0.5, 1.0, 2.0):
            space = build_flrw("zero", n, H)
            x = sample_chart_point(space.chart, rng)
            assert osculating_slice(space.base.f, space.chart.point(x)).classification == "deSitter"
            nul = minkowski_null_chart(n, H)
            res = osculating_slice(nul.h, nul.point(rng.uniform(-2, 2, n)))
            assert res.classification == "null" and res.normSq == 0.0
            ads = standard_slice(SliceKind.ANTI_DE_SITTER, n, H)
            res = osculating_slice(ads.f, SlicePoint(ads_point(n, H, rng), ads.f))
            assert res.classification == "antiDeSitter"


def test_osculating_linear_slice_is_itself():
    space = build_flrw("zero", 3, 1.5)
    p = space.chart.point(np.array([0.2, -0.4, 0.1]))
    res = osculating_slice(space.base.f, p)
    rng = np.random.default_rng(1)
    for y in rng.standard_normal((20, 5)):
        assert res.fLocal(y) == pytest.approx(space.base.f(y), rel=1e-15, abs=1e-15)


def test_osculating_requires_degree_one():
    space = build_flrw("const:0.2", 2)
    p = space.chart.point(np.zeros(2))
    with pytest.raises(ContractViolation):
        osculating_slice(space.l, p)


@pytest.mark.parametrize("spec", ["zero", "const:0.3", "power:2", "tilt:2"])
def test_flocal_equals_one_at_contact_point(spec):
    space = build_flrw(spec, 3, 1.0)
    rng = np.random.default_rng(2)
    for i in range(200):
        x = sample_chart_point(space.w_chart, rng)
        p = space.w_chart.point(x)
        res = osculating_slice(space.k, p)
        assert abs(res.fLocal(p.y) - 1.0) <= 1e-10
        # fLocal is linear, so homogeneous of degree one to rounding
        assert check_homogeneity(res.fLocal, 5, seed=i, n=3) <= 1e-14
        # the osculating differential is degree zero along the ray
        np.testing.assert_allclose(space.k.differential(3.7 * p.y), res.fLocal.differential(p.y), rtol=1e-10, atol=1e-12)


def test_power_scale_factor_stays_de_sitter():
    space = build_flrw("power:2", 3, 1.0)
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = space.w_chart.point(sample_chart_point(space.w_chart, rng))
        assert osculating_slice(space.k, p).classification == "deSitter"


def test_tilt_scale_factor_mixes_classes():
    space = build_flrw("tilt:2", 2, 1.0)
    rng = np.random.default_rng(4)
    seen = set()
    for _ in range(300):
        p = space.w_chart.point(sample_chart_point(space.w_chart, rng))
        seen.add(osculating_slice(space.k, p).classification)
    assert {"deSitter", "antiDeSitter"} <= seen
    # x^1 = 0.5 puts grad k exactly on the cone
    res = osculating_slice(space.k, space.w_chart.point(np.array([-1.0, 0.5])))
    assert abs(res.normSq) <= 1e-12 and res.classification == "null"


def test_osculating_result_serializes():
    space = build_flrw("const:0.1", 2)
    d = osculating_slice(space.k, space.w_chart.point(np.array([0.1, 0.2]))).to_dict()
    assert set(d) == {"classification", "normSq", "K"} and len(d["K"]) == 4
    assert NULL_BAND == 1e-10


def test_zero_scale_factor_gives_base_slice():
    space = build_flrw("zero", 3, 1.0)
    rng = np.random.default_rng(5)
    for _ in range(20):
        y = space.chart.point(sample_chart_point(space.chart, rng)).y
        assert space.k(y) == space.chart.h(y)
        assert flrw_metric_residual(space, y[:3]) == 0.0


@pytest.mark.parametrize("c", [-0.7, 0.3, 1.2])
def test_constant_scale_factor_is_rescaled_hyperboloid(c):
    space = build_flrw(f"const:{c}", 2, 1.0)
    rng = np.random.default_rng(6)
    for _ in range(50):
        x = sample_chart_point(space.chart, rng)
        p = space.chart.point(x)
        q = lambda_map(space.deformation, p)
        np.testing.assert_allclose(q.y, math.exp(c) * p.y, rtol=1e-15)
        assert abs(cone_constraint(q.y)) <= 1e-12 * max(1, np.max(np.abs(q.y)) ** 2)
        assert flrw_metric_residual(space, x) <= 1e-12 * math.exp(2 * c)


@pytest.mark.parametrize("spec", ["power:2", "power:-1.5", "tilt:0.8"])
@pytest.mark.parametrize("n", [2, 4])
def test_generic_scale_factor_metric_residual(spec, n):
    space = build_flrw(spec, n, 1.0)
    rng = np.random.default_rng(7)
    in_domain = lambda x: space.a.contains(space.chart.point_map(x))  # noqa: E731
    worst = 0.0
    for _ in range(500):
        x = sample_chart_point(space.chart, rng, in_domain)
        # negative powers blow up near tau = 0, so compare relative to the target metric
        size = math.exp(2 * space.a(space.chart.point_map(x))) * np.abs(space.chart.gram(x)).max()
        worst = max(worst, flrw_metric_residual(space, x) / max(1.0, size))
    assert worst <= 1e-9


def test_metric_residual_outside_scale_factor_domain():
    space = build_flrw("power:2", 2, 1.0)
    with pytest.raises(OutOfDomainError):
        flrw_metric_residual(space, np.array([0.0, 0.3]))


@settings(max_examples=30)
@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_custom_scale_factor_object(u, v):
    a = ScaleFactor(lambda p: 0.2 * p[0] - 0.1 * p[1] ** 2, name="custom")
    space = build_flrw(a, 2, 1.0)
    assert flrw_metric_residual(space, np.array([u, v])) <= 1e-12


@pytest.mark.parametrize("c", [0.3, -0.4])
@pytest.mark.parametrize("n", [2, 3])
def test_curvature_of_constant_deformation(n, c):
    H = 1.0
    space = build_flrw(f"const:{c}", n, H)
    expected = math.exp(-2 * c) * (-n * (n - 1) * H * H)
    rng = np.random.default_rng(8)
    for _ in range(3):
        x = rng.uniform(-0.5, 0.5, n)
        assert scalar_curvature(space.w_chart, x) == pytest.approx(expected, rel=1e-2)
