import math

import pytest

import liftscale as ls


def test_bvn_mi_and_lift():
    d = ls.BivariateNormal(0.6)
    rep = ls.mutual_information(d)
    assert rep["method"] == "ClosedForm"
    assert rep["value"] == pytest.approx(-0.5 * math.log(0.64), abs=1e-12)
    assert ls.lift_at(d, 0.0, 0.0) == pytest.approx(1.25, abs=1e-12)


def test_cauchy_mi_by_quadrature():
    rep = ls.mutual_information(ls.CircularCauchy())
    assert rep["method"] == "Quadrature"
    assert rep["value"] == pytest.approx(0.223, abs=5e-3)


def test_discrete_lift_grid_and_targeting():
    d = ls.DiscreteJoint.from_rows([[0.4, 0.1], [0.1, 0.4]])
    f = ls.lift_grid(d, [0.0, 1.0], [0.0, 1.0])
    assert f["values"] == pytest.approx([1.6, 0.4, 0.4, 1.6])
    assert f["labels"] == ["Lift", "Inhibit", "Inhibit", "Lift"]
    t = ls.target_profile(d, 0.0)
    assert t["x_opt"] == 0.0
    assert t["boosted_rate"] == pytest.approx(0.8)


def test_curve_singular_limit():
    c = ls.CurveSingularJoint.from_marginal(ls.Univariate.normal(0, 1), [ls.linear_branch(1.0, 0.0)])
    rep = ls.mutual_information(c)
    assert rep["method"] == "CurveQuadrature"
    assert rep["value"] == pytest.approx(math.log(2 * math.sqrt(math.e) / math.sqrt(math.pi)), abs=1e-8)
    assert ls.lift_at(c, 0.0, 1.0) == 0.0


def test_sampling_and_scaling():
    pts = ls.sample(ls.IndependentProduct(ls.Univariate.uniform(), ls.Univariate.uniform()), 200_000, seed=1)
    assert len(pts) == 200_000
    assert pts == ls.sample(ls.IndependentProduct(ls.Univariate.uniform(), ls.Univariate.uniform()), 200_000, seed=1)
    est = ls.scaling_exponent(pts, (0.5, 0.5), eps_max=0.1, eps_min=0.01, k=6)
    assert est["s_hat"] == pytest.approx(2.0, abs=0.15)


def test_weierstrass_and_counterexample():
    assert ls.weierstrass(0.0) == pytest.approx(1 - 2.0**-30, abs=1e-15)
    rows = ls.convergence_counterexample([0.9, 0.99])
    assert [r["exceeds"] for r in rows] == [True, True, False]


def test_errors_carry_names():
    with pytest.raises(ls.LiftscaleError) as info:
        ls.mi_bvn_closed_form(1.0)
    assert info.value.name == "DegenerateCorrelation"
    with pytest.raises(ls.LiftscaleError, match="MinSampleSize"):
        ls.kernel_lift([(0.0, 0.0)] * 5, [0.0], [0.0])
    with pytest.raises(TypeError):
        ls.mutual_information("bvn")
