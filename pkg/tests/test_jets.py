import math

import numpy as np
import pytest

from quasiyamabe import jets as J
from quasiyamabe.errors import NotPositiveDefinite
from quasiyamabe.fields import evaluate_scalar_jet, random_scalar

from conftest import interior_points


def _scalar_case(xs):
    x, y, z = xs
    return J.exp(0.3 * x) * J.sin(y) + x * y * z - J.log(2.0 + z * z) + J.cosh(0.5 * y) / (1.5 + x)


def _numeric_case(p):
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    return np.exp(0.3 * x) * np.sin(y) + x * y * z - np.log(2.0 + z * z) + np.cosh(0.5 * y) / (1.5 + x)


class TestArithmetic:
    def test_variables_have_unit_gradient(self):
        xs = J.Jet.variables(np.array([[0.1, 0.2, 0.3]]))
        for i, x in enumerate(xs):
            assert np.allclose(x.d1[0], np.eye(3)[i])
            assert not x.d2.any() and not x.d3.any()

    def test_product_rule_third_order(self):
        xs = J.Jet.variables(np.array([0.4, -0.2, 0.7]))
        u = xs[0] ** 2 * xs[1] ** 2
        # d3/dx dx dy of x^2 y^2 = 4y
        assert u.d3[0, 0, 1] == pytest.approx(4 * -0.2)
        assert u.d3[0, 1, 0] == pytest.approx(4 * -0.2)

    def test_exp_log_round_trip(self):
        xs = J.Jet.variables(np.array([0.4, -0.2, 0.7]))
        u = 1.0 + xs[0] * xs[1] + xs[2] ** 2
        v = J.exp(J.log(u))
        for a, b in zip((u.val, u.d1, u.d2, u.d3), (v.val, v.d1, v.d2, v.d3)):
            assert np.allclose(a, b, atol=1e-13)

    def test_division_and_reciprocal(self):
        xs = J.Jet.variables(np.array([0.4, -0.2, 0.7]))
        u = 2.0 + xs[0] * xs[2]
        one = u / u
        assert one.val == pytest.approx(1.0)
        assert np.allclose(one.d1, 0, atol=1e-15) and np.allclose(one.d3, 0, atol=1e-13)

    def test_sqrt_squared(self):
        xs = J.Jet.variables(np.array([0.4, 0.2, 0.7]))
        u = 1.0 + xs[0] ** 2 + xs[1] * xs[2]
        w = J.sqrt(u) * J.sqrt(u)
        assert np.allclose(w.d3, u.d3, atol=1e-13) and np.allclose(w.d2, u.d2, atol=1e-13)

    def test_trig_identity(self):
        xs = J.Jet.variables(np.array([[0.4, 0.2, 0.7], [1.0, -2.0, 0.5]]))
        u = xs[0] * xs[1] + xs[2]
        s = J.sin(u) ** 2 + J.cos(u) ** 2
        assert np.allclose(s.val, 1.0) and np.abs(s.d3).max() < 1e-13

    def test_hyperbolic_identity(self):
        xs = J.Jet.variables(np.array([0.3, 0.2, -0.1]))
        u = xs[0] - 2 * xs[1] * xs[2]
        s = J.cosh(u) ** 2 - J.sinh(u) ** 2
        assert s.val == pytest.approx(1.0) and np.abs(s.d3).max() < 1e-12

    def test_real_power_matches_integer_power(self):
        xs = J.Jet.variables(np.array([0.3, 0.2, 0.6]))
        u = 1.5 + xs[0] * xs[2]
        a = u ** 3
        b = J.power(u, 3.0)
        assert np.allclose(a.d3, b.d3, rtol=1e-12)

    def test_numpy_ufuncs_are_refused(self):
        xs = J.Jet.variables(np.array([0.3, 0.2, 0.6]))
        with pytest.raises(TypeError):
            np.sin(xs[0])


class TestSymmetry:
    def test_partials_symmetric(self):
        pts = interior_points(((-1, 1),) * 3, 10, seed=3)
        u = _scalar_case(J.Jet.variables(pts))
        assert np.allclose(u.d2, np.swapaxes(u.d2, -1, -2), atol=1e-14)
        for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
            assert np.allclose(u.d3, np.transpose(u.d3, (0,) + tuple(p + 1 for p in perm)), atol=1e-13)


class TestAgainstFiniteDifferences:
    """Forward-mode partials agree with Richardson central differences to 1e-5 relative."""

    @staticmethod
    def _rel(a, b):
        return np.abs(a - b).max() / max(1.0, np.abs(b).max())

    def test_closed_form_scalar(self):
        pts = interior_points(((-1, 1),) * 3, 100, seed=11)
        u = _scalar_case(J.Jet.variables(pts))
        val, d1, d2, d3 = J.fd_jet(_numeric_case, pts)
        assert np.allclose(u.val, val)
        assert self._rel(u.d1, d1) < 1e-5
        assert self._rel(u.d2, d2) < 1e-5
        assert self._rel(u.d3, d3) < 1e-5

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_random_scalar_field(self, n):
        spec = random_scalar(n, seed=n)
        # each stencil re-evaluates the full jet, so keep the batch small in n = 4, 5
        pts = interior_points(spec.box, 100 if n == 3 else 20, seed=n)
        sj = evaluate_scalar_jet(spec, pts)
        val, d1, d2, d3 = J.fd_jet(lambda p: evaluate_scalar_jet(spec, p).value, pts)
        assert self._rel(sj.grad, d1) < 1e-5
        assert self._rel(sj.hess, d2) < 1e-5
        assert self._rel(sj.third, d3) < 1e-5


class TestMetricJets:
    def test_inverse_metric_derivative(self):
        pts = interior_points(((-1, 1),) * 3, 5, seed=2)
        xs = J.Jet.variables(pts)
        ent = [[2.0 + xs[0] ** 2, 0.1 * xs[1], 0.0],
               [0.1 * xs[1], 1.0 + xs[2] ** 2, 0.0],
               [0.0, 0.0, J.exp(xs[0])]]
        mj = J.MetricJet3.from_entries(ent, 3, (5,))
        ginv, dginv = J.inverse_metric_jet(mj)
        assert np.allclose(np.einsum("...ij,...jk->...ik", mj.g, ginv), np.eye(3))
        num = J.fd_jet(lambda p: np.linalg.inv(J.MetricJet3.from_entries(
            [[2.0 + p[..., 0] ** 2, 0.1 * p[..., 1], 0 * p[..., 0]],
             [0.1 * p[..., 1], 1.0 + p[..., 2] ** 2, 0 * p[..., 0]],
             [0 * p[..., 0], 0 * p[..., 0], np.exp(p[..., 0])]], 3, p.shape[:-1]).g), pts)[1]
        assert np.allclose(dginv, num, atol=1e-8)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            J.check_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NotPositiveDefinite):
            J.check_positive_definite(np.array([[math.nan, 0.0], [0.0, 1.0]]))
