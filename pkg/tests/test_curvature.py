import numpy as np
import pytest

from quasiyamabe.curvature import (covariant_hessian, curvature_pack, sectional_curvature,
                                   third_covariant_scalar)
from quasiyamabe.fields import (METRIC_CATALOG, evaluate_metric_jet, evaluate_scalar_jet,
                                hyperspherical, random_poly_metric, random_scalar, sphere)
from quasiyamabe.jets import fd_jet

from conftest import interior_points


def pack(spec, count=20, seed=0, pad=0.1):
    p = interior_points(spec.box, count, seed, pad)
    return p, curvature_pack(evaluate_metric_jet(spec, p))


def constant_curvature_tensor(g, K):
    return K * (np.einsum("...ik,...jl->...ijkl", g, g) - np.einsum("...il,...jk->...ijkl", g, g))


class TestClosedForms:
    @pytest.mark.parametrize("n,radius", [(3, 1.0), (3, 2.0), (4, 1.0), (5, 0.5)])
    def test_stereographic_sphere(self, n, radius):
        _, cp = pack(sphere(n, radius))
        K = 1.0 / radius ** 2
        assert np.allclose(cp.riemann, constant_curvature_tensor(cp.g, K), atol=1e-12)
        assert np.allclose(cp.scalar, n * (n - 1) * K, atol=1e-12)
        assert np.abs(cp.grad_scalar).max() < 1e-11

    @pytest.mark.parametrize("n", [3, 4])
    def test_hyperspherical_chart(self, n):
        _, cp = pack(hyperspherical(n))
        assert np.allclose(cp.scalar, n * (n - 1), atol=1e-10)

    def test_hyperbolic(self):
        _, cp = pack(METRIC_CATALOG["HYP3"]())
        assert np.allclose(cp.riemann, constant_curvature_tensor(cp.g, -1.0), atol=1e-12)
        assert np.allclose(cp.scalar, -6.0)

    @pytest.mark.parametrize("name", ["FLAT3", "FLAT5", "POLAR3"])
    def test_flat(self, name):
        _, cp = pack(METRIC_CATALOG[name]())
        assert np.abs(cp.riemann).max() < 1e-12

    def test_product_scalar_curvature(self):
        _, cp = pack(METRIC_CATALOG["PRODUCT4"]())
        assert np.allclose(cp.scalar, 2.0)
        assert np.abs(cp.weyl).max() > 0.1

    def test_sectional_curvature_on_sphere(self):
        p, cp = pack(sphere(3, 2.0), 5)
        u = np.tile([1.0, 0.2, 0.0], (5, 1))
        v = np.tile([0.0, 1.0, -0.5], (5, 1))
        assert np.allclose(sectional_curvature(cp, u, v), 0.25)


@pytest.mark.parametrize("n", [3, 4, 5])
class TestIdentities:
    def test_riemann_symmetries(self, n):
        _, cp = pack(random_poly_metric(n, seed=n))
        R = cp.riemann
        assert np.abs(R + np.swapaxes(R, -3, -4)).max() < 1e-13
        assert np.abs(R + np.swapaxes(R, -1, -2)).max() < 1e-13
        assert np.abs(R - np.einsum("...ijkl->...klij", R)).max() < 1e-13
        bianchi = R + np.einsum("...ijkl->...jkil", R) + np.einsum("...ijkl->...kijl", R)
        assert np.abs(bianchi).max() < 1e-13

    def test_contracted_bianchi(self, n):
        _, cp = pack(random_poly_metric(n, seed=n))
        div = np.einsum("...jk,...ijk->...i", cp.ginv, cp.grad_ricci)
        assert np.abs(div - 0.5 * cp.grad_scalar).max() < 1e-12

    def test_grad_scalar_matches_finite_differences(self, n):
        spec = random_poly_metric(n, seed=n)
        p, cp = pack(spec, 5)
        fd = fd_jet(lambda x: curvature_pack(evaluate_metric_jet(spec, x)).scalar, p,
                    h_low=1e-3, h_third=1e-2)[1]
        assert np.abs(cp.grad_scalar - fd).max() < 1e-8

    def test_weyl_trace_free(self, n):
        _, cp = pack(random_poly_metric(n, seed=n))
        tr = np.einsum("...ik,...ijkl->...jl", cp.ginv, cp.weyl)
        assert np.abs(tr).max() < 1e-13

    def test_ricci_identity(self, n):
        spec = random_poly_metric(n, seed=n)
        p, cp = pack(spec)
        sj = evaluate_scalar_jet(random_scalar(n, seed=2), p)
        T = third_covariant_scalar(sj, cp)
        df_up = np.einsum("...ij,...j->...i", cp.ginv, sj.grad)
        res = T - np.swapaxes(T, -1, -2) - np.einsum("...l,...lkji->...kji", df_up, cp.riemann)
        assert np.abs(res).max() < 1e-12
        h = covariant_hessian(sj, cp)
        assert np.allclose(h, np.swapaxes(h, -1, -2))


def test_weyl_vanishes_in_dimension_three():
    for seed in range(5):
        _, cp = pack(random_poly_metric(3, seed=seed), 50, seed)
        assert np.abs(cp.weyl).max() < 1e-9


@pytest.mark.parametrize("name", ["CONF4", "SPHERE4"])
def test_conformally_flat_has_no_weyl(name):
    _, cp = pack(METRIC_CATALOG[name]())
    assert np.abs(cp.weyl).max() < 1e-12
